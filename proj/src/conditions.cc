#include <pcsp/conditions.hh>

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

using std::map;
using std::optional;
using std::set;
using std::size_t;
using std::string;
using std::to_string;
using std::uint64_t;
using std::vector;

namespace pcsp
{
    namespace
    {
        auto iota_map(unsigned n) -> vector<unsigned>
        {
            vector<unsigned> r(n);
            std::iota(r.begin(), r.end(), 0u);
            return r;
        }

        auto side_name(Side s) -> string
        {
            switch (s) {
                case Side::u: return "U";
                case Side::v: return "V";
                case Side::unassigned: return "-";
            }
            return "-";
        }
    }

    auto Identity::is_minor() const -> bool
    {
        return lhs_map.size() == variables && lhs_map == iota_map(variables);
    }

    MinorCondition::MinorCondition(string name) :
        _name(std::move(name))
    {
    }

    auto MinorCondition::find_symbol(const string & n) const -> optional<size_t>
    {
        for (size_t i = 0 ; i < _symbols.size() ; ++i)
            if (_symbols[i].name == n)
                return i;
        return std::nullopt;
    }

    auto MinorCondition::add_symbol(const string & n, unsigned arity, Side side) -> size_t
    {
        if (arity == 0)
            throw Error("symbol " + n + " must have positive arity");
        if (find_symbol(n))
            throw Error("duplicate symbol " + n);
        _symbols.push_back(FunctionSymbol{ n, arity, side });
        return _symbols.size() - 1;
    }

    auto MinorCondition::add_minor_identity(size_t lhs, size_t rhs, vector<unsigned> pi) -> void
    {
        if (lhs >= _symbols.size())
            throw Error("identity refers to an unknown symbol");
        auto n = _symbols[lhs].arity;
        add_identity(Identity{ lhs, rhs, iota_map(n), std::move(pi), n });
    }

    auto MinorCondition::add_identity(Identity id) -> void
    {
        if (id.lhs >= _symbols.size() || id.rhs >= _symbols.size())
            throw Error("identity refers to an unknown symbol");
        if (id.lhs_map.size() != _symbols[id.lhs].arity)
            throw Error("identity gives " + _symbols[id.lhs].name + " " + to_string(id.lhs_map.size())
                    + " arguments, arity is " + to_string(_symbols[id.lhs].arity));
        if (id.rhs_map.size() != _symbols[id.rhs].arity)
            throw Error("identity gives " + _symbols[id.rhs].name + " " + to_string(id.rhs_map.size())
                    + " arguments, arity is " + to_string(_symbols[id.rhs].arity));
        unsigned used = 0;
        for (auto x : id.lhs_map)
            used = std::max(used, x + 1);
        for (auto x : id.rhs_map)
            used = std::max(used, x + 1);
        id.variables = std::max(id.variables, used);
        _identities.push_back(std::move(id));
    }

    auto MinorCondition::is_bipartite() const -> bool
    {
        vector<char> left(_symbols.size(), 0), right(_symbols.size(), 0);
        for (auto & id : _identities) {
            if (! id.is_minor())
                return false;
            left[id.lhs] = 1;
            right[id.rhs] = 1;
        }
        for (size_t s = 0 ; s < _symbols.size() ; ++s) {
            if (left[s] && right[s])
                return false;
            if (left[s] && _symbols[s].side == Side::v)
                return false;
            if (right[s] && _symbols[s].side == Side::u)
                return false;
        }
        return true;
    }

    auto olsak_condition() -> MinorCondition
    {
        MinorCondition c("olsak");
        auto f = c.add_symbol("f", 2, Side::u);
        auto o = c.add_symbol("o", 6, Side::v);
        c.add_minor_identity(f, o, { 0, 0, 1, 1, 1, 0 });
        c.add_minor_identity(f, o, { 0, 1, 0, 1, 0, 1 });
        c.add_minor_identity(f, o, { 1, 0, 0, 0, 1, 1 });
        return c;
    }

    auto siggers_condition() -> MinorCondition
    {
        MinorCondition c("siggers");
        auto f = c.add_symbol("f", 3, Side::u);
        auto s = c.add_symbol("s", 6, Side::v);
        c.add_minor_identity(f, s, { 0, 1, 0, 2, 1, 2 });
        c.add_minor_identity(f, s, { 1, 0, 2, 0, 2, 1 });
        return c;
    }

    auto siggers_one_symbol() -> MinorCondition
    {
        MinorCondition c("siggers_one");
        auto s = c.add_symbol("s", 6);
        c.add_identity(Identity{ s, s, { 0, 1, 0, 2, 1, 2 }, { 1, 0, 2, 0, 2, 1 }, 3 });
        return c;
    }

    auto g_loop_condition(const Structure & g) -> MinorCondition
    {
        if (g.relation_count() != 1 || g.relation(0).arity() != 2)
            throw Error("g_loop needs a graph with one binary relation");
        auto n = g.domain_size();
        if (n == 0)
            throw Error("g_loop needs a nonempty graph");
        set<std::pair<Element, Element>> edges;
        auto & e = g.relation(0);
        for (size_t i = 0 ; i < e.size() ; ++i) {
            auto t = e.tuple(i);
            if (t[0] == t[1])
                throw Error("g_loop needs a loopless graph");
            edges.emplace(std::min(t[0], t[1]), std::max(t[0], t[1]));
        }
        if (edges.empty())
            throw Error("g_loop needs at least one edge");

        vector<unsigned> a, b;
        for (auto & [u, v] : edges) {
            a.push_back(u);
            b.push_back(v);
            a.push_back(v);
            b.push_back(u);
        }

        MinorCondition c("g_loop_" + g.name());
        auto f = c.add_symbol("f", n, Side::u);
        auto es = c.add_symbol("e", a.size(), Side::v);
        c.add_minor_identity(f, es, a);
        c.add_minor_identity(f, es, b);
        return c;
    }

    auto cyclic_condition(unsigned p) -> MinorCondition
    {
        if (p < 2)
            throw Error("cyclic needs arity at least 2");
        MinorCondition c("cyclic_" + to_string(p));
        auto t = c.add_symbol("t", p, Side::u);
        auto s = c.add_symbol("s", p, Side::v);
        c.add_minor_identity(t, s, iota_map(p));
        vector<unsigned> shift(p);
        for (unsigned i = 0 ; i < p ; ++i)
            shift[i] = (i + 1) % p;
        c.add_minor_identity(t, s, shift);
        return c;
    }

    auto symmetric_condition(unsigned n) -> MinorCondition
    {
        if (n < 1)
            throw Error("symmetric needs arity at least 1");
        MinorCondition c("symmetric_" + to_string(n));
        auto f = c.add_symbol("f", n);
        for (unsigned i = 0 ; i + 1 < n ; ++i) {
            auto pi = iota_map(n);
            std::swap(pi[i], pi[i + 1]);
            c.add_minor_identity(f, f, pi);
        }
        return c;
    }

    auto totally_symmetric_condition(unsigned n) -> MinorCondition
    {
        if (n < 1 || n > 8)
            throw Error("totally_symmetric supports arity 1..8");
        MinorCondition c("totally_symmetric_" + to_string(n));
        vector<size_t> fs;
        for (unsigned i = 1 ; i <= n ; ++i)
            fs.push_back(c.add_symbol("f" + to_string(i), i, Side::u));
        auto g = c.add_symbol("g", n, Side::v);

        for (unsigned i = 1 ; i <= n ; ++i) {
            // all maps [n] -> [i] in lexicographic order, keep the surjective ones
            vector<unsigned> pi(n, 0);
            while (true) {
                vector<char> hit(i, 0);
                for (auto x : pi)
                    hit[x] = 1;
                if (std::all_of(hit.begin(), hit.end(), [] (char h) { return h; }))
                    c.add_minor_identity(fs[i - 1], g, pi);
                int k = n - 1;
                while (k >= 0 && pi[k] == i - 1)
                    pi[k--] = 0;
                if (k < 0)
                    break;
                ++pi[k];
            }
        }
        return c;
    }

    auto alternating_condition(unsigned n) -> MinorCondition
    {
        if (n < 3 || n % 2 == 0)
            throw Error("alternating needs odd arity at least 3");
        MinorCondition c("alternating_" + to_string(n));
        auto a = c.add_symbol("a", n);
        for (unsigned i = 0 ; i + 2 < n ; ++i) {
            auto pi = iota_map(n);
            std::swap(pi[i], pi[i + 2]);
            c.add_minor_identity(a, a, pi);
        }
        auto l = iota_map(n), r = iota_map(n);
        l[n - 2] = l[n - 1] = n - 2;
        r[n - 2] = r[n - 1] = n - 1;
        c.add_identity(Identity{ a, a, l, r, n });
        return c;
    }

    auto minimal_majority_sets(unsigned n) -> vector<vector<unsigned>>
    {
        if (n < 1 || n > 2)
            throw Error("minimal majority sets supported for n = 1, 2");
        // a minimal true set of m_n picks two of the three blocks and a minimal set in each
        vector<vector<unsigned>> result{ vector<unsigned>{ 0 } };
        unsigned block = 1;
        for (unsigned level = 0 ; level < n ; ++level) {
            vector<vector<unsigned>> next;
            for (unsigned p = 0 ; p < 3 ; ++p)
                for (unsigned q = p + 1 ; q < 3 ; ++q)
                    for (auto & s1 : result)
                        for (auto & s2 : result) {
                            vector<unsigned> s;
                            for (auto x : s1)
                                s.push_back(p * block + x);
                            for (auto x : s2)
                                s.push_back(q * block + x);
                            next.push_back(s);
                        }
            result = std::move(next);
            block *= 3;
        }
        for (auto & s : result)
            std::sort(s.begin(), s.end());
        std::sort(result.begin(), result.end());
        return result;
    }

    auto majority_robust_condition(unsigned n) -> MinorCondition
    {
        auto ms = minimal_majority_sets(n);
        unsigned width = 1;
        for (unsigned i = 0 ; i < n ; ++i)
            width *= 3;

        // variable 0 is x_0, then one variable per (J, i) with i outside J
        map<std::pair<size_t, unsigned>, unsigned> var;
        unsigned next = 1;
        for (size_t j = 0 ; j < ms.size() ; ++j)
            for (unsigned i = 0 ; i < width ; ++i)
                if (! std::binary_search(ms[j].begin(), ms[j].end(), i))
                    var[{ j, i }] = next++;

        MinorCondition c("majority_robust_" + to_string(n));
        auto f = c.add_symbol("f", next, Side::u);
        auto g = c.add_symbol("g", width, Side::v);
        for (size_t j = 0 ; j < ms.size() ; ++j) {
            vector<unsigned> pi(width);
            for (unsigned i = 0 ; i < width ; ++i)
                pi[i] = std::binary_search(ms[j].begin(), ms[j].end(), i) ? 0 : var.at({ j, i });
            c.add_minor_identity(f, g, pi);
        }
        return c;
    }

    auto example_2_16_condition() -> MinorCondition
    {
        MinorCondition c("example_2_16");
        auto f = c.add_symbol("f", 2, Side::u);
        auto g = c.add_symbol("g", 4, Side::v);
        c.add_minor_identity(f, g, { 1, 0, 0, 0 });
        c.add_minor_identity(f, g, { 0, 1, 0, 0 });
        c.add_minor_identity(f, g, { 0, 0, 1, 0 });
        c.add_minor_identity(f, g, { 0, 0, 0, 1 });
        return c;
    }

    auto example_2_18_condition() -> MinorCondition
    {
        MinorCondition c("example_2_18");
        auto f = c.add_symbol("f", 2, Side::u);
        auto g = c.add_symbol("g", 6, Side::v);
        c.add_minor_identity(f, g, { 0, 0, 1, 1, 1, 0 });
        c.add_minor_identity(f, g, { 0, 1, 0, 1, 0, 1 });
        c.add_minor_identity(f, g, { 1, 0, 0, 0, 1, 1 });
        return c;
    }

    auto generate_condition(const string & kind, const vector<unsigned> & params, const Structure * graph) -> MinorCondition
    {
        auto want = [&] (size_t k) {
            if (params.size() != k)
                throw Error(kind + " takes " + to_string(k) + " parameter(s)");
        };
        if (kind == "olsak") { want(0); return olsak_condition(); }
        if (kind == "siggers") { want(0); return siggers_condition(); }
        if (kind == "siggers_one") { want(0); return siggers_one_symbol(); }
        if (kind == "example_2_16") { want(0); return example_2_16_condition(); }
        if (kind == "example_2_18") { want(0); return example_2_18_condition(); }
        if (kind == "cyclic") { want(1); return cyclic_condition(params[0]); }
        if (kind == "symmetric") { want(1); return symmetric_condition(params[0]); }
        if (kind == "totally_symmetric") { want(1); return totally_symmetric_condition(params[0]); }
        if (kind == "alternating") { want(1); return alternating_condition(params[0]); }
        if (kind == "majority_robust") { want(1); return majority_robust_condition(params[0]); }
        if (kind == "g_loop") {
            if (graph) {
                want(0);
                return g_loop_condition(*graph);
            }
            // g_loop with a clique size
            want(1);
            return g_loop_condition(clique(params[0]));
        }
        throw Error("unknown condition kind '" + kind + "'");
    }

    auto bipartize_height1(const MinorCondition & c) -> MinorCondition
    {
        if (c.is_bipartite()) {
            MinorCondition out(c.name());
            vector<Side> side(c.symbols().size(), Side::unassigned);
            for (auto & id : c.identities()) {
                side[id.lhs] = Side::u;
                side[id.rhs] = Side::v;
            }
            for (size_t s = 0 ; s < c.symbols().size() ; ++s) {
                auto & sym = c.symbol(s);
                out.add_symbol(sym.name, sym.arity, sym.side == Side::unassigned ? side[s] : sym.side);
            }
            for (auto & id : c.identities())
                out.add_identity(id);
            return out;
        }

        MinorCondition out(c.name() + "_bipartite");
        for (auto & sym : c.symbols())
            out.add_symbol(sym.name, sym.arity, Side::v);

        auto fresh = [&] (size_t k) {
            string base = c.identities().size() == 1 ? "e" : "e" + to_string(k + 1);
            string name = base;
            while (out.find_symbol(name))
                name += "_";
            return name;
        };

        for (size_t k = 0 ; k < c.identities().size() ; ++k) {
            auto & id = c.identities()[k];
            auto e = out.add_symbol(fresh(k), id.variables, Side::u);
            out.add_minor_identity(e, id.lhs, id.lhs_map);
            out.add_minor_identity(e, id.rhs, id.rhs_map);
        }
        return out;
    }

    auto canonical_rename(const MinorCondition & c) -> MinorCondition
    {
        vector<size_t> order;
        for (auto want : { Side::u, Side::v, Side::unassigned })
            for (size_t s = 0 ; s < c.symbols().size() ; ++s)
                if (c.symbol(s).side == want)
                    order.push_back(s);

        vector<size_t> new_index(c.symbols().size());
        MinorCondition out(c.name());
        unsigned nu = 0, nv = 0, nw = 0;
        for (auto s : order) {
            auto & sym = c.symbol(s);
            string name = sym.side == Side::u ? "u" + to_string(++nu)
                : sym.side == Side::v ? "v" + to_string(++nv) : "w" + to_string(++nw);
            new_index[s] = out.add_symbol(name, sym.arity, sym.side);
        }
        vector<Identity> ids;
        for (auto id : c.identities()) {
            id.lhs = new_index[id.lhs];
            id.rhs = new_index[id.rhs];
            ids.push_back(std::move(id));
        }
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (auto & id : ids)
            out.add_identity(id);
        return out;
    }

    auto equal_up_to_renaming(const MinorCondition & a, const MinorCondition & b) -> bool
    {
        auto ca = canonical_rename(bipartize_height1(a)), cb = canonical_rename(bipartize_height1(b));
        if (ca.symbols() != cb.symbols())
            return false;
        if (ca.identities() == cb.identities())
            return true;

        // try bijections that permute symbols of equal side and arity
        auto n = ca.symbols().size();
        vector<vector<size_t>> groups;
        {
            map<std::pair<int, unsigned>, vector<size_t>> by;
            for (size_t s = 0 ; s < n ; ++s)
                by[{ static_cast<int>(ca.symbol(s).side), ca.symbol(s).arity }].push_back(s);
            uint64_t count = 1;
            for (auto & [_, v] : by) {
                for (size_t i = 2 ; i <= v.size() ; ++i)
                    count = saturating_mul(count, i);
                groups.push_back(v);
            }
            if (count > 100000)
                return false;
        }

        vector<Identity> target = cb.identities();
        std::sort(target.begin(), target.end());
        vector<size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);

        std::function<bool (size_t)> go = [&] (size_t gi) -> bool {
            if (gi == groups.size()) {
                vector<Identity> ids;
                for (auto id : ca.identities()) {
                    id.lhs = perm[id.lhs];
                    id.rhs = perm[id.rhs];
                    ids.push_back(std::move(id));
                }
                std::sort(ids.begin(), ids.end());
                ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
                return ids == target;
            }
            auto images = groups[gi];
            do {
                for (size_t i = 0 ; i < images.size() ; ++i)
                    perm[groups[gi][i]] = images[i];
                if (go(gi + 1))
                    return true;
            } while (std::next_permutation(images.begin(), images.end()));
            return false;
        };
        return go(0);
    }

    auto identity_satisfied_by_labels(const Identity & id, unsigned lhs_label, unsigned rhs_label) -> bool
    {
        return id.lhs_map[lhs_label] == id.rhs_map[rhs_label];
    }

    namespace
    {
        // label CSP: one variable per symbol with domain [arity]
        struct LabelProblem
        {
            const MinorCondition & c;
            vector<vector<size_t>> touching;

            explicit LabelProblem(const MinorCondition & cond) :
                c(cond),
                touching(cond.symbols().size())
            {
                for (size_t k = 0 ; k < c.identities().size() ; ++k) {
                    auto & id = c.identities()[k];
                    touching[id.lhs].push_back(k);
                    if (id.rhs != id.lhs)
                        touching[id.rhs].push_back(k);
                }
            }

            // prunes along identity k; returns false on a wipe-out, sets changed
            auto revise(vector<vector<char>> & dom, size_t k, vector<size_t> & changed) const -> bool
            {
                auto & id = c.identities()[k];
                if (id.lhs == id.rhs) {
                    auto & d = dom[id.lhs];
                    bool any = false, cut = false;
                    for (unsigned i = 0 ; i < d.size() ; ++i)
                        if (d[i]) {
                            if (id.lhs_map[i] != id.rhs_map[i]) {
                                d[i] = 0;
                                cut = true;
                            }
                            else
                                any = true;
                        }
                    if (cut)
                        changed.push_back(id.lhs);
                    return any;
                }

                vector<char> lv(id.variables, 0), rv(id.variables, 0);
                for (unsigned i = 0 ; i < dom[id.lhs].size() ; ++i)
                    if (dom[id.lhs][i])
                        lv[id.lhs_map[i]] = 1;
                for (unsigned j = 0 ; j < dom[id.rhs].size() ; ++j)
                    if (dom[id.rhs][j])
                        rv[id.rhs_map[j]] = 1;

                auto prune = [&] (size_t s, const vector<unsigned> & m, const vector<char> & other) {
                    bool any = false, cut = false;
                    for (unsigned i = 0 ; i < dom[s].size() ; ++i)
                        if (dom[s][i]) {
                            if (! other[m[i]]) {
                                dom[s][i] = 0;
                                cut = true;
                            }
                            else
                                any = true;
                        }
                    if (cut)
                        changed.push_back(s);
                    return any;
                };
                return prune(id.lhs, id.lhs_map, rv) && prune(id.rhs, id.rhs_map, lv);
            }

            auto propagate(vector<vector<char>> & dom, vector<size_t> queue) const -> bool
            {
                vector<char> queued(c.identities().size(), 0);
                for (auto k : queue)
                    queued[k] = 1;
                while (! queue.empty()) {
                    auto k = queue.back();
                    queue.pop_back();
                    queued[k] = 0;
                    vector<size_t> changed;
                    if (! revise(dom, k, changed))
                        return false;
                    for (auto s : changed)
                        for (auto k2 : touching[s])
                            if (! queued[k2]) {
                                queued[k2] = 1;
                                queue.push_back(k2);
                            }
                }
                return true;
            }

            auto solve(vector<vector<char>> dom, vector<unsigned> & labels) const -> bool
            {
                size_t best = c.symbols().size(), best_size = 0;
                for (size_t s = 0 ; s < dom.size() ; ++s) {
                    auto sz = static_cast<size_t>(std::count(dom[s].begin(), dom[s].end(), 1));
                    if (sz > 1 && (best == c.symbols().size() || sz < best_size)) {
                        best = s;
                        best_size = sz;
                    }
                }
                if (best == c.symbols().size()) {
                    labels.assign(dom.size(), 0);
                    for (size_t s = 0 ; s < dom.size() ; ++s)
                        labels[s] = std::find(dom[s].begin(), dom[s].end(), 1) - dom[s].begin();
                    return true;
                }
                for (unsigned i = 0 ; i < dom[best].size() ; ++i) {
                    if (! dom[best][i])
                        continue;
                    auto d = dom;
                    std::fill(d[best].begin(), d[best].end(), 0);
                    d[best][i] = 1;
                    if (propagate(d, touching[best]) && solve(std::move(d), labels))
                        return true;
                }
                return false;
            }
        };
    }

    auto is_trivial(const MinorCondition & c) -> TrivialityResult
    {
        LabelProblem p(c);
        vector<vector<char>> dom;
        for (auto & s : c.symbols())
            dom.emplace_back(s.arity, 1);
        vector<size_t> all(c.identities().size());
        std::iota(all.begin(), all.end(), 0);

        TrivialityResult r;
        if (p.propagate(dom, all) && p.solve(dom, r.labels))
            r.trivial = true;
        else
            r.labels.clear();
        return r;
    }

    namespace
    {
        struct BranchAndBound
        {
            const MinorCondition & c;
            uint64_t budget;
            uint64_t nodes = 0;
            vector<size_t> order;
            vector<vector<size_t>> touching;
            // which variables each side of an identity can produce
            vector<vector<char>> lhs_image, rhs_image;
            vector<int> label;
            size_t best = 0;
            vector<unsigned> best_labels;

            BranchAndBound(const MinorCondition & cond, uint64_t b) :
                c(cond),
                budget(b),
                touching(cond.symbols().size()),
                label(cond.symbols().size(), -1)
            {
                for (size_t k = 0 ; k < c.identities().size() ; ++k) {
                    auto & id = c.identities()[k];
                    touching[id.lhs].push_back(k);
                    if (id.rhs != id.lhs)
                        touching[id.rhs].push_back(k);
                    vector<char> li(id.variables, 0), ri(id.variables, 0);
                    for (auto x : id.lhs_map)
                        li[x] = 1;
                    for (auto x : id.rhs_map)
                        ri[x] = 1;
                    lhs_image.push_back(std::move(li));
                    rhs_image.push_back(std::move(ri));
                }
                order.resize(c.symbols().size());
                std::iota(order.begin(), order.end(), 0);
                std::stable_sort(order.begin(), order.end(), [&] (size_t a, size_t b) {
                    return touching[a].size() > touching[b].size();
                });
            }

            // 1 satisfied, 0 violated, -1 open but possible
            auto status(size_t k) const -> int
            {
                auto & id = c.identities()[k];
                int a = label[id.lhs], b = label[id.rhs];
                if (id.lhs == id.rhs) {
                    if (a < 0) {
                        for (unsigned i = 0 ; i < id.lhs_map.size() ; ++i)
                            if (id.lhs_map[i] == id.rhs_map[i])
                                return -1;
                        return 0;
                    }
                    return id.lhs_map[a] == id.rhs_map[a] ? 1 : 0;
                }
                if (a >= 0 && b >= 0)
                    return id.lhs_map[a] == id.rhs_map[b] ? 1 : 0;
                if (a >= 0)
                    return rhs_image[k][id.lhs_map[a]] ? -1 : 0;
                if (b >= 0)
                    return lhs_image[k][id.rhs_map[b]] ? -1 : 0;
                return -1;
            }

            auto bound(size_t & satisfied) const -> size_t
            {
                size_t open = 0;
                satisfied = 0;
                for (size_t k = 0 ; k < c.identities().size() ; ++k) {
                    auto s = status(k);
                    if (s == 1)
                        ++satisfied;
                    else if (s == -1)
                        ++open;
                }
                return satisfied + open;
            }

            auto run(size_t depth) -> void
            {
                if (budget && nodes >= budget)
                    throw BudgetExceeded("max_projection_fraction: node budget exhausted");
                ++nodes;
                size_t satisfied;
                auto ub = bound(satisfied);
                if (ub <= best && ! best_labels.empty())
                    return;
                if (depth == order.size()) {
                    if (satisfied > best || best_labels.empty()) {
                        best = satisfied;
                        best_labels.assign(label.begin(), label.end());
                    }
                    return;
                }
                auto s = order[depth];
                for (unsigned i = 0 ; i < c.symbol(s).arity ; ++i) {
                    label[s] = i;
                    run(depth + 1);
                    if (best == c.identities().size())
                        break;
                }
                label[s] = -1;
            }
        };
    }

    auto max_projection_fraction(const MinorCondition & c, uint64_t node_budget) -> RobustnessResult
    {
        RobustnessResult r;
        r.total = c.identities().size();
        if (r.total == 0) {
            r.fraction = 1;
            r.labels.assign(c.symbols().size(), 0);
            return r;
        }
        BranchAndBound bb(c, node_budget);
        bb.run(0);
        r.satisfied = bb.best;
        r.labels = bb.best_labels;
        r.nodes = bb.nodes;
        r.fraction = mpq_class(r.satisfied, r.total);
        r.fraction.canonicalize();
        return r;
    }

    auto check_identities(const MinorCondition & c, const vector<FunctionTable> & tables) -> vector<IdentityCheck>
    {
        if (tables.size() != c.symbols().size())
            throw Error("need one table per symbol");
        size_t dom = tables.empty() ? 0 : tables[0].in_domain;
        for (size_t s = 0 ; s < tables.size() ; ++s) {
            if (tables[s].arity != c.symbol(s).arity)
                throw Error("table for " + c.symbol(s).name + " has the wrong arity");
            if (tables[s].in_domain != dom)
                throw Error("tables disagree on the input domain");
        }

        vector<IdentityCheck> result;
        for (size_t k = 0 ; k < c.identities().size() ; ++k) {
            auto & id = c.identities()[k];
            check_size_cap("identity check", checked_pow(dom, id.variables), 0);
            vector<Element> a(id.variables, 0), l(id.lhs_map.size()), r(id.rhs_map.size());
            bool holds = true;
            uint64_t count = checked_pow(dom, id.variables);
            for (uint64_t x = 0 ; x < count && holds ; ++x) {
                decode_tuple(x, dom, std::span<Element>(a));
                for (size_t i = 0 ; i < l.size() ; ++i)
                    l[i] = a[id.lhs_map[i]];
                for (size_t j = 0 ; j < r.size() ; ++j)
                    r[j] = a[id.rhs_map[j]];
                if (tables[id.lhs](l) != tables[id.rhs](r))
                    holds = false;
            }
            result.push_back(IdentityCheck{ k, holds });
        }
        return result;
    }

    auto satisfies(const MinorCondition & c, const vector<FunctionTable> & tables) -> bool
    {
        auto checks = check_identities(c, tables);
        return std::all_of(checks.begin(), checks.end(), [] (const IdentityCheck & i) { return i.holds; });
    }

    auto from_label_cover(const LabelCover & lc) -> MinorCondition
    {
        if (lc.l == 0 || lc.r == 0)
            throw Error("label counts must be positive");
        MinorCondition c("label_cover");
        for (size_t u = 0 ; u < lc.left ; ++u)
            c.add_symbol("f" + to_string(u + 1), lc.l, Side::u);
        for (size_t v = 0 ; v < lc.right ; ++v)
            c.add_symbol("g" + to_string(v + 1), lc.r, Side::v);
        for (auto & e : lc.edges) {
            if (e.u >= lc.left || e.v >= lc.right)
                throw Error("label cover edge out of range");
            if (e.pi.size() != lc.r || std::any_of(e.pi.begin(), e.pi.end(), [&] (unsigned x) { return x >= lc.l; }))
                throw Error("label cover map must send [r] into [l]");
            c.add_minor_identity(e.u, lc.left + e.v, e.pi);
        }
        return c;
    }

    auto to_label_cover(const MinorCondition & c) -> LabelCover
    {
        if (! c.is_bipartite())
            throw Error("to_label_cover needs a bipartite condition");
        auto b = bipartize_height1(c);

        LabelCover lc;
        vector<size_t> index(b.symbols().size());
        for (size_t s = 0 ; s < b.symbols().size() ; ++s) {
            auto & sym = b.symbol(s);
            if (sym.side == Side::v) {
                if (lc.r != 0 && lc.r != sym.arity)
                    throw Error("right symbols must share one arity");
                lc.r = sym.arity;
                index[s] = lc.right++;
            }
            else {
                if (lc.l != 0 && lc.l != sym.arity)
                    throw Error("left symbols must share one arity");
                lc.l = sym.arity;
                index[s] = lc.left++;
            }
        }
        for (auto & id : b.identities())
            lc.edges.push_back(LabelCoverEdge{ index[id.lhs], index[id.rhs], id.rhs_map });
        return lc;
    }

    auto label_cover_satisfied(const LabelCover & lc, const vector<unsigned> & left_labels,
            const vector<unsigned> & right_labels) -> bool
    {
        if (left_labels.size() != lc.left || right_labels.size() != lc.right)
            return false;
        for (auto & e : lc.edges)
            if (right_labels[e.v] >= lc.r || e.pi[right_labels[e.v]] != left_labels[e.u])
                return false;
        return true;
    }

    namespace
    {
        auto strip(const string & line) -> string
        {
            auto s = line.substr(0, line.find('#'));
            auto b = s.find_first_not_of(" \t\r");
            if (b == string::npos)
                return "";
            auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        }

        auto words(const string & s) -> vector<string>
        {
            std::istringstream in(s);
            vector<string> r;
            string w;
            while (in >> w)
                r.push_back(w);
            return r;
        }

        auto number(const string & w, size_t line) -> uint64_t
        {
            if (w.empty() || ! std::all_of(w.begin(), w.end(), [] (char ch) { return ch >= '0' && ch <= '9'; }) || w.size() > 9)
                throw ParseError(line, 1, "expected a natural number, found '" + w + "'");
            return std::stoull(w);
        }

        // parses `name(x1, x2, ...)` starting at pos; variables returned 0-based
        auto parse_term(const string & s, size_t & pos, size_t line) -> std::pair<string, vector<unsigned>>
        {
            auto skip = [&] { while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos; };
            skip();
            auto start = pos;
            while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
            if (pos == start)
                throw ParseError(line, pos + 1, "expected a symbol name");
            auto name = s.substr(start, pos - start);
            skip();
            if (pos >= s.size() || s[pos] != '(')
                throw ParseError(line, pos + 1, "expected '('");
            ++pos;
            vector<unsigned> vars;
            while (true) {
                skip();
                if (pos >= s.size() || s[pos] != 'x')
                    throw ParseError(line, pos + 1, "expected a variable x<i>");
                ++pos;
                auto ds = pos;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
                    ++pos;
                if (ds == pos || pos - ds > 9)
                    throw ParseError(line, ds + 1, "expected a variable index");
                auto v = std::stoul(s.substr(ds, pos - ds));
                if (v == 0)
                    throw ParseError(line, ds + 1, "variables are numbered from x1");
                vars.push_back(v - 1);
                skip();
                if (pos < s.size() && s[pos] == ',') {
                    ++pos;
                    continue;
                }
                if (pos < s.size() && s[pos] == ')') {
                    ++pos;
                    break;
                }
                throw ParseError(line, pos + 1, "expected ',' or ')'");
            }
            return { name, vars };
        }
    }

    auto parse_condition(const string & text) -> MinorCondition
    {
        std::istringstream in(text);
        string raw;
        size_t line_no = 0;
        optional<MinorCondition> c;
        bool done = false;

        while (std::getline(in, raw)) {
            ++line_no;
            auto line = strip(raw);
            if (line.empty())
                continue;
            if (done)
                throw ParseError(line_no, 1, "text after 'end'");
            auto w = words(line);
            if (! c) {
                if (w[0] != "condition" || w.size() != 2)
                    throw ParseError(line_no, 1, "expected 'condition <name>'");
                c.emplace(w[1]);
                continue;
            }
            if (w[0] == "end") {
                done = true;
                continue;
            }
            if (w[0] == "symbol") {
                if (w.size() != 4)
                    throw ParseError(line_no, 1, "expected 'symbol <name> <U|V|-> <arity>'");
                Side side;
                if (w[2] == "U")
                    side = Side::u;
                else if (w[2] == "V")
                    side = Side::v;
                else if (w[2] == "-")
                    side = Side::unassigned;
                else
                    throw ParseError(line_no, 1, "side must be U, V or -");
                auto arity = number(w[3], line_no);
                try {
                    c->add_symbol(w[1], arity, side);
                }
                catch (const ParseError &) {
                    throw;
                }
                catch (const Error & e) {
                    throw ParseError(line_no, 1, e.what());
                }
                continue;
            }
            if (w[0] == "identity") {
                size_t pos = line.find("identity") + 8;
                auto [ln, lv] = parse_term(line, pos, line_no);
                while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos])))
                    ++pos;
                if (pos >= line.size() || line[pos] != '=')
                    throw ParseError(line_no, pos + 1, "expected '='");
                ++pos;
                auto [rn, rv] = parse_term(line, pos, line_no);
                if (! strip(line.substr(pos)).empty())
                    throw ParseError(line_no, pos + 1, "unexpected text after identity");
                auto ls = c->find_symbol(ln), rs = c->find_symbol(rn);
                if (! ls)
                    throw ParseError(line_no, 1, "unknown symbol " + ln);
                if (! rs)
                    throw ParseError(line_no, 1, "unknown symbol " + rn);
                try {
                    c->add_identity(Identity{ *ls, *rs, lv, rv, 0 });
                }
                catch (const Error & e) {
                    throw ParseError(line_no, 1, e.what());
                }
                continue;
            }
            throw ParseError(line_no, 1, "unexpected '" + w[0] + "'");
        }
        if (! c)
            throw ParseError(line_no, 1, "no condition found");
        if (! done)
            throw ParseError(line_no, 1, "missing 'end'");
        return *c;
    }

    auto serialize_condition(const MinorCondition & c) -> string
    {
        std::ostringstream out;
        out << "condition " << (c.name().empty() ? "unnamed" : c.name()) << "\n";
        for (auto & s : c.symbols())
            out << "symbol " << s.name << " " << side_name(s.side) << " " << s.arity << "\n";
        auto term = [&] (size_t s, const vector<unsigned> & m) {
            out << c.symbol(s).name << "(";
            for (size_t i = 0 ; i < m.size() ; ++i)
                out << (i ? "," : "") << "x" << m[i] + 1;
            out << ")";
        };
        for (auto & id : c.identities()) {
            out << "identity ";
            term(id.lhs, id.lhs_map);
            out << " = ";
            term(id.rhs, id.rhs_map);
            out << "\n";
        }
        out << "end\n";
        return out.str();
    }

    auto parse_label_cover(const string & text) -> LabelCover
    {
        std::istringstream in(text);
        string raw;
        size_t line_no = 0;
        LabelCover lc;
        bool started = false, done = false, have_left = false, have_right = false;

        while (std::getline(in, raw)) {
            ++line_no;
            auto line = strip(raw);
            if (line.empty())
                continue;
            if (done)
                throw ParseError(line_no, 1, "text after 'end'");
            auto w = words(line);
            if (! started) {
                if (w[0] != "labelcover")
                    throw ParseError(line_no, 1, "expected 'labelcover'");
                started = true;
                continue;
            }
            if (w[0] == "end") {
                done = true;
            }
            else if (w[0] == "left" || w[0] == "right") {
                if (w.size() != 3)
                    throw ParseError(line_no, 1, "expected '" + w[0] + " <vertices> <labels>'");
                auto count = number(w[1], line_no);
                auto labels = number(w[2], line_no);
                if (labels == 0)
                    throw ParseError(line_no, 1, "label count must be positive");
                if (w[0] == "left") {
                    lc.left = count;
                    lc.l = labels;
                    have_left = true;
                }
                else {
                    lc.right = count;
                    lc.r = labels;
                    have_right = true;
                }
            }
            else if (w[0] == "edge") {
                if (! have_left || ! have_right)
                    throw ParseError(line_no, 1, "edges must follow 'left' and 'right'");
                if (w.size() != 3 + lc.r)
                    throw ParseError(line_no, 1, "expected 'edge <u> <v>' and " + to_string(lc.r) + " labels");
                LabelCoverEdge e{ number(w[1], line_no), number(w[2], line_no), {} };
                if (e.u >= lc.left || e.v >= lc.right)
                    throw ParseError(line_no, 1, "edge endpoint out of range");
                for (size_t i = 3 ; i < w.size() ; ++i) {
                    auto x = number(w[i], line_no);
                    if (x == 0 || x > lc.l)
                        throw ParseError(line_no, 1, "label " + w[i] + " out of range 1.." + to_string(lc.l));
                    e.pi.push_back(x - 1);
                }
                lc.edges.push_back(std::move(e));
            }
            else
                throw ParseError(line_no, 1, "unexpected '" + w[0] + "'");
        }
        if (! started)
            throw ParseError(line_no, 1, "no label cover found");
        if (! done)
            throw ParseError(line_no, 1, "missing 'end'");
        if (! have_left || ! have_right)
            throw ParseError(line_no, 1, "missing 'left' or 'right'");
        return lc;
    }

    auto serialize_label_cover(const LabelCover & lc) -> string
    {
        std::ostringstream out;
        out << "labelcover\n";
        out << "left " << lc.left << " " << lc.l << "\n";
        out << "right " << lc.right << " " << lc.r << "\n";
        for (auto & e : lc.edges) {
            out << "edge " << e.u << " " << e.v;
            for (auto x : e.pi)
                out << " " << x + 1;
            out << "\n";
        }
        out << "end\n";
        return out.str();
    }
}
