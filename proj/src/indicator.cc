#include <pcsp/indicator.hh>

#include <algorithm>
#include <functional>
#include <numeric>

using std::optional;
using std::size_t;
using std::string;
using std::to_string;
using std::uint64_t;
using std::vector;

namespace pcsp
{
    namespace
    {
        constexpr size_t max_symbol_arity = 100000;

        auto is_graph(const Structure & s) -> bool
        {
            return s.relation_count() == 1 && s.relation(0).arity() == 2;
        }

        auto has_loop(const Structure & g) -> bool
        {
            auto & e = g.relation(0);
            for (size_t i = 0 ; i < e.size() ; ++i)
                if (e.tuple(i)[0] == e.tuple(i)[1])
                    return true;
            return false;
        }

        using Bits = vector<uint64_t>;

        struct SymmetricAdjacency
        {
            size_t n, words;
            vector<uint64_t> bits;

            explicit SymmetricAdjacency(const Structure & g) :
                n(g.domain_size()),
                words((g.domain_size() + 63) / 64),
                bits(n * words, 0)
            {
                auto & e = g.relation(0);
                for (size_t i = 0 ; i < e.size() ; ++i) {
                    auto t = e.tuple(i);
                    Element rev[2] = { t[1], t[0] };
                    if (t[0] != t[1] && e.contains(rev))
                        bits[t[0] * words + t[1] / 64] |= uint64_t{ 1 } << (t[1] % 64);
                }
            }

            auto adjacent(size_t u, size_t v) const -> bool
            {
                return (bits[u * words + v / 64] >> (v % 64)) & 1;
            }

            auto row(size_t u) const -> const uint64_t * { return bits.data() + u * words; }
        };

        auto count(const Bits & b) -> size_t
        {
            size_t c = 0;
            for (auto w : b)
                c += __builtin_popcountll(w);
            return c;
        }

        auto members(const Bits & b) -> vector<size_t>
        {
            vector<size_t> r;
            for (size_t w = 0 ; w < b.size() ; ++w) {
                auto x = b[w];
                while (x) {
                    r.push_back(w * 64 + __builtin_ctzll(x));
                    x &= x - 1;
                }
            }
            return r;
        }

        struct CliqueSearch
        {
            const SymmetricAdjacency & adj;
            size_t need;
            uint64_t budget, nodes = 0;
            bool out_of_budget = false;
            vector<size_t> current, found;

            auto expand(Bits p) -> bool
            {
                if (current.size() == need) {
                    found = current;
                    return true;
                }
                if (budget && nodes >= budget) {
                    out_of_budget = true;
                    return false;
                }
                ++nodes;

                // greedy colouring of p gives an upper bound per vertex
                vector<size_t> order, colour;
                {
                    Bits uncoloured = p;
                    size_t c = 0;
                    while (count(uncoloured)) {
                        ++c;
                        Bits q = uncoloured;
                        for (size_t w = 0 ; w < q.size() ; ++w)
                            while (q[w]) {
                                size_t v = w * 64 + __builtin_ctzll(q[w]);
                                uncoloured[w] &= ~(uint64_t{ 1 } << (v % 64));
                                q[w] &= ~(uint64_t{ 1 } << (v % 64));
                                auto row = adj.row(v);
                                for (size_t x = 0 ; x < q.size() ; ++x)
                                    q[x] &= ~row[x];
                                order.push_back(v);
                                colour.push_back(c);
                            }
                    }
                }

                for (size_t i = order.size() ; i-- > 0 ; ) {
                    if (current.size() + colour[i] < need)
                        return false;
                    auto v = order[i];
                    current.push_back(v);
                    Bits np(p.size());
                    auto row = adj.row(v);
                    for (size_t w = 0 ; w < p.size() ; ++w)
                        np[w] = p[w] & row[w];
                    if (expand(std::move(np)))
                        return true;
                    current.pop_back();
                    if (out_of_budget)
                        return false;
                    p[v / 64] &= ~(uint64_t{ 1 } << (v % 64));
                }
                return false;
            }
        };
    }

    auto instance_to_condition(const Structure & a, const Structure & i) -> MinorCondition
    {
        if (! a.similar_to(i))
            throw SignatureMismatch("instance and structure have different signatures");
        if (a.domain_size() == 0)
            throw Error("instance_to_condition needs a nonempty structure");
        if (a.domain_size() > max_symbol_arity)
            throw CapacityError("domain too large to be an arity");

        MinorCondition c("sigma_" + a.name() + "_" + i.name());
        for (size_t v = 0 ; v < i.domain_size() ; ++v)
            c.add_symbol("f_" + to_string(v), a.domain_size(), Side::u);

        for (size_t r = 0 ; r < i.relation_count() ; ++r) {
            auto & ri = i.relation(r);
            auto & ra = a.relation(r);
            auto & rname = a.signature().relations()[r].name;
            if (ri.size() == 0)
                continue;
            if (ra.size() == 0)
                throw Error("relation " + rname + " is empty in " + a.name() + " but used by the instance");
            if (ra.size() > max_symbol_arity)
                throw CapacityError("relation " + rname + " too large to be an arity");
            for (size_t k = 0 ; k < ri.size() ; ++k) {
                auto g = c.add_symbol("g_" + rname + "_" + to_string(k), ra.size(), Side::v);
                auto con = ri.tuple(k);
                for (unsigned j = 0 ; j < ri.arity() ; ++j) {
                    vector<unsigned> pi(ra.size());
                    for (size_t t = 0 ; t < ra.size() ; ++t)
                        pi[t] = ra.tuple(t)[j];
                    c.add_minor_identity(con[j], g, pi);
                }
            }
        }
        return c;
    }

    auto condition_to_instance(const MinorCondition & c, const Structure & a) -> IndicatorInstance
    {
        auto base = a.domain_size();
        uint64_t elements = 0, tuples = 0;
        for (auto & s : c.symbols()) {
            elements = saturating_add(elements, checked_pow(base, s.arity));
            for (size_t r = 0 ; r < a.relation_count() ; ++r)
                tuples = saturating_add(tuples, checked_pow(a.relation(r).size(), s.arity));
        }
        check_size_cap("indicator of " + c.name() + " over " + a.name(), elements, tuples);
        for (auto & id : c.identities())
            check_size_cap("identity expansion", checked_pow(base, id.variables), 0);

        vector<Structure> powers;
        for (auto & s : c.symbols())
            powers.push_back(power(a, s.arity));
        auto u = disjoint_union(powers, "indicator");

        Partition p(u.structure.domain_size());
        for (auto & id : c.identities()) {
            uint64_t n = checked_pow(base, id.variables);
            vector<Element> x(id.variables), l(id.lhs_map.size()), r(id.rhs_map.size());
            for (uint64_t i = 0 ; i < n ; ++i) {
                decode_tuple(i, base, std::span<Element>(x));
                for (size_t j = 0 ; j < l.size() ; ++j)
                    l[j] = x[id.lhs_map[j]];
                for (size_t j = 0 ; j < r.size() ; ++j)
                    r[j] = x[id.rhs_map[j]];
                p.unite(u.offsets[id.lhs] + encode_tuple(l, base), u.offsets[id.rhs] + encode_tuple(r, base));
            }
        }

        auto q = quotient(u.structure, p);
        IndicatorInstance ind;
        ind.uncontracted = u.structure.domain_size();
        ind.structure = std::move(q.structure);
        ind.structure.set_name("I_" + c.name() + "_" + a.name());
        ind.labels.resize(ind.structure.domain_size());
        vector<char> labelled(ind.structure.domain_size(), 0);
        for (size_t s = 0 ; s < c.symbols().size() ; ++s) {
            auto size = powers[s].domain_size();
            ind.vertex_of.emplace_back(size);
            for (size_t i = 0 ; i < size ; ++i) {
                auto v = q.index_map[u.offsets[s] + i];
                ind.vertex_of[s][i] = v;
                if (! labelled[v]) {
                    labelled[v] = 1;
                    ind.labels[v] = VertexLabel{ s, decode_tuple(i, base, c.symbol(s).arity) };
                }
            }
        }
        return ind;
    }

    auto restricted_indicator(const MinorCondition & c, const Structure & a, uint64_t full_limit) -> RestrictedIndicator
    {
        auto base = a.domain_size();
        auto ns = c.symbols().size();
        vector<vector<uint64_t>> chosen(ns);
        for (size_t s = 0 ; s < ns ; ++s) {
            auto size = checked_pow(base, c.symbol(s).arity);
            if (size <= full_limit) {
                chosen[s].resize(size);
                std::iota(chosen[s].begin(), chosen[s].end(), uint64_t{ 0 });
            }
        }

        struct Link
        {
            size_t ls, rs;
            uint64_t li, ri;
        };
        vector<Link> links;
        for (auto & id : c.identities()) {
            uint64_t n = checked_pow(base, id.variables);
            if (n > full_limit)
                continue;
            vector<Element> x(id.variables), l(id.lhs_map.size()), r(id.rhs_map.size());
            for (uint64_t i = 0 ; i < n ; ++i) {
                decode_tuple(i, base, std::span<Element>(x));
                for (size_t j = 0 ; j < l.size() ; ++j)
                    l[j] = x[id.lhs_map[j]];
                for (size_t j = 0 ; j < r.size() ; ++j)
                    r[j] = x[id.rhs_map[j]];
                auto li = encode_tuple(l, base), ri = encode_tuple(r, base);
                links.push_back(Link{ id.lhs, id.rhs, li, ri });
                chosen[id.lhs].push_back(li);
                chosen[id.rhs].push_back(ri);
            }
        }
        for (auto & v : chosen) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }

        vector<size_t> offset(ns + 1, 0);
        for (size_t s = 0 ; s < ns ; ++s)
            offset[s + 1] = offset[s] + chosen[s].size();
        check_size_cap("restricted indicator", offset[ns], 0);

        Structure u("restricted", offset[ns], a.signature());
        for (size_t s = 0 ; s < ns ; ++s) {
            auto n = c.symbol(s).arity;
            auto & pts = chosen[s];
            vector<Tuple> decoded;
            for (auto x : pts)
                decoded.push_back(decode_tuple(x, base, n));
            for (size_t r = 0 ; r < a.relation_count() ; ++r) {
                auto & ra = a.relation(r);
                auto k = ra.arity();
                check_size_cap("restricted indicator relation", 0, checked_pow(pts.size(), k));
                if (pts.empty() || ra.empty())
                    continue;
                // odometer over pts^k, pruning on prefixes that already fail some coordinate
                vector<size_t> pick(k, 0);
                vector<Element> column(k), tuple(k);
                std::function<void (unsigned)> rec = [&] (unsigned depth) {
                    if (depth == k) {
                        for (unsigned j = 0 ; j < k ; ++j)
                            tuple[j] = offset[s] + pick[j];
                        u.add_tuple(r, tuple);
                        return;
                    }
                    for (size_t i = 0 ; i < pts.size() ; ++i) {
                        pick[depth] = i;
                        if (depth + 1 == k) {
                            bool ok = true;
                            for (unsigned coord = 0 ; coord < n && ok ; ++coord) {
                                for (unsigned j = 0 ; j < k ; ++j)
                                    column[j] = decoded[pick[j]][coord];
                                ok = ra.contains(column);
                            }
                            if (! ok)
                                continue;
                        }
                        rec(depth + 1);
                    }
                };
                rec(0);
            }
        }
        u.normalise();

        auto index = [&] (size_t s, uint64_t x) -> size_t {
            return offset[s] + (std::lower_bound(chosen[s].begin(), chosen[s].end(), x) - chosen[s].begin());
        };
        Partition p(u.domain_size());
        for (auto & l : links)
            p.unite(index(l.ls, l.li), index(l.rs, l.ri));
        auto q = quotient(u, p);

        RestrictedIndicator r;
        r.structure = std::move(q.structure);
        r.structure.set_name("restricted_I_" + c.name() + "_" + a.name());
        r.points = std::move(chosen);
        for (size_t s = 0 ; s < ns ; ++s) {
            r.vertex_of.emplace_back();
            for (size_t i = 0 ; i < r.points[s].size() ; ++i)
                r.vertex_of[s].push_back(q.index_map[offset[s] + i]);
        }
        return r;
    }

    auto is_clique(const Structure & graph, const vector<Element> & vertices) -> bool
    {
        if (! is_graph(graph))
            return false;
        auto & e = graph.relation(0);
        for (size_t i = 0 ; i < vertices.size() ; ++i)
            for (size_t j = 0 ; j < vertices.size() ; ++j) {
                if (i == j)
                    continue;
                if (vertices[i] == vertices[j] || vertices[i] >= graph.domain_size())
                    return false;
                Element t[2] = { vertices[i], vertices[j] };
                if (! e.contains(t))
                    return false;
            }
        return true;
    }

    auto clique_certificate(const Structure & graph, unsigned k, const vector<Element> & required, uint64_t node_budget) -> CliqueResult
    {
        if (! is_graph(graph))
            throw Error("clique_certificate needs a graph");
        CliqueResult result;
        if (required.size() > k || ! is_clique(graph, required))
            return result;

        SymmetricAdjacency adj(graph);
        Bits p(adj.words, 0);
        for (size_t v = 0 ; v < adj.n ; ++v)
            p[v / 64] |= uint64_t{ 1 } << (v % 64);
        for (auto r : required) {
            auto row = adj.row(r);
            for (size_t w = 0 ; w < adj.words ; ++w)
                p[w] &= row[w];
        }
        size_t need = k - required.size();

        auto finish = [&] (const vector<size_t> & extra) {
            vector<Element> cl(required.begin(), required.end());
            for (auto v : extra)
                cl.push_back(v);
            if (is_clique(graph, cl))
                result.clique = cl;
            return result;
        };

        if (need == 0)
            return finish({});

        // greedy from the best few starting points
        {
            auto cand = members(p);
            vector<std::pair<size_t, size_t>> by_degree;
            for (auto v : cand) {
                size_t d = 0;
                auto row = adj.row(v);
                for (size_t w = 0 ; w < adj.words ; ++w)
                    d += __builtin_popcountll(row[w] & p[w]);
                by_degree.emplace_back(d, v);
            }
            std::sort(by_degree.rbegin(), by_degree.rend());
            for (size_t start = 0 ; start < std::min<size_t>(by_degree.size(), 64) ; ++start) {
                vector<size_t> cl{ by_degree[start].second };
                Bits q(adj.words);
                auto row = adj.row(cl[0]);
                for (size_t w = 0 ; w < adj.words ; ++w)
                    q[w] = p[w] & row[w];
                while (cl.size() < need && count(q)) {
                    size_t best = 0, best_d = 0;
                    bool any = false;
                    for (auto v : members(q)) {
                        size_t d = 0;
                        auto rv = adj.row(v);
                        for (size_t w = 0 ; w < adj.words ; ++w)
                            d += __builtin_popcountll(rv[w] & q[w]);
                        if (! any || d > best_d) {
                            any = true;
                            best = v;
                            best_d = d;
                        }
                    }
                    cl.push_back(best);
                    auto rb = adj.row(best);
                    for (size_t w = 0 ; w < adj.words ; ++w)
                        q[w] &= rb[w];
                }
                if (cl.size() >= need)
                    return finish(cl);
            }
        }

        CliqueSearch search{ adj, need, node_budget, 0, false, {}, {} };
        if (search.expand(p)) {
            result.nodes = search.nodes;
            return finish(search.found);
        }
        result.nodes = search.nodes;
        result.budget_exceeded = search.out_of_budget;
        return result;
    }

    auto clique_number(const Structure & graph) -> unsigned
    {
        unsigned k = 0;
        while (k < graph.domain_size() && clique_certificate(graph, k + 1).clique)
            ++k;
        return k;
    }

    auto verdict_name(Verdict v) -> string
    {
        switch (v) {
            case Verdict::sat: return "SAT";
            case Verdict::unsat: return "UNSAT";
            case Verdict::unknown: return "UNKNOWN";
        }
        return "UNKNOWN";
    }

    auto decode_witness(const MinorCondition & c, const IndicatorInstance & ind, const Homomorphism & h,
            size_t in_domain, size_t out_domain) -> vector<FunctionTable>
    {
        vector<FunctionTable> tables;
        for (size_t s = 0 ; s < c.symbols().size() ; ++s) {
            FunctionTable f;
            f.name = c.symbol(s).name;
            f.in_domain = in_domain;
            f.out_domain = out_domain;
            f.arity = c.symbol(s).arity;
            f.outputs.resize(ind.vertex_of[s].size());
            for (size_t i = 0 ; i < f.outputs.size() ; ++i)
                f.outputs[i] = h[ind.vertex_of[s][i]];
            tables.push_back(std::move(f));
        }
        return tables;
    }

    auto verify_witness(const MinorCondition & c, const PromiseTemplate & t, ConditionCheckResult & r) -> bool
    {
        r.polymorphism_checks.clear();
        r.identity_checks.clear();
        if (r.witness.size() != c.symbols().size()) {
            r.verified = false;
            return false;
        }
        bool ok = true;
        for (auto & f : r.witness) {
            bool holds = is_polymorphism(f, t).holds;
            r.polymorphism_checks.push_back(holds);
            ok = ok && holds;
        }
        try {
            r.identity_checks = check_identities(c, r.witness);
        }
        catch (const Error &) {
            ok = false;
        }
        for (auto & i : r.identity_checks)
            ok = ok && i.holds;
        r.verified = ok;
        return ok;
    }

    auto check_condition_in_pol(const MinorCondition & c, const PromiseTemplate & t, const ConditionCheckOptions & opts) -> ConditionCheckResult
    {
        if (! t.a.similar_to(t.b))
            throw SignatureMismatch("template structures are not similar");

        ConditionCheckResult r;
        optional<IndicatorInstance> ind;
        try {
            ind = condition_to_instance(c, t.a);
        }
        catch (const CapacityError & e) {
            if (! opts.allow_restricted) {
                r.method = "capacity";
                r.note = e.what();
                return r;
            }
        }

        auto graph_target = is_graph(t.a) && is_graph(t.b) && ! has_loop(t.b);

        if (! ind) {
            RestrictedIndicator ri;
            try {
                ri = restricted_indicator(c, t.a);
            }
            catch (const CapacityError & e) {
                r.method = "capacity";
                r.note = e.what();
                return r;
            }
            r.indicator_vertices = ri.structure.domain_size();
            auto h = find_hom(ri.structure, t.b, opts.search);
            r.stats = h.stats;
            r.method = "restricted";
            if (h.outcome == SearchOutcome::none) {
                r.verdict = Verdict::unsat;
                r.note = "a substructure of the indicator has no homomorphism";
            }
            else if (h.outcome == SearchOutcome::found)
                r.note = "full indicator over the size cap; its restriction maps, which is inconclusive";
            else
                r.note = "node budget exhausted on the restricted indicator";
            return r;
        }

        r.indicator_vertices = ind->structure.domain_size();
        r.uncontracted_vertices = ind->uncontracted;

        if (opts.clique_precheck && graph_target) {
            auto w = clique_number(t.b);
            if (w + 1 <= r.indicator_vertices) {
                auto cl = clique_certificate(ind->structure, w + 1, {}, opts.clique_budget);
                if (cl.clique) {
                    r.verdict = Verdict::unsat;
                    r.method = "clique";
                    r.clique = cl.clique;
                    r.verified = is_clique(ind->structure, *cl.clique);
                    r.note = "clique of size " + to_string(w + 1) + " against clique number " + to_string(w);
                    return r;
                }
            }
        }

        auto h = find_hom(ind->structure, t.b, opts.search);
        r.stats = h.stats;
        r.method = "search";
        if (h.outcome == SearchOutcome::budget_exceeded) {
            r.method = "budget";
            r.note = "node budget exhausted";
            return r;
        }
        if (h.outcome == SearchOutcome::none) {
            r.verdict = Verdict::unsat;
            r.verified = true;
            return r;
        }

        r.witness = decode_witness(c, *ind, *h.hom, t.a.domain_size(), t.b.domain_size());
        r.verdict = verify_witness(c, t, r) ? Verdict::sat : Verdict::unknown;
        if (r.verdict != Verdict::sat)
            r.note = "decoded witness failed verification";
        return r;
    }
}
