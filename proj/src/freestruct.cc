#include <pcsp/freestruct.hh>

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

using std::optional;
using std::size_t;
using std::string;
using std::to_string;
using std::uint64_t;
using std::vector;

namespace pcsp
{
    auto Minion::for_each_member(unsigned m, const std::function<bool (const FunctionTable &)> & callback) const -> bool
    {
        for (auto & f : members(m))
            if (! callback(f))
                return false;
        return true;
    }

    auto Minion::find_witness(const vector<const FunctionTable *> & fs, const vector<MinorMap> & pis,
            unsigned n, unsigned m) const -> optional<FunctionTable>
    {
        optional<FunctionTable> result;
        for_each_member(m, [&] (const FunctionTable & g) {
                for (size_t i = 0 ; i < fs.size() ; ++i)
                    if (minor_of(g, pis[i], n).outputs != fs[i]->outputs)
                        return true;
                result = g;
                return false;
                });
        return result;
    }

    PolymorphismMinion::PolymorphismMinion(PromiseTemplate t, uint64_t member_cap) :
        _t(std::move(t)),
        _cap(member_cap)
    {
        if (! _t.a.similar_to(_t.b))
            throw SignatureMismatch("template structures are not similar");
    }

    auto PolymorphismMinion::name() const -> string
    {
        return "Pol(" + _t.a.name() + "," + _t.b.name() + ")";
    }

    auto PolymorphismMinion::members(unsigned n) const -> vector<FunctionTable>
    {
        auto e = enumerate_polymorphisms(_t, n, _cap);
        if (e.truncated)
            throw CapacityError("more than " + to_string(_cap) + " polymorphisms of arity " + to_string(n) + " in " + name());
        return std::move(e.tables);
    }

    auto PolymorphismMinion::for_each_member(unsigned m, const std::function<bool (const FunctionTable &)> & callback) const -> bool
    {
        return for_each_polymorphism(_t, m, callback);
    }

    auto PolymorphismMinion::find_witness(const vector<const FunctionTable *> & fs, const vector<MinorMap> & pis,
            unsigned n, unsigned m) const -> optional<FunctionTable>
    {
        auto it = _powers.find(m);
        if (it == _powers.end())
            it = _powers.emplace(m, power(_t.a, m)).first;
        auto & p = it->second;
        size_t d = _t.a.domain_size();

        // f_i(x) = g(x o pi_i) pins g at the point x o pi_i
        vector<int64_t> pinned(p.domain_size(), -1);
        Tuple x(n), y(m);
        uint64_t count = checked_pow(d, n);
        for (size_t i = 0 ; i < fs.size() ; ++i)
            for (uint64_t xi = 0 ; xi < count ; ++xi) {
                decode_tuple(xi, d, x);
                for (unsigned j = 0 ; j < m ; ++j)
                    y[j] = x[pis[i][j]];
                auto point = encode_tuple(y, d);
                int64_t want = fs[i]->outputs[xi];
                if (pinned[point] >= 0 && pinned[point] != want)
                    return std::nullopt;
                pinned[point] = want;
            }

        DomainTable initial(p.domain_size(), _t.b.domain_size());
        for (size_t v = 0 ; v < pinned.size() ; ++v)
            if (pinned[v] >= 0)
                initial.assign(v, pinned[v]);
        SearchOptions opts;
        opts.initial = &initial;
        auto r = find_hom(p, _t.b, opts);
        if (! r.hom)
            return std::nullopt;
        return polymorphism_from_hom(*r.hom, _t, m);
    }

    ExplicitMinion::ExplicitMinion(string name, vector<FunctionTable> tables) :
        _name(std::move(name)),
        _tables(std::move(tables))
    {
    }

    auto ExplicitMinion::members(unsigned n) const -> vector<FunctionTable>
    {
        vector<FunctionTable> result;
        for (auto & t : _tables)
            if (t.arity == n)
                result.push_back(t);
        return result;
    }

    auto ProjectionMinion::members(unsigned n) const -> vector<FunctionTable>
    {
        vector<FunctionTable> result;
        for (unsigned i = 0 ; i < n ; ++i) {
            result.push_back(projection(2, n, i));
            result.back().name = "p" + to_string(i + 1);
        }
        return result;
    }

    auto subset_label(uint64_t mask, size_t n) -> string
    {
        string s = "{";
        bool first = true;
        for (size_t i = 0 ; i < n ; ++i)
            if (mask >> i & 1) {
                if (! first)
                    s += ",";
                s += to_string(i);
                first = false;
            }
        return s + "}";
    }

    auto HornMinion::members(unsigned n) const -> vector<FunctionTable>
    {
        if (n >= 24)
            throw CapacityError("horn minion of arity " + to_string(n));
        vector<FunctionTable> result;
        for (uint64_t mask = 1 ; mask < (uint64_t{ 1 } << n) ; ++mask)
            result.push_back(tabulate("and" + subset_label(mask, n), 2, 2, n, [&] (std::span<const Element> x) -> Element {
                        for (unsigned i = 0 ; i < n ; ++i)
                            if ((mask >> i & 1) && x[i] == 0)
                                return 0;
                        return 1;
                        }));
        return result;
    }

    auto FreeStructure::index_of(const FunctionTable & f) const -> optional<Element>
    {
        auto it = index.find(f.outputs);
        if (it == index.end())
            return std::nullopt;
        return it->second;
    }

    namespace
    {
        auto table_label(const FunctionTable & f) -> string
        {
            string s = f.name + "[";
            for (size_t i = 0 ; i < f.outputs.size() ; ++i) {
                if (i)
                    s += ",";
                s += to_string(f.outputs[i]);
            }
            return s + "]";
        }

        // advances a mixed radix counter, false on wraparound
        auto next_counter(vector<size_t> & c, size_t base) -> bool
        {
            for (size_t j = c.size() ; j > 0 ; --j) {
                if (++c[j - 1] < base)
                    return true;
                c[j - 1] = 0;
            }
            return false;
        }
    }

    auto free_structure(const Minion & minion, const Structure & a, const FreeOptions & options) -> FreeStructure
    {
        FreeStructure result;
        result.n = a.domain_size();
        if (result.n == 0)
            throw Error("free structure generated by an empty structure");
        result.members = minion.members(result.n);
        check_size_cap("free structure over " + minion.name(), result.members.size(), 0);
        for (size_t i = 0 ; i < result.members.size() ; ++i) {
            if (! result.index.emplace(result.members[i].outputs, i).second)
                throw Error("minion " + minion.name() + " lists a member twice");
            result.labels.push_back(table_label(result.members[i]));
        }

        result.structure = Structure("F_" + minion.name() + "(" + a.name() + ")", result.members.size(), a.signature());
        result.witnesses.resize(a.relation_count());
        size_t count = result.members.size();

        for (size_t r = 0 ; r < a.relation_count() ; ++r) {
            auto & rel = a.relation(r);
            unsigned k = rel.arity();
            unsigned m = rel.size();
            if (m == 0)
                continue;
            // pi_i(j) = r_j(i)
            vector<MinorMap> pis(k, MinorMap(m));
            for (unsigned j = 0 ; j < m ; ++j)
                for (unsigned i = 0 ; i < k ; ++i)
                    pis[i][j] = rel.tuple(j)[i];

            std::map<Tuple, FunctionTable> found;
            uint64_t candidates = checked_pow(count, k);
            if (candidates <= options.lazy_limit) {
                vector<size_t> c(k, 0);
                vector<const FunctionTable *> fs(k);
                do {
                    for (unsigned i = 0 ; i < k ; ++i)
                        fs[i] = &result.members[c[i]];
                    if (auto g = minion.find_witness(fs, pis, result.n, m))
                        found.emplace(Tuple(c.begin(), c.end()), std::move(*g));
                } while (next_counter(c, count));
            }
            else {
                uint64_t seen = 0;
                bool complete = minion.for_each_member(m, [&] (const FunctionTable & g) {
                        if (++seen > options.enumeration_limit)
                            return false;
                        Tuple t(k);
                        for (unsigned i = 0 ; i < k ; ++i) {
                            auto f = minor_of(g, pis[i], result.n);
                            auto it = result.index.find(f.outputs);
                            if (it == result.index.end())
                                throw Error("minion " + minion.name() + " is not closed under minors");
                            t[i] = it->second;
                        }
                        found.try_emplace(std::move(t), g);
                        return true;
                        });
                if (! complete)
                    throw CapacityError("more than " + to_string(options.enumeration_limit) + " members of arity "
                            + to_string(m) + " in " + minion.name());
            }

            check_size_cap("free structure relation", count, found.size());
            for (auto & [t, g] : found) {
                Tuple e(t.begin(), t.end());
                result.structure.add_tuple(r, e);
                result.witnesses[r].push_back(g);
            }
        }
        result.structure.normalise();
        return result;
    }

    auto power_structure_labels(const Structure & a) -> vector<string>
    {
        vector<string> labels;
        for (uint64_t mask = 1 ; mask < (uint64_t{ 1 } << a.domain_size()) ; ++mask)
            labels.push_back(subset_label(mask, a.domain_size()));
        return labels;
    }

    auto power_structure(const Structure & a) -> Structure
    {
        size_t n = a.domain_size();
        if (n >= 63)
            throw CapacityError("power structure of a structure with " + to_string(n) + " elements");
        uint64_t elements = (uint64_t{ 1 } << n) - 1;
        check_size_cap("power structure of " + a.name(), elements, 0);
        Structure result("P(" + a.name() + ")", elements, a.signature());

        for (size_t r = 0 ; r < a.relation_count() ; ++r) {
            auto & rel = a.relation(r);
            unsigned k = rel.arity();
            // tuples of subsets closed under componentwise union of the singleton tuples
            vector<vector<uint64_t>> singles;
            for (size_t j = 0 ; j < rel.size() ; ++j) {
                vector<uint64_t> s(k);
                for (unsigned i = 0 ; i < k ; ++i)
                    s[i] = uint64_t{ 1 } << rel.tuple(j)[i];
                singles.push_back(s);
            }
            std::set<vector<uint64_t>> closure(singles.begin(), singles.end());
            vector<vector<uint64_t>> frontier(closure.begin(), closure.end());
            while (! frontier.empty()) {
                vector<vector<uint64_t>> next;
                for (auto & t : frontier)
                    for (auto & s : singles) {
                        vector<uint64_t> u(k);
                        for (unsigned i = 0 ; i < k ; ++i)
                            u[i] = t[i] | s[i];
                        if (closure.insert(u).second)
                            next.push_back(std::move(u));
                    }
                check_size_cap("power structure of " + a.name(), elements, closure.size());
                frontier = std::move(next);
            }
            Tuple e(k);
            for (auto & t : closure) {
                for (unsigned i = 0 ; i < k ; ++i)
                    e[i] = t[i] - 1;
                result.add_tuple(r, e);
            }
        }
        result.normalise();
        return result;
    }

    auto width1_check(const PromiseTemplate & t) -> Width1Result
    {
        if (! t.a.similar_to(t.b))
            throw SignatureMismatch("template structures are not similar");
        Width1Result result;
        result.power = power_structure(t.a);
        auto r = find_hom(result.power, t.b);
        result.hom = r.hom;
        result.holds = r.hom.has_value();
        return result;
    }

    namespace
    {
        // nonnegative integer vectors of the given length summing to total, lex order
        auto compositions(size_t length, long total) -> vector<vector<long>>
        {
            vector<vector<long>> result;
            vector<long> v(length, 0);
            auto rec = [&] (auto & self, size_t i, long left) -> void {
                if (i + 1 == length) {
                    v[i] = left;
                    result.push_back(v);
                    return;
                }
                for (long x = 0 ; x <= left ; ++x) {
                    v[i] = x;
                    self(self, i + 1, left - x);
                }
            };
            if (length > 0)
                rec(rec, 0, total);
            return result;
        }

        // integer vectors summing to 1 with absolute sum at most bound, lex order
        auto signed_vectors(size_t length, long bound) -> vector<vector<long>>
        {
            vector<vector<long>> result;
            vector<long> v(length, 0);
            auto rec = [&] (auto & self, size_t i, long sum, long abs_left) -> void {
                if (i + 1 == length) {
                    long last = 1 - sum;
                    if (std::labs(last) <= abs_left) {
                        v[i] = last;
                        result.push_back(v);
                    }
                    return;
                }
                for (long x = -abs_left ; x <= abs_left ; ++x) {
                    v[i] = x;
                    self(self, i + 1, sum + x, abs_left - std::labs(x));
                }
            };
            if (length > 0)
                rec(rec, 0, 0, bound);
            return result;
        }

        auto weight_label(const vector<long> & w, long denominator) -> string
        {
            string s = "(";
            for (size_t i = 0 ; i < w.size() ; ++i) {
                if (i)
                    s += ",";
                long g = std::gcd(std::labs(w[i]), denominator);
                if (w[i] == 0)
                    s += "0";
                else if (denominator / g == 1)
                    s += to_string(w[i] / g);
                else
                    s += to_string(w[i] / g) + "/" + to_string(denominator / g);
            }
            return s + ")";
        }

        auto estimate(size_t length, long bound, bool signed_) -> uint64_t
        {
            // crude upper bound on the enumeration, for the size cap
            return checked_pow(signed_ ? 2 * bound + 1 : bound + 1, length);
        }

        // universe from `vectors`, tuples as marginals of each gamma over R^A
        auto weight_structure(const Structure & a, const string & name, vector<vector<long>> universe,
                const std::function<vector<vector<long>> (size_t)> & gammas, long denominator) -> WeightStructure
        {
            WeightStructure result;
            check_size_cap(name, universe.size(), 0);
            std::map<vector<long>, Element> index;
            for (size_t e = 0 ; e < universe.size() ; ++e) {
                index.emplace(universe[e], e);
                result.labels.push_back(weight_label(universe[e], denominator));
            }
            result.structure = Structure(name, universe.size(), a.signature());
            size_t n = a.domain_size();
            for (size_t r = 0 ; r < a.relation_count() ; ++r) {
                auto & rel = a.relation(r);
                if (rel.empty())
                    continue;
                unsigned k = rel.arity();
                Tuple t(k);
                vector<long> phi(n);
                for (auto & g : gammas(rel.size())) {
                    for (unsigned i = 0 ; i < k ; ++i) {
                        std::fill(phi.begin(), phi.end(), 0);
                        for (size_t j = 0 ; j < rel.size() ; ++j)
                            phi[rel.tuple(j)[i]] += g[j];
                        auto it = index.find(phi);
                        if (it == index.end())
                            throw Error("marginal outside the universe of " + name);
                        t[i] = it->second;
                    }
                    result.structure.add_tuple(r, t);
                }
            }
            result.structure.normalise();
            result.weights = std::move(universe);
            return result;
        }
    }

    auto lp_structure(const Structure & a, unsigned l) -> WeightStructure
    {
        if (l == 0)
            throw Error("lp_structure needs l >= 1");
        string name = "LP_" + to_string(l) + "(" + a.name() + ")";
        check_size_cap(name, estimate(a.domain_size(), l, false), 0);
        for (size_t r = 0 ; r < a.relation_count() ; ++r)
            check_size_cap(name, 0, estimate(a.relation(r).size(), l, false));
        return weight_structure(a, name, compositions(a.domain_size(), l),
                [&] (size_t m) { return compositions(m, l); }, l);
    }

    auto ip_structure(const Structure & a, unsigned l) -> WeightStructure
    {
        long bound = 2 * long(l) + 1;
        string name = "IP_" + to_string(l) + "(" + a.name() + ")";
        check_size_cap(name, estimate(a.domain_size(), l + 1, true), 0);
        for (size_t r = 0 ; r < a.relation_count() ; ++r)
            check_size_cap(name, 0, estimate(a.relation(r).size(), l + 1, true));
        return weight_structure(a, name, signed_vectors(a.domain_size(), bound),
                [&] (size_t m) { return signed_vectors(m, bound); }, 1);
    }

    auto lp_hom_from_symmetric(const WeightStructure & lp, const FunctionTable & s) -> Homomorphism
    {
        Homomorphism h;
        Tuple x;
        for (auto & w : lp.weights) {
            x.clear();
            for (size_t a = 0 ; a < w.size() ; ++a)
                x.insert(x.end(), w[a], a);
            if (x.size() != s.arity)
                throw Error("symmetric function of arity " + to_string(s.arity) + " does not match the weights");
            h.push_back(s(x));
        }
        return h;
    }

    auto ip_hom_from_alternating(const WeightStructure & ip, const FunctionTable & alt) -> Homomorphism
    {
        if (alt.arity % 2 == 0)
            throw Error("alternating function needs odd arity");
        Homomorphism h;
        Tuple x(alt.arity);
        for (auto & w : ip.weights) {
            // positives on positions 1,3,5.. and negatives on 2,4,..; the rest padded with cancelling pairs
            size_t odd = 0, even = 1;
            for (size_t a = 0 ; a < w.size() ; ++a)
                for (long c = 0 ; c < std::labs(w[a]) ; ++c) {
                    auto & slot = w[a] > 0 ? odd : even;
                    if (slot >= alt.arity)
                        throw Error("alternating function of arity " + to_string(alt.arity) + " is too small for the weights");
                    x[slot] = a;
                    slot += 2;
                }
            while (odd < alt.arity && even < alt.arity) {
                x[odd] = x[even] = 0;
                odd += 2;
                even += 2;
            }
            if (odd < alt.arity || even < alt.arity)
                throw Error("weights do not sum to 1");
            h.push_back(alt(x));
        }
        return h;
    }

    namespace
    {
        // restricted growth strings of the given length, with at most `limit` distinct values
        auto growth_strings(unsigned length, unsigned limit) -> vector<Tuple>
        {
            vector<Tuple> result;
            Tuple t(length);
            auto rec = [&] (auto & self, unsigned i, Element used) -> void {
                if (i == length) {
                    result.push_back(t);
                    return;
                }
                for (Element v = 0 ; v <= used && v < limit ; ++v) {
                    t[i] = v;
                    self(self, i + 1, std::max<Element>(used, v + 1));
                }
            };
            rec(rec, 0, 0);
            return result;
        }

        auto try_refute(const PromiseTemplate & source, const PromiseTemplate & target, const MinionHomOptions & options,
                MinionHomResult & result) -> bool
        {
            auto & sig = target.a.signature();
            vector<vector<std::pair<size_t, unsigned>>> shapes;
            for (size_t r = 0 ; r < sig.size() ; ++r) {
                if (target.a.relation(r).empty())
                    continue;
                shapes.push_back({ { r, sig[r].arity } });
            }
            if (options.refute_constraints >= 2) {
                size_t singles = shapes.size();
                for (size_t i = 0 ; i < singles ; ++i)
                    for (size_t j = i ; j < singles ; ++j)
                        shapes.push_back({ shapes[i][0], shapes[j][0] });
            }

            ConditionCheckOptions check;
            check.search.node_budget = options.refute_node_budget;
            std::set<std::pair<size_t, vector<Tuple>>> tried;
            for (auto & shape : shapes) {
                unsigned length = 0;
                for (auto & [r, k] : shape)
                    length += k;
                for (auto & g : growth_strings(length, options.refute_variables)) {
                    Element vars = *std::max_element(g.begin(), g.end()) + 1;
                    Structure inst("I", vars, sig);
                    unsigned pos = 0;
                    for (auto & [r, k] : shape) {
                        inst.add_tuple(r, std::span<const Element>(g.data() + pos, k));
                        pos += k;
                    }
                    inst.normalise();
                    if (inst.tuple_count() < shape.size())
                        continue;
                    vector<Tuple> key;
                    for (size_t r = 0 ; r < inst.relation_count() ; ++r)
                        for (size_t j = 0 ; j < inst.relation(r).size() ; ++j) {
                            auto t = inst.relation(r).tuple(j);
                            key.emplace_back(t.begin(), t.end());
                            key.back().push_back(r);
                        }
                    if (! tried.emplace(vars, key).second)
                        continue;
                    if (find_hom(inst, target.b).outcome != SearchOutcome::none)
                        continue;
                    auto c = check_condition_in_pol(instance_to_condition(target.a, inst), source, check);
                    if (c.verdict == Verdict::sat && c.verified) {
                        result.refuting_instance = std::move(inst);
                        result.refutation = std::move(c);
                        return true;
                    }
                }
            }
            return false;
        }
    }

    auto minion_hom_exists(const PromiseTemplate & source, const PromiseTemplate & target,
            const MinionHomOptions & options) -> MinionHomResult
    {
        if (! target.a.similar_to(target.b) || ! source.a.similar_to(source.b))
            throw SignatureMismatch("template structures are not similar");
        MinionHomResult result;
        try {
            PolymorphismMinion m(source);
            auto f = free_structure(m, target.a, options.free);
            auto r = find_hom(f.structure, target.b, options.search);
            result.free = std::move(f);
            if (r.outcome == SearchOutcome::found) {
                result.verdict = Verdict::sat;
                result.method = "free";
                result.hom = std::move(r.hom);
                return result;
            }
            if (r.outcome == SearchOutcome::none) {
                result.verdict = Verdict::unsat;
                result.method = "free";
                return result;
            }
            result.note = "search budget exhausted on the free structure";
        }
        catch (const CapacityError & e) {
            result.note = e.what();
        }

        if (try_refute(source, target, options, result)) {
            result.verdict = Verdict::unsat;
            result.method = "condition";
            return result;
        }
        result.method = "capacity";
        return result;
    }

    auto decode_minion_hom(const FreeStructure & free, const Homomorphism & h, const FunctionTable & f,
            size_t out_domain) -> FunctionTable
    {
        return tabulate("xi(" + f.name + ")", free.n, out_domain, f.arity, [&] (std::span<const Element> a) {
                MinorMap pi(a.begin(), a.end());
                auto g = minor_of(f, pi, free.n);
                auto e = free.index_of(g);
                if (! e)
                    throw Error("minor of " + f.name + " is not a member of the free structure");
                return h[*e];
                });
    }
}
