#include <pcsp/homsearch.hh>

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <numeric>
#include <random>

using std::size_t;
using std::uint32_t;
using std::uint64_t;
using std::vector;

namespace pcsp
{
    DomainTable::DomainTable(size_t variables, size_t values, bool full) :
        _variables(variables),
        _values(values),
        _words((values + 63) / 64),
        _bits(variables * ((values + 63) / 64), 0)
    {
        if (full && values > 0)
            for (size_t v = 0 ; v < variables ; ++v) {
                for (size_t w = 0 ; w + 1 < _words ; ++w)
                    _bits[v * _words + w] = ~uint64_t{ 0 };
                size_t rem = values - 64 * (_words - 1);
                _bits[v * _words + _words - 1] = rem == 64 ? ~uint64_t{ 0 } : ((uint64_t{ 1 } << rem) - 1);
            }
    }

    auto DomainTable::assign(size_t v, size_t a) -> void
    {
        for (size_t w = 0 ; w < _words ; ++w)
            _bits[v * _words + w] = 0;
        insert(v, a);
    }

    auto DomainTable::size(size_t v) const -> size_t
    {
        size_t result = 0;
        for (size_t w = 0 ; w < _words ; ++w)
            result += std::popcount(_bits[v * _words + w]);
        return result;
    }

    auto DomainTable::empty(size_t v) const -> bool
    {
        for (size_t w = 0 ; w < _words ; ++w)
            if (_bits[v * _words + w])
                return false;
        return true;
    }

    auto DomainTable::first(size_t v) const -> size_t
    {
        for (size_t w = 0 ; w < _words ; ++w)
            if (auto b = _bits[v * _words + w])
                return w * 64 + std::countr_zero(b);
        return _values;
    }

    auto DomainTable::candidates(size_t v) const -> vector<Element>
    {
        vector<Element> result;
        for (size_t w = 0 ; w < _words ; ++w) {
            auto b = _bits[v * _words + w];
            while (b) {
                result.push_back(w * 64 + std::countr_zero(b));
                b &= b - 1;
            }
        }
        return result;
    }

    auto outcome_name(SearchOutcome o) -> std::string
    {
        switch (o) {
            case SearchOutcome::found: return "found";
            case SearchOutcome::none: return "none";
            case SearchOutcome::budget_exceeded: return "budget_exceeded";
        }
        return "?";
    }

    namespace
    {
        struct BudgetHit
        {
        };

        class Solver
        {
            public:
                Solver(const Structure & instance, const Structure & target, const DomainTable * initial);

                // false on wipeout
                auto propagate_all(std::optional<uint64_t> shuffle_seed = std::nullopt) -> bool;
                auto run(const SearchOptions &, const std::function<bool (const Homomorphism &)> & on_solution, bool enumerate) -> SearchOutcome;

                DomainTable domains;
                SearchStats stats;

            private:
                struct TrailEntry
                {
                    uint32_t var;
                    uint32_t word;
                    uint64_t old;
                };

                const Structure & _instance;
                const Structure & _target;
                size_t _n, _d, _words;

                vector<uint32_t> _con_relation;
                vector<uint32_t> _con_tuple;
                vector<char> _con_repeat;

                vector<size_t> _occ_start;
                vector<uint32_t> _occ;

                // support lists: per relation, per position, per value
                vector<size_t> _supp_base;
                vector<size_t> _supp_start;
                vector<uint32_t> _supp;

                bool _use_residues = true;
                vector<size_t> _resid_off;
                vector<uint32_t> _resid;

                // binary relations over at most 64 values: supports of a at position j as a bitmask
                // of values at the other position, indexed like the support lists
                vector<uint64_t> _bin_mask;
                vector<char> _bin_fast;
                // revising position i against a domain larger than _bin_slack[2r+i] cannot remove anything
                vector<size_t> _bin_slack;

                vector<TrailEntry> _trail;
                std::deque<uint32_t> _queue;
                vector<char> _in_queue;
                // positions whose variable changed since the constraint was queued
                vector<uint64_t> _pending;

                vector<uint64_t> _con_weight;
                vector<uint64_t> _var_weight;

                auto scope(uint32_t c) const -> std::span<const Element>
                {
                    return _instance.relation(_con_relation[c]).tuple(_con_tuple[c]);
                }

                auto enqueue_var(size_t v) -> void
                {
                    size_t dv = _words == 1 ? std::popcount(domains.word(v, 0)) : 0;
                    for (size_t i = _occ_start[v] ; i < _occ_start[v + 1] ; ++i) {
                        auto c = _occ[i];
                        auto sc = scope(c);
                        auto r = _con_relation[c];
                        // every value of the other variable still has a support by counting
                        if (_bin_fast[r] && sc[0] != sc[1] && dv > _bin_slack[2 * r + (sc[0] == v ? 1 : 0)])
                            continue;
                        for (size_t j = 0 ; j < sc.size() ; ++j)
                            if (sc[j] == v)
                                _pending[c] |= j < 64 ? uint64_t{ 1 } << j : ~uint64_t{ 0 };
                        if (! _in_queue[c]) {
                            _in_queue[c] = 1;
                            _queue.push_back(c);
                        }
                    }
                }

                auto remove_value(size_t v, size_t a) -> void
                {
                    auto & w = domains.word_ref(v, a / 64);
                    _trail.push_back({ uint32_t(v), uint32_t(a / 64), w });
                    w &= ~(uint64_t{ 1 } << (a % 64));
                }

                auto assign_value(size_t v, size_t a) -> void
                {
                    for (size_t w = 0 ; w < _words ; ++w) {
                        auto & word = domains.word_ref(v, w);
                        uint64_t target = (w == a / 64) ? (uint64_t{ 1 } << (a % 64)) : 0;
                        if (word != target) {
                            _trail.push_back({ uint32_t(v), uint32_t(w), word });
                            word = target;
                        }
                    }
                }

                auto restore(size_t mark) -> void
                {
                    while (_trail.size() > mark) {
                        auto & e = _trail.back();
                        domains.word_ref(e.var, e.word) = e.old;
                        _trail.pop_back();
                    }
                }

                auto tuple_valid(uint32_t c, std::span<const Element> sc, std::span<const Element> t) const -> bool
                {
                    for (size_t j = 0 ; j < sc.size() ; ++j)
                        if (! domains.contains(sc[j], t[j]))
                            return false;
                    if (_con_repeat[c])
                        for (size_t j = 0 ; j < sc.size() ; ++j)
                            for (size_t i = 0 ; i < j ; ++i)
                                if (sc[i] == sc[j] && t[i] != t[j])
                                    return false;
                    return true;
                }

                // returns false on wipeout
                auto revise(uint32_t c) -> bool;
                auto propagate() -> bool;
                auto wipeout(uint32_t c) -> void;
                auto select_variable(VariableOrder) const -> std::optional<size_t>;
        };

        Solver::Solver(const Structure & instance, const Structure & target, const DomainTable * initial) :
            domains(instance.domain_size(), target.domain_size()),
            _instance(instance),
            _target(target),
            _n(instance.domain_size()),
            _d(target.domain_size()),
            _words(domains.words_per_variable())
        {
            if (! instance.similar_to(target))
                throw SignatureMismatch("instance '" + instance.name() + "' and template '" + target.name() + "' are not similar");

            if (initial) {
                if (initial->variables() != _n || initial->values() != _d)
                    throw Error("initial domain table has the wrong shape");
                for (size_t v = 0 ; v < _n ; ++v)
                    for (size_t w = 0 ; w < _words ; ++w)
                        domains.word_ref(v, w) &= initial->word(v, w);
            }

            vector<size_t> degree(_n, 0);
            for (size_t r = 0 ; r < instance.relation_count() ; ++r) {
                auto & rel = instance.relation(r);
                for (size_t i = 0 ; i < rel.size() ; ++i) {
                    uint32_t c = _con_relation.size();
                    _con_relation.push_back(r);
                    _con_tuple.push_back(i);
                    auto sc = rel.tuple(i);
                    bool repeat = false;
                    for (size_t j = 0 ; j < sc.size() ; ++j) {
                        bool seen = false;
                        for (size_t k = 0 ; k < j ; ++k)
                            if (sc[k] == sc[j])
                                seen = true;
                        if (seen)
                            repeat = true;
                        else
                            ++degree[sc[j]];
                    }
                    _con_repeat.push_back(repeat);
                    (void) c;
                }
            }

            _occ_start.assign(_n + 1, 0);
            for (size_t v = 0 ; v < _n ; ++v)
                _occ_start[v + 1] = _occ_start[v] + degree[v];
            _occ.resize(_occ_start[_n]);
            vector<size_t> fill(_occ_start.begin(), _occ_start.end() - 1);
            for (uint32_t c = 0 ; c < _con_relation.size() ; ++c) {
                auto sc = scope(c);
                for (size_t j = 0 ; j < sc.size() ; ++j) {
                    bool seen = false;
                    for (size_t k = 0 ; k < j ; ++k)
                        if (sc[k] == sc[j])
                            seen = true;
                    if (! seen)
                        _occ[fill[sc[j]]++] = c;
                }
            }

            // support lists
            size_t base = 0;
            for (size_t r = 0 ; r < target.relation_count() ; ++r) {
                _supp_base.push_back(base);
                base += target.relation(r).arity() * _d;
            }
            _supp_start.assign(base + 1, 0);
            for (size_t r = 0 ; r < target.relation_count() ; ++r) {
                auto & rel = target.relation(r);
                for (size_t i = 0 ; i < rel.size() ; ++i) {
                    auto t = rel.tuple(i);
                    for (size_t j = 0 ; j < t.size() ; ++j)
                        ++_supp_start[_supp_base[r] + j * _d + t[j] + 1];
                }
            }
            for (size_t i = 0 ; i < base ; ++i)
                _supp_start[i + 1] += _supp_start[i];
            _supp.resize(_supp_start[base]);
            vector<size_t> sfill(_supp_start.begin(), _supp_start.end() - 1);
            for (size_t r = 0 ; r < target.relation_count() ; ++r) {
                auto & rel = target.relation(r);
                for (size_t i = 0 ; i < rel.size() ; ++i) {
                    auto t = rel.tuple(i);
                    for (size_t j = 0 ; j < t.size() ; ++j)
                        _supp[sfill[_supp_base[r] + j * _d + t[j]]++] = i;
                }
            }

            // last-support memo, one slot per (constraint, position, value)
            size_t resid_total = 0;
            _resid_off.resize(_con_relation.size());
            for (uint32_t c = 0 ; c < _con_relation.size() ; ++c) {
                _resid_off[c] = resid_total;
                resid_total += _instance.relation(_con_relation[c]).arity() * _d;
                if (resid_total > (size_t{ 1 } << 26)) {
                    _use_residues = false;
                    break;
                }
            }
            if (_use_residues)
                _resid.assign(resid_total, 0);

            _bin_mask.assign(base, 0);
            _bin_fast.assign(target.relation_count(), 0);
            if (_d <= 64)
                for (size_t r = 0 ; r < target.relation_count() ; ++r) {
                    auto & rel = target.relation(r);
                    if (rel.arity() != 2)
                        continue;
                    _bin_fast[r] = 1;
                    for (size_t i = 0 ; i < rel.size() ; ++i) {
                        auto t = rel.tuple(i);
                        _bin_mask[_supp_base[r] + t[0]] |= uint64_t{ 1 } << t[1];
                        _bin_mask[_supp_base[r] + _d + t[1]] |= uint64_t{ 1 } << t[0];
                    }
                }
            _bin_slack.assign(2 * target.relation_count(), _d);
            for (size_t r = 0 ; r < target.relation_count() ; ++r)
                if (_bin_fast[r])
                    for (size_t i = 0 ; i < 2 ; ++i) {
                        size_t least = _d;
                        for (size_t a = 0 ; a < _d ; ++a)
                            least = std::min<size_t>(least, std::popcount(_bin_mask[_supp_base[r] + i * _d + a]));
                        _bin_slack[2 * r + i] = _d - least;
                    }

            _in_queue.assign(_con_relation.size(), 0);
            _pending.assign(_con_relation.size(), ~uint64_t{ 0 });
            _con_weight.assign(_con_relation.size(), 1);
            _var_weight.assign(_n, 0);
            for (size_t v = 0 ; v < _n ; ++v)
                _var_weight[v] = degree[v];
        }

        auto Solver::revise(uint32_t c) -> bool
        {
            ++stats.revisions;
            auto sc = scope(c);
            size_t r = _con_relation[c];
            auto & trel = _target.relation(r);
            size_t k = sc.size();
            uint64_t pending = _pending[c];
            _pending[c] = 0;

            if (_bin_fast[r] && sc[0] != sc[1]) {
                for (size_t i = 0 ; i < 2 ; ++i) {
                    if (pending == (uint64_t{ 1 } << i))
                        continue;
                    size_t x = sc[i], y = sc[1 - i];
                    uint64_t other = domains.word(y, 0), bits = domains.word(x, 0), keep = bits;
                    const uint64_t * mask = &_bin_mask[_supp_base[r] + i * _d];
                    while (bits) {
                        auto a = std::countr_zero(bits);
                        bits &= bits - 1;
                        if (! (mask[a] & other))
                            keep &= ~(uint64_t{ 1 } << a);
                    }
                    if (keep != domains.word(x, 0)) {
                        auto & w = domains.word_ref(x, 0);
                        _trail.push_back({ uint32_t(x), 0, w });
                        w = keep;
                        if (! keep)
                            return false;
                        enqueue_var(x);
                    }
                }
                return true;
            }

            for (size_t i = 0 ; i < k ; ++i) {
                size_t x = sc[i];
                bool first = true;
                for (size_t j = 0 ; j < i ; ++j)
                    if (sc[j] == x)
                        first = false;
                if (! first)
                    continue;
                if (k <= 64) {
                    uint64_t here = 0;
                    for (size_t j = 0 ; j < k ; ++j)
                        if (sc[j] == x)
                            here |= uint64_t{ 1 } << j;
                    if ((pending & ~here) == 0)
                        continue;
                }

                bool changed = false;
                for (size_t w = 0 ; w < _words ; ++w) {
                    uint64_t bits = domains.word(x, w);
                    while (bits) {
                        size_t a = w * 64 + std::countr_zero(bits);
                        bits &= bits - 1;

                        bool supported = false;
                        uint32_t * slot = _use_residues ? &_resid[_resid_off[c] + i * _d + a] : nullptr;
                        if (slot && *slot != 0 && tuple_valid(c, sc, trel.tuple(*slot - 1)))
                            supported = true;
                        else {
                            size_t s = _supp_base[r] + i * _d + a;
                            for (size_t p = _supp_start[s] ; p < _supp_start[s + 1] ; ++p) {
                                auto ti = _supp[p];
                                if (tuple_valid(c, sc, trel.tuple(ti))) {
                                    supported = true;
                                    if (slot)
                                        *slot = ti + 1;
                                    break;
                                }
                            }
                        }
                        if (! supported) {
                            remove_value(x, a);
                            changed = true;
                        }
                    }
                }
                if (changed) {
                    if (domains.empty(x))
                        return false;
                    enqueue_var(x);
                }
            }
            return true;
        }

        auto Solver::wipeout(uint32_t c) -> void
        {
            ++_con_weight[c];
            auto sc = scope(c);
            for (size_t j = 0 ; j < sc.size() ; ++j) {
                bool first = true;
                for (size_t i = 0 ; i < j ; ++i)
                    if (sc[i] == sc[j])
                        first = false;
                if (first)
                    ++_var_weight[sc[j]];
            }
            for (auto q : _queue) {
                _in_queue[q] = 0;
                _pending[q] = 0;
            }
            _queue.clear();
        }

        auto Solver::propagate() -> bool
        {
            while (! _queue.empty()) {
                auto c = _queue.front();
                _queue.pop_front();
                _in_queue[c] = 0;
                if (! revise(c)) {
                    wipeout(c);
                    return false;
                }
            }
            return true;
        }

        auto Solver::propagate_all(std::optional<uint64_t> shuffle_seed) -> bool
        {
            for (size_t v = 0 ; v < _n ; ++v)
                if (domains.empty(v))
                    return false;
            vector<uint32_t> order(_con_relation.size());
            std::iota(order.begin(), order.end(), 0);
            if (shuffle_seed) {
                std::mt19937_64 rng(*shuffle_seed);
                std::shuffle(order.begin(), order.end(), rng);
            }
            for (auto c : order) {
                _in_queue[c] = 1;
                _pending[c] = ~uint64_t{ 0 };
                _queue.push_back(c);
            }
            return propagate();
        }

        auto Solver::select_variable(VariableOrder order) const -> std::optional<size_t>
        {
            std::optional<size_t> best;
            size_t best_size = 0, best_degree = 0;
            double best_score = 0;
            for (size_t v = 0 ; v < _n ; ++v) {
                size_t s = _words == 1 ? std::popcount(domains.word(v, 0)) : domains.size(v);
                if (s <= 1)
                    continue;
                if (order == VariableOrder::input)
                    return v;
                if (order == VariableOrder::smallest_domain) {
                    size_t deg = _occ_start[v + 1] - _occ_start[v];
                    if (! best || s < best_size || (s == best_size && deg > best_degree)) {
                        best = v;
                        best_size = s;
                        best_degree = deg;
                    }
                }
                else {
                    double score = double(s) / double(_var_weight[v] + 1);
                    if (! best || score < best_score) {
                        best = v;
                        best_score = score;
                    }
                }
            }
            return best;
        }

        auto Solver::run(const SearchOptions & opts, const std::function<bool (const Homomorphism &)> & on_solution, bool enumerate) -> SearchOutcome
        {
            if (! propagate_all())
                return SearchOutcome::none;

            struct Frame
            {
                size_t var;
                vector<Element> values;
                size_t next;
                size_t mark;
            };
            vector<Frame> stack;
            bool found_any = false;
            bool symmetric = opts.value_symmetry && ! enumerate && ! opts.initial && fully_symmetric(_target);
            vector<char> touched(_d, 0);

            auto candidates = [&] (size_t v) {
                auto all = domains.candidates(v);
                if (! symmetric)
                    return all;
                std::fill(touched.begin(), touched.end(), 0);
                for (auto & f : stack)
                    touched[f.values[f.next - 1]] = 1;
                vector<Element> r;
                bool fresh = false;
                for (auto a : all)
                    if (touched[a])
                        r.push_back(a);
                    else if (! fresh) {
                        fresh = true;
                        r.push_back(a);
                    }
                return r;
            };

            auto emit = [&] () -> bool {
                Homomorphism h(_n);
                for (size_t v = 0 ; v < _n ; ++v)
                    h[v] = domains.first(v);
                found_any = true;
                return on_solution(h);
            };

            // true means descend, false means this frame is exhausted
            auto try_next = [&] (Frame & f) -> bool {
                while (f.next < f.values.size()) {
                    restore(f.mark);
                    ++stats.nodes;
                    if (opts.node_budget != 0 && stats.nodes > opts.node_budget)
                        throw BudgetHit{};
                    auto a = f.values[f.next++];
                    assign_value(f.var, a);
                    enqueue_var(f.var);
                    if (propagate())
                        return true;
                    ++stats.backtracks;
                }
                restore(f.mark);
                return false;
            };

            try {
                while (true) {
                    auto v = select_variable(opts.variable_order);
                    bool descend = false;
                    if (! v) {
                        if (! emit() || ! enumerate)
                            return SearchOutcome::found;
                    }
                    else {
                        stack.push_back(Frame{ *v, candidates(*v), 0, _trail.size() });
                        descend = try_next(stack.back());
                    }

                    while (! descend) {
                        if (stack.empty())
                            return found_any ? SearchOutcome::found : SearchOutcome::none;
                        descend = try_next(stack.back());
                        if (! descend)
                            stack.pop_back();
                    }
                }
            }
            catch (const BudgetHit &) {
                return SearchOutcome::budget_exceeded;
            }
        }
    }

    auto fully_symmetric(const Structure & s) -> bool
    {
        auto d = s.domain_size();
        if (d < 2)
            return true;
        // a transposition and a full cycle generate the symmetric group
        vector<Element> swap(d), shift(d);
        for (Element a = 0 ; a < d ; ++a) {
            swap[a] = a;
            shift[a] = (a + 1) % d;
        }
        std::swap(swap[0], swap[1]);
        for (size_t r = 0 ; r < s.relation_count() ; ++r) {
            auto & rel = s.relation(r);
            Tuple t(rel.arity());
            for (auto * g : { &swap, &shift })
                for (size_t i = 0 ; i < rel.size() ; ++i) {
                    auto x = rel.tuple(i);
                    for (size_t j = 0 ; j < x.size() ; ++j)
                        t[j] = (*g)[x[j]];
                    if (! rel.contains(t))
                        return false;
                }
        }
        return true;
    }

    auto gac(const Structure & instance, const Structure & target, const GacOptions & opts) -> std::optional<DomainTable>
    {
        Solver solver(instance, target, opts.initial);
        if (! solver.propagate_all(opts.shuffle_seed))
            return std::nullopt;
        return std::move(solver.domains);
    }

    auto find_hom(const Structure & instance, const Structure & target, const SearchOptions & opts) -> HomSearchResult
    {
        Solver solver(instance, target, opts.initial);
        HomSearchResult result;
        result.outcome = solver.run(opts, [&] (const Homomorphism & h) {
                result.hom = h;
                return false;
                }, false);
        result.stats = solver.stats;
        if (result.outcome == SearchOutcome::found && ! is_homomorphism(*result.hom, instance, target))
            throw Error("internal error: search produced a map that is not a homomorphism");
        return result;
    }

    auto for_each_hom(const Structure & instance, const Structure & target,
            const std::function<bool (const Homomorphism &)> & callback,
            const SearchOptions & opts, SearchStats * stats) -> bool
    {
        Solver solver(instance, target, opts.initial);
        auto o = opts;
        o.variable_order = VariableOrder::input;
        bool stopped = false;
        auto outcome = solver.run(o, [&] (const Homomorphism & h) {
                if (! callback(h)) {
                    stopped = true;
                    return false;
                }
                return true;
                }, true);
        if (stats)
            *stats = solver.stats;
        if (outcome == SearchOutcome::budget_exceeded)
            return false;
        return ! stopped;
    }

    auto enumerate_homs(const Structure & instance, const Structure & target, uint64_t cap, const SearchOptions & opts) -> EnumerationResult
    {
        EnumerationResult result;
        Solver solver(instance, target, opts.initial);
        auto o = opts;
        o.variable_order = VariableOrder::input;
        auto outcome = solver.run(o, [&] (const Homomorphism & h) {
                if (cap != 0 && result.homs.size() >= cap) {
                    result.truncated = true;
                    return false;
                }
                result.homs.push_back(h);
                return true;
                }, true);
        result.budget_exceeded = outcome == SearchOutcome::budget_exceeded;
        result.stats = solver.stats;
        return result;
    }

    namespace
    {
        auto binomial(uint64_t n, uint64_t k) -> uint64_t
        {
            if (k > n)
                return 0;
            uint64_t r = 1;
            for (uint64_t i = 1 ; i <= k ; ++i)
                r = saturating_mul(r, n - k + i) / i;
            return r;
        }

        auto subsets_up_to(size_t n, size_t l) -> vector<vector<Element>>
        {
            vector<vector<Element>> result;
            for (size_t s = 0 ; s <= l ; ++s) {
                vector<Element> cur(s);
                std::iota(cur.begin(), cur.end(), 0);
                if (s > n)
                    break;
                while (true) {
                    result.push_back(cur);
                    // next combination
                    size_t i = s;
                    while (i > 0 && cur[i - 1] == n - s + i - 1)
                        --i;
                    if (i == 0)
                        break;
                    ++cur[i - 1];
                    for (size_t j = i ; j < s ; ++j)
                        cur[j] = cur[j - 1] + 1;
                }
            }
            return result;
        }
    }

    auto kl_consistency(const Structure & instance, const Structure & target, unsigned k, unsigned l) -> PartialHomFamily
    {
        if (k < 1 || k > l)
            throw std::invalid_argument("kl_consistency needs 1 <= k <= l");
        if (! instance.similar_to(target))
            throw SignatureMismatch("instance and template are not similar");

        size_t n = instance.domain_size(), d = target.domain_size();
        size_t lc = std::min<size_t>(l, n), kc = std::min<size_t>(k, lc);

        uint64_t total = 0;
        for (size_t s = 0 ; s <= lc ; ++s)
            total = saturating_add(total, saturating_mul(binomial(n, s), checked_pow(d, s)));
        check_size_cap("(k,l)-consistency family", total, total);

        auto subsets = subsets_up_to(n, lc);
        std::map<vector<Element>, size_t> subset_id;
        for (size_t i = 0 ; i < subsets.size() ; ++i)
            subset_id.emplace(subsets[i], i);

        // alive[X][map index]
        vector<vector<char>> alive(subsets.size());
        Tuple image;
        for (size_t x = 0 ; x < subsets.size() ; ++x) {
            auto & X = subsets[x];
            size_t count = checked_pow(d, X.size());
            alive[x].assign(count, 1);
            vector<int> pos(n, -1);
            for (size_t i = 0 ; i < X.size() ; ++i)
                pos[X[i]] = i;
            for (size_t m = 0 ; m < count ; ++m) {
                auto vals = decode_tuple(m, d, X.size());
                bool ok = true;
                for (size_t r = 0 ; r < instance.relation_count() && ok ; ++r) {
                    auto & rel = instance.relation(r);
                    image.resize(rel.arity());
                    for (size_t t = 0 ; t < rel.size() && ok ; ++t) {
                        auto tup = rel.tuple(t);
                        bool inside = true;
                        for (size_t j = 0 ; j < tup.size() ; ++j) {
                            if (pos[tup[j]] < 0) {
                                inside = false;
                                break;
                            }
                            image[j] = vals[pos[tup[j]]];
                        }
                        if (inside && ! target.relation(r).contains(image))
                            ok = false;
                    }
                }
                alive[x][m] = ok;
            }
        }

        auto restrict_index = [&] (const vector<Element> & X, const Tuple & vals, size_t drop) -> size_t {
            uint64_t idx = 0;
            for (size_t i = 0 ; i < X.size() ; ++i)
                if (i != drop)
                    idx = idx * d + vals[i];
            return idx;
        };

        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t x = 0 ; x < subsets.size() ; ++x) {
                auto & X = subsets[x];
                for (size_t m = 0 ; m < alive[x].size() ; ++m) {
                    if (! alive[x][m])
                        continue;
                    auto vals = decode_tuple(m, d, X.size());
                    bool ok = true;

                    // closed under restriction: one-smaller restrictions suffice
                    for (size_t drop = 0 ; drop < X.size() && ok ; ++drop) {
                        auto Y = X;
                        Y.erase(Y.begin() + drop);
                        if (! alive[subset_id.at(Y)][restrict_index(X, vals, drop)])
                            ok = false;
                    }

                    // k to l extension
                    if (ok && X.size() <= kc) {
                        for (size_t z = 0 ; z < subsets.size() && ok ; ++z) {
                            auto & Z = subsets[z];
                            if (Z.size() != lc || ! std::includes(Z.begin(), Z.end(), X.begin(), X.end()))
                                continue;
                            vector<size_t> where;
                            for (auto e : X)
                                where.push_back(std::lower_bound(Z.begin(), Z.end(), e) - Z.begin());
                            bool extends = false;
                            for (size_t g = 0 ; g < alive[z].size() && ! extends ; ++g) {
                                if (! alive[z][g])
                                    continue;
                                auto gv = decode_tuple(g, d, Z.size());
                                bool agree = true;
                                for (size_t i = 0 ; i < X.size() ; ++i)
                                    if (gv[where[i]] != vals[i])
                                        agree = false;
                                extends = agree;
                            }
                            if (! extends)
                                ok = false;
                        }
                    }

                    if (! ok) {
                        alive[x][m] = 0;
                        changed = true;
                    }
                }
            }
        }

        PartialHomFamily result;
        result.k = k;
        result.l = l;
        for (size_t x = 0 ; x < subsets.size() ; ++x)
            for (size_t m = 0 ; m < alive[x].size() ; ++m)
                if (alive[x][m])
                    result.maps.push_back(PartialHom{ subsets[x], decode_tuple(m, d, subsets[x].size()) });
        std::sort(result.maps.begin(), result.maps.end());
        return result;
    }
}
