// Brute-force reference implementations. Deliberately naive, sharing no code
// with the library beyond the Structure container.
#ifndef PCSP_TESTS_ORACLES_HH
#define PCSP_TESTS_ORACLES_HH

#include <pcsp/core.hh>

#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <vector>

namespace oracle
{
    using pcsp::Element;
    using pcsp::Structure;

    inline auto maps_to(const std::vector<Element> & h, const Structure & from, const Structure & to) -> bool
    {
        for (std::size_t r = 0 ; r < from.relation_count() ; ++r) {
            auto & rel = from.relation(r);
            for (std::size_t i = 0 ; i < rel.size() ; ++i) {
                auto t = rel.tuple(i);
                bool found = false;
                auto & target = to.relation(r);
                for (std::size_t j = 0 ; j < target.size() && ! found ; ++j) {
                    auto u = target.tuple(j);
                    bool same = true;
                    for (std::size_t p = 0 ; p < t.size() ; ++p)
                        if (u[p] != h[t[p]])
                            same = false;
                    found = same;
                }
                if (! found)
                    return false;
            }
        }
        return true;
    }

    // visits every map in lexicographic order
    inline auto all_maps(std::size_t n, std::size_t d, const std::function<void (const std::vector<Element> &)> & f) -> void
    {
        std::vector<Element> h(n, 0);
        if (n > 0 && d == 0)
            return;
        while (true) {
            f(h);
            std::size_t i = n;
            while (i > 0) {
                if (++h[i - 1] < d)
                    break;
                h[i - 1] = 0;
                --i;
            }
            if (i == 0)
                return;
        }
    }

    inline auto count_homs(const Structure & from, const Structure & to) -> std::uint64_t
    {
        std::uint64_t count = 0;
        all_maps(from.domain_size(), to.domain_size(), [&] (const std::vector<Element> & h) {
                if (maps_to(h, from, to))
                    ++count;
                });
        return count;
    }

    inline auto hom_exists(const Structure & from, const Structure & to) -> bool
    {
        return count_homs(from, to) > 0;
    }

    inline auto random_structure(std::mt19937 & rng, const pcsp::Signature & sig, std::size_t n, std::size_t max_tuples,
            const std::string & name = "rand") -> Structure
    {
        Structure s(name, n, sig);
        for (std::size_t r = 0 ; r < sig.size() ; ++r) {
            std::size_t count = std::uniform_int_distribution<std::size_t>(0, max_tuples)(rng);
            for (std::size_t i = 0 ; i < count ; ++i) {
                pcsp::Tuple t(sig[r].arity);
                for (auto & e : t)
                    e = std::uniform_int_distribution<Element>(0, n - 1)(rng);
                s.add_tuple(r, t);
            }
        }
        s.normalise();
        return s;
    }
}

#endif
