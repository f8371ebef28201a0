#ifndef PCSP_HOMSEARCH_HH
#define PCSP_HOMSEARCH_HH

#include <pcsp/core.hh>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace pcsp
{
    // Candidate sets, one bitset per source element.
    class DomainTable
    {
        public:
            DomainTable() = default;
            DomainTable(std::size_t variables, std::size_t values, bool full = true);

            auto variables() const -> std::size_t { return _variables; }
            auto values() const -> std::size_t { return _values; }
            auto words_per_variable() const -> std::size_t { return _words; }

            auto contains(std::size_t v, std::size_t a) const -> bool
            {
                return (_bits[v * _words + a / 64] >> (a % 64)) & 1;
            }
            auto insert(std::size_t v, std::size_t a) -> void { _bits[v * _words + a / 64] |= (std::uint64_t{ 1 } << (a % 64)); }
            auto erase(std::size_t v, std::size_t a) -> void { _bits[v * _words + a / 64] &= ~(std::uint64_t{ 1 } << (a % 64)); }
            auto assign(std::size_t v, std::size_t a) -> void;
            auto size(std::size_t v) const -> std::size_t;
            auto empty(std::size_t v) const -> bool;
            auto first(std::size_t v) const -> std::size_t;
            auto candidates(std::size_t v) const -> std::vector<Element>;

            auto word(std::size_t v, std::size_t w) const -> std::uint64_t { return _bits[v * _words + w]; }
            auto word_ref(std::size_t v, std::size_t w) -> std::uint64_t & { return _bits[v * _words + w]; }

            auto operator== (const DomainTable &) const -> bool = default;

        private:
            std::size_t _variables = 0, _values = 0, _words = 0;
            std::vector<std::uint64_t> _bits;
    };

    using Homomorphism = std::vector<Element>;

    enum class VariableOrder
    {
        smallest_domain,      // ties broken by degree, then index
        weighted_degree,      // domain size over accumulated conflict weight
        input                 // static 0..n-1, which gives lexicographic enumeration
    };

    struct SearchOptions
    {
        VariableOrder variable_order = VariableOrder::smallest_domain;
        std::uint64_t node_budget = 0;     // 0 means unlimited
        bool deterministic = true;
        // optional initial restriction of candidate sets, intersected with the full table
        const DomainTable * initial = nullptr;
        // when the target is invariant under every permutation of its domain, try only one
        // value not yet used by a decision; ignored when enumerating or with initial domains
        bool value_symmetry = true;
    };

    enum class SearchOutcome
    {
        found,
        none,
        budget_exceeded
    };

    auto outcome_name(SearchOutcome) -> std::string;

    struct SearchStats
    {
        std::uint64_t nodes = 0;
        std::uint64_t backtracks = 0;
        std::uint64_t revisions = 0;
    };

    struct HomSearchResult
    {
        SearchOutcome outcome = SearchOutcome::none;
        std::optional<Homomorphism> hom;
        SearchStats stats;
    };

    struct GacOptions
    {
        // when set, the propagation queue is shuffled with this seed
        std::optional<std::uint64_t> shuffle_seed;
        const DomainTable * initial = nullptr;
    };

    // greatest arc consistent sub-table, or nullopt when some candidate set empties
    auto gac(const Structure & instance, const Structure & target, const GacOptions & = {}) -> std::optional<DomainTable>;

    auto find_hom(const Structure & instance, const Structure & target, const SearchOptions & = {}) -> HomSearchResult;

    struct EnumerationResult
    {
        std::vector<Homomorphism> homs;
        bool truncated = false;
        bool budget_exceeded = false;
        SearchStats stats;
    };

    // lexicographic order of the map; cap = 0 means no cap
    auto enumerate_homs(const Structure & instance, const Structure & target, std::uint64_t cap = 0,
            const SearchOptions & = {}) -> EnumerationResult;

    // callback returns false to stop; returns true if enumeration ran to completion
    auto for_each_hom(const Structure & instance, const Structure & target,
            const std::function<bool (const Homomorphism &)> & callback,
            const SearchOptions & = {}, SearchStats * stats = nullptr) -> bool;

    struct PartialHom
    {
        std::vector<Element> domain;    // sorted source elements
        std::vector<Element> values;    // image of each domain element
        auto operator<=> (const PartialHom &) const = default;
    };

    struct PartialHomFamily
    {
        unsigned k = 0, l = 0;
        std::vector<PartialHom> maps;   // sorted

        auto empty() const -> bool { return maps.empty(); }
    };

    // every relation is preserved by every permutation of the domain
    auto fully_symmetric(const Structure & s) -> bool;

    auto kl_consistency(const Structure & instance, const Structure & target, unsigned k, unsigned l) -> PartialHomFamily;
}

#endif
