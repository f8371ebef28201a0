#ifndef PCSP_INDICATOR_HH
#define PCSP_INDICATOR_HH

#include <pcsp/conditions.hh>
#include <pcsp/core.hh>
#include <pcsp/homsearch.hh>
#include <pcsp/minionlab.hh>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pcsp
{
    // f_v of arity |A| per element of i, g_<R>_<index> of arity |R^A| per constraint
    auto instance_to_condition(const Structure & a, const Structure & i) -> MinorCondition;

    struct VertexLabel
    {
        std::size_t symbol;
        Tuple input;
    };

    struct IndicatorInstance
    {
        Structure structure;
        // vertex_of[s][encode_tuple(a)] is the vertex v_{s(a)}
        std::vector<std::vector<Element>> vertex_of;
        // the first (symbol, input) pair landing on each vertex
        std::vector<VertexLabel> labels;
        std::size_t uncontracted = 0;

        auto vertex(std::size_t symbol, std::span<const Element> input, std::size_t base) const -> Element
        {
            return vertex_of[symbol][encode_tuple(input, base)];
        }
    };

    auto condition_to_instance(const MinorCondition & c, const Structure & a) -> IndicatorInstance;

    // induced on a chosen set of points per symbol; maps homomorphically into the full indicator,
    // so an unsatisfiable restriction refutes the condition
    struct RestrictedIndicator
    {
        Structure structure;
        // points[s] are the chosen inputs of symbol s, sorted by index
        std::vector<std::vector<std::uint64_t>> points;
        std::vector<std::vector<Element>> vertex_of;    // parallel to points
    };

    // every input of a symbol whose power has at most full_limit points, plus the images of those
    // through the identities
    auto restricted_indicator(const MinorCondition & c, const Structure & a, std::uint64_t full_limit = 100000) -> RestrictedIndicator;

    struct CliqueResult
    {
        std::optional<std::vector<Element>> clique;
        bool budget_exceeded = false;
        std::uint64_t nodes = 0;
    };

    // looks for k pairwise adjacent vertices (edges in both directions) containing `required`;
    // greedy first, then exact branch and bound
    auto clique_certificate(const Structure & graph, unsigned k, const std::vector<Element> & required = {},
            std::uint64_t node_budget = 0) -> CliqueResult;

    auto clique_number(const Structure & graph) -> unsigned;

    auto is_clique(const Structure & graph, const std::vector<Element> & vertices) -> bool;

    enum class Verdict
    {
        sat,
        unsat,
        unknown
    };

    auto verdict_name(Verdict) -> std::string;

    struct ConditionCheckOptions
    {
        SearchOptions search;
        bool clique_precheck = true;
        std::uint64_t clique_budget = 2'000'000;
        // fall back to the restricted indicator when the full one is over the size cap
        bool allow_restricted = true;
    };

    struct ConditionCheckResult
    {
        Verdict verdict = Verdict::unknown;
        // search, clique, restricted, capacity or budget
        std::string method;
        std::string note;
        std::size_t indicator_vertices = 0;
        std::size_t uncontracted_vertices = 0;
        std::vector<FunctionTable> witness;
        std::vector<IdentityCheck> identity_checks;
        std::vector<bool> polymorphism_checks;
        bool verified = false;
        std::optional<std::vector<Element>> clique;
        SearchStats stats;
    };

    auto check_condition_in_pol(const MinorCondition & c, const PromiseTemplate & t,
            const ConditionCheckOptions & = {}) -> ConditionCheckResult;

    // decode a homomorphism of the indicator into one table per symbol
    auto decode_witness(const MinorCondition & c, const IndicatorInstance & ind, const Homomorphism & h,
            std::size_t in_domain, std::size_t out_domain) -> std::vector<FunctionTable>;

    // re-checks tables as polymorphisms and identities pointwise; fills the result fields
    auto verify_witness(const MinorCondition & c, const PromiseTemplate & t, ConditionCheckResult & r) -> bool;
}

#endif
