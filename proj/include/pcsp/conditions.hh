#ifndef PCSP_CONDITIONS_HH
#define PCSP_CONDITIONS_HH

#include <pcsp/core.hh>
#include <pcsp/minionlab.hh>

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pcsp
{
    enum class Side
    {
        u,
        v,
        unassigned
    };

    struct FunctionSymbol
    {
        std::string name;
        unsigned arity;
        Side side = Side::unassigned;

        auto operator== (const FunctionSymbol &) const -> bool = default;
    };

    // lhs(x_{lhs_map[0]}, ...) = rhs(x_{rhs_map[0]}, ...) over `variables` variables.
    // A minor identity has lhs_map = 0..n-1 and rhs_map = pi.
    struct Identity
    {
        std::size_t lhs, rhs;
        std::vector<unsigned> lhs_map, rhs_map;
        unsigned variables;

        auto is_minor() const -> bool;
        auto operator== (const Identity &) const -> bool = default;
        auto operator<=> (const Identity &) const = default;
    };

    class MinorCondition
    {
        public:
            MinorCondition() = default;
            explicit MinorCondition(std::string name);

            auto name() const -> const std::string & { return _name; }
            auto set_name(std::string n) -> void { _name = std::move(n); }
            auto symbols() const -> const std::vector<FunctionSymbol> & { return _symbols; }
            auto symbol(std::size_t i) const -> const FunctionSymbol & { return _symbols[i]; }
            auto identities() const -> const std::vector<Identity> & { return _identities; }
            auto find_symbol(const std::string &) const -> std::optional<std::size_t>;

            auto add_symbol(const std::string & name, unsigned arity, Side side = Side::unassigned) -> std::size_t;
            // f(x1..xn) = g(x_pi(1)..x_pi(m)), pi 0-based
            auto add_minor_identity(std::size_t lhs, std::size_t rhs, std::vector<unsigned> pi) -> void;
            auto add_identity(Identity) -> void;

            // every identity is a minor identity and no symbol appears on both sides;
            // declared sides, when present, agree
            auto is_bipartite() const -> bool;

            auto operator== (const MinorCondition &) const -> bool = default;

        private:
            std::string _name;
            std::vector<FunctionSymbol> _symbols;
            std::vector<Identity> _identities;
    };

    // generators
    auto olsak_condition() -> MinorCondition;
    auto siggers_condition() -> MinorCondition;
    auto siggers_one_symbol() -> MinorCondition;
    // directed edges listed as (u,v),(v,u) for each edge u<v in lexicographic order
    auto g_loop_condition(const Structure & graph) -> MinorCondition;
    auto cyclic_condition(unsigned p) -> MinorCondition;
    auto symmetric_condition(unsigned n) -> MinorCondition;
    auto totally_symmetric_condition(unsigned n) -> MinorCondition;
    auto alternating_condition(unsigned n) -> MinorCondition;
    auto majority_robust_condition(unsigned n) -> MinorCondition;
    auto example_2_16_condition() -> MinorCondition;
    auto example_2_18_condition() -> MinorCondition;

    // minimal true sets of the 3^n-ary iterated majority, 0-based, lexicographic
    auto minimal_majority_sets(unsigned n) -> std::vector<std::vector<unsigned>>;

    // kind is one of the generator names above without the suffix
    auto generate_condition(const std::string & kind, const std::vector<unsigned> & params,
            const Structure * graph = nullptr) -> MinorCondition;

    auto bipartize_height1(const MinorCondition &) -> MinorCondition;

    // renames U symbols to u1.., V symbols to v1.., others to w1.., in symbol order,
    // and sorts the identities
    auto canonical_rename(const MinorCondition &) -> MinorCondition;
    auto equal_up_to_renaming(const MinorCondition &, const MinorCondition &) -> bool;

    struct TrivialityResult
    {
        bool trivial = false;
        std::vector<unsigned> labels;     // coordinate per symbol, 0-based
        explicit operator bool () const { return trivial; }
    };

    auto identity_satisfied_by_labels(const Identity &, unsigned lhs_label, unsigned rhs_label) -> bool;

    auto is_trivial(const MinorCondition &) -> TrivialityResult;

    struct RobustnessResult
    {
        mpq_class fraction;
        std::size_t satisfied = 0, total = 0;
        std::vector<unsigned> labels;
        std::uint64_t nodes = 0;
    };

    class BudgetExceeded : public Error
    {
        public:
            using Error::Error;
    };

    // exact maximum fraction of identities satisfied by one projection assignment;
    // throws BudgetExceeded past node_budget (0 = unlimited)
    auto max_projection_fraction(const MinorCondition &, std::uint64_t node_budget = 0) -> RobustnessResult;

    // does a concrete assignment of tables satisfy every identity pointwise?
    struct IdentityCheck
    {
        std::size_t identity;
        bool holds;
    };
    auto check_identities(const MinorCondition &, const std::vector<FunctionTable> & tables) -> std::vector<IdentityCheck>;
    auto satisfies(const MinorCondition &, const std::vector<FunctionTable> & tables) -> bool;

    // Label Cover with uniform label counts on each side
    struct LabelCoverEdge
    {
        std::size_t u, v;
        std::vector<unsigned> pi;     // [r] -> [l], 0-based

        auto operator== (const LabelCoverEdge &) const -> bool = default;
    };

    struct LabelCover
    {
        std::size_t left = 0, right = 0;
        unsigned l = 0, r = 0;
        std::vector<LabelCoverEdge> edges;

        auto operator== (const LabelCover &) const -> bool = default;
    };

    auto from_label_cover(const LabelCover &) -> MinorCondition;
    auto to_label_cover(const MinorCondition &) -> LabelCover;
    auto label_cover_satisfied(const LabelCover &, const std::vector<unsigned> & left_labels,
            const std::vector<unsigned> & right_labels) -> bool;

    auto parse_condition(const std::string & text) -> MinorCondition;
    auto serialize_condition(const MinorCondition &) -> std::string;
    auto parse_label_cover(const std::string & text) -> LabelCover;
    auto serialize_label_cover(const LabelCover &) -> std::string;
}

#endif
