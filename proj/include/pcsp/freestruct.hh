#ifndef PCSP_FREESTRUCT_HH
#define PCSP_FREESTRUCT_HH

#include <pcsp/conditions.hh>
#include <pcsp/core.hh>
#include <pcsp/homsearch.hh>
#include <pcsp/indicator.hh>
#include <pcsp/minionlab.hh>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pcsp
{
    // A minion whose members are concrete tables, so that minors are computed with minor_of.
    class Minion
    {
        public:
            virtual ~Minion() = default;

            virtual auto name() const -> std::string = 0;

            // all members of arity n, in a fixed order; CapacityError if too many
            virtual auto members(unsigned n) const -> std::vector<FunctionTable> = 0;

            // callback returns false to stop; returns false if stopped early
            virtual auto for_each_member(unsigned m, const std::function<bool (const FunctionTable &)> & callback) const -> bool;

            // some g of arity m with minor_of(g, pis[i], n) equal to *fs[i] for every i
            virtual auto find_witness(const std::vector<const FunctionTable *> & fs, const std::vector<MinorMap> & pis,
                    unsigned n, unsigned m) const -> std::optional<FunctionTable>;
    };

    class PolymorphismMinion : public Minion
    {
        public:
            explicit PolymorphismMinion(PromiseTemplate t, std::uint64_t member_cap = 2'000'000);

            auto name() const -> std::string override;
            auto members(unsigned n) const -> std::vector<FunctionTable> override;
            auto for_each_member(unsigned m, const std::function<bool (const FunctionTable &)> & callback) const -> bool override;
            auto find_witness(const std::vector<const FunctionTable *> & fs, const std::vector<MinorMap> & pis,
                    unsigned n, unsigned m) const -> std::optional<FunctionTable> override;

            auto template_() const -> const PromiseTemplate & { return _t; }

        private:
            PromiseTemplate _t;
            std::uint64_t _cap;
            mutable std::map<unsigned, Structure> _powers;
    };

    // members given explicitly; the list should be closed under minors
    class ExplicitMinion : public Minion
    {
        public:
            ExplicitMinion(std::string name, std::vector<FunctionTable> tables);

            auto name() const -> std::string override { return _name; }
            auto members(unsigned n) const -> std::vector<FunctionTable> override;

        private:
            std::string _name;
            std::vector<FunctionTable> _tables;
    };

    // projections on a two-element set, p_1 .. p_n in order
    class ProjectionMinion : public Minion
    {
        public:
            auto name() const -> std::string override { return "projections"; }
            auto members(unsigned n) const -> std::vector<FunctionTable> override;
    };

    // n-ary members are nonempty subsets of [n], realised as Boolean conjunctions; bitmask order
    class HornMinion : public Minion
    {
        public:
            auto name() const -> std::string override { return "horn"; }
            auto members(unsigned n) const -> std::vector<FunctionTable> override;
    };

    struct FreeStructure
    {
        Structure structure;
        // members of arity n = |A|
        unsigned n = 0;
        std::vector<FunctionTable> members;
        std::map<std::vector<Element>, Element> index;
        std::vector<std::string> labels;
        // witnesses[r][i] realises tuple i of relation r
        std::vector<std::vector<FunctionTable>> witnesses;

        auto index_of(const FunctionTable & f) const -> std::optional<Element>;
    };

    struct FreeOptions
    {
        // lazily query tuples when there are at most this many candidate tuples for a relation
        std::uint64_t lazy_limit = 20000;
        // otherwise enumerate M^(m), giving up (CapacityError) past this many members
        std::uint64_t enumeration_limit = 2'000'000;
    };

    auto free_structure(const Minion & m, const Structure & a, const FreeOptions & = {}) -> FreeStructure;

    auto subset_label(std::uint64_t mask, std::size_t n) -> std::string;

    auto power_structure(const Structure & a) -> Structure;
    auto power_structure_labels(const Structure & a) -> std::vector<std::string>;

    struct Width1Result
    {
        bool holds = false;
        std::optional<Homomorphism> hom;
        Structure power;
    };

    auto width1_check(const PromiseTemplate & t) -> Width1Result;

    // numerators: element e of lp_structure(a, l) is the distribution weights[e][x] / l
    struct WeightStructure
    {
        Structure structure;
        std::vector<std::vector<long>> weights;
        std::vector<std::string> labels;
    };

    auto lp_structure(const Structure & a, unsigned l) -> WeightStructure;
    auto ip_structure(const Structure & a, unsigned l) -> WeightStructure;

    // h_l(phi) = s(a_1..a_l) with each a repeated phi(a) l times
    auto lp_hom_from_symmetric(const WeightStructure & lp, const FunctionTable & s) -> Homomorphism;
    // h_l(phi) = alt(a_1..a_{2l+1}) with odd-minus-even multiplicities phi
    auto ip_hom_from_alternating(const WeightStructure & ip, const FunctionTable & alt) -> Homomorphism;

    struct MinionHomResult
    {
        Verdict verdict = Verdict::unknown;
        std::string method;
        std::string note;
        std::optional<FreeStructure> free;
        std::optional<Homomorphism> hom;
        // refutation: an instance not mapping to the target's B whose condition holds in the source
        std::optional<Structure> refuting_instance;
        std::optional<ConditionCheckResult> refutation;
    };

    struct MinionHomOptions
    {
        FreeOptions free;
        SearchOptions search;
        // constraints per refuting candidate instance, and their variable bound
        unsigned refute_constraints = 2;
        unsigned refute_variables = 3;
        std::uint64_t refute_node_budget = 200000;
    };

    auto minion_hom_exists(const PromiseTemplate & source, const PromiseTemplate & target,
            const MinionHomOptions & = {}) -> MinionHomResult;

    // xi(f)(a_1..a_k) = h(minor of f along a), the minion homomorphism given by h : F -> B
    auto decode_minion_hom(const FreeStructure & free, const Homomorphism & h, const FunctionTable & f,
            std::size_t out_domain) -> FunctionTable;
}

#endif
