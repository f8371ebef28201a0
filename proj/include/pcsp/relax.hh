#ifndef PCSP_RELAX_HH
#define PCSP_RELAX_HH

#include <pcsp/core.hh>
#include <pcsp/homsearch.hh>

#include <gmpxx.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pcsp
{
    enum class SystemMode
    {
        rational_nonneg,
        integer
    };

    struct RelaxVariable
    {
        // mu[v][a] when scope is empty, mu[scope][R][t] otherwise
        Element v = 0;
        Element value = 0;
        std::size_t relation = 0;
        Tuple scope;
        std::size_t tuple = 0;
        std::string name;
    };

    struct LinearEquation
    {
        std::vector<std::pair<std::size_t, mpz_class>> terms;
        mpz_class rhs;
    };

    struct LinearSystem
    {
        SystemMode mode = SystemMode::rational_nonneg;
        std::vector<RelaxVariable> variables;
        std::vector<LinearEquation> equations;
        // set when the Boolean rewrite replaced mu[v][0] by 1 - mu[v][1]
        bool boolean_simplified = false;
    };

    struct EmitOptions
    {
        // only for two-element A: mu[v][0] is eliminated
        bool simplify_boolean = false;
    };

    auto emit_blp(const Structure & instance, const Structure & a, const EmitOptions & = {}) -> LinearSystem;
    auto emit_aip(const Structure & instance, const Structure & a, const EmitOptions & = {}) -> LinearSystem;

    // one equation per line, `<coef>*<var> ... = <const>`
    auto serialize_system(const LinearSystem & s) -> std::string;

    struct RelaxSolution
    {
        std::vector<mpq_class> values;
    };

    struct Infeasibility
    {
        // multipliers z on the equations. LP: z^T A >= 0 and z^T b < 0. IP: z^T A integral and z^T b not.
        std::vector<mpq_class> multipliers;
    };

    struct RelaxResult
    {
        bool feasible = false;
        std::optional<RelaxSolution> solution;
        std::optional<Infeasibility> certificate;
        bool verified = false;
        std::uint64_t pivots = 0;
    };

    // exact phase-one simplex with Bland's rule
    auto lp_feasible(const LinearSystem & s) -> RelaxResult;
    // Hermite normal form over the integers
    auto ip_feasible(const LinearSystem & s) -> RelaxResult;

    auto check_solution(const LinearSystem & s, const RelaxSolution & x) -> bool;
    auto check_infeasibility(const LinearSystem & s, const Infeasibility & z) -> bool;

    // the 0/1 solution coming from a homomorphism instance -> a
    auto solution_from_hom(const LinearSystem & s, const Structure & instance, const Structure & a,
            const Homomorphism & h) -> RelaxSolution;

    // column Hermite normal form: a * u = h, u unimodular, h lower echelon with positive pivots and
    // reduced entries left of each pivot. Both stored by columns: h[j][i] is row i of column j.
    struct HermiteForm
    {
        std::vector<std::vector<mpz_class>> h, u;
        // pivot_rows[k] is the row of the pivot of column k
        std::vector<std::size_t> pivot_rows;
    };

    // a given by rows, with `columns` columns
    auto hermite_normal_form(const std::vector<std::vector<mpz_class>> & a, std::size_t columns) -> HermiteForm;

    enum class RelaxMethod
    {
        gac,
        blp,
        aip
    };

    auto method_name(RelaxMethod) -> std::string;
    auto parse_method(const std::string &) -> RelaxMethod;

    struct PromiseOptions
    {
        // symmetric(2..k) for blp and alternating(3,5,..,k) for aip; below 2 skips the test
        unsigned characterization_arity = 3;
        std::uint64_t node_budget = 2'000'000;
        EmitOptions emit;
    };

    struct PromiseAnswer
    {
        bool yes = false;
        RelaxMethod method = RelaxMethod::gac;
        std::optional<RelaxResult> relaxation;
        std::optional<DomainTable> arc_consistent;
        // "no" is always sound; "yes" only when the characterization passed
        bool yes_sound = false;
        std::string characterization;
    };

    auto solve_promise(const PromiseTemplate & t, const Structure & instance, RelaxMethod method,
            const PromiseOptions & = {}) -> PromiseAnswer;
}

#endif
