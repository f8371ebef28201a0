#ifndef PCSP_MINIONLAB_HH
#define PCSP_MINIONLAB_HH

#include <pcsp/core.hh>
#include <pcsp/homsearch.hh>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pcsp
{
    // f : A^n -> B, outputs indexed by encode_tuple(input, in_domain)
    struct FunctionTable
    {
        std::string name;
        std::size_t in_domain = 0;
        std::size_t out_domain = 0;
        unsigned arity = 0;
        std::vector<Element> outputs;

        auto operator() (std::span<const Element> x) const -> Element { return outputs[encode_tuple(x, in_domain)]; }
        auto operator() (std::initializer_list<Element> x) const -> Element
        {
            return outputs[encode_tuple(std::span<const Element>(x.begin(), x.size()), in_domain)];
        }
        auto size() const -> std::size_t { return outputs.size(); }

        // equality ignores the name
        auto same_function(const FunctionTable & o) const -> bool
        {
            return in_domain == o.in_domain && out_domain == o.out_domain && arity == o.arity && outputs == o.outputs;
        }
    };

    // builds a table by evaluating f on every input in index order
    auto tabulate(const std::string & name, std::size_t in_domain, std::size_t out_domain, unsigned arity,
            const std::function<Element (std::span<const Element>)> & f) -> FunctionTable;

    auto projection(std::size_t domain, unsigned arity, unsigned coordinate) -> FunctionTable;

    // pi[j] is the coordinate (0-based, < n) fed into argument j of g
    using MinorMap = std::vector<unsigned>;

    // f(x_1..x_n) = g(x_pi(1), ..., x_pi(m))
    auto minor_of(const FunctionTable & g, const MinorMap & pi, unsigned n) -> FunctionTable;

    struct PolymorphismCheck
    {
        bool holds = true;
        std::size_t relation = 0;
        // columns[i] is the i-th column of the violating matrix, a tuple of the relation in A
        std::vector<Tuple> columns;
        Tuple image;

        explicit operator bool () const { return holds; }
    };

    auto is_polymorphism(const FunctionTable & f, const PromiseTemplate & t) -> PolymorphismCheck;

    struct PolymorphismEnumeration
    {
        std::vector<FunctionTable> tables;
        bool truncated = false;
    };

    auto polymorphism_from_hom(const Homomorphism & h, const PromiseTemplate & t, unsigned n) -> FunctionTable;

    // lexicographic table order; cap 0 means no cap
    auto enumerate_polymorphisms(const PromiseTemplate & t, unsigned n, std::uint64_t cap = 0) -> PolymorphismEnumeration;
    auto for_each_polymorphism(const PromiseTemplate & t, unsigned n,
            const std::function<bool (const FunctionTable &)> & callback) -> bool;

    auto essential_coordinates(const FunctionTable & f) -> std::vector<unsigned>;

    // Boolean only: f is 0 when all of I are 0, and 1 when all of I are 1
    auto is_fixing_set(const FunctionTable & f, const std::vector<unsigned> & coords) -> bool;
    auto min_fixing_set(const FunctionTable & f) -> std::optional<std::vector<unsigned>>;

    struct TrashColour
    {
        Element colour;
        unsigned coordinate;
        // alpha[a] is the output on inputs whose chosen coordinate is a, unless it is the trash colour
        std::vector<Element> alpha;
    };

    // does f(x) lie in {t, alpha(x_i)} for some t, i, alpha?
    auto find_trash_colour(const FunctionTable & f) -> std::optional<TrashColour>;

    // named constructions, each checked as a polymorphism before it is returned
    auto olsak_k_2k(unsigned k) -> FunctionTable;
    struct LoopPair
    {
        FunctionTable t, s;
    };
    auto k4loop_in_k3_k6() -> LoopPair;
    auto example_2_16_g(unsigned k) -> FunctionTable;
    auto example_2_17_g() -> FunctionTable;
    auto hamming_threshold(unsigned k) -> FunctionTable;
    auto alternating_threshold(unsigned n) -> FunctionTable;
    auto parity(unsigned n) -> FunctionTable;
    // the g_1 of the robust majority construction over (K_k, K_2k)
    auto majority_robust_g1(unsigned k) -> FunctionTable;

    auto named_function(const std::string & name, const std::vector<unsigned> & params) -> FunctionTable;

    auto parse_function(const std::string & text) -> FunctionTable;
    auto parse_functions(const std::string & text) -> std::vector<FunctionTable>;
    auto serialize_function(const FunctionTable & f) -> std::string;
}

#endif
