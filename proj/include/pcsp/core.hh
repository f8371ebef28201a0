#ifndef PCSP_CORE_HH
#define PCSP_CORE_HH

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcsp
{
    using Element = std::uint32_t;
    using Tuple = std::vector<Element>;

    class Error : public std::runtime_error
    {
        public:
            using std::runtime_error::runtime_error;
    };

    // Raised when a construction would exceed the configured size cap.
    class CapacityError : public Error
    {
        public:
            using Error::Error;
    };

    class SignatureMismatch : public Error
    {
        public:
            using Error::Error;
    };

    class ParseError : public Error
    {
        public:
            ParseError(std::size_t line, std::size_t column, const std::string & message);

            auto line() const -> std::size_t { return _line; }
            auto column() const -> std::size_t { return _column; }

        private:
            std::size_t _line, _column;
    };

    struct SizeCap
    {
        std::uint64_t max_elements = 2'000'000;
        std::uint64_t max_tuples = 10'000'000;
    };

    auto size_cap() -> SizeCap &;

    // throws CapacityError unless elements and tuples fit
    auto check_size_cap(const std::string & what, std::uint64_t elements, std::uint64_t tuples) -> void;

    // saturating helpers, so that cap checks never overflow
    auto checked_pow(std::uint64_t base, unsigned exponent) -> std::uint64_t;
    auto saturating_mul(std::uint64_t a, std::uint64_t b) -> std::uint64_t;
    auto saturating_add(std::uint64_t a, std::uint64_t b) -> std::uint64_t;

    struct RelationSymbol
    {
        std::string name;
        unsigned arity;

        auto operator== (const RelationSymbol &) const -> bool = default;
    };

    class Signature
    {
        public:
            Signature() = default;
            explicit Signature(std::vector<RelationSymbol>);

            auto size() const -> std::size_t { return _relations.size(); }
            auto operator[] (std::size_t i) const -> const RelationSymbol & { return _relations[i]; }
            auto relations() const -> const std::vector<RelationSymbol> & { return _relations; }
            auto find(const std::string & name) const -> std::optional<std::size_t>;

            auto add(RelationSymbol) -> std::size_t;

            // same number of relations with matching arities
            auto similar_to(const Signature &) const -> bool;

            auto operator== (const Signature &) const -> bool = default;

        private:
            std::vector<RelationSymbol> _relations;
    };

    // Tuples stored flat, row after row. Canonical once normalised.
    class Relation
    {
        public:
            Relation() = default;
            explicit Relation(unsigned arity);

            auto arity() const -> unsigned { return _arity; }
            auto size() const -> std::size_t { return _arity == 0 ? 0 : _data.size() / _arity; }
            auto empty() const -> bool { return _data.empty(); }
            auto tuple(std::size_t i) const -> std::span<const Element>
            {
                return { _data.data() + i * _arity, _arity };
            }
            auto data() const -> const std::vector<Element> & { return _data; }

            auto add(std::span<const Element>) -> void;
            auto reserve(std::size_t tuples) -> void { _data.reserve(tuples * _arity); }

            // sort lexicographically, remove duplicates
            auto normalise() -> void;

            // binary search, requires normalised
            auto find(std::span<const Element>) const -> std::optional<std::size_t>;
            auto contains(std::span<const Element> t) const -> bool { return find(t).has_value(); }

            auto operator== (const Relation &) const -> bool = default;

        private:
            unsigned _arity = 0;
            std::vector<Element> _data;
    };

    class Structure
    {
        public:
            Structure() = default;
            Structure(std::string name, std::size_t domain_size, Signature signature);

            auto name() const -> const std::string & { return _name; }
            auto set_name(std::string n) -> void { _name = std::move(n); }
            auto domain_size() const -> std::size_t { return _domain_size; }
            auto signature() const -> const Signature & { return _signature; }
            auto relation_count() const -> std::size_t { return _relations.size(); }
            auto relation(std::size_t i) const -> const Relation & { return _relations[i]; }
            auto relation(const std::string & name) const -> const Relation &;

            // checks range and arity; call normalise() when done adding
            auto add_tuple(std::size_t relation, std::span<const Element>) -> void;
            auto add_tuple(std::size_t relation, std::initializer_list<Element> t) -> void
            {
                add_tuple(relation, std::span<const Element>(t.begin(), t.size()));
            }
            auto relation_mut(std::size_t i) -> Relation & { return _relations[i]; }
            auto normalise() -> void;

            auto similar_to(const Structure & other) const -> bool { return _signature.similar_to(other._signature); }
            auto tuple_count() const -> std::size_t;

            // everything but the name
            auto same_content(const Structure &) const -> bool;
            auto operator== (const Structure &) const -> bool = default;

        private:
            std::string _name;
            std::size_t _domain_size = 0;
            Signature _signature;
            std::vector<Relation> _relations;
    };

    struct PromiseTemplate
    {
        Structure a, b;
    };

    // throws SignatureMismatch unless a and b are similar
    auto make_template(Structure a, Structure b) -> PromiseTemplate;

    // Merge-find over 0..n-1. The smallest element of a class is its representative.
    class Partition
    {
        public:
            explicit Partition(std::size_t n = 0);

            auto size() const -> std::size_t { return _parent.size(); }
            auto find(std::size_t x) -> std::size_t;
            auto unite(std::size_t x, std::size_t y) -> bool;
            auto representatives() -> std::vector<std::size_t>;

        private:
            std::vector<std::size_t> _parent;
    };

    struct QuotientResult
    {
        Structure structure;
        std::vector<Element> index_map;
    };

    auto quotient(const Structure & s, Partition & p) -> QuotientResult;

    struct UnionResult
    {
        Structure structure;
        std::vector<std::size_t> offsets;
    };

    auto disjoint_union(std::span<const Structure> parts, const std::string & name = "union") -> UnionResult;

    // mixed radix, most significant digit is argument 1
    auto encode_tuple(std::span<const Element> t, std::size_t base) -> std::uint64_t;
    auto decode_tuple(std::uint64_t index, std::size_t base, unsigned length) -> Tuple;
    auto decode_tuple(std::uint64_t index, std::size_t base, std::span<Element> out) -> void;

    auto power(const Structure & s, unsigned n) -> Structure;

    auto is_homomorphism(std::span<const Element> map, const Structure & from, const Structure & to) -> bool;

    // built-in structures
    auto clique(unsigned k) -> Structure;
    auto cycle(unsigned n) -> Structure;
    auto nae(unsigned k) -> Structure;
    auto one_in_three() -> Structure;
    auto horn() -> Structure;
    // one vertex with a loop, graph signature
    auto loop_graph() -> Structure;
    // one element, every relation full
    auto singleton_like(const Signature &) -> Structure;
    // single binary relation named E, symmetric closure of the given pairs
    auto graph_from_edges(const std::string & name, std::size_t vertices,
            const std::vector<std::pair<Element, Element>> & edges) -> Structure;

    auto parse_structure(const std::string & text) -> Structure;
    auto parse_structures(const std::string & text) -> std::vector<Structure>;
    auto serialize_structure(const Structure & s, const std::vector<std::string> & labels = {}) -> std::string;

    auto read_file(const std::string & path) -> std::string;
}

#endif
