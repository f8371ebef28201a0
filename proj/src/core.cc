#include <pcsp/core.hh>

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

using std::size_t;
using std::string;
using std::to_string;
using std::uint64_t;
using std::vector;

namespace pcsp
{
    ParseError::ParseError(size_t line, size_t column, const string & message) :
        Error("line " + to_string(line) + ", column " + to_string(column) + ": " + message),
        _line(line),
        _column(column)
    {
    }

    auto size_cap() -> SizeCap &
    {
        static SizeCap cap;
        return cap;
    }

    auto check_size_cap(const string & what, uint64_t elements, uint64_t tuples) -> void
    {
        auto & cap = size_cap();
        if (elements > cap.max_elements)
            throw CapacityError(what + ": " + to_string(elements) + " elements exceeds size cap of " + to_string(cap.max_elements));
        if (tuples > cap.max_tuples)
            throw CapacityError(what + ": " + to_string(tuples) + " tuples exceeds size cap of " + to_string(cap.max_tuples));
    }

    auto saturating_mul(uint64_t a, uint64_t b) -> uint64_t
    {
        if (a != 0 && b > std::numeric_limits<uint64_t>::max() / a)
            return std::numeric_limits<uint64_t>::max();
        return a * b;
    }

    auto saturating_add(uint64_t a, uint64_t b) -> uint64_t
    {
        if (b > std::numeric_limits<uint64_t>::max() - a)
            return std::numeric_limits<uint64_t>::max();
        return a + b;
    }

    auto checked_pow(uint64_t base, unsigned exponent) -> uint64_t
    {
        uint64_t r = 1;
        for (unsigned i = 0 ; i < exponent ; ++i)
            r = saturating_mul(r, base);
        return r;
    }

    Signature::Signature(vector<RelationSymbol> r)
    {
        for (auto & s : r)
            add(std::move(s));
    }

    auto Signature::find(const string & name) const -> std::optional<size_t>
    {
        for (size_t i = 0 ; i < _relations.size() ; ++i)
            if (_relations[i].name == name)
                return i;
        return std::nullopt;
    }

    auto Signature::add(RelationSymbol r) -> size_t
    {
        if (r.arity == 0)
            throw Error("relation '" + r.name + "' must have positive arity");
        if (find(r.name))
            throw Error("duplicate relation name '" + r.name + "'");
        _relations.push_back(std::move(r));
        return _relations.size() - 1;
    }

    auto Signature::similar_to(const Signature & other) const -> bool
    {
        if (size() != other.size())
            return false;
        for (size_t i = 0 ; i < size() ; ++i)
            if (_relations[i].arity != other._relations[i].arity)
                return false;
        return true;
    }

    Relation::Relation(unsigned arity) :
        _arity(arity)
    {
    }

    auto Relation::add(std::span<const Element> t) -> void
    {
        _data.insert(_data.end(), t.begin(), t.end());
    }

    auto Relation::normalise() -> void
    {
        size_t n = size();
        vector<size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        auto less = [&] (size_t a, size_t b) {
            auto ta = tuple(a), tb = tuple(b);
            return std::lexicographical_compare(ta.begin(), ta.end(), tb.begin(), tb.end());
        };
        if (std::is_sorted(order.begin(), order.end(), [&] (size_t a, size_t b) { return less(a, b); })) {
            bool strictly = true;
            for (size_t i = 1 ; i < n && strictly ; ++i)
                strictly = less(i - 1, i);
            if (strictly)
                return;
        }
        std::sort(order.begin(), order.end(), less);
        vector<Element> data;
        data.reserve(_data.size());
        for (size_t i = 0 ; i < n ; ++i) {
            if (i > 0 && ! less(order[i - 1], order[i]))
                continue;
            auto t = tuple(order[i]);
            data.insert(data.end(), t.begin(), t.end());
        }
        _data = std::move(data);
    }

    auto Relation::find(std::span<const Element> t) const -> std::optional<size_t>
    {
        size_t lo = 0, hi = size();
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            auto m = tuple(mid);
            auto c = std::lexicographical_compare_three_way(m.begin(), m.end(), t.begin(), t.end());
            if (c == 0)
                return mid;
            else if (c < 0)
                lo = mid + 1;
            else
                hi = mid;
        }
        return std::nullopt;
    }

    Structure::Structure(string name, size_t domain_size, Signature signature) :
        _name(std::move(name)),
        _domain_size(domain_size),
        _signature(std::move(signature))
    {
        for (auto & r : _signature.relations())
            _relations.emplace_back(r.arity);
    }

    auto Structure::relation(const string & name) const -> const Relation &
    {
        auto i = _signature.find(name);
        if (! i)
            throw Error("structure '" + _name + "' has no relation '" + name + "'");
        return _relations[*i];
    }

    auto Structure::add_tuple(size_t relation, std::span<const Element> t) -> void
    {
        if (relation >= _relations.size())
            throw Error("relation index out of range");
        if (t.size() != _relations[relation].arity())
            throw Error("tuple of length " + to_string(t.size()) + " for relation '" + _signature[relation].name
                    + "' of arity " + to_string(_relations[relation].arity()));
        for (auto e : t)
            if (e >= _domain_size)
                throw Error("element " + to_string(e) + " out of range");
        _relations[relation].add(t);
    }

    auto Structure::normalise() -> void
    {
        for (auto & r : _relations)
            r.normalise();
    }

    auto Structure::tuple_count() const -> size_t
    {
        size_t result = 0;
        for (auto & r : _relations)
            result += r.size();
        return result;
    }

    auto Structure::same_content(const Structure & other) const -> bool
    {
        return _domain_size == other._domain_size && _signature == other._signature && _relations == other._relations;
    }

    auto make_template(Structure a, Structure b) -> PromiseTemplate
    {
        if (! a.similar_to(b))
            throw SignatureMismatch("template structures '" + a.name() + "' and '" + b.name() + "' are not similar");
        return PromiseTemplate{ std::move(a), std::move(b) };
    }

    Partition::Partition(size_t n) :
        _parent(n)
    {
        std::iota(_parent.begin(), _parent.end(), 0);
    }

    auto Partition::find(size_t x) -> size_t
    {
        size_t root = x;
        while (_parent[root] != root)
            root = _parent[root];
        while (_parent[x] != root) {
            size_t next = _parent[x];
            _parent[x] = root;
            x = next;
        }
        return root;
    }

    auto Partition::unite(size_t x, size_t y) -> bool
    {
        x = find(x);
        y = find(y);
        if (x == y)
            return false;
        if (x < y)
            _parent[y] = x;
        else
            _parent[x] = y;
        return true;
    }

    auto Partition::representatives() -> vector<size_t>
    {
        vector<size_t> result(_parent.size());
        for (size_t i = 0 ; i < _parent.size() ; ++i)
            result[i] = find(i);
        return result;
    }

    auto quotient(const Structure & s, Partition & p) -> QuotientResult
    {
        if (p.size() != s.domain_size())
            throw Error("partition size does not match domain size");

        auto reps = p.representatives();
        vector<Element> new_index(s.domain_size(), 0);
        size_t classes = 0;
        for (size_t i = 0 ; i < s.domain_size() ; ++i)
            if (reps[i] == i)
                new_index[i] = classes++;
        vector<Element> index_map(s.domain_size());
        for (size_t i = 0 ; i < s.domain_size() ; ++i)
            index_map[i] = new_index[reps[i]];

        Structure result(s.name(), classes, s.signature());
        Tuple t;
        for (size_t r = 0 ; r < s.relation_count() ; ++r) {
            auto & rel = s.relation(r);
            auto & out = result.relation_mut(r);
            out.reserve(rel.size());
            t.resize(rel.arity());
            for (size_t i = 0 ; i < rel.size() ; ++i) {
                auto src = rel.tuple(i);
                for (unsigned j = 0 ; j < rel.arity() ; ++j)
                    t[j] = index_map[src[j]];
                out.add(t);
            }
        }
        result.normalise();
        return QuotientResult{ std::move(result), std::move(index_map) };
    }

    auto disjoint_union(std::span<const Structure> parts, const string & name) -> UnionResult
    {
        if (parts.empty())
            throw Error("disjoint union of no structures");
        uint64_t elements = 0, tuples = 0;
        for (auto & p : parts) {
            if (! p.similar_to(parts[0]))
                throw SignatureMismatch("disjoint union of dissimilar structures '" + parts[0].name() + "' and '" + p.name() + "'");
            elements = saturating_add(elements, p.domain_size());
            tuples = saturating_add(tuples, p.tuple_count());
        }
        check_size_cap("disjoint union", elements, tuples);

        vector<size_t> offsets;
        size_t total = 0;
        for (auto & p : parts) {
            offsets.push_back(total);
            total += p.domain_size();
        }

        Structure result(name, total, parts[0].signature());
        Tuple t;
        for (size_t r = 0 ; r < result.relation_count() ; ++r) {
            auto & out = result.relation_mut(r);
            t.resize(out.arity());
            for (size_t k = 0 ; k < parts.size() ; ++k) {
                auto & rel = parts[k].relation(r);
                for (size_t i = 0 ; i < rel.size() ; ++i) {
                    auto src = rel.tuple(i);
                    for (unsigned j = 0 ; j < rel.arity() ; ++j)
                        t[j] = src[j] + offsets[k];
                    out.add(t);
                }
            }
        }
        result.normalise();
        return UnionResult{ std::move(result), std::move(offsets) };
    }

    auto encode_tuple(std::span<const Element> t, size_t base) -> uint64_t
    {
        uint64_t result = 0;
        for (auto e : t)
            result = result * base + e;
        return result;
    }

    auto decode_tuple(uint64_t index, size_t base, std::span<Element> out) -> void
    {
        for (size_t i = out.size() ; i > 0 ; --i) {
            out[i - 1] = index % base;
            index /= base;
        }
    }

    auto decode_tuple(uint64_t index, size_t base, unsigned length) -> Tuple
    {
        Tuple result(length);
        decode_tuple(index, base, result);
        return result;
    }

    auto power(const Structure & s, unsigned n) -> Structure
    {
        if (n == 0)
            throw Error("power exponent must be positive");
        uint64_t elements = checked_pow(s.domain_size(), n), tuples = 0;
        for (size_t r = 0 ; r < s.relation_count() ; ++r)
            tuples = saturating_add(tuples, checked_pow(s.relation(r).size(), n));
        check_size_cap("power " + s.name() + "^" + to_string(n), elements, tuples);

        Structure result(s.name() + "^" + to_string(n), elements, s.signature());
        vector<uint64_t> weight(n);
        for (unsigned i = 0 ; i < n ; ++i)
            weight[i] = checked_pow(s.domain_size(), n - 1 - i);

        for (size_t r = 0 ; r < s.relation_count() ; ++r) {
            auto & rel = s.relation(r);
            auto & out = result.relation_mut(r);
            size_t m = rel.size();
            if (m == 0)
                continue;
            unsigned k = rel.arity();
            out.reserve(checked_pow(m, n));
            vector<size_t> choice(n, 0);
            Tuple t(k);
            while (true) {
                for (unsigned j = 0 ; j < k ; ++j) {
                    uint64_t v = 0;
                    for (unsigned i = 0 ; i < n ; ++i)
                        v += rel.tuple(choice[i])[j] * weight[i];
                    t[j] = v;
                }
                out.add(t);

                unsigned i = n;
                while (i > 0) {
                    if (++choice[i - 1] < m)
                        break;
                    choice[i - 1] = 0;
                    --i;
                }
                if (i == 0)
                    break;
            }
        }
        result.normalise();
        return result;
    }

    auto is_homomorphism(std::span<const Element> map, const Structure & from, const Structure & to) -> bool
    {
        if (map.size() != from.domain_size() || ! from.similar_to(to))
            return false;
        for (auto v : map)
            if (v >= to.domain_size())
                return false;
        Tuple t;
        for (size_t r = 0 ; r < from.relation_count() ; ++r) {
            auto & rel = from.relation(r);
            t.resize(rel.arity());
            for (size_t i = 0 ; i < rel.size() ; ++i) {
                auto src = rel.tuple(i);
                for (unsigned j = 0 ; j < rel.arity() ; ++j)
                    t[j] = map[src[j]];
                if (! to.relation(r).contains(t))
                    return false;
            }
        }
        return true;
    }

    namespace
    {
        auto graph_signature() -> Signature
        {
            return Signature({ { "E", 2 } });
        }
    }

    auto clique(unsigned k) -> Structure
    {
        Structure result("K" + to_string(k), k, graph_signature());
        for (Element a = 0 ; a < k ; ++a)
            for (Element b = 0 ; b < k ; ++b)
                if (a != b)
                    result.add_tuple(0, { a, b });
        result.normalise();
        return result;
    }

    auto cycle(unsigned n) -> Structure
    {
        if (n < 3)
            throw std::invalid_argument("cycle length must be at least 3");
        Structure result("C" + to_string(n), n, graph_signature());
        for (Element a = 0 ; a < n ; ++a) {
            Element b = (a + 1) % n;
            result.add_tuple(0, { a, b });
            result.add_tuple(0, { b, a });
        }
        result.normalise();
        return result;
    }

    auto nae(unsigned k) -> Structure
    {
        if (k < 2)
            throw std::invalid_argument("NAE template needs at least 2 colours");
        Structure result("H" + to_string(k), k, Signature({ { "R", 3 } }));
        for (Element a = 0 ; a < k ; ++a)
            for (Element b = 0 ; b < k ; ++b)
                for (Element c = 0 ; c < k ; ++c)
                    if (! (a == b && b == c))
                        result.add_tuple(0, { a, b, c });
        result.normalise();
        return result;
    }

    auto one_in_three() -> Structure
    {
        Structure result("T", 2, Signature({ { "R", 3 } }));
        result.add_tuple(0, { 1, 0, 0 });
        result.add_tuple(0, { 0, 1, 0 });
        result.add_tuple(0, { 0, 0, 1 });
        result.normalise();
        return result;
    }

    auto horn() -> Structure
    {
        Structure result("Horn", 2, Signature({ { "imp", 3 }, { "impneg", 3 }, { "zero", 1 }, { "one", 1 } }));
        for (Element x = 0 ; x < 2 ; ++x)
            for (Element y = 0 ; y < 2 ; ++y)
                for (Element z = 0 ; z < 2 ; ++z) {
                    // x∧y→z
                    if (! (x && y && ! z))
                        result.add_tuple(0, { x, y, z });
                    // x∧y→¬z
                    if (! (x && y && z))
                        result.add_tuple(1, { x, y, z });
                }
        result.add_tuple(2, { 0 });
        result.add_tuple(3, { 1 });
        result.normalise();
        return result;
    }

    auto loop_graph() -> Structure
    {
        Structure result("loop", 1, graph_signature());
        result.add_tuple(0, { 0, 0 });
        return result;
    }

    auto singleton_like(const Signature & sig) -> Structure
    {
        Structure result("one", 1, sig);
        for (size_t r = 0 ; r < sig.size() ; ++r)
            result.add_tuple(r, Tuple(sig[r].arity, 0));
        return result;
    }

    auto graph_from_edges(const string & name, size_t vertices, const vector<std::pair<Element, Element>> & edges) -> Structure
    {
        Structure result(name, vertices, graph_signature());
        for (auto [a, b] : edges) {
            result.add_tuple(0, { a, b });
            result.add_tuple(0, { b, a });
        }
        result.normalise();
        return result;
    }

    namespace
    {
        struct Token
        {
            string text;
            size_t column;
        };

        auto tokenise(const string & line) -> vector<Token>
        {
            vector<Token> result;
            size_t i = 0;
            while (i < line.size()) {
                if (line[i] == '#')
                    break;
                if (std::isspace(static_cast<unsigned char>(line[i]))) {
                    ++i;
                    continue;
                }
                size_t start = i;
                while (i < line.size() && ! std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#')
                    ++i;
                result.push_back(Token{ line.substr(start, i - start), start + 1 });
            }
            return result;
        }

        auto parse_number(const Token & t, size_t line) -> uint64_t
        {
            if (t.text.empty() || ! std::all_of(t.text.begin(), t.text.end(), [] (char c) { return c >= '0' && c <= '9'; }))
                throw ParseError(line, t.column, "expected a natural number, found '" + t.text + "'");
            try {
                return std::stoull(t.text);
            }
            catch (const std::exception &) {
                throw ParseError(line, t.column, "number '" + t.text + "' too large");
            }
        }
    }

    auto parse_structures(const string & text) -> vector<Structure>
    {
        vector<Structure> result;
        std::istringstream in(text);
        string line;
        size_t line_no = 0;

        enum class State { outside, header, body };
        State state = State::outside;
        string name;
        std::optional<Structure> current;
        std::optional<size_t> current_relation;
        size_t struct_line = 0;
        Tuple t;

        while (std::getline(in, line)) {
            ++line_no;
            auto tokens = tokenise(line);
            if (tokens.empty())
                continue;
            auto & head = tokens[0].text;

            if (state == State::outside) {
                if (head != "structure" || tokens.size() != 2)
                    throw ParseError(line_no, tokens[0].column, "expected 'structure <name>'");
                name = tokens[1].text;
                struct_line = line_no;
                state = State::header;
            }
            else if (state == State::header) {
                if (head != "domain" || tokens.size() != 2)
                    throw ParseError(line_no, tokens[0].column, "expected 'domain <n>'");
                auto n = parse_number(tokens[1], line_no);
                current.emplace(name, n, Signature{});
                current_relation.reset();
                state = State::body;
            }
            else {
                if (head == "relation") {
                    if (tokens.size() != 3)
                        throw ParseError(line_no, tokens[0].column, "expected 'relation <name> <arity>'");
                    auto arity = parse_number(tokens[2], line_no);
                    if (arity == 0)
                        throw ParseError(line_no, tokens[2].column, "arity must be positive");
                    auto sig = current->signature();
                    if (sig.find(tokens[1].text))
                        throw ParseError(line_no, tokens[1].column, "duplicate relation '" + tokens[1].text + "'");
                    sig.add({ tokens[1].text, static_cast<unsigned>(arity) });
                    Structure next(current->name(), current->domain_size(), sig);
                    for (size_t r = 0 ; r < current->relation_count() ; ++r)
                        next.relation_mut(r) = current->relation(r);
                    current = std::move(next);
                    current_relation = current->relation_count() - 1;
                }
                else if (head == "end") {
                    if (tokens.size() != 1)
                        throw ParseError(line_no, tokens[1].column, "unexpected text after 'end'");
                    current->normalise();
                    result.push_back(std::move(*current));
                    current.reset();
                    state = State::outside;
                }
                else {
                    if (! current_relation)
                        throw ParseError(line_no, tokens[0].column, "tuple before any 'relation' line");
                    unsigned arity = current->relation(*current_relation).arity();
                    if (tokens.size() != arity)
                        throw ParseError(line_no, tokens[0].column, "arity mismatch: expected " + to_string(arity)
                                + " elements, found " + to_string(tokens.size()));
                    t.resize(arity);
                    for (unsigned j = 0 ; j < arity ; ++j) {
                        auto v = parse_number(tokens[j], line_no);
                        if (v >= current->domain_size())
                            throw ParseError(line_no, tokens[j].column, "element " + to_string(v) + " out of range");
                        t[j] = v;
                    }
                    current->relation_mut(*current_relation).add(t);
                }
            }
        }

        if (state != State::outside)
            throw ParseError(line_no + 1, 1, "unterminated structure starting on line " + to_string(struct_line));
        return result;
    }

    auto parse_structure(const string & text) -> Structure
    {
        auto all = parse_structures(text);
        if (all.size() != 1)
            throw ParseError(1, 1, "expected exactly one structure, found " + to_string(all.size()));
        return std::move(all[0]);
    }

    auto serialize_structure(const Structure & s, const vector<string> & labels) -> string
    {
        std::ostringstream out;
        out << "structure " << s.name() << "\n";
        out << "domain " << s.domain_size() << "\n";
        for (size_t i = 0 ; i < labels.size() && i < s.domain_size() ; ++i)
            out << "# " << i << " = " << labels[i] << "\n";
        for (size_t r = 0 ; r < s.relation_count() ; ++r) {
            auto & rel = s.relation(r);
            out << "relation " << s.signature()[r].name << " " << rel.arity() << "\n";
            for (size_t i = 0 ; i < rel.size() ; ++i) {
                auto t = rel.tuple(i);
                for (unsigned j = 0 ; j < t.size() ; ++j)
                    out << (j ? " " : "") << t[j];
                out << "\n";
            }
        }
        out << "end\n";
        return out.str();
    }

    auto read_file(const string & path) -> string
    {
        std::ifstream in(path, std::ios::binary);
        if (! in)
            throw Error("cannot open '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
}
