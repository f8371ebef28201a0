#include <pcsp/minionlab.hh>

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

using std::size_t;
using std::string;
using std::to_string;
using std::uint64_t;
using std::vector;

namespace pcsp
{
    auto tabulate(const string & name, size_t in_domain, size_t out_domain, unsigned arity,
            const std::function<Element (std::span<const Element>)> & f) -> FunctionTable
    {
        uint64_t count = checked_pow(in_domain, arity);
        check_size_cap("function table " + name, count, 0);
        FunctionTable result{ name, in_domain, out_domain, arity, {} };
        result.outputs.resize(count);
        Tuple x(arity, 0);
        for (uint64_t i = 0 ; i < count ; ++i) {
            auto v = f(x);
            if (v >= out_domain)
                throw Error("function " + name + " produces " + to_string(v) + " outside its codomain");
            result.outputs[i] = v;
            for (unsigned j = arity ; j > 0 ; --j) {
                if (++x[j - 1] < in_domain)
                    break;
                x[j - 1] = 0;
            }
        }
        return result;
    }

    auto projection(size_t domain, unsigned arity, unsigned coordinate) -> FunctionTable
    {
        if (coordinate >= arity)
            throw std::invalid_argument("projection coordinate out of range");
        return tabulate("p" + to_string(coordinate + 1), domain, domain, arity,
                [&] (std::span<const Element> x) { return x[coordinate]; });
    }

    auto minor_of(const FunctionTable & g, const MinorMap & pi, unsigned n) -> FunctionTable
    {
        if (pi.size() != g.arity)
            throw Error("minor map has " + to_string(pi.size()) + " entries but the function has arity " + to_string(g.arity));
        for (auto p : pi)
            if (p >= n)
                throw Error("minor map entry out of range");
        Tuple y(g.arity);
        return tabulate(g.name + "'", g.in_domain, g.out_domain, n, [&] (std::span<const Element> x) {
                for (unsigned j = 0 ; j < g.arity ; ++j)
                    y[j] = x[pi[j]];
                return g(y);
                });
    }

    namespace
    {
        auto check_domains(const FunctionTable & f, const PromiseTemplate & t) -> void
        {
            if (f.in_domain != t.a.domain_size() || f.out_domain != t.b.domain_size())
                throw Error("function " + f.name + " has domains " + to_string(f.in_domain) + " -> " + to_string(f.out_domain)
                        + " but the template has " + to_string(t.a.domain_size()) + " -> " + to_string(t.b.domain_size()));
            if (f.outputs.size() != checked_pow(f.in_domain, f.arity))
                throw Error("function " + f.name + " has a table of the wrong length");
            if (! t.a.similar_to(t.b))
                throw SignatureMismatch("template structures are not similar");
        }

        // matrices built column by column, rows tracked incrementally
        auto check_relation_direct(const FunctionTable & f, const Relation & ra, const Relation & rb, PolymorphismCheck & result) -> bool
        {
            size_t m = ra.size(), n = f.arity, k = ra.arity();
            if (m == 0)
                return true;
            if (n == 0)
                return true;
            vector<uint64_t> weight(n);
            for (size_t i = 0 ; i < n ; ++i)
                weight[i] = checked_pow(f.in_domain, n - 1 - i);
            vector<size_t> choice(n, 0);
            vector<uint64_t> row(k, 0);
            for (size_t j = 0 ; j < k ; ++j)
                for (size_t i = 0 ; i < n ; ++i)
                    row[j] += ra.tuple(0)[j] * weight[i];
            Tuple image(k);
            while (true) {
                for (size_t j = 0 ; j < k ; ++j)
                    image[j] = f.outputs[row[j]];
                if (! rb.contains(image)) {
                    result.holds = false;
                    result.image = image;
                    for (size_t i = 0 ; i < n ; ++i) {
                        auto t = ra.tuple(choice[i]);
                        result.columns.emplace_back(t.begin(), t.end());
                    }
                    return false;
                }
                size_t i = n;
                while (i > 0) {
                    auto old = ra.tuple(choice[i - 1]);
                    if (++choice[i - 1] < m) {
                        auto now = ra.tuple(choice[i - 1]);
                        for (size_t j = 0 ; j < k ; ++j)
                            row[j] = row[j] - old[j] * weight[i - 1] + now[j] * weight[i - 1];
                        break;
                    }
                    choice[i - 1] = 0;
                    auto now = ra.tuple(0);
                    for (size_t j = 0 ; j < k ; ++j)
                        row[j] = row[j] - old[j] * weight[i - 1] + now[j] * weight[i - 1];
                    --i;
                }
                if (i == 0)
                    return true;
            }
        }

        // Binary relations only. For each colour d, count along every axis the
        // neighbours y of x with f(y) = d, then look for forbidden colour pairs.
        auto check_relation_binary(const FunctionTable & f, const Relation & ra, const Relation & rb, PolymorphismCheck & result) -> bool
        {
            size_t da = f.in_domain, n = f.arity, total = f.outputs.size();
            vector<vector<Element>> out_nbrs(da);
            for (size_t i = 0 ; i < ra.size() ; ++i)
                out_nbrs[ra.tuple(i)[0]].push_back(ra.tuple(i)[1]);

            vector<uint64_t> cur(total), next(total);
            for (Element d = 0 ; d < f.out_domain ; ++d) {
                for (size_t x = 0 ; x < total ; ++x)
                    cur[x] = f.outputs[x] == d;
                uint64_t stride = 1;
                for (size_t axis = 0 ; axis < n ; ++axis) {
                    // axis counted from the least significant digit
                    for (size_t x = 0 ; x < total ; ++x) {
                        size_t digit = (x / stride) % da;
                        size_t base = x - digit * stride;
                        uint64_t sum = 0;
                        for (auto y : out_nbrs[digit])
                            sum += cur[base + y * stride];
                        next[x] = sum;
                    }
                    std::swap(cur, next);
                    stride *= da;
                }
                for (size_t x = 0 ; x < total ; ++x) {
                    if (cur[x] == 0)
                        continue;
                    Element c = f.outputs[x];
                    if (rb.contains(std::vector<Element>{ c, d }))
                        continue;
                    // recover a concrete neighbour
                    auto xs = decode_tuple(x, da, n);
                    Tuple y(n);
                    vector<size_t> pick(n, 0);
                    while (true) {
                        for (size_t i = 0 ; i < n ; ++i)
                            y[i] = out_nbrs[xs[i]][pick[i]];
                        if (f(y) == d)
                            break;
                        size_t i = n;
                        while (i > 0) {
                            if (++pick[i - 1] < out_nbrs[xs[i - 1]].size())
                                break;
                            pick[i - 1] = 0;
                            --i;
                        }
                        if (i == 0)
                            throw Error("internal error: neighbour count without a neighbour");
                    }
                    result.holds = false;
                    result.image = { c, d };
                    for (size_t i = 0 ; i < n ; ++i)
                        result.columns.push_back({ xs[i], y[i] });
                    return false;
                }
            }
            return true;
        }
    }

    auto is_polymorphism(const FunctionTable & f, const PromiseTemplate & t) -> PolymorphismCheck
    {
        check_domains(f, t);
        PolymorphismCheck result;
        for (size_t r = 0 ; r < t.a.relation_count() ; ++r) {
            auto & ra = t.a.relation(r);
            auto & rb = t.b.relation(r);
            uint64_t matrices = checked_pow(ra.size(), f.arity);
            bool ok;
            if (ra.arity() == 2 && matrices > 4'000'000)
                ok = check_relation_binary(f, ra, rb, result);
            else
                ok = check_relation_direct(f, ra, rb, result);
            if (! ok) {
                result.relation = r;
                return result;
            }
        }
        return result;
    }

    auto polymorphism_from_hom(const Homomorphism & h, const PromiseTemplate & t, unsigned n) -> FunctionTable
    {
        return FunctionTable{ "f", t.a.domain_size(), t.b.domain_size(), n, h };
    }

    auto for_each_polymorphism(const PromiseTemplate & t, unsigned n, const std::function<bool (const FunctionTable &)> & callback) -> bool
    {
        auto p = power(t.a, n);
        return for_each_hom(p, t.b, [&] (const Homomorphism & h) {
                return callback(polymorphism_from_hom(h, t, n));
                });
    }

    auto enumerate_polymorphisms(const PromiseTemplate & t, unsigned n, uint64_t cap) -> PolymorphismEnumeration
    {
        PolymorphismEnumeration result;
        auto homs = enumerate_homs(power(t.a, n), t.b, cap);
        result.truncated = homs.truncated;
        for (auto & h : homs.homs)
            result.tables.push_back(polymorphism_from_hom(h, t, n));
        return result;
    }

    auto essential_coordinates(const FunctionTable & f) -> vector<unsigned>
    {
        vector<unsigned> result;
        size_t d = f.in_domain;
        for (unsigned i = 0 ; i < f.arity ; ++i) {
            uint64_t stride = checked_pow(d, f.arity - 1 - i);
            bool essential = false;
            for (size_t x = 0 ; x < f.outputs.size() && ! essential ; ++x) {
                size_t digit = (x / stride) % d;
                if (digit != 0)
                    continue;
                for (size_t b = 1 ; b < d && ! essential ; ++b)
                    if (f.outputs[x + b * stride] != f.outputs[x])
                        essential = true;
            }
            if (essential)
                result.push_back(i);
        }
        return result;
    }

    auto is_fixing_set(const FunctionTable & f, const vector<unsigned> & coords) -> bool
    {
        if (f.in_domain != 2 || f.out_domain != 2)
            throw Error("fixing sets are defined for Boolean functions");
        Tuple x(f.arity);
        for (size_t i = 0 ; i < f.outputs.size() ; ++i) {
            decode_tuple(i, 2, x);
            bool zeros = true, ones = true;
            for (auto c : coords) {
                if (x[c] != 0)
                    zeros = false;
                if (x[c] != 1)
                    ones = false;
            }
            if (zeros && f.outputs[i] != 0)
                return false;
            if (ones && f.outputs[i] != 1)
                return false;
        }
        return true;
    }

    auto min_fixing_set(const FunctionTable & f) -> std::optional<vector<unsigned>>
    {
        if (f.in_domain != 2 || f.out_domain != 2)
            throw Error("fixing sets are defined for Boolean functions");
        unsigned n = f.arity;
        for (unsigned s = 0 ; s <= n ; ++s) {
            vector<unsigned> cur(s);
            std::iota(cur.begin(), cur.end(), 0);
            while (true) {
                if (is_fixing_set(f, cur))
                    return cur;
                unsigned i = s;
                while (i > 0 && cur[i - 1] == n - s + i - 1)
                    --i;
                if (i == 0)
                    break;
                ++cur[i - 1];
                for (unsigned j = i ; j < s ; ++j)
                    cur[j] = cur[j - 1] + 1;
            }
        }
        return std::nullopt;
    }

    auto find_trash_colour(const FunctionTable & f) -> std::optional<TrashColour>
    {
        size_t d = f.in_domain;
        Tuple x(f.arity);
        for (Element t = 0 ; t < f.out_domain ; ++t)
            for (unsigned i = 0 ; i < f.arity ; ++i) {
                vector<std::optional<Element>> alpha(d);
                bool ok = true;
                for (size_t idx = 0 ; idx < f.outputs.size() && ok ; ++idx) {
                    auto v = f.outputs[idx];
                    if (v == t)
                        continue;
                    decode_tuple(idx, d, x);
                    auto & slot = alpha[x[i]];
                    if (! slot)
                        slot = v;
                    else if (*slot != v)
                        ok = false;
                }
                if (ok) {
                    TrashColour result{ t, i, {} };
                    for (auto & a : alpha)
                        result.alpha.push_back(a.value_or(t));
                    return result;
                }
            }
        return std::nullopt;
    }

    namespace
    {
        auto verified(FunctionTable f, const PromiseTemplate & t) -> FunctionTable
        {
            auto check = is_polymorphism(f, t);
            if (! check)
                throw Error("named function " + f.name + " failed its polymorphism check");
            return f;
        }

        // x + y + z = 1 mod 2
        auto odd_sum() -> Structure
        {
            Structure s("L", 2, Signature({ { "R", 3 } }));
            for (Element x = 0 ; x < 2 ; ++x)
                for (Element y = 0 ; y < 2 ; ++y)
                    for (Element z = 0 ; z < 2 ; ++z)
                        if ((x + y + z) % 2 == 1)
                            s.add_tuple(0, { x, y, z });
            s.normalise();
            return s;
        }
    }

    auto olsak_k_2k(unsigned k) -> FunctionTable
    {
        if (k < 2)
            throw std::invalid_argument("olsak_k_2k needs k >= 2");
        auto f = tabulate("o", k, 2 * k, 6, [&] (std::span<const Element> x) -> Element {
                if (x[0] == x[1] || x[0] == x[2])
                    return x[0];
                if (x[1] == x[2])
                    return x[1];
                return x[0] + k;
                });
        return verified(std::move(f), make_template(clique(k), clique(2 * k)));
    }

    auto k4loop_in_k3_k6() -> LoopPair
    {
        auto t_fn = [] (std::span<const Element> x) -> Element {
            if (x[0] == x[1] && x[1] == x[2])
                return x[0];
            return x[3] + 3;
        };
        auto t = tabulate("t", 3, 6, 4, t_fn);

        // coordinates of s are the directed edges of K4 in the order (1,2),(2,1),(1,3),(3,1),...,(4,3)
        vector<std::pair<unsigned, unsigned>> edges;
        for (unsigned i = 0 ; i < 4 ; ++i)
            for (unsigned j = i + 1 ; j < 4 ; ++j) {
                edges.emplace_back(i, j);
                edges.emplace_back(j, i);
            }

        auto s = tabulate("s", 3, 6, 12, [&] (std::span<const Element> x) -> Element {
                // try x_{i,j} = x'_i, then x_{i,j} = x'_j
                for (int side = 0 ; side < 2 ; ++side) {
                    std::array<std::optional<Element>, 4> prime;
                    bool ok = true;
                    for (size_t e = 0 ; e < edges.size() && ok ; ++e) {
                        unsigned who = side == 0 ? edges[e].first : edges[e].second;
                        if (! prime[who])
                            prime[who] = x[e];
                        else if (*prime[who] != x[e])
                            ok = false;
                    }
                    if (ok) {
                        Tuple xp{ *prime[0], *prime[1], *prime[2], *prime[3] };
                        return t_fn(xp);
                    }
                }
                return x[0];
                });

        auto tmpl = make_template(clique(3), clique(6));
        return LoopPair{ verified(std::move(t), tmpl), verified(std::move(s), tmpl) };
    }

    auto example_2_16_g(unsigned k) -> FunctionTable
    {
        if (k < 4)
            throw std::invalid_argument("example_2_16_g needs k >= 4");
        auto f = tabulate("g", 2, k, 4, [] (std::span<const Element> x) -> Element {
                for (Element a = 0 ; a < 2 ; ++a)
                    if (std::count(x.begin(), x.end(), a) >= 3)
                        return a;
                return x[0] + 2;
                });
        return verified(std::move(f), make_template(nae(2), nae(k)));
    }

    auto example_2_17_g() -> FunctionTable
    {
        auto f = tabulate("g", 3, 5, 4, [] (std::span<const Element> x) -> Element {
                for (Element a = 0 ; a < 3 ; ++a)
                    if (std::count(x.begin(), x.end(), a) >= 3)
                        return a;
                if (x[0] == 0) {
                    auto zeros = std::count(x.begin() + 1, x.end(), 0);
                    auto ones = std::count(x.begin() + 1, x.end(), 1);
                    auto twos = std::count(x.begin() + 1, x.end(), 2);
                    if (zeros >= 1)
                        return 0;
                    if (ones >= 2)
                        return 1;
                    if (twos >= 2)
                        return 2;
                }
                return x[0] + 2;
                });
        return verified(std::move(f), make_template(clique(3), clique(5)));
    }

    auto hamming_threshold(unsigned k) -> FunctionTable
    {
        if (k < 1)
            throw std::invalid_argument("hamming_threshold needs k >= 1");
        auto f = tabulate("f" + to_string(k), 2, 2, 3 * k - 1, [&] (std::span<const Element> x) -> Element {
                return std::count(x.begin(), x.end(), 1) >= k ? 1 : 0;
                });
        return verified(std::move(f), make_template(one_in_three(), nae(2)));
    }

    auto alternating_threshold(unsigned n) -> FunctionTable
    {
        if (n % 2 == 0)
            throw std::invalid_argument("alternating_threshold needs odd arity");
        auto f = tabulate("at" + to_string(n), 2, 2, n, [&] (std::span<const Element> x) -> Element {
                long sum = 0;
                for (unsigned i = 0 ; i < n ; ++i)
                    sum += (i % 2 == 0) ? long(x[i]) : -long(x[i]);
                return sum > 0 ? 1 : 0;
                });
        return verified(std::move(f), make_template(one_in_three(), nae(2)));
    }

    auto parity(unsigned n) -> FunctionTable
    {
        if (n % 2 == 0)
            throw std::invalid_argument("parity needs odd arity");
        auto f = tabulate("parity" + to_string(n), 2, 2, n, [&] (std::span<const Element> x) -> Element {
                return std::count(x.begin(), x.end(), 1) % 2;
                });
        return verified(std::move(f), make_template(one_in_three(), odd_sum()));
    }

    auto majority_robust_g1(unsigned k) -> FunctionTable
    {
        if (k < 2)
            throw std::invalid_argument("majority_robust_g1 needs k >= 2");
        auto f = tabulate("g1", k, 2 * k, 3, [&] (std::span<const Element> x) -> Element {
                if (x[0] == x[1] || x[0] == x[2])
                    return x[0];
                if (x[1] == x[2])
                    return x[1];
                return x[0] + k;
                });
        return verified(std::move(f), make_template(clique(k), clique(2 * k)));
    }

    auto named_function(const string & name, const vector<unsigned> & params) -> FunctionTable
    {
        auto need = [&] (size_t count) {
            if (params.size() != count)
                throw std::invalid_argument(name + " takes " + to_string(count) + " parameter(s)");
        };
        if (name == "olsak_k_2k") {
            need(1);
            return olsak_k_2k(params[0]);
        }
        if (name == "k4loop_t") {
            need(0);
            return k4loop_in_k3_k6().t;
        }
        if (name == "k4loop_s") {
            need(0);
            return k4loop_in_k3_k6().s;
        }
        if (name == "example_2_16_g") {
            need(1);
            return example_2_16_g(params[0]);
        }
        if (name == "example_2_17_g") {
            need(0);
            return example_2_17_g();
        }
        if (name == "hamming_threshold") {
            need(1);
            return hamming_threshold(params[0]);
        }
        if (name == "alternating_threshold") {
            need(1);
            return alternating_threshold(params[0]);
        }
        if (name == "parity") {
            need(1);
            return parity(params[0]);
        }
        if (name == "majority_robust_g1") {
            need(1);
            return majority_robust_g1(params[0]);
        }
        throw std::invalid_argument("unknown named function '" + name + "'");
    }

    auto parse_functions(const string & text) -> vector<FunctionTable>
    {
        vector<FunctionTable> result;
        std::istringstream in(text);
        string line;
        size_t line_no = 0;
        std::optional<FunctionTable> current;
        uint64_t expected = 0;

        while (std::getline(in, line)) {
            ++line_no;
            auto hash = line.find('#');
            if (hash != string::npos)
                line = line.substr(0, hash);
            std::istringstream words(line);
            vector<std::pair<string, size_t>> tokens;
            string w;
            while (words >> w)
                tokens.emplace_back(w, line.find(w) + 1);
            if (tokens.empty())
                continue;

            auto number = [&] (size_t i) -> uint64_t {
                auto & [t, col] = tokens[i];
                if (t.empty() || ! std::all_of(t.begin(), t.end(), [] (char c) { return c >= '0' && c <= '9'; }))
                    throw ParseError(line_no, col, "expected a natural number, found '" + t + "'");
                return std::stoull(t);
            };

            if (! current) {
                if (tokens.size() != 8 || tokens[0].first != "function" || tokens[2].first != "in"
                        || tokens[4].first != "out" || tokens[6].first != "arity")
                    throw ParseError(line_no, tokens[0].second, "expected 'function <name> in <n> out <m> arity <k>'");
                current.emplace();
                current->name = tokens[1].first;
                current->in_domain = number(3);
                current->out_domain = number(5);
                current->arity = number(7);
                expected = checked_pow(current->in_domain, current->arity);
                check_size_cap("function table " + current->name, expected, 0);
                current->outputs.reserve(expected);
            }
            else {
                for (size_t i = 0 ; i < tokens.size() ; ++i) {
                    if (tokens[i].first == "end") {
                        if (i + 1 != tokens.size())
                            throw ParseError(line_no, tokens[i + 1].second, "unexpected text after 'end'");
                        if (current->outputs.size() != expected)
                            throw ParseError(line_no, tokens[i].second, "function " + current->name + " has "
                                    + to_string(current->outputs.size()) + " outputs, expected " + to_string(expected));
                        result.push_back(std::move(*current));
                        current.reset();
                        break;
                    }
                    auto v = number(i);
                    if (v >= current->out_domain)
                        throw ParseError(line_no, tokens[i].second, "output " + to_string(v) + " out of range");
                    if (current->outputs.size() >= expected)
                        throw ParseError(line_no, tokens[i].second, "too many outputs");
                    current->outputs.push_back(v);
                }
            }
        }
        if (current)
            throw ParseError(line_no + 1, 1, "unterminated function " + current->name);
        return result;
    }

    auto parse_function(const string & text) -> FunctionTable
    {
        auto all = parse_functions(text);
        if (all.size() != 1)
            throw ParseError(1, 1, "expected exactly one function, found " + to_string(all.size()));
        return std::move(all[0]);
    }

    auto serialize_function(const FunctionTable & f) -> string
    {
        std::ostringstream out;
        out << "function " << (f.name.empty() ? "f" : f.name) << " in " << f.in_domain << " out " << f.out_domain
            << " arity " << f.arity << "\n";
        size_t per_line = f.in_domain == 0 ? 1 : f.in_domain;
        while (f.in_domain > 1 && per_line < 16 && per_line * f.in_domain <= 64 && per_line < f.outputs.size())
            per_line *= f.in_domain;
        for (size_t i = 0 ; i < f.outputs.size() ; ++i)
            out << f.outputs[i] << ((i + 1) % per_line == 0 || i + 1 == f.outputs.size() ? "\n" : " ");
        out << "end\n";
        return out.str();
    }
}
