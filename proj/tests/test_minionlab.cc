#include <doctest.h>

#include <pcsp/minionlab.hh>

#include "oracles.hh"

#include <algorithm>
#include <set>

using namespace pcsp;

namespace
{
    // naive polymorphism check: every matrix, no shortcuts
    auto naive_is_polymorphism(const FunctionTable & f, const PromiseTemplate & t) -> bool
    {
        for (std::size_t r = 0 ; r < t.a.relation_count() ; ++r) {
            auto & ra = t.a.relation(r);
            bool ok = true;
            oracle::all_maps(f.arity, ra.size(), [&] (const std::vector<Element> & choice) {
                    if (! ok)
                        return;
                    Tuple image;
                    for (unsigned j = 0 ; j < ra.arity() ; ++j) {
                        Tuple row;
                        for (unsigned i = 0 ; i < f.arity ; ++i)
                            row.push_back(ra.tuple(choice[i])[j]);
                        image.push_back(f(row));
                    }
                    if (! t.b.relation(r).contains(image))
                        ok = false;
                    });
            if (! ok)
                return false;
        }
        return true;
    }

    auto boolean(const std::string & name, unsigned n, std::function<Element (std::span<const Element>)> f) -> FunctionTable
    {
        return tabulate(name, 2, 2, n, f);
    }
}

TEST_CASE("is_polymorphism examples")
{
    auto f1 = hamming_threshold(1);
    CHECK(f1.arity == 2);
    CHECK(f1.outputs == std::vector<Element>{ 0, 1, 1, 1 });
    CHECK(is_polymorphism(f1, make_template(one_in_three(), nae(2))));

    for (auto & s : { clique(3), nae(2), horn() })
        CHECK(is_polymorphism(projection(s.domain_size(), 1, 0), make_template(s, s)));

    auto x = boolean("xor", 2, [] (auto v) { return v[0] ^ v[1]; });
    auto c = is_polymorphism(x, make_template(clique(2), clique(2)));
    CHECK(! c);
    REQUIRE(c.columns.size() == 2);
    Tuple r1{ c.columns[0][0], c.columns[1][0] }, r2{ c.columns[0][1], c.columns[1][1] };
    for (auto & col : c.columns)
        CHECK(clique(2).relation(0).contains(col));
    CHECK(x(r1) == x(r2));

    CHECK_THROWS(is_polymorphism(x, make_template(clique(3), clique(3))));
}

TEST_CASE("polymorphism check agrees with naive check")
{
    std::mt19937 rng(9);
    auto tmpl = make_template(clique(3), clique(4));
    for (int round = 0 ; round < 200 ; ++round) {
        unsigned n = 1 + rng() % 3;
        FunctionTable f{ "r", 3, 4, n, {} };
        for (std::size_t i = 0 ; i < checked_pow(3, n) ; ++i)
            f.outputs.push_back(rng() % 4);
        CHECK(bool(is_polymorphism(f, tmpl)) == naive_is_polymorphism(f, tmpl));
    }
}

TEST_CASE("binary relation shortcut agrees on large arity")
{
    // 6^9 edge matrices is over the direct-check threshold
    auto tmpl = make_template(clique(3), clique(4));
    auto good = tabulate("p", 3, 4, 9, [] (auto x) { return x[5]; });
    CHECK(is_polymorphism(good, tmpl));
    auto bad = good;
    bad.outputs[0] = bad.outputs.back();
    auto c = is_polymorphism(bad, tmpl);
    REQUIRE(! c);
    Tuple r1, r2;
    for (auto & col : c.columns) {
        REQUIRE(col.size() == 2);
        CHECK(col[0] != col[1]);
        r1.push_back(col[0]);
        r2.push_back(col[1]);
    }
    CHECK(bad(r1) == bad(r2));
}

TEST_CASE("minor_of")
{
    auto g = tabulate("g", 3, 3, 2, [] (auto x) { return (x[0] * 2 + x[1]) % 3; });
    auto diag = minor_of(g, { 0, 0 }, 1);
    for (Element a = 0 ; a < 3 ; ++a)
        CHECK(diag({ a }) == g({ a, a }));

    auto p2 = projection(2, 3, 1);
    CHECK(minor_of(p2, { 1, 0, 0 }, 2).same_function(projection(2, 2, 0)));

    auto g16 = example_2_16_g(4);
    auto f = minor_of(g16, { 1, 0, 0, 0 }, 2);
    FunctionTable p1{ "", 2, 4, 2, { 0, 0, 1, 1 } };
    CHECK(f.same_function(p1));
}

TEST_CASE("enumerate_polymorphisms examples")
{
    auto t = enumerate_polymorphisms(make_template(one_in_three(), one_in_three()), 2);
    REQUIRE(t.tables.size() == 2);
    // lexicographic order puts p1 (0011) before p2 (0101)
    CHECK(t.tables[0].same_function(projection(2, 2, 0)));
    CHECK(t.tables[1].same_function(projection(2, 2, 1)));

    auto k3 = enumerate_polymorphisms(make_template(clique(3), clique(3)), 1);
    CHECK(k3.tables.size() == 6);
    for (auto & f : k3.tables) {
        std::set<Element> image(f.outputs.begin(), f.outputs.end());
        CHECK(image.size() == 3);
    }

    auto k2 = enumerate_polymorphisms(make_template(clique(2), clique(2)), 2);
    REQUIRE(k2.tables.size() == 4);
    std::set<std::vector<Element>> got;
    for (auto & f : k2.tables)
        got.insert(f.outputs);
    CHECK(got == std::set<std::vector<Element>>{ { 0, 0, 1, 1 }, { 0, 1, 0, 1 }, { 1, 1, 0, 0 }, { 1, 0, 1, 0 } });

    auto capped = enumerate_polymorphisms(make_template(clique(3), clique(3)), 1, 2);
    CHECK(capped.tables.size() == 2);
    CHECK(capped.truncated);
}

TEST_CASE("enumeration matches exhaustive table search")
{
    for (auto & t : { make_template(clique(2), clique(3)), make_template(one_in_three(), nae(2)) }) {
        for (unsigned n = 1 ; n <= 2 ; ++n) {
            std::vector<std::vector<Element>> expected;
            oracle::all_maps(checked_pow(t.a.domain_size(), n), t.b.domain_size(), [&] (const std::vector<Element> & out) {
                    FunctionTable f{ "", t.a.domain_size(), t.b.domain_size(), n, out };
                    if (naive_is_polymorphism(f, t))
                        expected.push_back(out);
                    });
            auto got = enumerate_polymorphisms(t, n);
            std::vector<std::vector<Element>> outs;
            for (auto & f : got.tables)
                outs.push_back(f.outputs);
            CHECK(outs == expected);
        }
    }
}

TEST_CASE("minions are minor closed")
{
    auto tmpl = make_template(clique(3), clique(4));
    auto binary = enumerate_polymorphisms(tmpl, 2);
    for (auto & f : binary.tables) {
        for (unsigned a = 0 ; a < 2 ; ++a)
            for (unsigned b = 0 ; b < 2 ; ++b)
                CHECK(is_polymorphism(minor_of(f, { a, b }, 2), tmpl));
        CHECK(is_polymorphism(minor_of(f, { 2, 0 }, 3), tmpl));
    }
}

TEST_CASE("essential coordinates")
{
    CHECK(essential_coordinates(projection(3, 3, 0)) == std::vector<unsigned>{ 0 });
    FunctionTable constant{ "c", 2, 2, 3, std::vector<Element>(8, 1) };
    CHECK(essential_coordinates(constant).empty());
    CHECK(essential_coordinates(olsak_k_2k(3)) == std::vector<unsigned>{ 0, 1, 2 });

    // essential coordinates of a minor lie in the image of the essential ones
    std::mt19937 rng(2);
    for (int round = 0 ; round < 100 ; ++round) {
        unsigned m = 1 + rng() % 3, n = 1 + rng() % 3;
        FunctionTable g{ "g", 2, 3, m, {} };
        for (std::size_t i = 0 ; i < checked_pow(2, m) ; ++i)
            g.outputs.push_back(rng() % 3);
        MinorMap pi(m);
        for (auto & p : pi)
            p = rng() % n;
        auto eg = essential_coordinates(g);
        std::set<unsigned> image;
        for (auto c : eg)
            image.insert(pi[c]);
        for (auto c : essential_coordinates(minor_of(g, pi, n)))
            CHECK(image.count(c));
    }
}

TEST_CASE("fixing sets")
{
    for (unsigned n = 1 ; n <= 5 ; ++n) {
        auto all = boolean("and", n, [] (auto x) { return Element(std::all_of(x.begin(), x.end(), [] (Element e) { return e == 1; })); });
        auto m = min_fixing_set(all);
        REQUIRE(m);
        CHECK(m->size() == n);
        if (n > 1)
            CHECK(! is_fixing_set(all, { 0 }));
    }

    auto maj = boolean("maj", 3, [] (auto x) { return Element(x[0] + x[1] + x[2] >= 2); });
    auto m = min_fixing_set(maj);
    REQUIRE(m);
    CHECK(m->size() == 2);
    CHECK(is_fixing_set(maj, { 0, 2 }));
    CHECK(is_fixing_set(maj, { 1, 2 }));

    CHECK(*min_fixing_set(projection(2, 4, 0)) == std::vector<unsigned>{ 0 });

    // xor has no fixing set at all
    CHECK(! min_fixing_set(boolean("xor", 2, [] (auto x) { return x[0] ^ x[1]; })));
}

TEST_CASE("fixing sets of one function intersect")
{
    std::mt19937 rng(4);
    for (int round = 0 ; round < 200 ; ++round) {
        unsigned n = 1 + rng() % 4;
        FunctionTable f{ "f", 2, 2, n, {} };
        for (std::size_t i = 0 ; i < checked_pow(2, n) ; ++i)
            f.outputs.push_back(rng() % 2);
        std::vector<std::vector<unsigned>> fixing;
        for (unsigned mask = 0 ; mask < (1u << n) ; ++mask) {
            std::vector<unsigned> s;
            for (unsigned i = 0 ; i < n ; ++i)
                if (mask >> i & 1)
                    s.push_back(i);
            if (is_fixing_set(f, s))
                fixing.push_back(s);
        }
        for (auto & a : fixing)
            for (auto & b : fixing) {
                std::vector<unsigned> both;
                std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
                CHECK(! both.empty());
            }
    }
}

TEST_CASE("named functions")
{
    auto o = olsak_k_2k(3);
    CHECK(o.arity == 6);
    CHECK(o.in_domain == 3);
    CHECK(o.out_domain == 6);
    CHECK(naive_is_polymorphism(o, make_template(clique(3), clique(6))));
    for (Element x = 0 ; x < 3 ; ++x)
        for (Element y = 0 ; y < 3 ; ++y) {
            auto a = o({ x, x, y, y, y, x }), b = o({ x, y, x, y, x, y }), c = o({ y, x, x, x, y, y });
            CHECK(a == b);
            CHECK(b == c);
        }

    auto g17 = example_2_17_g();
    CHECK(naive_is_polymorphism(g17, make_template(clique(3), clique(5))));
    for (Element x = 0 ; x < 3 ; ++x)
        for (Element y = 0 ; y < 3 ; ++y) {
            CHECK(g17({ y, x, x, x }) == x);
            CHECK(g17({ x, y, x, x }) == x);
            CHECK(g17({ x, x, y, x }) == x);
            CHECK(g17({ x, x, x, y }) == x);
        }

    auto g16 = example_2_16_g(4);
    CHECK(naive_is_polymorphism(g16, make_template(nae(2), nae(4))));
    CHECK_THROWS_AS(example_2_16_g(3), std::invalid_argument);

    for (unsigned k = 1 ; k <= 3 ; ++k) {
        auto f = hamming_threshold(k);
        CHECK(f.arity == 3 * k - 1);
        CHECK(naive_is_polymorphism(f, make_template(one_in_three(), nae(2))));
    }
    for (unsigned n : { 1u, 3u, 5u }) {
        CHECK(naive_is_polymorphism(alternating_threshold(n), make_template(one_in_three(), nae(2))));
        CHECK(parity(n).arity == n);
    }
    CHECK_THROWS_AS(parity(4), std::invalid_argument);
    CHECK_THROWS_AS(alternating_threshold(2), std::invalid_argument);

    auto loop = k4loop_in_k3_k6();
    CHECK(loop.t.arity == 4);
    CHECK(loop.s.arity == 12);

    CHECK(naive_is_polymorphism(majority_robust_g1(3), make_template(clique(3), clique(6))));
    CHECK_THROWS(named_function("nonsense", {}));
    CHECK(named_function("olsak_k_2k", { 3 }).same_function(o));
}

TEST_CASE("function text format")
{
    auto o = olsak_k_2k(2);
    auto text = serialize_function(o);
    auto back = parse_function(text);
    CHECK(back.same_function(o));
    CHECK(back.name == "o");
    CHECK(serialize_function(back) == text);

    CHECK_THROWS_AS(parse_function("function f in 2 out 2 arity 1\n0 2\nend\n"), ParseError);
    CHECK_THROWS_AS(parse_function("function f in 2 out 2 arity 1\n0\nend\n"), ParseError);
    CHECK_THROWS_AS(parse_function("function f in 2 out 2 arity 1\n0 1\n"), ParseError);
}

TEST_CASE("trash colour on the binary slice of Pol(K3,K4)")
{
    auto binary = enumerate_polymorphisms(make_template(clique(3), clique(4)), 2);
    CHECK(! binary.tables.empty());
    for (auto & f : binary.tables) {
        auto t = find_trash_colour(f);
        REQUIRE(t);
        for (std::size_t idx = 0 ; idx < f.size() ; ++idx) {
            auto x = decode_tuple(idx, 3, 2);
            auto v = f.outputs[idx];
            CHECK((v == t->colour || v == t->alpha[x[t->coordinate]]));
        }
    }
}
