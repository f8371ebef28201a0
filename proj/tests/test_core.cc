#include <doctest.h>

#include <pcsp/core.hh>

#include "oracles.hh"

#include <set>

using namespace pcsp;

namespace
{
    auto edge_set(const Structure & s) -> std::set<std::pair<Element, Element>>
    {
        std::set<std::pair<Element, Element>> result;
        auto & r = s.relation(0);
        for (std::size_t i = 0 ; i < r.size() ; ++i)
            result.emplace(r.tuple(i)[0], r.tuple(i)[1]);
        return result;
    }

    auto enc(std::initializer_list<Element> t, std::size_t base) -> Element
    {
        return encode_tuple(std::vector<Element>(t), base);
    }
}

TEST_CASE("power of K3 to the first is K3")
{
    REQUIRE(power(clique(3), 1).same_content(clique(3)));
}

TEST_CASE("power of K2 squared")
{
    auto p = power(clique(2), 2);
    REQUIRE(p.domain_size() == 4);
    std::set<std::pair<Element, Element>> expected{
        { enc({ 0, 0 }, 2), enc({ 1, 1 }, 2) }, { enc({ 1, 1 }, 2), enc({ 0, 0 }, 2) },
        { enc({ 0, 1 }, 2), enc({ 1, 0 }, 2) }, { enc({ 1, 0 }, 2), enc({ 0, 1 }, 2) } };
    CHECK(edge_set(p) == expected);
}

TEST_CASE("power of K3 squared")
{
    auto p = power(clique(3), 2);
    REQUIRE(p.domain_size() == 9);
    REQUIRE(p.relation(0).size() == 36);
    std::vector<int> degree(9, 0);
    for (auto [a, b] : edge_set(p))
        ++degree[a];
    for (auto d : degree)
        CHECK(d == 4);
}

TEST_CASE("power relation sizes multiply")
{
    for (unsigned n = 1 ; n <= 3 ; ++n) {
        auto h = horn();
        auto p = power(h, n);
        CHECK(p.domain_size() == checked_pow(2, n));
        for (std::size_t r = 0 ; r < h.relation_count() ; ++r)
            CHECK(p.relation(r).size() == checked_pow(h.relation(r).size(), n));
    }
}

TEST_CASE("power columns are relation tuples")
{
    auto t = one_in_three();
    auto p = power(t, 2);
    auto & rel = p.relation(0);
    for (std::size_t i = 0 ; i < rel.size() ; ++i) {
        auto tup = rel.tuple(i);
        for (unsigned col = 0 ; col < 2 ; ++col) {
            Tuple column;
            for (auto e : tup)
                column.push_back(decode_tuple(e, 2, 2)[col]);
            CHECK(t.relation(0).contains(column));
        }
    }
}

TEST_CASE("power respects size cap")
{
    auto saved = size_cap();
    size_cap().max_elements = 100;
    CHECK_THROWS_AS(power(clique(3), 6), CapacityError);
    size_cap() = saved;
}

TEST_CASE("quotient by identity partition")
{
    auto s = cycle(5);
    Partition p(5);
    auto q = quotient(s, p);
    CHECK(q.structure.same_content(s));
    for (Element i = 0 ; i < 5 ; ++i)
        CHECK(q.index_map[i] == i);
}

TEST_CASE("quotient of K2 squared merging a diagonal pair makes a loop")
{
    auto p2 = power(clique(2), 2);
    Partition p(4);
    p.unite(enc({ 0, 0 }, 2), enc({ 1, 1 }, 2));
    auto q = quotient(p2, p);
    REQUIRE(q.structure.domain_size() == 3);
    auto m = q.index_map[enc({ 0, 0 }, 2)];
    CHECK(q.index_map[enc({ 1, 1 }, 2)] == m);
    CHECK(q.structure.relation(0).contains(std::vector<Element>{ m, m }));
    CHECK(q.structure.relation(0).size() == 3);
}

TEST_CASE("quotient twice equals quotient by the join")
{
    auto s = power(clique(2), 2);
    Partition a(4), join(4);
    a.unite(0, 3);
    join.unite(0, 3);
    join.unite(1, 2);
    auto qa = quotient(s, a);
    Partition b(qa.structure.domain_size());
    b.unite(qa.index_map[1], qa.index_map[2]);
    auto qab = quotient(qa.structure, b);
    auto qj = quotient(s, join);
    CHECK(qab.structure.same_content(qj.structure));
}

TEST_CASE("disjoint union")
{
    std::vector<Structure> one{ clique(3) };
    auto u1 = disjoint_union(one);
    CHECK(u1.structure.same_content(clique(3)));
    CHECK(u1.offsets == std::vector<std::size_t>{ 0 });

    std::vector<Structure> two{ clique(2), clique(2) };
    auto u2 = disjoint_union(two);
    CHECK(u2.structure.domain_size() == 4);
    CHECK(edge_set(u2.structure) == std::set<std::pair<Element, Element>>{ { 0, 1 }, { 1, 0 }, { 2, 3 }, { 3, 2 } });

    std::vector<Structure> olsak{ power(clique(3), 2), power(clique(3), 6) };
    auto u3 = disjoint_union(olsak);
    CHECK(u3.structure.domain_size() == 738);
    CHECK(u3.offsets == std::vector<std::size_t>{ 0, 9 });

    std::vector<Structure> bad{ clique(2), one_in_three() };
    CHECK_THROWS_AS(disjoint_union(bad), SignatureMismatch);
}

TEST_CASE("parse and serialise")
{
    std::string text = R"(# triangle
structure K3
domain 3
relation ne 2
0 1
1 0
0 2
2 0
1 2
2 1   # trailing comment
end
)";
    auto s = parse_structure(text);
    CHECK(s.name() == "K3");
    CHECK(s.domain_size() == 3);
    CHECK(s.relation(0).size() == 6);
    CHECK(s.signature()[0].name == "ne");

    auto canon = serialize_structure(s);
    CHECK(serialize_structure(parse_structure(canon)) == canon);
    CHECK(canon.find("0 1\n0 2\n1 0\n") != std::string::npos);
}

TEST_CASE("parse errors are located")
{
    try {
        parse_structure("structure X\ndomain 3\nrelation E 2\n0 3\nend\n");
        FAIL("expected a parse error");
    }
    catch (const ParseError & e) {
        CHECK(e.line() == 4);
        CHECK(e.column() == 3);
        CHECK(std::string(e.what()).find("element 3 out of range") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_structure("structure X\ndomain 3\nrelation E 2\n0 1 2\nend\n"), ParseError);
    CHECK_THROWS_AS(parse_structure("structure X\ndomain 3\nrelation E 2\n0 1\n"), ParseError);
    CHECK_THROWS_AS(parse_structure("structure X\ndomain x\n"), ParseError);
}

TEST_CASE("multiple relations round trip")
{
    auto h = horn();
    auto text = serialize_structure(h);
    auto back = parse_structure(text);
    CHECK(back == h);
}

TEST_CASE("built-in templates are sane")
{
    std::vector<PromiseTemplate> templates{
        make_template(clique(3), clique(4)), make_template(clique(3), clique(6)),
        make_template(one_in_three(), nae(2)), make_template(nae(2), nae(4)),
        make_template(cycle(5), clique(3)), make_template(horn(), horn()) };
    for (auto & t : templates)
        CHECK(oracle::hom_exists(t.a, t.b));

    CHECK(nae(2).relation(0).size() == 6);
    CHECK(one_in_three().relation(0).size() == 3);
    CHECK(horn().relation(0).size() == 7);
    CHECK(horn().relation(1).size() == 7);
    CHECK(cycle(5).relation(0).size() == 10);
    CHECK_THROWS_AS(make_template(clique(3), one_in_three()), SignatureMismatch);
}
