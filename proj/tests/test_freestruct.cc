#include <doctest.h>

#include <pcsp/freestruct.hh>

#include "oracles.hh"

#include <algorithm>
#include <random>
#include <set>

using namespace pcsp;
using std::vector;

namespace
{
    // (I_1..I_k) in R iff some nonempty J of R^A has I_i = {r_j(i) : j in J}, straight from subsets J
    auto brute_power_structure(const Structure & a) -> std::set<std::pair<size_t, Tuple>>
    {
        std::set<std::pair<size_t, Tuple>> result;
        for (size_t r = 0 ; r < a.relation_count() ; ++r) {
            auto & rel = a.relation(r);
            for (std::uint64_t j = 1 ; j < (std::uint64_t{ 1 } << rel.size()) ; ++j) {
                Tuple t(rel.arity(), 0);
                for (size_t x = 0 ; x < rel.size() ; ++x)
                    if (j >> x & 1)
                        for (unsigned i = 0 ; i < rel.arity() ; ++i)
                            t[i] |= 1u << rel.tuple(x)[i];
                for (auto & e : t)
                    e -= 1;
                result.emplace(r, t);
            }
        }
        return result;
    }

    auto tuples_of(const Structure & s) -> std::set<std::pair<size_t, Tuple>>
    {
        std::set<std::pair<size_t, Tuple>> result;
        for (size_t r = 0 ; r < s.relation_count() ; ++r)
            for (size_t j = 0 ; j < s.relation(r).size() ; ++j) {
                auto t = s.relation(r).tuple(j);
                result.emplace(r, Tuple(t.begin(), t.end()));
            }
        return result;
    }

    auto relabel(const Structure & s, const vector<Element> & map) -> Structure
    {
        Structure result(s.name(), s.domain_size(), s.signature());
        for (size_t r = 0 ; r < s.relation_count() ; ++r)
            for (size_t j = 0 ; j < s.relation(r).size() ; ++j) {
                auto t = s.relation(r).tuple(j);
                Tuple u(t.size());
                for (size_t i = 0 ; i < t.size() ; ++i)
                    u[i] = map[t[i]];
                result.add_tuple(r, u);
            }
        result.normalise();
        return result;
    }
}

TEST_CASE("projection minion gives back the generator")
{
    for (auto & a : { clique(3), nae(2), one_in_three(), horn(), cycle(5), clique(4) }) {
        auto f = free_structure(ProjectionMinion{}, a);
        CHECK(f.structure.same_content(a));
        CHECK(f.members.size() == a.domain_size());
    }
}

TEST_CASE("free structure of Pol(K2) over K2")
{
    auto k2 = clique(2);
    PolymorphismMinion m(make_template(k2, k2));
    auto f = free_structure(m, k2);
    REQUIRE(f.structure.domain_size() == 4);
    auto & e = f.structure.relation(0);
    CHECK(e.size() == 4);
    std::set<Element> touched;
    for (size_t j = 0 ; j < e.size() ; ++j) {
        auto t = e.tuple(j);
        CHECK(t[0] != t[1]);
        touched.insert(t[0]);
        // the neighbour is the table with its arguments swapped
        auto swapped = minor_of(f.members[t[0]], { 1, 0 }, 2);
        CHECK(swapped.outputs == f.members[t[1]].outputs);
        REQUIRE(f.witnesses[0].size() == e.size());
    }
    CHECK(touched.size() == 4);

    // the witnesses realise their tuples
    for (size_t j = 0 ; j < e.size() ; ++j) {
        auto & g = f.witnesses[0][j];
        CHECK(minor_of(g, { 0, 1 }, 2).outputs == f.members[e.tuple(j)[0]].outputs);
        CHECK(minor_of(g, { 1, 0 }, 2).outputs == f.members[e.tuple(j)[1]].outputs);
    }

    // the condition read off the free structure holds in the minion
    auto c = instance_to_condition(k2, f.structure);
    auto r = check_condition_in_pol(c, make_template(k2, k2));
    CHECK(r.verdict == Verdict::sat);
    CHECK(r.verified);
}

TEST_CASE("lazy and enumerated free structures agree")
{
    std::mt19937 rng(11);
    Signature sig{ { RelationSymbol{ "R", 2 } } };
    int checked = 0;
    for (int trial = 0 ; trial < 30 ; ++trial) {
        auto a = oracle::random_structure(rng, sig, 2, 3, "A");
        auto b = oracle::random_structure(rng, sig, 2 + trial % 2, 4, "B");
        if (! oracle::hom_exists(a, b))
            continue;
        auto gen = oracle::random_structure(rng, sig, 2, 3, "G");
        PolymorphismMinion m(make_template(a, b));
        FreeOptions lazy, eager;
        eager.lazy_limit = 0;
        auto f1 = free_structure(m, gen, lazy);
        auto f2 = free_structure(m, gen, eager);
        CHECK(f1.structure.same_content(f2.structure));
        ++checked;
    }
    CHECK(checked > 5);
}

TEST_CASE("power structure")
{
    auto p = power_structure(clique(2));
    REQUIRE(p.domain_size() == 3);
    // elements: {0}=0, {1}=1, {0,1}=2
    CHECK(tuples_of(p) == std::set<std::pair<size_t, Tuple>>{ { 0, { 0, 1 } }, { 0, { 1, 0 } }, { 0, { 2, 2 } } });
    CHECK(power_structure_labels(clique(2)) == vector<std::string>{ "{0}", "{1}", "{0,1}" });

    Structure empty("E", 2, clique(2).signature());
    CHECK(power_structure(empty).relation(0).empty());

    std::mt19937 rng(17);
    Signature sig{ { RelationSymbol{ "R", 2 }, RelationSymbol{ "S", 3 } } };
    for (int trial = 0 ; trial < 40 ; ++trial) {
        auto a = oracle::random_structure(rng, sig, 1 + trial % 3, 5, "A");
        CHECK(tuples_of(power_structure(a)) == brute_power_structure(a));
    }
}

TEST_CASE("horn minion gives the power structure")
{
    std::mt19937 rng(19);
    Signature sig{ { RelationSymbol{ "R", 2 }, RelationSymbol{ "S", 3 } } };
    for (int trial = 0 ; trial < 15 ; ++trial) {
        auto a = oracle::random_structure(rng, sig, 1 + trial % 3, 4, "A");
        auto f = free_structure(HornMinion{}, a);
        CHECK(f.structure.same_content(power_structure(a)));
    }
    auto h = horn();
    CHECK(free_structure(HornMinion{}, h).structure.same_content(power_structure(h)));
}

TEST_CASE("width 1")
{
    auto h = width1_check(make_template(horn(), horn()));
    CHECK(h.holds);
    REQUIRE(h.hom);
    CHECK(is_homomorphism(*h.hom, h.power, horn()));

    auto k = width1_check(make_template(clique(2), clique(2)));
    CHECK(! k.holds);

    auto one = singleton_like(nae(2).signature());
    CHECK(width1_check(make_template(one, one)).holds);
}

TEST_CASE("lp and ip structures")
{
    auto lp = lp_structure(clique(2), 2);
    CHECK(lp.structure.domain_size() == 3);
    CHECK(lp.weights == vector<vector<long>>{ { 0, 2 }, { 1, 1 }, { 2, 0 } });
    CHECK(lp.labels[1] == "(1/2,1/2)");

    // point distributions only, listed in reverse element order
    for (auto & a : { clique(3), one_in_three(), horn() }) {
        auto l1 = lp_structure(a, 1);
        vector<Element> rev(a.domain_size());
        for (Element x = 0 ; x < rev.size() ; ++x)
            rev[x] = rev.size() - 1 - x;
        CHECK(relabel(l1.structure, rev).same_content(a));
    }

    auto ip = ip_structure(one_in_three(), 1);
    CHECK(ip.weights == vector<vector<long>>{ { -1, 2 }, { 0, 1 }, { 1, 0 }, { 2, -1 } });
    for (auto & w : ip.weights) {
        long sum = 0, abs = 0;
        for (auto x : w) {
            sum += x;
            abs += std::labs(x);
        }
        CHECK(sum == 1);
        CHECK(abs <= 3);
    }
    // A maps into both
    auto t = one_in_three();
    vector<Element> point(2);
    for (Element x = 0 ; x < 2 ; ++x) {
        vector<long> unit{ x == 0, x == 1 };
        point[x] = std::find(ip.weights.begin(), ip.weights.end(), unit) - ip.weights.begin();
    }
    CHECK(is_homomorphism(point, t, ip.structure));
}

TEST_CASE("homomorphisms from symmetric and alternating witnesses")
{
    auto k2 = clique(2);
    auto s = check_condition_in_pol(symmetric_condition(3), make_template(k2, k2));
    REQUIRE(s.verdict == Verdict::sat);
    auto lp = lp_structure(k2, 3);
    CHECK(is_homomorphism(lp_hom_from_symmetric(lp, s.witness[0]), lp.structure, k2));

    auto t = one_in_three(), h2 = nae(2);
    auto alt = alternating_threshold(3);
    auto ip = ip_structure(t, 1);
    CHECK(is_homomorphism(ip_hom_from_alternating(ip, alt), ip.structure, h2));

    auto a = check_condition_in_pol(alternating_condition(3), make_template(t, h2));
    REQUIRE(a.verdict == Verdict::sat);
    CHECK(is_homomorphism(ip_hom_from_alternating(ip, a.witness[0]), ip.structure, h2));

    auto a5 = check_condition_in_pol(alternating_condition(5), make_template(t, h2));
    REQUIRE(a5.verdict == Verdict::sat);
    auto ip2 = ip_structure(t, 2);
    CHECK(is_homomorphism(ip_hom_from_alternating(ip2, a5.witness[0]), ip2.structure, h2));
}

TEST_CASE("minion homomorphisms")
{
    auto k2 = clique(2);
    auto t = make_template(k2, k2);
    auto same = minion_hom_exists(t, t);
    CHECK(same.verdict == Verdict::sat);
    CHECK(same.method == "free");
    REQUIRE(same.hom);
    REQUIRE(same.free);
    CHECK(is_homomorphism(*same.hom, same.free->structure, k2));
    // decoded images are polymorphisms of the target
    for (auto & f : enumerate_polymorphisms(t, 3).tables) {
        auto g = decode_minion_hom(*same.free, *same.hom, f, 2);
        CHECK(is_polymorphism(g, t));
    }

    auto tt = make_template(one_in_three(), one_in_three());
    auto r = minion_hom_exists(make_template(clique(3), clique(6)), tt);
    CHECK(r.verdict == Verdict::unsat);
    CHECK(r.method == "condition");
    REQUIRE(r.refuting_instance);
    CHECK(! oracle::hom_exists(*r.refuting_instance, one_in_three()));
    REQUIRE(r.refutation);
    CHECK(r.refutation->verified);

    // projections map anywhere a template is nonempty; Pol(K2) does not map to projections
    auto k3 = clique(3);
    CHECK(minion_hom_exists(tt, make_template(k3, k3)).verdict == Verdict::sat);
    CHECK(minion_hom_exists(t, tt).verdict == Verdict::unsat);
}

TEST_CASE("Pol(K3,K4) maps to the projections of 1-in-3")
{
    auto t = make_template(one_in_three(), one_in_three());
    auto r = minion_hom_exists(make_template(clique(3), clique(4)), t);
    CHECK(r.verdict == Verdict::sat);
    REQUIRE(r.hom);
    REQUIRE(r.free);
    CHECK(r.free->structure.domain_size() == 1056);
    CHECK(is_homomorphism(*r.hom, r.free->structure, one_in_three()));
    // the images of binary polymorphisms are projections of T
    for (size_t i = 0 ; i < 20 ; ++i) {
        auto g = decode_minion_hom(*r.free, *r.hom, r.free->members[i * 50], 2);
        CHECK(is_polymorphism(g, t));
        CHECK(essential_coordinates(g).size() == 1);
    }
}
