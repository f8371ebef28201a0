#include <doctest.h>

#include <pcsp/homsearch.hh>

#include "oracles.hh"

#include <random>

using namespace pcsp;

namespace
{
    auto single_constraint(std::vector<Element> scope, std::size_t vars) -> Structure
    {
        Structure s("inst", vars, Signature({ { "R", 3 } }));
        s.add_tuple(0, scope);
        s.normalise();
        return s;
    }

    auto full_domains(const DomainTable & d) -> bool
    {
        for (std::size_t v = 0 ; v < d.variables() ; ++v)
            if (d.size(v) != d.values())
                return false;
        return true;
    }
}

TEST_CASE("gac examples")
{
    CHECK(! gac(single_constraint({ 0, 0, 0 }, 1), one_in_three()));

    auto c5 = gac(cycle(5), clique(2));
    REQUIRE(c5);
    CHECK(full_domains(*c5));

    for (auto & s : { clique(3), nae(2), cycle(7) }) {
        auto d = gac(s, s);
        REQUIRE(d);
        CHECK(full_domains(*d));
    }

    // unary relations prune, but the identity always survives
    auto h = gac(horn(), horn());
    REQUIRE(h);
    CHECK(h->contains(0, 0));
    CHECK(h->contains(1, 1));
}

TEST_CASE("gac is order independent and monotone")
{
    std::mt19937 rng(7);
    Signature sig({ { "R", 3 }, { "E", 2 } });
    for (int round = 0 ; round < 100 ; ++round) {
        auto tmpl = oracle::random_structure(rng, sig, 3, 10, "B");
        auto inst = oracle::random_structure(rng, sig, 6, 5, "I");
        auto base = gac(inst, tmpl);
        for (std::uint64_t seed = 1 ; seed <= 5 ; ++seed) {
            auto other = gac(inst, tmpl, GacOptions{ seed, nullptr });
            CHECK(base.has_value() == other.has_value());
            if (base && other)
                CHECK(*base == *other);
        }
        // every surviving value must have a support in every constraint
        if (base)
            for (std::size_t r = 0 ; r < inst.relation_count() ; ++r)
                for (std::size_t i = 0 ; i < inst.relation(r).size() ; ++i) {
                    auto sc = inst.relation(r).tuple(i);
                    for (std::size_t p = 0 ; p < sc.size() ; ++p)
                        for (auto a : base->candidates(sc[p])) {
                            bool supported = false;
                            auto & trel = tmpl.relation(r);
                            for (std::size_t j = 0 ; j < trel.size() && ! supported ; ++j) {
                                auto t = trel.tuple(j);
                                bool ok = t[p] == a;
                                for (std::size_t q = 0 ; q < sc.size() && ok ; ++q)
                                    ok = base->contains(sc[q], t[q]);
                                for (std::size_t q = 0 ; q < sc.size() && ok ; ++q)
                                    for (std::size_t q2 = 0 ; q2 < sc.size() ; ++q2)
                                        if (sc[q] == sc[q2] && t[q] != t[q2])
                                            ok = false;
                                supported = ok;
                            }
                            CHECK(supported);
                        }
                }
        // any homomorphism survives gac
        oracle::all_maps(inst.domain_size(), tmpl.domain_size(), [&] (const std::vector<Element> & h) {
                if (oracle::maps_to(h, inst, tmpl)) {
                    REQUIRE(base);
                    for (std::size_t v = 0 ; v < h.size() ; ++v)
                        CHECK(base->contains(v, h[v]));
                }
                });
    }
}

TEST_CASE("find_hom examples")
{
    auto id = find_hom(clique(3), clique(3));
    REQUIRE(id.outcome == SearchOutcome::found);
    CHECK(*id.hom == Homomorphism{ 0, 1, 2 });

    CHECK(find_hom(cycle(5), clique(2)).outcome == SearchOutcome::none);

    auto c = find_hom(cycle(5), clique(3));
    REQUIRE(c.outcome == SearchOutcome::found);
    CHECK(is_homomorphism(*c.hom, cycle(5), clique(3)));
    CHECK(oracle::maps_to(*c.hom, cycle(5), clique(3)));
}

TEST_CASE("find_hom agrees with brute force")
{
    std::mt19937 rng(11);
    Signature sig({ { "R", 3 }, { "E", 2 }, { "U", 1 } });
    for (int round = 0 ; round < 300 ; ++round) {
        auto tmpl = oracle::random_structure(rng, sig, 1 + rng() % 3, 8, "B");
        auto inst = oracle::random_structure(rng, sig, 1 + rng() % 6, 4, "I");
        for (auto order : { VariableOrder::smallest_domain, VariableOrder::weighted_degree, VariableOrder::input }) {
            SearchOptions o;
            o.variable_order = order;
            auto r = find_hom(inst, tmpl, o);
            CHECK(r.outcome != SearchOutcome::budget_exceeded);
            CHECK((r.outcome == SearchOutcome::found) == oracle::hom_exists(inst, tmpl));
            if (r.hom)
                CHECK(oracle::maps_to(*r.hom, inst, tmpl));
        }
    }
}

TEST_CASE("budget is distinct from none")
{
    SearchOptions o;
    o.node_budget = 3;
    auto r = find_hom(clique(6), clique(5), o);
    CHECK(r.outcome == SearchOutcome::budget_exceeded);
    CHECK(! r.hom);
    CHECK(find_hom(clique(6), clique(5)).outcome == SearchOutcome::none);
}

TEST_CASE("initial domains restrict the search")
{
    DomainTable init(3, 3);
    init.assign(0, 2);
    SearchOptions o;
    o.initial = &init;
    auto r = find_hom(clique(3), clique(3), o);
    REQUIRE(r.hom);
    CHECK((*r.hom)[0] == 2);
}

TEST_CASE("enumerate_homs examples")
{
    auto k2 = enumerate_homs(clique(2), clique(2));
    CHECK(k2.homs == std::vector<Homomorphism>{ { 0, 1 }, { 1, 0 } });

    Structure lone("v", 1, clique(3).signature());
    CHECK(enumerate_homs(lone, clique(3)).homs.size() == 3);

    CHECK(enumerate_homs(clique(3), clique(2)).homs.empty());

    auto capped = enumerate_homs(clique(3), clique(3), 4);
    CHECK(capped.homs.size() == 4);
    CHECK(capped.truncated);
}

TEST_CASE("enumeration is complete and lexicographic")
{
    std::mt19937 rng(5);
    Signature sig({ { "R", 3 }, { "E", 2 } });
    for (int round = 0 ; round < 100 ; ++round) {
        auto tmpl = oracle::random_structure(rng, sig, 1 + rng() % 3, 10, "B");
        auto inst = oracle::random_structure(rng, sig, 1 + rng() % 5, 3, "I");
        std::vector<Homomorphism> expected;
        oracle::all_maps(inst.domain_size(), tmpl.domain_size(), [&] (const std::vector<Element> & h) {
                if (oracle::maps_to(h, inst, tmpl))
                    expected.push_back(h);
                });
        auto got = enumerate_homs(inst, tmpl);
        CHECK(! got.truncated);
        CHECK(got.homs == expected);
    }
}

TEST_CASE("kl consistency")
{
    // path consistency does not refute 3-colouring K4; (3,4) does
    CHECK(! kl_consistency(clique(4), clique(3), 2, 3).empty());
    CHECK(kl_consistency(clique(4), clique(3), 3, 4).empty());
    CHECK(! kl_consistency(cycle(5), clique(2), 1, 2).empty());
    CHECK(kl_consistency(cycle(5), clique(2), 2, 3).empty());

    for (auto & a : { clique(3), nae(2), cycle(5) })
        for (unsigned l = 1 ; l <= a.domain_size() && l <= 3 ; ++l)
            for (unsigned k = 1 ; k <= l ; ++k)
                CHECK(! kl_consistency(a, a, k, l).empty());

    CHECK_THROWS(kl_consistency(clique(3), clique(3), 3, 2));
}

TEST_CASE("width hierarchy sanity")
{
    std::mt19937 rng(3);
    Signature sig({ { "E", 2 } });
    for (int round = 0 ; round < 60 ; ++round) {
        auto tmpl = oracle::random_structure(rng, sig, 1 + rng() % 3, 5, "B");
        auto inst = oracle::random_structure(rng, sig, 1 + rng() % 5, 5, "I");
        if (find_hom(inst, tmpl).outcome != SearchOutcome::found)
            continue;
        CHECK(gac(inst, tmpl));
        for (unsigned l = 1 ; l <= 3 ; ++l)
            for (unsigned k = 1 ; k <= l ; ++k)
                CHECK(! kl_consistency(inst, tmpl, k, l).empty());
    }
}
