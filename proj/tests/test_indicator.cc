#include <doctest.h>

#include <pcsp/indicator.hh>

#include "oracles.hh"

#include <algorithm>
#include <random>
#include <set>

using namespace pcsp;
using std::vector;

namespace
{
    auto brute_clique_number(const Structure & g) -> unsigned
    {
        auto n = g.domain_size();
        auto & e = g.relation(0);
        auto adj = [&] (Element u, Element v) {
            Element a[2] = { u, v }, b[2] = { v, u };
            return u != v && e.contains(a) && e.contains(b);
        };
        unsigned best = 0;
        for (std::uint64_t mask = 0 ; mask < (std::uint64_t{ 1 } << n) ; ++mask) {
            vector<Element> s;
            for (Element v = 0 ; v < n ; ++v)
                if (mask >> v & 1)
                    s.push_back(v);
            bool ok = true;
            for (size_t i = 0 ; i < s.size() && ok ; ++i)
                for (size_t j = i + 1 ; j < s.size() && ok ; ++j)
                    ok = adj(s[i], s[j]);
            if (ok)
                best = std::max<unsigned>(best, s.size());
        }
        return best;
    }

    auto random_graph(std::mt19937 & rng, unsigned n, double p) -> Structure
    {
        Structure g("G", n, Signature{ { RelationSymbol{ "E", 2 } } });
        std::bernoulli_distribution coin(p);
        for (Element u = 0 ; u < n ; ++u)
            for (Element v = u + 1 ; v < n ; ++v)
                if (coin(rng)) {
                    g.add_tuple(0, { u, v });
                    g.add_tuple(0, { v, u });
                }
        g.normalise();
        return g;
    }

    // random structure whose relations are all nonempty
    auto random_template_side(std::mt19937 & rng, const Signature & sig, unsigned n) -> Structure
    {
        while (true) {
            auto s = oracle::random_structure(rng, sig, n, 4, "A");
            bool ok = true;
            for (size_t r = 0 ; r < s.relation_count() ; ++r)
                ok = ok && ! s.relation(r).empty();
            if (ok)
                return s;
        }
    }
}

TEST_CASE("instance to condition")
{
    auto h2 = nae(2);
    Structure i("I", 3, h2.signature());
    i.add_tuple(0, { 0, 1, 2 });
    i.normalise();
    auto c = instance_to_condition(h2, i);
    REQUIRE(c.symbols().size() == 4);
    CHECK(c.symbol(0).arity == 2);
    CHECK(c.symbol(3).arity == 6);
    REQUIRE(c.identities().size() == 3);
    CHECK(c.is_bipartite());

    // columns of the three right-hand sides are exactly the tuples of NAE
    std::set<Tuple> cols;
    for (size_t t = 0 ; t < 6 ; ++t)
        cols.insert(Tuple{ c.identities()[0].rhs_map[t], c.identities()[1].rhs_map[t], c.identities()[2].rhs_map[t] });
    std::set<Tuple> expected;
    for (size_t t = 0 ; t < h2.relation(0).size() ; ++t) {
        auto x = h2.relation(0).tuple(t);
        expected.insert(Tuple(x.begin(), x.end()));
    }
    CHECK(cols == expected);
    // and the three paper columns are among them
    vector<vector<unsigned>> paper{ { 0, 0, 1, 1, 1, 0 }, { 0, 1, 0, 1, 0, 1 }, { 1, 0, 0, 0, 1, 1 } };
    std::set<Tuple> pcols;
    for (size_t t = 0 ; t < 6 ; ++t)
        pcols.insert(Tuple{ paper[0][t], paper[1][t], paper[2][t] });
    CHECK(pcols == expected);

    auto tt = one_in_three();
    Structure j("J", 3, tt.signature());
    j.add_tuple(0, { 0, 1, 2 });
    j.normalise();
    auto d = instance_to_condition(tt, j);
    CHECK(d.symbol(3).arity == 3);
    CHECK(d.identities()[0].rhs_map == vector<unsigned>{ 0, 0, 1 });
    CHECK(d.identities()[1].rhs_map == vector<unsigned>{ 0, 1, 0 });
    CHECK(d.identities()[2].rhs_map == vector<unsigned>{ 1, 0, 0 });

    Structure empty("E", 3, tt.signature());
    auto e = instance_to_condition(tt, empty);
    CHECK(e.symbols().size() == 3);
    CHECK(e.identities().empty());
    CHECK(is_trivial(e));
}

TEST_CASE("condition to instance")
{
    MinorCondition c("fg");
    auto f = c.add_symbol("f", 1, Side::u);
    auto g = c.add_symbol("g", 2, Side::v);
    c.add_minor_identity(f, g, { 0, 0 });
    auto ind = condition_to_instance(c, clique(2));
    CHECK(ind.uncontracted == 6);
    REQUIRE(ind.structure.domain_size() == 4);
    CHECK(ind.vertex_of[f][0] == ind.vertex_of[g][0]);
    CHECK(ind.vertex_of[f][1] == ind.vertex_of[g][3]);
    auto & e = ind.structure.relation(0);
    Element f0f1[2] = { ind.vertex_of[f][0], ind.vertex_of[f][1] };
    Element g01g10[2] = { ind.vertex_of[g][1], ind.vertex_of[g][2] };
    CHECK(e.contains(f0f1));
    CHECK(e.contains(g01g10));
    CHECK(e.size() == 4);

    auto o = condition_to_instance(olsak_condition(), clique(3));
    CHECK(o.uncontracted == 738);
    CHECK(o.structure.domain_size() == 717);
    for (size_t v = 0 ; v < o.labels.size() ; ++v)
        CHECK(o.vertex(o.labels[v].symbol, o.labels[v].input, 3) == v);

    MinorCondition none("none");
    none.add_symbol("f", 2);
    none.add_symbol("g", 1);
    auto n = condition_to_instance(none, clique(2));
    CHECK(n.structure.domain_size() == 6);
}

TEST_CASE("cliques")
{
    auto k4 = clique_certificate(clique(4), 4);
    REQUIRE(k4.clique);
    CHECK(k4.clique->size() == 4);
    CHECK(! clique_certificate(cycle(5), 3).clique);
    CHECK(clique_number(cycle(5)) == 2);
    CHECK(clique_number(clique(5)) == 5);

    std::mt19937 rng(3);
    for (int trial = 0 ; trial < 60 ; ++trial) {
        auto g = random_graph(rng, 10, 0.5);
        auto w = brute_clique_number(g);
        CHECK(clique_number(g) == w);
        auto cl = clique_certificate(g, w);
        REQUIRE(cl.clique);
        CHECK(is_clique(g, *cl.clique));
        CHECK(! clique_certificate(g, w + 1).clique);
    }

    // the Olsak indicator over K3 has a 6-clique through the images of a_i and b_i
    auto c = olsak_condition();
    auto ind = condition_to_instance(c, clique(3));
    vector<Element> seeds;
    for (Element i = 0 ; i < 3 ; ++i) {
        Tuple a{ i, (i + 1) % 3, (i + 2) % 3, (i + 1) % 3, (i + 2) % 3, i };
        Tuple b{ (i + 1) % 3, i, i, i, (i + 1) % 3, (i + 1) % 3 };
        seeds.push_back(ind.vertex(1, a, 3));
        seeds.push_back(ind.vertex(1, b, 3));
    }
    CHECK(is_clique(ind.structure, seeds));
    auto cl = clique_certificate(ind.structure, 6, seeds);
    REQUIRE(cl.clique);
    CHECK(cl.clique->size() == 6);
    auto any = clique_certificate(ind.structure, 6);
    REQUIRE(any.clique);
    CHECK(is_clique(ind.structure, *any.clique));
}

TEST_CASE("condition satisfaction in polymorphism minions")
{
    auto r = check_condition_in_pol(olsak_condition(), make_template(clique(3), clique(6)));
    CHECK(r.verdict == Verdict::sat);
    CHECK(r.verified);
    CHECK(r.witness.size() == 2);

    auto u = check_condition_in_pol(olsak_condition(), make_template(clique(3), clique(5)));
    CHECK(u.verdict == Verdict::unsat);
    CHECK(u.method == "clique");
    REQUIRE(u.clique);
    CHECK(u.clique->size() == 6);

    auto e16 = check_condition_in_pol(example_2_16_condition(), make_template(nae(2), nae(4)));
    CHECK(e16.verdict == Verdict::sat);
    CHECK(e16.verified);

    for (unsigned k = 2 ; k <= 4 ; ++k)
        CHECK(check_condition_in_pol(example_2_18_condition(), make_template(nae(2), nae(k))).verdict == Verdict::unsat);

    CHECK(check_condition_in_pol(symmetric_condition(2), make_template(clique(2), clique(2))).verdict == Verdict::unsat);
    auto s3 = check_condition_in_pol(symmetric_condition(3), make_template(clique(2), clique(2)));
    CHECK(s3.verdict == Verdict::sat);
    CHECK(s3.verified);
    CHECK(check_condition_in_pol(cyclic_condition(2), make_template(clique(3), clique(3))).verdict == Verdict::unsat);
    auto alt = check_condition_in_pol(alternating_condition(3), make_template(one_in_three(), nae(2)));
    CHECK(alt.verdict == Verdict::sat);
    CHECK(alt.verified);
}

TEST_CASE("restricted indicator refutes the K4-loop in Pol(K4,K4)")
{
    auto c = g_loop_condition(clique(4));
    auto r = check_condition_in_pol(c, make_template(clique(4), clique(4)));
    CHECK(r.verdict == Verdict::unsat);
    CHECK(r.method == "restricted");

    // soundness: a restricted refutation is never contradicted by the full indicator
    std::mt19937 rng(5);
    auto sig = clique(2).signature();
    int refuted = 0;
    for (int trial = 0 ; trial < 80 ; ++trial) {
        MinorCondition m("m");
        std::uniform_int_distribution<unsigned> ar(1, 3);
        m.add_symbol("f", ar(rng), Side::u);
        m.add_symbol("g", ar(rng), Side::v);
        m.add_symbol("h", ar(rng), Side::v);
        for (int k = 0 ; k < 3 ; ++k) {
            auto rhs = 1 + k % 2;
            vector<unsigned> pi(m.symbol(rhs).arity);
            for (auto & x : pi)
                x = std::uniform_int_distribution<unsigned>(0, m.symbol(0).arity - 1)(rng);
            m.add_minor_identity(0, rhs, pi);
        }
        auto a = random_template_side(rng, sig, 3);
        auto b = random_template_side(rng, sig, 2);
        auto ri = restricted_indicator(m, a, 3);
        auto full = condition_to_instance(m, a);
        bool restricted_maps = find_hom(ri.structure, b).outcome == SearchOutcome::found;
        bool full_maps = find_hom(full.structure, b).outcome == SearchOutcome::found;
        if (! restricted_maps) {
            ++refuted;
            CHECK(! full_maps);
        }
        // the full limit covering everything gives back the full indicator size
        auto all = restricted_indicator(m, a, 1000);
        CHECK(all.structure.domain_size() == full.structure.domain_size());
    }
    CHECK(refuted > 0);
}

TEST_CASE("round trip between instances and conditions")
{
    std::mt19937 rng(23);
    Signature sig{ { RelationSymbol{ "R", 2 }, RelationSymbol{ "S", 3 } } };
    for (int trial = 0 ; trial < 40 ; ++trial) {
        auto a = random_template_side(rng, sig, 1 + trial % 3);
        auto i = oracle::random_structure(rng, sig, 1 + trial % 4, 3, "I");
        bool maps = oracle::hom_exists(i, a);
        auto c = instance_to_condition(a, i);
        CHECK(bool(is_trivial(c)) == maps);
        auto r = check_condition_in_pol(c, make_template(a, a));
        CHECK((r.verdict == Verdict::sat) == maps);
        CHECK(r.verdict != Verdict::unknown);

        // the check agrees with a search on the indicator itself
        auto b = random_template_side(rng, sig, 2);
        auto ind = condition_to_instance(c, a);
        auto direct = find_hom(ind.structure, b).outcome == SearchOutcome::found;
        auto rb = check_condition_in_pol(c, make_template(a, b));
        CHECK((rb.verdict == Verdict::sat) == direct);
    }
}
