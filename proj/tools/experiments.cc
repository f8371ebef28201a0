#include "experiments.hh"

#include <pcsp/conditions.hh>
#include <pcsp/core.hh>
#include <pcsp/freestruct.hh>
#include <pcsp/homsearch.hh>
#include <pcsp/indicator.hh>
#include <pcsp/minionlab.hh>
#include <pcsp/relax.hh>

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <map>
#include <random>
#include <set>
#include <thread>

using nlohmann::json;
using std::size_t;
using std::string;
using std::to_string;
using std::uint64_t;
using std::vector;

namespace pcsp::experiments
{
    namespace
    {
        // plain exhaustive search over all maps, independent of the solver
        auto exhaustive_hom_exists(const Structure & from, const Structure & to) -> bool
        {
            size_t n = from.domain_size(), d = to.domain_size();
            if (n == 0)
                return true;
            if (d == 0)
                return false;
            vector<Element> h(n, 0);
            while (true) {
                bool ok = true;
                for (size_t r = 0 ; r < from.relation_count() && ok ; ++r) {
                    auto & rel = from.relation(r);
                    Tuple img(rel.arity());
                    for (size_t j = 0 ; j < rel.size() && ok ; ++j) {
                        auto t = rel.tuple(j);
                        for (size_t i = 0 ; i < t.size() ; ++i)
                            img[i] = h[t[i]];
                        ok = to.relation(r).contains(img);
                    }
                }
                if (ok)
                    return true;
                size_t i = n;
                while (i > 0) {
                    if (++h[i - 1] < d)
                        break;
                    h[i - 1] = 0;
                    --i;
                }
                if (i == 0)
                    return false;
            }
        }

        // best fraction of identities satisfied by projections, over every labelling
        auto exhaustive_projection_fraction(const MinorCondition & c) -> mpq_class
        {
            auto & syms = c.symbols();
            vector<unsigned> labels(syms.size(), 0);
            size_t best = 0;
            while (true) {
                size_t sat = 0;
                for (auto & id : c.identities())
                    sat += identity_satisfied_by_labels(id, labels[id.lhs], labels[id.rhs]);
                best = std::max(best, sat);
                size_t i = syms.size();
                while (i > 0) {
                    if (++labels[i - 1] < syms[i - 1].arity)
                        break;
                    labels[i - 1] = 0;
                    --i;
                }
                if (i == 0)
                    break;
            }
            if (c.identities().empty())
                return 1;
            return mpq_class(best, c.identities().size());
        }

        auto tables_json(const vector<FunctionTable> & tables) -> json
        {
            json out = json::array();
            for (auto & f : tables)
                out.push_back({ { "name", f.name }, { "arity", f.arity }, { "in", f.in_domain }, { "out", f.out_domain },
                        { "outputs", f.outputs } });
            return out;
        }

        auto named_tables(const MinorCondition & c, const std::map<string, FunctionTable> & by_name) -> vector<FunctionTable>
        {
            vector<FunctionTable> result;
            for (auto & s : c.symbols())
                result.push_back(by_name.at(s.name));
            return result;
        }

        struct Checks
        {
            json list = json::array();
            bool all = true;

            auto add(const string & what, bool ok) -> bool
            {
                list.push_back({ { "check", what }, { "pass", ok } });
                all = all && ok;
                return ok;
            }
        };

        auto finish(Checks & checks, const string & summary, json details = json::object()) -> Outcome
        {
            Outcome o;
            o.pass = checks.all;
            o.summary = summary;
            details["checks"] = checks.list;
            o.details = std::move(details);
            return o;
        }

        auto search_options(const Options & options) -> ConditionCheckOptions
        {
            ConditionCheckOptions c;
            c.search.node_budget = options.node_budget;
            return c;
        }

        auto olsak_k3_k5(const Options & options) -> Outcome
        {
            Checks checks;
            auto c = olsak_condition();
            auto ind = condition_to_instance(c, clique(3));
            checks.add("indicator has 717 vertices", ind.structure.domain_size() == 717);

            auto o = *c.find_symbol("o");
            vector<Element> seeds;
            for (Element i = 0 ; i < 3 ; ++i) {
                Tuple a{ i, (i + 1) % 3, (i + 2) % 3, (i + 1) % 3, (i + 2) % 3, i };
                Tuple b{ (i + 1) % 3, i, i, i, (i + 1) % 3, (i + 1) % 3 };
                seeds.push_back(ind.vertex(o, a, 3));
                seeds.push_back(ind.vertex(o, b, 3));
            }
            auto cl = clique_certificate(ind.structure, 6, seeds);
            bool found = cl.clique && cl.clique->size() == 6;
            checks.add("6-clique found", found);
            if (found) {
                checks.add("clique verified", is_clique(ind.structure, *cl.clique));
                bool contains = true;
                for (auto s : seeds)
                    contains = contains && std::find(cl.clique->begin(), cl.clique->end(), s) != cl.clique->end();
                checks.add("clique contains the images of a_i and b_i", contains);
            }

            auto opts = search_options(options);
            opts.clique_precheck = false;
            auto r = check_condition_in_pol(c, make_template(clique(3), clique(5)), opts);
            checks.add("complete search returns UNSAT", r.verdict == Verdict::unsat && r.method == "search");

            json details{ { "indicator_vertices", ind.structure.domain_size() }, { "uncontracted", ind.uncontracted },
                { "clique_vertices", cl.clique ? *cl.clique : vector<Element>{} }, { "search_nodes", r.stats.nodes },
                { "result", "UNSAT" } };
            return finish(checks, "UNSAT, clique certificate of size " + to_string(cl.clique ? cl.clique->size() : 0)
                    + ", search UNSAT after " + to_string(r.stats.nodes) + " nodes", details);
        }

        auto olsak_k3_k6(const Options & options) -> Outcome
        {
            Checks checks;
            auto c = olsak_condition();
            auto t = make_template(clique(3), clique(6));
            auto r = check_condition_in_pol(c, t, search_options(options));
            checks.add("search finds a witness", r.verdict == Verdict::sat);
            checks.add("witness verified", r.verified);

            auto o = olsak_k_2k(3);
            checks.add("olsak_k_2k(3) is a polymorphism", bool(is_polymorphism(o, t)));
            auto f = minor_of(o, { 0, 0, 1, 1, 1, 0 }, 2);
            f.name = "f";
            auto ids = check_identities(c, named_tables(c, { { "f", f }, { "o", o } }));
            checks.add("three Olsak identities hold", ids.size() == 3
                    && std::all_of(ids.begin(), ids.end(), [] (auto & x) { return x.holds; }));
            return finish(checks, "SAT, search witness and explicit o verified",
                    { { "witness", tables_json(r.witness) }, { "result", "SAT" } });
        }

        auto olsak_c5_k3(const Options & options) -> Outcome
        {
            Checks checks;
            auto opts = search_options(options);
            opts.clique_precheck = false;
            auto r = check_condition_in_pol(olsak_condition(), make_template(cycle(5), clique(3)), opts);
            checks.add("complete search returns UNSAT", r.verdict == Verdict::unsat && r.method == "search");
            return finish(checks, "UNSAT over " + to_string(r.indicator_vertices) + " indicator vertices, "
                    + to_string(r.stats.nodes) + " nodes",
                    { { "indicator_vertices", r.indicator_vertices }, { "uncontracted", r.uncontracted_vertices },
                    { "nodes", r.stats.nodes }, { "result", verdict_name(r.verdict) } });
        }

        auto pol_1in3(const Options &) -> Outcome
        {
            Checks checks;
            auto t = make_template(one_in_three(), one_in_three());
            json counts = json::object();
            for (unsigned n : { 2u, 3u }) {
                auto e = enumerate_polymorphisms(t, n);
                counts[to_string(n)] = e.tables.size();
                checks.add("Pol(T)^(" + to_string(n) + ") has " + to_string(n) + " members", e.tables.size() == n);
                bool projections = true;
                for (unsigned i = 0 ; i < e.tables.size() ; ++i)
                    projections = projections && e.tables[i].same_function(projection(2, n, i));
                checks.add("all are projections", projections);
            }
            return finish(checks, "counts 2 and 3, all projections", { { "counts", counts } });
        }

        auto examples_2_16_2_18(const Options & options) -> Outcome
        {
            Checks checks;
            auto c16 = example_2_16_condition();
            auto h24 = make_template(nae(2), nae(4));
            auto g16 = example_2_16_g(4);
            checks.add("example_2_16_g is a polymorphism of (H2,H4)", bool(is_polymorphism(g16, h24)));
            auto p1 = projection(2, 2, 0);
            p1.out_domain = 4;
            checks.add("example_2_16 identities hold with f = p1", satisfies(c16, named_tables(c16, { { "f", p1 }, { "g", g16 } })));

            auto k35 = make_template(clique(3), clique(5));
            auto g17 = example_2_17_g();
            checks.add("example_2_17_g is a polymorphism of (K3,K5)", bool(is_polymorphism(g17, k35)));
            auto q1 = projection(3, 2, 0);
            q1.out_domain = 5;
            checks.add("example_2_17_g satisfies the example_2_16 identities with f = p1",
                    satisfies(c16, named_tables(c16, { { "f", q1 }, { "g", g17 } })));

            auto s16 = check_condition_in_pol(c16, h24, search_options(options));
            checks.add("example_2_16 condition SAT in Pol(H2,H4) by search", s16.verdict == Verdict::sat && s16.verified);

            json e18 = json::object();
            for (unsigned k = 2 ; k <= 4 ; ++k) {
                auto r = check_condition_in_pol(example_2_18_condition(), make_template(nae(2), nae(k)), search_options(options));
                e18["H" + to_string(k)] = verdict_name(r.verdict);
                checks.add("example_2_18 UNSAT in Pol(H2,H" + to_string(k) + ")", r.verdict == Verdict::unsat);
            }
            return finish(checks, "example_2_16/17 witnesses verified, example_2_18 UNSAT for k = 2..4", { { "example_2_18", e18 } });
        }

        auto k4_loop(const Options & options) -> Outcome
        {
            Checks checks;
            auto c = g_loop_condition(clique(4));
            auto t = make_template(clique(3), clique(6));
            auto pair = k4loop_in_k3_k6();
            checks.add("t is a polymorphism of (K3,K6)", bool(is_polymorphism(pair.t, t)));
            checks.add("s is a polymorphism of (K3,K6)", bool(is_polymorphism(pair.s, t)));
            vector<FunctionTable> tables{ pair.t, pair.s };
            checks.add("(t,s) satisfies the K4-loop condition", c.symbols().size() == 2
                    && c.symbols()[0].arity == pair.t.arity && c.symbols()[1].arity == pair.s.arity && satisfies(c, tables));
            auto r = check_condition_in_pol(c, make_template(clique(4), clique(4)), search_options(options));
            checks.add("UNSAT in Pol(K4,K4)", r.verdict == Verdict::unsat);
            return finish(checks, "explicit pair verified in Pol(K3,K6); UNSAT in Pol(K4,K4) via " + r.method,
                    { { "k4k4_method", r.method }, { "k4k4", verdict_name(r.verdict) } });
        }

        auto aip_1in3_nae(const Options &) -> Outcome
        {
            Checks checks;
            auto t = one_in_three(), h2 = nae(2);
            // constraints over 4 variables, as codes 0..63; instances up to renaming of variables
            vector<std::array<Element, 4>> perms;
            std::array<Element, 4> p{ 0, 1, 2, 3 };
            do
                perms.push_back(p);
            while (std::next_permutation(p.begin(), p.end()));
            auto rename = [&] (unsigned code, const std::array<Element, 4> & q) {
                return q[code / 16] * 16 + q[code / 4 % 4] * 4 + q[code % 4];
            };
            std::set<vector<unsigned>> seen;
            vector<unsigned> cur;
            auto visit = [&] () {
                vector<unsigned> best;
                for (auto & q : perms) {
                    vector<unsigned> v;
                    for (auto x : cur)
                        v.push_back(rename(x, q));
                    std::sort(v.begin(), v.end());
                    if (best.empty() || v < best)
                        best = v;
                }
                seen.insert(best);
            };
            auto rec = [&] (auto & self, unsigned from) -> void {
                visit();
                if (cur.size() == 4)
                    return;
                for (unsigned x = from ; x < 64 ; ++x) {
                    cur.push_back(x);
                    self(self, x + 1);
                    cur.pop_back();
                }
            };
            rec(rec, 0);

            uint64_t yes = 0, violations = 0, unverified = 0;
            for (auto & codes : seen) {
                Structure i("I", 4, t.signature());
                for (auto x : codes)
                    i.add_tuple(0, { x / 16, x / 4 % 4, x % 4 });
                i.normalise();
                auto r = ip_feasible(emit_aip(i, t));
                unverified += ! r.verified;
                bool to_t = find_hom(i, t).hom.has_value();
                bool to_h2 = find_hom(i, h2).hom.has_value();
                if (r.feasible) {
                    ++yes;
                    violations += ! to_h2;
                }
                violations += to_t && ! r.feasible;
            }
            checks.add("zero contract violations", violations == 0);
            checks.add("every answer carries a verified certificate", unverified == 0);
            return finish(checks, to_string(seen.size()) + " instances up to renaming, " + to_string(yes) + " accepted, "
                    + to_string(violations) + " violations",
                    { { "instances", seen.size() }, { "accepted", yes }, { "violations", violations } });
        }

        auto blp_incomplete(const Options &) -> Outcome
        {
            Checks checks;
            auto k2 = clique(2), tri = cycle(3);
            auto lr = lp_feasible(emit_blp(tri, k2));
            checks.add("triangle over K2 is BLP-feasible", lr.feasible && lr.verified);
            bool halves = lr.solution.has_value();
            if (lr.solution)
                for (size_t j = 0 ; j < 6 ; ++j)
                    halves = halves && lr.solution->values[j] == mpq_class(1, 2);
            checks.add("with all mu = 1/2", halves);
            checks.add("triangle has no homomorphism to K2", ! find_hom(tri, k2).hom && ! exhaustive_hom_exists(tri, k2));

            auto t = one_in_three();
            Structure loop("I", 1, t.signature());
            loop.add_tuple(0, { 0, 0, 0 });
            loop.normalise();
            auto sys = emit_blp(loop, t);
            auto l2 = lp_feasible(sys);
            bool thirds = l2.feasible && l2.verified;
            if (l2.solution)
                for (size_t j = 0 ; j < sys.variables.size() ; ++j)
                    if (! (sys.variables[j].scope.empty() && sys.variables[j].value == 0))
                        thirds = thirds && l2.solution->values[j] == mpq_class(1, 3);
            checks.add("R(v,v,v) over T is BLP-feasible with mu = 1/3", thirds);
            auto ip = ip_feasible(emit_aip(loop, t));
            checks.add("R(v,v,v) over T is AIP-infeasible with verified obstruction", ! ip.feasible && ip.verified);
            json cert = json::array();
            if (ip.certificate)
                for (auto & z : ip.certificate->multipliers)
                    cert.push_back(z.get_str());
            return finish(checks, "triangle/K2 and R(v,v,v)/T are BLP-feasible; the latter is AIP-infeasible",
                    { { "aip_obstruction", cert } });
        }

        auto width1(const Options &) -> Outcome
        {
            Checks checks;
            auto h = horn();
            auto w = width1_check(make_template(h, h));
            checks.add("width1_check(H,H) holds", w.holds);
            checks.add("power_structure(H) -> H verified", w.hom && is_homomorphism(*w.hom, w.power, h));
            auto k2 = clique(2);
            auto wk = width1_check(make_template(k2, k2));
            checks.add("width1_check(K2,K2) fails", ! wk.holds);
            Element loop[2] = { 2, 2 };
            checks.add("power_structure(K2) has the loop on {0,1}", wk.power.relation(0).contains(loop));

            std::mt19937 rng(2024);
            int mismatches = 0, sat = 0;
            for (int trial = 0 ; trial < 200 ; ++trial) {
                size_t n = 1 + trial % 8;
                Structure i("I", n, h.signature());
                std::uniform_int_distribution<Element> var(0, n - 1);
                for (size_t r = 0 ; r < h.relation_count() ; ++r) {
                    int count = std::uniform_int_distribution<int>(0, 3)(rng);
                    for (int j = 0 ; j < count ; ++j) {
                        Tuple tup(h.relation(r).arity());
                        for (auto & x : tup)
                            x = var(rng);
                        i.add_tuple(r, tup);
                    }
                }
                i.normalise();
                bool g = gac(i, h).has_value();
                bool b = exhaustive_hom_exists(i, h);
                sat += b;
                mismatches += g != b;
            }
            checks.add("GAC matches brute force on 200 Horn instances", mismatches == 0);
            return finish(checks, "H has width 1, K2 does not; " + to_string(mismatches) + " GAC mismatches ("
                    + to_string(sat) + "/200 satisfiable)", { { "mismatches", mismatches }, { "satisfiable", sat } });
        }

        auto random_nonempty(std::mt19937 & rng, const Signature & sig, size_t n) -> Structure
        {
            Structure s("A", n, sig);
            for (size_t r = 0 ; r < sig.size() ; ++r) {
                int count = std::uniform_int_distribution<int>(1, 4)(rng);
                for (int j = 0 ; j < count ; ++j) {
                    Tuple t(sig[r].arity);
                    for (auto & x : t)
                        x = std::uniform_int_distribution<Element>(0, n - 1)(rng);
                    s.add_tuple(r, t);
                }
            }
            s.normalise();
            return s;
        }

        auto round_trip(const Options & options) -> Outcome
        {
            Checks checks;
            std::mt19937 rng(7);
            Signature sig{ { RelationSymbol{ "R", 2 }, RelationSymbol{ "S", 3 } } };
            int mismatches = 0, maps = 0, unknown = 0;
            for (int trial = 0 ; trial < 100 ; ++trial) {
                auto a = random_nonempty(rng, sig, 1 + trial % 3);
                size_t vars = 1 + trial % 4;
                Structure i("I", vars, sig);
                for (size_t r = 0 ; r < sig.size() ; ++r) {
                    int count = std::uniform_int_distribution<int>(0, 2)(rng);
                    for (int j = 0 ; j < count ; ++j) {
                        Tuple t(sig[r].arity);
                        for (auto & x : t)
                            x = std::uniform_int_distribution<Element>(0, vars - 1)(rng);
                        i.add_tuple(r, t);
                    }
                }
                i.normalise();
                bool hom = exhaustive_hom_exists(i, a);
                maps += hom;
                auto c = instance_to_condition(a, i);
                bool trivial = is_trivial(c).trivial;
                auto r = check_condition_in_pol(c, make_template(a, a), search_options(options));
                unknown += r.verdict == Verdict::unknown;
                mismatches += (trivial != hom) + ((r.verdict == Verdict::sat) != hom);
            }
            checks.add("zero mismatches", mismatches == 0);
            checks.add("no unknown verdicts", unknown == 0);
            return finish(checks, "100 pairs, " + to_string(maps) + " with I -> A, " + to_string(mismatches) + " mismatches",
                    { { "pairs", 100 }, { "homomorphic", maps }, { "mismatches", mismatches } });
        }

        auto robustness(const Options &) -> Outcome
        {
            Checks checks;
            json values = json::object();
            for (auto & [c, want] : { std::pair{ example_2_16_condition(), mpq_class(3, 4) },
                    std::pair{ olsak_condition(), mpq_class(2, 3) } }) {
                auto r = max_projection_fraction(c);
                auto brute = exhaustive_projection_fraction(c);
                values[c.name()] = r.fraction.get_str();
                checks.add(c.name() + " has robustness value " + want.get_str(), r.fraction == want);
                checks.add(c.name() + " agrees with exhaustive labelling", r.fraction == brute);
            }
            return finish(checks, "example_2_16 3/4, olsak 2/3", { { "values", values } });
        }

        auto symmetric_alternating(const Options & options) -> Outcome
        {
            Checks checks;
            auto opts = search_options(options);
            auto k2 = make_template(clique(2), clique(2));
            auto s2 = check_condition_in_pol(symmetric_condition(2), k2, opts);
            checks.add("symmetric(2) UNSAT over (K2,K2)", s2.verdict == Verdict::unsat);
            auto s3 = check_condition_in_pol(symmetric_condition(3), k2, opts);
            checks.add("symmetric(3) SAT over (K2,K2), verified", s3.verdict == Verdict::sat && s3.verified);

            auto th = make_template(one_in_three(), nae(2));
            auto a3 = check_condition_in_pol(alternating_condition(3), th, opts);
            checks.add("alternating(3) SAT over (T,H2), verified", a3.verdict == Verdict::sat && a3.verified);
            auto alt = alternating_threshold(3);
            checks.add("alternating_threshold(3) is a polymorphism of (T,H2)", bool(is_polymorphism(alt, th)));
            checks.add("alternating_threshold(3) satisfies alternating(3)", satisfies(alternating_condition(3), { alt }));

            auto c2 = check_condition_in_pol(cyclic_condition(2), make_template(clique(3), clique(3)), opts);
            checks.add("cyclic(2) UNSAT over (K3,K3)", c2.verdict == Verdict::unsat);
            return finish(checks, "symmetric(2) UNSAT, symmetric(3) SAT, alternating(3) SAT, cyclic(2) UNSAT");
        }

        auto trash_colour(const Options &) -> Outcome
        {
            Checks checks;
            auto e = enumerate_polymorphisms(make_template(clique(3), clique(4)), 2);
            size_t good = 0;
            for (auto & f : e.tables) {
                auto t = find_trash_colour(f);
                if (! t)
                    continue;
                bool ok = true;
                for (size_t idx = 0 ; idx < f.size() ; ++idx) {
                    auto x = decode_tuple(idx, 3, 2);
                    ok = ok && (f.outputs[idx] == t->colour || f.outputs[idx] == t->alpha[x[t->coordinate]]);
                }
                good += ok;
            }
            checks.add("enumeration is nonempty", ! e.tables.empty());
            checks.add("every binary polymorphism has a verified trash colour", good == e.tables.size());
            return finish(checks, to_string(good) + "/" + to_string(e.tables.size()) + " binary polymorphisms have a trash colour",
                    { { "functions", e.tables.size() }, { "with_trash_colour", good } });
        }

        auto minion_homs(const Options &) -> Outcome
        {
            Checks checks;
            auto tt = make_template(one_in_three(), one_in_three());
            auto yes = minion_hom_exists(make_template(clique(3), clique(4)), tt);
            checks.add("Pol(K3,K4) -> Pol(T,T) exists", yes.verdict == Verdict::sat);
            checks.add("free structure homomorphism verified",
                    yes.hom && yes.free && is_homomorphism(*yes.hom, yes.free->structure, tt.b));
            auto no = minion_hom_exists(make_template(clique(3), clique(6)), tt);
            checks.add("Pol(K3,K6) -> Pol(T,T) refuted", no.verdict == Verdict::unsat);
            checks.add("refuting instance does not map to T",
                    no.refuting_instance && ! exhaustive_hom_exists(*no.refuting_instance, tt.b));
            checks.add("refuting condition verified in Pol(K3,K6)", no.refutation && no.refutation->verified);
            return finish(checks, "(K3,K4) -> (T,T) by the free structure; (K3,K6) -/-> (T,T) via " + no.method,
                    { { "free_size", yes.free ? yes.free->structure.domain_size() : 0 } });
        }

        auto lp_ip_witnesses(const Options & options) -> Outcome
        {
            Checks checks;
            auto opts = search_options(options);
            auto k2 = clique(2);
            auto s3 = check_condition_in_pol(symmetric_condition(3), make_template(k2, k2), opts);
            if (checks.add("symmetric(3) witness over (K2,K2)", s3.verdict == Verdict::sat)) {
                auto lp = lp_structure(k2, 3);
                checks.add("h_3 : LP_3(K2) -> K2", is_homomorphism(lp_hom_from_symmetric(lp, s3.witness[0]), lp.structure, k2));
            }
            auto t = one_in_three(), h2 = nae(2);
            for (unsigned l : { 1u, 2u }) {
                auto a = check_condition_in_pol(alternating_condition(2 * l + 1), make_template(t, h2), opts);
                if (checks.add("alternating(" + to_string(2 * l + 1) + ") witness over (T,H2)", a.verdict == Verdict::sat)) {
                    auto ip = ip_structure(t, l);
                    checks.add("h_" + to_string(l) + " : IP_" + to_string(l) + "(T) -> H2",
                            is_homomorphism(ip_hom_from_alternating(ip, a.witness[0]), ip.structure, h2));
                }
            }
            return finish(checks, "symmetric and alternating witnesses give homomorphisms from LP_l and IP_l");
        }
    }

    auto registry() -> const vector<Experiment> &
    {
        static const vector<Experiment> list{
            { "olsak-k3-k5", 1, "Olsak absent in Pol(K3,K5)", olsak_k3_k5 },
            { "olsak-k3-k6", 2, "Olsak present in Pol(K3,K6)", olsak_k3_k6 },
            { "olsak-c5-k3", 3, "Olsak absent in Pol(C5,K3)", olsak_c5_k3 },
            { "pol-1in3", 4, "Pol(T) in arities 2 and 3 is projections", pol_1in3 },
            { "examples-2-16-2-18", 5, "named example conditions and tables", examples_2_16_2_18 },
            { "k4-loop", 6, "K4-loop in Pol(K3,K6) and not in Pol(K4,K4)", k4_loop },
            { "aip-1in3-nae", 7, "AIP promise contract on (T,H2)", aip_1in3_nae },
            { "blp-incomplete", 8, "BLP incompleteness witnesses", blp_incomplete },
            { "width1", 9, "width 1 via power structures", width1 },
            { "round-trip", 10, "instances and conditions round trip", round_trip },
            { "robustness", 11, "robustness values", robustness },
            { "symmetric-alternating", 12, "symmetric, alternating and cyclic existence", symmetric_alternating },
            { "trash-colour", 13, "trash colours in Pol(K3,K4)^(2)", trash_colour },
            { "minion-hom", 0, "minion homomorphisms to Pol(T,T)", minion_homs },
            { "lp-ip-witnesses", 0, "homomorphisms from LP_l and IP_l", lp_ip_witnesses },
        };
        return list;
    }

    auto find(const string & name) -> const Experiment *
    {
        for (auto & e : registry())
            if (e.name == name)
                return &e;
        return nullptr;
    }

    auto run(const Experiment & e, const Options & options) -> Outcome
    {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = e.run(options);
        }
        catch (const std::exception & x) {
            o.pass = false;
            o.summary = string("error: ") + x.what();
        }
        o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return o;
    }

    auto run_all(const vector<const Experiment *> & selection, const Options & options, unsigned jobs) -> vector<Outcome>
    {
        vector<Outcome> out(selection.size());
        std::atomic<size_t> next{ 0 };
        auto worker = [&] {
            for (size_t i ; (i = next++) < selection.size() ; )
                out[i] = run(*selection[i], options);
        };
        jobs = std::max(1u, std::min<unsigned>(jobs, selection.size()));
        vector<std::thread> threads;
        for (unsigned j = 1 ; j < jobs ; ++j)
            threads.emplace_back(worker);
        worker();
        for (auto & t : threads)
            t.join();
        return out;
    }
}
