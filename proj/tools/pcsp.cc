#include "experiments.hh"

#include <pcsp/conditions.hh>
#include <pcsp/core.hh>
#include <pcsp/freestruct.hh>
#include <pcsp/homsearch.hh>
#include <pcsp/indicator.hh>
#include <pcsp/minionlab.hh>
#include <pcsp/relax.hh>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

using namespace pcsp;
using nlohmann::json;
using std::string;
using std::to_string;
using std::uint64_t;
using std::vector;

namespace
{
    enum ExitCode
    {
        exit_ok = 0,
        exit_other = 1,
        exit_parse = 2,
        exit_io = 3,
        exit_capacity = 4,
        exit_budget = 5
    };

    class IoError : public Error
    {
        public:
            using Error::Error;
    };

    class BudgetError : public Error
    {
        public:
            using Error::Error;
    };

    auto fnv1a(const string & text) -> string
    {
        uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : text) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }

    struct Global
    {
        uint64_t node_budget = 0;
        uint64_t size_cap = 0;
        bool deterministic = true;
        bool json_output = false;
        string out_dir;
        unsigned jobs = 1;
    };

    struct Report
    {
        json data = json::object();
        // extra files for --out, name to content
        vector<std::pair<string, string>> artifacts;

        auto input(const string & what, const string & text) -> void
        {
            data["inputs"].push_back({ { "name", what }, { "digest", fnv1a(text) } });
        }
    };

    auto read_text(const string & path) -> string
    {
        std::ifstream in(path, std::ios::binary);
        if (! in)
            throw IoError("cannot open '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    // a file, or a built-in name: K<k>, C<n>, NAE<k>, T, H2, HORN, LOOP
    auto builtin(const string & name) -> std::optional<Structure>
    {
        std::smatch m;
        if (std::regex_match(name, m, std::regex("K([0-9]+)")))
            return clique(std::stoul(m[1]));
        if (std::regex_match(name, m, std::regex("C([0-9]+)")))
            return cycle(std::stoul(m[1]));
        if (std::regex_match(name, m, std::regex("(NAE|H)([0-9]+)")))
            return nae(std::stoul(m[2]));
        if (name == "T")
            return one_in_three();
        if (name == "HORN")
            return horn();
        if (name == "LOOP")
            return loop_graph();
        return std::nullopt;
    }

    auto load_structure(const string & arg, Report & report) -> Structure
    {
        if (! std::filesystem::exists(arg))
            if (auto s = builtin(arg)) {
                report.input(arg, "builtin:" + arg);
                return *s;
            }
        auto text = read_text(arg);
        report.input(arg, text);
        return parse_structure(text);
    }

    auto load_condition(const string & arg, Report & report) -> MinorCondition
    {
        auto text = read_text(arg);
        report.input(arg, text);
        return parse_condition(text);
    }

    auto tables_json(const vector<FunctionTable> & tables) -> json
    {
        json out = json::array();
        for (auto & f : tables)
            out.push_back({ { "name", f.name }, { "arity", f.arity }, { "in", f.in_domain }, { "out", f.out_domain },
                    { "outputs", f.outputs } });
        return out;
    }

    auto stats_json(const SearchStats & s) -> json
    {
        return { { "nodes", s.nodes }, { "backtracks", s.backtracks }, { "revisions", s.revisions } };
    }

    auto search_options(const Global & g) -> SearchOptions
    {
        SearchOptions o;
        o.node_budget = g.node_budget;
        o.deterministic = g.deterministic;
        return o;
    }

    auto require_budget(SearchOutcome o, const string & what) -> void
    {
        if (o == SearchOutcome::budget_exceeded)
            throw BudgetError("node budget exhausted in " + what);
    }

    auto rational(const mpq_class & q) -> string
    {
        return q.get_str();
    }

    auto relax_json(const LinearSystem & sys, const RelaxResult & r) -> json
    {
        json out{ { "feasible", r.feasible }, { "verified", r.verified }, { "pivots", r.pivots } };
        if (r.solution) {
            json values = json::object();
            for (size_t j = 0 ; j < sys.variables.size() ; ++j)
                values[sys.variables[j].name] = rational(r.solution->values[j]);
            out["solution"] = values;
        }
        if (r.certificate) {
            json z = json::array();
            for (auto & x : r.certificate->multipliers)
                z.push_back(rational(x));
            out["certificate"] = z;
        }
        return out;
    }

    auto condition_json(const ConditionCheckResult & r, const MinorCondition & c) -> json
    {
        json cert;
        if (r.verdict == Verdict::sat) {
            cert["kind"] = "witness";
            cert["tables"] = tables_json(r.witness);
        }
        else if (r.verdict == Verdict::unsat && r.clique) {
            cert["kind"] = "clique";
            cert["clique_vertices"] = *r.clique;
        }
        else if (r.verdict == Verdict::unsat)
            cert["kind"] = "unsat";
        else {
            cert["kind"] = "unknown";
            cert["budget"] = r.note;
        }
        json per = json::array();
        for (auto & ic : r.identity_checks)
            per.push_back({ { "identity", ic.identity }, { "pass", ic.holds } });
        cert["verification"] = per;
        cert["polymorphisms"] = r.polymorphism_checks;
        return { { "result", verdict_name(r.verdict) }, { "method", r.method }, { "condition", c.name() },
            { "indicator_vertices", r.indicator_vertices }, { "uncontracted_vertices", r.uncontracted_vertices },
            { "verified", r.verified }, { "certificate", cert }, { "stats", stats_json(r.stats) } };
    }

    auto emit(const Global & g, Report & report, const string & human) -> void
    {
        if (g.json_output)
            std::cout << report.data.dump(2) << "\n";
        else
            std::cout << human;
        if (! g.out_dir.empty()) {
            std::filesystem::create_directories(g.out_dir);
            std::ofstream(g.out_dir + "/report.json") << report.data.dump(2) << "\n";
            for (auto & [name, content] : report.artifacts)
                std::ofstream(g.out_dir + "/" + name) << content;
        }
    }

    auto human_result(const json & r) -> string
    {
        string out = "result: " + (r["result"].is_string() ? r["result"].get<string>() : r["result"].dump()) + "\n";
        if (r.contains("summary"))
            out += r["summary"].get<string>() + "\n";
        return out;
    }
}

int main(int argc, char ** argv)
{
    CLI::App app{ "promise CSP toolkit" };
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--node-budget", g.node_budget, "search node budget, 0 for none");
    app.add_option("--size-cap", g.size_cap, "maximum elements in built structures");
    app.add_flag("--deterministic,!--randomised", g.deterministic, "deterministic search");
    app.add_flag("--json", g.json_output, "print the run report as JSON");
    app.add_option("--out", g.out_dir, "directory for the report and certificates");

    Report report;
    std::function<string ()> action;
    string a1, a2, a3, a4, a5;
    unsigned k = 2, l = 3, n = 2;
    uint64_t cap = 0;
    string method = "gac", mode;
    vector<unsigned> params;
    string graph_file;
    vector<string> names;

    auto sub = [&] (const string & name, const string & help) { return app.add_subcommand(name, help); };

    auto hom = sub("hom", "find a homomorphism from an instance to a template");
    hom->add_option("instance", a1)->required();
    hom->add_option("template", a2)->required();
    hom->callback([&] {
        action = [&] {
            auto i = load_structure(a1, report), t = load_structure(a2, report);
            auto r = find_hom(i, t, search_options(g));
            require_budget(r.outcome, "hom");
            report.data["result"] = outcome_name(r.outcome);
            report.data["stats"] = stats_json(r.stats);
            if (r.hom) {
                report.data["certificate"] = { { "kind", "homomorphism" }, { "map", *r.hom } };
                report.data["verified"] = is_homomorphism(*r.hom, i, t);
            }
            return human_result(report.data);
        };
    });

    auto gac_cmd = sub("gac", "arc consistency of an instance against a template");
    gac_cmd->add_option("instance", a1)->required();
    gac_cmd->add_option("template", a2)->required();
    gac_cmd->callback([&] {
        action = [&] {
            auto i = load_structure(a1, report), t = load_structure(a2, report);
            auto d = gac(i, t);
            report.data["result"] = d ? "consistent" : "wipeout";
            if (d) {
                json domains = json::array();
                for (size_t v = 0 ; v < d->variables() ; ++v)
                    domains.push_back(d->candidates(v));
                report.data["certificate"] = { { "kind", "domains" }, { "domains", domains } };
            }
            return human_result(report.data);
        };
    });

    auto kl = sub("klcons", "(k,l)-consistency");
    kl->add_option("instance", a1)->required();
    kl->add_option("template", a2)->required();
    kl->add_option("-k", k, "k")->required();
    kl->add_option("-l", l, "l")->required();
    kl->callback([&] {
        action = [&] {
            auto i = load_structure(a1, report), t = load_structure(a2, report);
            auto f = kl_consistency(i, t, k, l);
            report.data["result"] = f.empty() ? "refuted" : "consistent";
            report.data["family_size"] = f.maps.size();
            return human_result(report.data) + to_string(f.maps.size()) + " partial maps\n";
        };
    });

    auto solve = sub("pcsp-solve", "decide a promise instance with gac, blp or aip");
    solve->add_option("--method", method, "gac, blp or aip")->check(CLI::IsMember({ "gac", "blp", "aip" }));
    solve->add_option("A", a1)->required();
    solve->add_option("B", a2)->required();
    solve->add_option("instance", a3)->required();
    bool simplify = false;
    solve->add_flag("--boolean-rewrite", simplify, "eliminate mu[v][0] for two-element templates");
    solve->callback([&] {
        action = [&] {
            auto a = load_structure(a1, report), b = load_structure(a2, report), i = load_structure(a3, report);
            PromiseOptions opts;
            opts.node_budget = g.node_budget;
            opts.emit.simplify_boolean = simplify;
            auto t = make_template(a, b);
            auto ans = solve_promise(t, i, parse_method(method), opts);
            report.data["result"] = ans.yes ? "yes" : "no";
            report.data["method"] = method;
            report.data["yes_sound"] = ans.yes_sound;
            report.data["characterization"] = ans.characterization;
            if (ans.relaxation) {
                auto sys = parse_method(method) == RelaxMethod::blp ? emit_blp(i, a, opts.emit) : emit_aip(i, a, opts.emit);
                report.data["certificate"] = relax_json(sys, *ans.relaxation);
                report.data["verified"] = ans.relaxation->verified;
                report.artifacts.emplace_back("system.txt", serialize_system(sys));
            }
            string note = ans.yes ? (ans.yes_sound ? "sound for B (" : "not certified for B (") + ans.characterization + ")\n" : "";
            if (ans.yes && ! ans.yes_sound)
                note += "rounding to a homomorphism is a separate call (hom)\n";
            return human_result(report.data) + note;
        };
    });

    auto penum = sub("poly-enum", "enumerate polymorphisms of a given arity");
    penum->add_option("A", a1)->required();
    penum->add_option("B", a2)->required();
    penum->add_option("-n", n, "arity")->required();
    penum->add_option("--cap", cap, "stop after this many");
    penum->callback([&] {
        action = [&] {
            auto t = make_template(load_structure(a1, report), load_structure(a2, report));
            auto e = enumerate_polymorphisms(t, n, cap);
            report.data["result"] = e.tables.size();
            report.data["truncated"] = e.truncated;
            string text;
            for (auto & f : e.tables)
                text += serialize_function(f);
            report.artifacts.emplace_back("polymorphisms.txt", text);
            return human_result(report.data) + (e.truncated ? "truncated at the cap\n" : "");
        };
    });

    auto pcheck = sub("poly-check", "check that a function table is a polymorphism");
    pcheck->add_option("function", a1)->required();
    pcheck->add_option("A", a2)->required();
    pcheck->add_option("B", a3)->required();
    pcheck->callback([&] {
        action = [&] {
            auto text = read_text(a1);
            report.input(a1, text);
            auto f = parse_function(text);
            auto t = make_template(load_structure(a2, report), load_structure(a3, report));
            auto c = is_polymorphism(f, t);
            report.data["result"] = c.holds;
            if (! c.holds)
                report.data["certificate"] = { { "kind", "violation" }, { "relation", t.a.signature()[c.relation].name },
                    { "columns", c.columns }, { "image", c.image } };
            return human_result(report.data);
        };
    });

    auto cgen = sub("cond-gen", "generate a named minor condition");
    cgen->add_option("kind", a1)->required();
    cgen->add_option("params", params);
    cgen->add_option("--graph", graph_file, "graph for g_loop");
    cgen->callback([&] {
        action = [&] {
            std::optional<Structure> graph;
            if (! graph_file.empty())
                graph = load_structure(graph_file, report);
            auto c = generate_condition(a1, params, graph ? &*graph : nullptr);
            auto text = serialize_condition(c);
            report.data["result"] = c.name();
            report.data["symbols"] = c.symbols().size();
            report.data["identities"] = c.identities().size();
            report.artifacts.emplace_back(c.name() + ".cond", text);
            return g.json_output ? string() : text;
        };
    });

    auto ctriv = sub("cond-trivial", "decide whether projections satisfy a condition");
    ctriv->add_option("condition", a1)->required();
    ctriv->callback([&] {
        action = [&] {
            auto c = load_condition(a1, report);
            auto r = is_trivial(c);
            report.data["result"] = r.trivial ? "trivial" : "nontrivial";
            if (r.trivial)
                report.data["certificate"] = { { "kind", "labels" }, { "labels", r.labels } };
            return human_result(report.data);
        };
    });

    auto crob = sub("cond-robust", "best fraction of identities satisfied by projections");
    crob->add_option("condition", a1)->required();
    crob->callback([&] {
        action = [&] {
            auto c = load_condition(a1, report);
            try {
                auto r = max_projection_fraction(c, g.node_budget);
                report.data["result"] = rational(r.fraction);
                report.data["certificate"] = { { "kind", "labels" }, { "labels", r.labels }, { "satisfied", r.satisfied },
                    { "total", r.total } };
                report.data["nodes"] = r.nodes;
            }
            catch (const BudgetExceeded & e) {
                throw BudgetError(e.what());
            }
            return human_result(report.data);
        };
    });

    auto ccheck = sub("cond-check", "decide a condition in Pol(A,B)");
    ccheck->add_option("condition", a1)->required();
    ccheck->add_option("A", a2)->required();
    ccheck->add_option("B", a3)->required();
    bool no_clique = false;
    ccheck->add_flag("--no-clique", no_clique, "skip the clique pre-check");
    ccheck->callback([&] {
        action = [&] {
            auto c = load_condition(a1, report);
            auto t = make_template(load_structure(a2, report), load_structure(a3, report));
            ConditionCheckOptions opts;
            opts.search = search_options(g);
            opts.clique_precheck = ! no_clique;
            auto r = check_condition_in_pol(c, t, opts);
            auto j = condition_json(r, c);
            for (auto & [key, value] : j.items())
                report.data[key] = value;
            if (r.verdict == Verdict::unknown && r.method == "budget")
                throw BudgetError("node budget exhausted in cond-check");
            return human_result(report.data) + "method: " + r.method + "\n";
        };
    });

    auto reduce = sub("reduce", "instances to conditions and back");
    reduce->add_option("direction", mode, "inst2cond or cond2inst")->required()->check(CLI::IsMember({ "inst2cond", "cond2inst" }));
    reduce->add_option("first", a1, "A for inst2cond, condition for cond2inst")->required();
    reduce->add_option("second", a2, "instance for inst2cond, A for cond2inst")->required();
    reduce->callback([&] {
        action = [&] {
            string text;
            if (mode == "inst2cond") {
                auto a = load_structure(a1, report), i = load_structure(a2, report);
                auto c = instance_to_condition(a, i);
                text = serialize_condition(c);
                report.data["result"] = { { "symbols", c.symbols().size() }, { "identities", c.identities().size() } };
                report.artifacts.emplace_back("condition.cond", text);
            }
            else {
                auto c = load_condition(a1, report);
                auto a = load_structure(a2, report);
                auto ind = condition_to_instance(c, a);
                vector<string> labels;
                for (auto & lab : ind.labels) {
                    string s = c.symbol(lab.symbol).name + "(";
                    for (size_t j = 0 ; j < lab.input.size() ; ++j)
                        s += (j ? "," : "") + to_string(lab.input[j]);
                    labels.push_back(s + ")");
                }
                text = serialize_structure(ind.structure, labels);
                report.data["result"] = { { "vertices", ind.structure.domain_size() }, { "uncontracted", ind.uncontracted } };
                report.artifacts.emplace_back("indicator.txt", text);
            }
            return g.json_output ? string() : text;
        };
    });

    auto free_cmd = sub("free", "free structure of Pol(A,B) generated by a structure");
    free_cmd->add_option("A", a1)->required();
    free_cmd->add_option("B", a2)->required();
    free_cmd->add_option("generator", a3)->required();
    free_cmd->callback([&] {
        action = [&] {
            PolymorphismMinion m(make_template(load_structure(a1, report), load_structure(a2, report)));
            auto f = free_structure(m, load_structure(a3, report));
            auto text = serialize_structure(f.structure, f.labels);
            report.data["result"] = { { "elements", f.structure.domain_size() }, { "tuples", f.structure.tuple_count() } };
            report.artifacts.emplace_back("free.txt", text);
            return g.json_output ? string() : text;
        };
    });

    auto pstruct = sub("power-structure", "structure on the nonempty subsets");
    pstruct->add_option("A", a1)->required();
    pstruct->callback([&] {
        action = [&] {
            auto a = load_structure(a1, report);
            auto p = power_structure(a);
            auto text = serialize_structure(p, power_structure_labels(a));
            report.data["result"] = { { "elements", p.domain_size() }, { "tuples", p.tuple_count() } };
            report.artifacts.emplace_back("power.txt", text);
            return g.json_output ? string() : text;
        };
    });

    auto w1 = sub("width1", "does the power structure of A map to B");
    w1->add_option("A", a1)->required();
    w1->add_option("B", a2)->required();
    w1->callback([&] {
        action = [&] {
            auto t = make_template(load_structure(a1, report), load_structure(a2, report));
            auto w = width1_check(t);
            report.data["result"] = w.holds;
            if (w.hom) {
                report.data["certificate"] = { { "kind", "homomorphism" }, { "map", *w.hom } };
                report.data["verified"] = is_homomorphism(*w.hom, w.power, t.b);
            }
            return human_result(report.data);
        };
    });

    auto mh = sub("minion-hom", "is there a minion homomorphism Pol(A1,B1) -> Pol(A2,B2)");
    mh->add_option("A1", a1)->required();
    mh->add_option("B1", a2)->required();
    mh->add_option("A2", a3)->required();
    mh->add_option("B2", a4)->required();
    mh->callback([&] {
        action = [&] {
            auto s = make_template(load_structure(a1, report), load_structure(a2, report));
            auto t = make_template(load_structure(a3, report), load_structure(a4, report));
            MinionHomOptions opts;
            opts.search = search_options(g);
            auto r = minion_hom_exists(s, t, opts);
            report.data["result"] = r.verdict == Verdict::sat ? "true" : r.verdict == Verdict::unsat ? "false" : "unknown";
            report.data["method"] = r.method;
            report.data["note"] = r.note;
            if (r.hom && r.free) {
                report.data["certificate"] = { { "kind", "homomorphism" }, { "map", *r.hom } };
                report.data["verified"] = is_homomorphism(*r.hom, r.free->structure, t.b);
            }
            if (r.refuting_instance && r.refutation) {
                report.data["certificate"] = { { "kind", "refutation" }, { "instance", serialize_structure(*r.refuting_instance) },
                    { "tables", tables_json(r.refutation->witness) } };
                report.data["verified"] = r.refutation->verified;
            }
            return human_result(report.data) + "method: " + r.method + (r.note.empty() ? "" : " (" + r.note + ")") + "\n";
        };
    });

    auto cl = sub("clique", "find a k-clique");
    cl->add_option("graph", a1)->required();
    cl->add_option("k", k)->required();
    cl->callback([&] {
        action = [&] {
            auto graph = load_structure(a1, report);
            auto r = clique_certificate(graph, k, {}, g.node_budget);
            if (r.budget_exceeded)
                throw BudgetError("node budget exhausted in clique");
            report.data["result"] = r.clique.has_value();
            report.data["nodes"] = r.nodes;
            if (r.clique) {
                report.data["certificate"] = { { "kind", "clique" }, { "clique_vertices", *r.clique } };
                report.data["verified"] = is_clique(graph, *r.clique);
            }
            return human_result(report.data);
        };
    });

    auto lc2mc = sub("lc2mc", "label cover to minor condition");
    lc2mc->add_option("labelcover", a1)->required();
    lc2mc->callback([&] {
        action = [&] {
            auto text = read_text(a1);
            report.input(a1, text);
            auto c = from_label_cover(parse_label_cover(text));
            auto out = serialize_condition(c);
            report.data["result"] = { { "symbols", c.symbols().size() }, { "identities", c.identities().size() } };
            report.artifacts.emplace_back("condition.cond", out);
            return g.json_output ? string() : out;
        };
    });

    auto mc2lc = sub("mc2lc", "bipartite minor condition to label cover");
    mc2lc->add_option("condition", a1)->required();
    mc2lc->callback([&] {
        action = [&] {
            auto lc = to_label_cover(load_condition(a1, report));
            auto out = serialize_label_cover(lc);
            report.data["result"] = { { "left", lc.left }, { "right", lc.right }, { "edges", lc.edges.size() } };
            report.artifacts.emplace_back("labelcover.txt", out);
            return g.json_output ? string() : out;
        };
    });

    auto exp = sub("experiment", "run named experiments, or all");
    exp->add_option("names", names, "experiment names, or all")->required();
    exp->add_option("--jobs", g.jobs, "experiments run in parallel");
    exp->callback([&] {
        action = [&] {
            vector<const experiments::Experiment *> selection;
            for (auto & name : names) {
                if (name == "all") {
                    for (auto & e : experiments::registry())
                        selection.push_back(&e);
                    continue;
                }
                auto e = experiments::find(name);
                if (! e)
                    throw Error("unknown experiment " + name);
                selection.push_back(e);
            }
            experiments::Options opts;
            opts.node_budget = g.node_budget;
            auto outcomes = experiments::run_all(selection, opts, g.jobs);
            string human;
            bool all = true;
            for (size_t i = 0 ; i < selection.size() ; ++i) {
                auto & o = outcomes[i];
                report.data["experiments"].push_back({ { "name", selection[i]->name }, { "pass", o.pass },
                        { "summary", o.summary }, { "seconds", o.seconds }, { "details", o.details } });
                human += selection[i]->name + ": " + (o.pass ? "pass" : "FAIL") + " (" + o.summary + ")\n";
                all = all && o.pass;
            }
            report.data["result"] = all ? "pass" : "fail";
            return human;
        };
    });

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e) {
        return app.exit(e);
    }

    string command;
    for (int i = 0 ; i < argc ; ++i)
        command += (i ? " " : "") + string(argv[i]);
    report.data["command"] = command;
    report.data["inputs"] = json::array();
    report.data["budget"] = { { "node_budget", g.node_budget }, { "size_cap", g.size_cap } };
    if (g.size_cap)
        size_cap().max_elements = g.size_cap;

    auto start = std::chrono::steady_clock::now();
    int code = exit_ok;
    string human;
    try {
        human = action();
    }
    catch (const ParseError & e) {
        report.data["error"] = { { "class", "parse" }, { "message", e.what() } };
        code = exit_parse;
    }
    catch (const IoError & e) {
        report.data["error"] = { { "class", "io" }, { "message", e.what() } };
        code = exit_io;
    }
    catch (const CapacityError & e) {
        report.data["error"] = { { "class", "capacity" }, { "message", e.what() } };
        code = exit_capacity;
    }
    catch (const BudgetError & e) {
        report.data["error"] = { { "class", "budget" }, { "message", e.what() } };
        code = exit_budget;
    }
    catch (const std::exception & e) {
        report.data["error"] = { { "class", "error" }, { "message", e.what() } };
        code = exit_other;
    }
    report.data["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (code != exit_ok && ! g.json_output)
        std::cerr << "error: " << report.data["error"]["message"].get<string>() << "\n";
    emit(g, report, code == exit_ok ? human : string());
    return code;
}
