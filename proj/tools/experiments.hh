#ifndef PCSP_TOOLS_EXPERIMENTS_HH
#define PCSP_TOOLS_EXPERIMENTS_HH

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace pcsp::experiments
{
    struct Outcome
    {
        bool pass = false;
        std::string summary;
        nlohmann::json details = nlohmann::json::object();
        double seconds = 0;
    };

    struct Options
    {
        std::uint64_t node_budget = 0;
    };

    struct Experiment
    {
        std::string name;
        // acceptance criterion number, 0 for extras
        unsigned criterion;
        std::string title;
        std::function<Outcome (const Options &)> run;
    };

    auto registry() -> const std::vector<Experiment> &;
    auto find(const std::string & name) -> const Experiment *;

    // runs and times one experiment; exceptions become a failed outcome
    auto run(const Experiment & e, const Options & options) -> Outcome;

    // runs the selection on up to `jobs` threads, results in selection order
    auto run_all(const std::vector<const Experiment *> & selection, const Options & options, unsigned jobs) -> std::vector<Outcome>;
}

#endif
