#pragma once

#include <cstdint>
#include <string>

#include "cfspectra/growth_model.hpp"
#include "cfspectra/report.hpp"
#include "cfspectra/spectra_constructions.hpp"

namespace cfspectra {

// One invocation of the command-line surface. Every command reads only the
// fields it documents; unset numeric fields mean "use the command default".
struct RunConfig {
    std::string command;

    std::string growth;  // growth DSL: power:p=Q | exp:c=Q[,scale=Q] |
                         //             factorial-blocks | table:PATH
    std::string target;  // target DSL: exp-growth:GROWTH | identity |
                         //             const:Q | geometric:Q
    std::string x;       // rational in (0,1) for `expand`
    std::string mode;    // witness: upper|lower; envelope: min-tail|max-prefix

    std::size_t horizon = 0;
    std::size_t n_max = 0;
    std::size_t depth = 0;
    std::size_t count = 0;
    std::uint64_t seed = 1;
    std::string epsilon = "1/2";
    std::string K = "30";
    long precision_bits = 256;  // in [64, 16384]

    std::string profile = "small";  // verify-all: small | standard
    std::string format = "json";    // json | csv
    std::string output;             // handled by the caller, echoed nowhere
};

struct RunResult {
    ordered_json report;
    std::string csv;  // non-empty only when format == "csv"
    // 0 ok, 1 property assertion failed, 2 usage error, 3 computation error
    // (gate violation, undecidable comparison, horizon/budget exhausted).
    int exit_code = 0;
};

RunResult run(const RunConfig& cfg);

GrowthFunction parse_growth(const std::string& dsl);
TargetSequence parse_target(const std::string& dsl);

// The worked staircase example (growth alternating between bases 3 and 4 on
// factorial-length blocks): exact step-ratio cap on the early blocks,
// certified endpoint estimates converging on log 4 / log 3, and the three
// dimension values 1/4, 1/5, 1/16.
ordered_json staircase_example_report();

// Cross-module property sweep; profile "small" trades depth for speed,
// "standard" runs the full-depth parameter set.
ordered_json verify_all_report(const std::string& profile);

} // namespace cfspectra
