#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "cfspectra/cli_reports.hpp"

namespace {

void add_common(CLI::App* sub, cfspectra::RunConfig& cfg, std::string& output) {
    sub->add_option("--precision-bits", cfg.precision_bits,
                    "working interval precision in bits, in [64, 16384]");
    sub->add_option("--format", cfg.format, "report format: json or csv");
    sub->add_option("--output", output, "write the report to this path");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"constructions and dimension bounds for fast-growing "
                 "continued-fraction digit averages"};
    app.require_subcommand(1);

    cfspectra::RunConfig cfg;
    std::string output;

    const auto sub = [&](const char* name, const char* help) {
        CLI::App* s = app.add_subcommand(name, help);
        s->callback([&cfg, name] { cfg.command = name; });
        add_common(s, cfg, output);
        return s;
    };
    const auto growth = [&](CLI::App* s) {
        s->add_option("--growth", cfg.growth,
                      "growth DSL: power:p=Q | exp:c=Q[,scale=Q] | "
                      "factorial-blocks | table:PATH");
    };

    {
        CLI::App* s = sub("expand", "canonical continued fraction of a rational");
        s->add_option("--x", cfg.x, "rational in (0,1)");
        s->add_option("--n-max", cfg.n_max, "truncate the expansion (default: full)");
    }
    {
        CLI::App* s = sub("exponents", "finite-horizon growth exponent estimates");
        growth(s);
        s->add_option("--horizon", cfg.horizon, "estimation horizon (default 1024)");
    }
    {
        CLI::App* s = sub("envelope", "monotone envelope and touch set");
        growth(s);
        s->add_option("--mode", cfg.mode, "min-tail (default) or max-prefix");
        s->add_option("--n-max", cfg.n_max, "envelope length (default 200)");
        s->add_option("--horizon", cfg.horizon, "tail horizon (default n-max)");
    }
    {
        CLI::App* s = sub("witness", "digit sequence tracking the envelope");
        growth(s);
        s->add_option("--mode", cfg.mode, "upper (default) or lower");
        s->add_option("--n-max", cfg.n_max, "witness length (default 200)");
    }
    {
        CLI::App* s = sub("seq-b", "doubling-capped envelope follower");
        growth(s);
        s->add_option("--epsilon", cfg.epsilon, "cap slack (default 1/2)");
        s->add_option("--n-max", cfg.n_max, "sequence length (default 1000)");
    }
    {
        CLI::App* s = sub("seq-t", "max-of-columns majorant sequence");
        growth(s);
        s->add_option("--epsilon", cfg.epsilon, "decay slack (default 1/2)");
        s->add_option("--n-max", cfg.n_max, "number of columns (default 200)");
    }
    {
        CLI::App* s = sub("sample-e", "sample points of the two-sided digit set");
        s->add_option("--target", cfg.target,
                      "target DSL: exp-growth:GROWTH | identity | const:Q | "
                      "geometric:Q");
        s->add_option("--depth", cfg.depth, "digits per point (default 50)");
        s->add_option("--count", cfg.count, "number of points (default 10)");
        s->add_option("--seed", cfg.seed, "master seed (default 1)");
    }
    {
        CLI::App* s = sub("covering", "certified covering-sum tail bound");
        s->add_option("--epsilon", cfg.epsilon, "exponent slack (default 1/2)");
        s->add_option("--K", cfg.K, "digit-product threshold base (default 30)");
        s->add_option("--n-max", cfg.n_max, "tail start index (default 10)");
        s->add_option("--horizon", cfg.horizon, "zeta partial-sum terms (default 10000)");
    }
    {
        CLI::App* s = sub("dims", "dimension values from rates or a target");
        growth(s);
        s->add_option("--target", cfg.target, "target DSL (tail-window route)");
        s->add_option("--depth", cfg.depth, "target route depth (default 1000)");
        s->add_option("--horizon", cfg.horizon,
                      "estimation horizon for table growths (default 1024)");
    }
    sub("paper-example", "worked staircase growth example with frozen constants");
    {
        CLI::App* s = sub("verify-all", "cross-module property sweep");
        s->add_option("--profile", cfg.profile, "small (default) or standard");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const cfspectra::RunResult res = cfspectra::run(cfg);
    const std::string body =
        !res.csv.empty() ? res.csv : res.report.dump(2) + "\n";

    if (output.empty()) {
        std::fwrite(body.data(), 1, body.size(), stdout);
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) {
            std::cerr << "cannot open --output path: " << output << "\n";
            return 2;
        }
        out << body;
    }
    return res.exit_code;
}
