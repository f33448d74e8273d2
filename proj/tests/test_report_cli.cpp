#include <doctest.h>

#include <cfspectra/cli_reports.hpp>
#include <cfspectra/errors.hpp>
#include <cfspectra/report.hpp>

#include <cstdio>
#include <fstream>
#include <string>

using namespace cfspectra;

namespace {

RunConfig base(const std::string& command) {
    RunConfig cfg;
    cfg.command = command;
    return cfg;
}

// Writes content to a unique temp file, removed on destruction.
struct TempFile {
    std::string path;
    explicit TempFile(const std::string& content, const char* tag) {
        path = std::string("cfspectra_test_") + tag + ".csv";
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("expansion command reports the digits and survives validation") {
    RunConfig cfg = base("expand");
    cfg.x = "113/355";
    RunResult res = run(cfg);
    REQUIRE(res.exit_code == 0);
    std::string why;
    CHECK(validate_report(res.report, &why));
    CHECK(res.report["schema"] == kReportSchema);
    CHECK(res.report["command"] == "expand");
    CHECK(res.report["summary"]["length"] == 3);
    CHECK(res.report["summary"]["complete"] == true);
    auto& digits = res.report["series"]["quotients"];
    REQUIRE(digits.size() == 3);
    CHECK(digits[0] == "3");
    CHECK(digits[1] == "7");
    CHECK(digits[2] == "16");
    for (auto& a : res.report["assertions"]) CHECK(a["pass"] == true);

    cfg.format = "csv";
    RunResult csv = run(cfg);
    REQUIRE(csv.exit_code == 0);
    CHECK(csv.csv.rfind("n,", 0) == 0);
    CHECK(csv.csv.find("\n1,3") != std::string::npos);
}

TEST_CASE("usage failures exit 2 with an error envelope") {
    for (RunConfig cfg : {[] {
             RunConfig c = base("expand");
             c.x = "7/5";  // outside (0,1)
             return c;
         }(),
                          [] {
                              RunConfig c = base("no-such-command");
                              return c;
                          }(),
                          [] {
                              RunConfig c = base("exponents");
                              c.growth = "power:p=oops";
                              return c;
                          }(),
                          [] {
                              RunConfig c = base("dims");
                              c.growth = "factorial-blocks";
                              c.precision_bits = 10;
                              return c;
                          }(),
                          [] {
                              RunConfig c = base("verify-all");
                              c.profile = "huge";
                              return c;
                          }(),
                          [] {
                              RunConfig c = base("paper-example");
                              c.format = "csv";  // no csv form
                              return c;
                          }()}) {
        RunResult res = run(cfg);
        CHECK(res.exit_code == 2);
        REQUIRE(res.report.contains("error"));
        CHECK(res.report["error"]["type"] == "usage");
        std::string why;
        CHECK(validate_report(res.report, &why));
    }
}

TEST_CASE("computation failures exit 3 with their own error types") {
    RunConfig cfg = base("covering");
    cfg.K = "25";  // gate K^eps > 2 M fails
    RunResult res = run(cfg);
    CHECK(res.exit_code == 3);
    CHECK(res.report["error"]["type"] == "gate");
}

TEST_CASE("dimension command reports the three spectrum values") {
    RunConfig cfg = base("dims");
    cfg.growth = "factorial-blocks";
    RunResult res = run(cfg);
    REQUIRE(res.exit_code == 0);
    auto& s = res.report["summary"];
    CHECK(s["dim_upper"]["rational"] == "1/4");
    CHECK(s["dim_lower"]["rational"] == "1/5");
    CHECK(s["dim_full"]["rational"] == "1/16");

    RunConfig tg = base("dims");
    tg.target = "geometric:2";
    tg.depth = 200;
    RunResult rt = run(tg);
    REQUIRE(rt.exit_code == 0);
    CHECK(rt.report["summary"]["value"]["rational"] == "101/204");
}

TEST_CASE("growth tables round-trip through the file format") {
    TempFile good("n,ln_psi\n1,1\n2,2\n3,9/2\n4,8\n", "good");
    auto vals = read_growth_table(good.path);
    REQUIRE(vals.size() == 4);
    CHECK(vals[2].ln().eq(Real::of_rational(Rational(9, 2))));

    GrowthFunction g = parse_growth("table:" + good.path);
    CHECK(g.domain_limit().value() == 4);
    CHECK(g.eval(4).ln().eq(Real::of_long(8)));

    TempFile gap("n,ln_psi\n1,1\n3,2\n", "gap");
    CHECK_THROWS_AS(read_growth_table(gap.path), UsageError);
    TempFile header("m,ln\n1,1\n", "hdr");
    CHECK_THROWS_AS(read_growth_table(header.path), UsageError);
    CHECK_THROWS_AS(read_growth_table("definitely_missing.csv"), UsageError);
}

TEST_CASE("series csv enforces its monotone index contract") {
    std::string ok = series_csv("n,v", {{"1", "a"}, {"2", "b"}});
    CHECK(ok == "n,v\n1,a\n2,b\n");
    CHECK_THROWS_AS(series_csv("n,v", {{"2", "a"}, {"2", "b"}}), UsageError);
    CHECK_THROWS_AS(series_csv("n,v", {{"1", "a", "extra"}}), UsageError);
}

TEST_CASE("json leaves carry certified enclosures") {
    ordered_json rj = real_json(Real::of_rational(Rational(22, 7)));
    CHECK(rj["rational"] == "22/7");
    CHECK(rj.contains("lo"));
    CHECK(rj.contains("hi"));

    ordered_json lj = log_value_json(LogValue::of_bigint(BigInt(336)));
    CHECK(lj["value"] == "336");
    REQUIRE(lj.contains("exact_form"));
    // 336 = 2^4 * 3 * 7
    bool saw2 = false, saw3 = false, saw7 = false;
    for (auto& t : lj["exact_form"]) {
        if (t[0] == 2) saw2 = (t[1] == "4" && t[2] == "1");
        if (t[0] == 3) saw3 = (t[1] == "1" && t[2] == "1");
        if (t[0] == 7) saw7 = (t[1] == "1" && t[2] == "1");
    }
    CHECK(saw2);
    CHECK(saw3);
    CHECK(saw7);

    ordered_json ij = interval_json(Interval::of_long(5));
    CHECK(ij.contains("lo"));
    CHECK(ij.contains("approx"));
}

TEST_CASE("report validation rejects malformed envelopes") {
    ordered_json bad1 = {{"command", "x"}};
    std::string why;
    CHECK_FALSE(validate_report(bad1, &why));
    CHECK_FALSE(why.empty());

    ordered_json bad2 = {{"schema", kReportSchema},
                         {"command", "x"},
                         {"config", ordered_json::object()},
                         {"summary", ordered_json::object()},
                         {"assertions", ordered_json::array({ordered_json{{"name", "n"}}})}};
    CHECK_FALSE(validate_report(bad2, &why));

    bad2["assertions"][0]["pass"] = true;
    CHECK(validate_report(bad2, &why));
}

TEST_CASE("identical configurations produce byte-identical reports") {
    RunConfig cfg = base("seq-b");
    cfg.growth = "power:p=2";
    cfg.n_max = 50;
    // Power-law windows miss touches early, so the run reports a failed
    // assertion; the bytes must still be identical across runs.
    RunResult a = run(cfg), b = run(cfg);
    CHECK(a.exit_code == 1);
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.report.dump(2) == b.report.dump(2));

    RunConfig w = base("witness");
    w.growth = "exp:c=2";
    w.n_max = 60;
    RunResult wa = run(w), wb = run(w);
    CHECK(wa.exit_code == 0);
    CHECK(wa.report.dump(2) == wb.report.dump(2));
}

TEST_CASE("worked staircase example assertions all pass") {
    ordered_json rep = staircase_example_report();
    std::string why;
    CHECK(validate_report(rep, &why));
    CHECK(rep["command"] == "paper-example");
    for (auto& a : rep["assertions"]) CHECK(a["pass"] == true);
    CHECK(rep["summary"]["dim_upper"]["rational"] == "1/4");
    CHECK(rep["summary"]["dim_lower"]["rational"] == "1/5");
    CHECK(rep["summary"]["dim_full"]["rational"] == "1/16");
}

TEST_CASE("cli parsers accept the documented growth and target forms") {
    CHECK(parse_growth("factorial-blocks").family() ==
          GrowthFunction::Family::FactorialBlocks);
    CHECK(parse_growth("power:p=3/2").family() == GrowthFunction::Family::Power);
    CHECK(parse_growth("exp:c=2,scale=3").eval(1).as_rational().value() == 6);
    CHECK_THROWS_AS(parse_growth("power:q=2"), UsageError);
    CHECK_THROWS_AS(parse_growth(""), UsageError);
    CHECK_THROWS_AS(parse_growth("exp:c=1"), UsageError);

    CHECK(parse_target("identity").s(7).as_rational().value() == 7);
    CHECK(parse_target("const:3").s(2).as_rational().value() == 3);
    CHECK(parse_target("geometric:3/2").s(2).as_rational().value() == Rational(9, 4));
    CHECK(parse_target("exp-growth:exp:c=2").s(3).ln().eq(Real::of_long(8)));
    CHECK_THROWS_AS(parse_target("nope"), UsageError);
}
