#include "cfspectra/cli_reports.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfspectra/cf_core.hpp"
#include "cfspectra/config.hpp"
#include "cfspectra/dimension_tools.hpp"
#include "cfspectra/errors.hpp"

namespace cfspectra {

namespace {

std::string fmt_double(double v) {
    if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct Asserts {
    ordered_json arr = ordered_json::array();
    void add(const std::string& name, bool pass,
             std::optional<std::size_t> witness = std::nullopt) {
        ordered_json a;
        a["name"] = name;
        a["pass"] = pass;
        if (witness) a["witness_index"] = *witness;
        arr.push_back(std::move(a));
    }
};

struct HandlerOut {
    ordered_json rep;
    std::string csv;
};

ordered_json report_shell(const std::string& command, ordered_json config) {
    ordered_json rep;
    rep["schema"] = kReportSchema;
    rep["command"] = command;
    rep["config"] = std::move(config);
    return rep;
}

[[noreturn]] void usage(const std::string& msg) { throw UsageError(msg); }

GrowthFunction need_growth(const RunConfig& cfg) {
    if (cfg.growth.empty()) usage("command requires --growth");
    return parse_growth(cfg.growth);
}

Rational parse_rational_arg(const std::string& text, const char* what) {
    try {
        return parse_rational(text);
    } catch (const Error&) {
        usage(std::string("cannot parse ") + what + ": '" + text + "'");
    }
}

std::size_t pick(std::size_t v, std::size_t dflt) { return v ? v : dflt; }

long working_bits() { return static_cast<long>(Precision::working()); }

// Certified "not certainly greater": the weak ordering used for soft checks
// on interval-only quantities.
bool not_certainly_gt(const Real& a, const Real& b) {
    return !b.enc_ref().certainly_lt(a.enc_ref());
}

HandlerOut cmd_expand(const RunConfig& cfg) {
    if (cfg.x.empty()) usage("expand requires --x <rational in (0,1)>");
    Rational x = parse_rational_arg(cfg.x, "--x");
    if (x <= 0 || x >= 1) usage("--x must lie strictly between 0 and 1");
    const std::size_t terms =
        cfg.n_max ? cfg.n_max : std::numeric_limits<std::size_t>::max();

    std::vector<BigInt> word = cf_expand(x, terms);
    const bool complete = cf_value(word) == x;
    Cylinder cyl = make_cylinder(word);

    ordered_json config;
    config["x"] = cfg.x;
    if (cfg.n_max) config["n_max"] = cfg.n_max;
    ordered_json rep = report_shell("expand", std::move(config));

    ordered_json quot = ordered_json::array();
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < word.size(); ++i) {
        quot.push_back(word[i].get_str());
        rows.push_back({std::to_string(i + 1), word[i].get_str()});
    }

    ordered_json summary;
    summary["length"] = word.size();
    summary["complete"] = complete;
    summary["cylinder_left"] = rational_string(cyl.left);
    summary["cylinder_right"] = rational_string(cyl.right);
    summary["cylinder_length"] = rational_string(cyl.length);
    rep["summary"] = std::move(summary);
    rep["series"] = ordered_json{{"quotients", quot}};

    Asserts as;
    as.add("cylinder_contains_x", cyl.left <= x && x <= cyl.right);
    as.add("canonical_last_quotient",
           !complete || word.size() <= 1 || word.back() >= 2);
    rep["assertions"] = std::move(as.arr);
    rep["provenance"] = ordered_json{{"precision_bits", working_bits()}};

    return {std::move(rep), series_csv("n,a_n", rows)};
}

HandlerOut cmd_exponents(const RunConfig& cfg) {
    GrowthFunction g = need_growth(cfg);
    std::size_t horizon = pick(cfg.horizon, 1024);
    bool clamped = false;
    if (auto lim = g.domain_limit(); lim && horizon > *lim) {
        horizon = *lim;
        clamped = true;
    }
    if (horizon < 4) usage("--horizon too small for exponent windows");
    ExponentReport er = exponents(g, horizon);

    ordered_json config{{"growth", cfg.growth}, {"horizon", horizon}};
    ordered_json rep = report_shell("exponents", std::move(config));

    ordered_json summary;
    summary["b_hat"] = log_value_json(er.b_hat);
    summary["B_hat"] = log_value_json(er.B_hat);
    summary["beta_hat"] = log_value_json(er.beta_hat);
    summary["beta_arg"] = er.beta_arg;
    if (auto ke = g.known_exponents()) {
        summary["known_log_b"] = real_json(ke->log_b);
        summary["known_log_B"] = real_json(ke->log_B);
        summary["known_beta"] = log_value_json(ke->beta);
    }
    rep["summary"] = std::move(summary);

    ordered_json windows = ordered_json::array();
    std::vector<std::vector<std::string>> rows;
    bool inf_le_sup = true;
    for (const auto& w : er.tail_series) {
        const double wi = w.inf_log_ratio.approx();
        const double ws = w.sup_log_ratio.approx();
        const double st = w.step_sup.ln().approx();
        windows.push_back(ordered_json{{"lo", w.lo},
                                       {"hi", w.hi},
                                       {"ln_ratio_inf", wi},
                                       {"ln_ratio_sup", ws},
                                       {"ln_step_sup", st},
                                       {"step_sup_arg", w.step_sup_arg}});
        rows.push_back({std::to_string(w.lo), std::to_string(w.hi),
                        fmt_double(wi), fmt_double(ws), fmt_double(st)});
        inf_le_sup = inf_le_sup &&
                     not_certainly_gt(w.inf_log_ratio, w.sup_log_ratio);
    }
    rep["series"] = ordered_json{{"windows", std::move(windows)}};

    Asserts as;
    as.add("window_inf_le_sup", inf_le_sup);
    rep["assertions"] = std::move(as.arr);
    rep["provenance"] = ordered_json{{"precision_bits", working_bits()},
                                     {"horizon_clamped", clamped}};

    return {std::move(rep),
            series_csv("lo,hi,ln_ratio_inf,ln_ratio_sup,ln_step_sup", rows)};
}

HandlerOut cmd_envelope(const RunConfig& cfg) {
    GrowthFunction g = need_growth(cfg);
    std::size_t n_max = pick(cfg.n_max, 200);
    if (auto lim = g.domain_limit(); lim && n_max > *lim) n_max = *lim;

    const std::string mode = cfg.mode.empty() ? "min-tail" : cfg.mode;
    Envelope::Kind kind;
    if (mode == "min-tail")
        kind = Envelope::Kind::MinTail;
    else if (mode == "max-prefix")
        kind = Envelope::Kind::MaxPrefix;
    else
        usage("--mode must be min-tail or max-prefix");

    std::size_t horizon = std::max(pick(cfg.horizon, n_max), n_max);
    if (auto lim = g.domain_limit(); lim && horizon > *lim) horizon = *lim;
    const bool allow_finite = g.family() == GrowthFunction::Family::Table ||
                              g.family() == GrowthFunction::Family::Custom;

    Envelope env = envelope(g, kind, n_max, horizon, allow_finite);
    EquivalenceReport eq = equiv_check(g, env, n_max);

    ordered_json config{{"growth", cfg.growth},
                        {"mode", mode},
                        {"n_max", n_max},
                        {"horizon", horizon}};
    ordered_json rep = report_shell("envelope", std::move(config));

    std::vector<bool> touch(n_max + 1, false);
    for (std::size_t t : env.touch_indices) touch[t] = true;

    ordered_json phi = ordered_json::array();
    std::vector<std::vector<std::string>> rows;
    for (std::size_t n = 1; n <= n_max; ++n) {
        std::string ln_phi = env.values[n - 1].ln().enc_ref().mid_string();
        phi.push_back(ordered_json{{"n", n},
                                   {"ln_phi", ln_phi},
                                   {"touch", touch[n]}});
        rows.push_back({std::to_string(n), ln_phi, touch[n] ? "1" : "0"});
    }
    rep["series"] = ordered_json{{"phi", std::move(phi)}};

    ordered_json summary;
    summary["kind"] = mode;
    summary["touch_count"] = eq.touch_count;
    summary["max_touch_gap"] = eq.max_touch_gap;
    summary["finite_horizon_flagged"] = env.finite_horizon_flagged;
    rep["summary"] = std::move(summary);

    Asserts as;
    as.add("envelope_side_correct", eq.ratios_bounded);
    as.add("touches_recur", eq.touches_recur);
    rep["assertions"] = std::move(as.arr);
    rep["provenance"] = ordered_json{{"precision_bits", working_bits()},
                                     {"horizon_used", env.horizon_used}};

    return {std::move(rep), series_csv("n,ln_phi,touch", rows)};
}

HandlerOut cmd_witness(const RunConfig& cfg) {
    GrowthFunction g = need_growth(cfg);
    const std::size_t n_max = pick(cfg.n_max, 200);

    const std::string mode = cfg.mode.empty() ? "upper" : cfg.mode;
    WitnessMode m;
    if (mode == "upper")
        m = WitnessMode::UpperLimsup;
    else if (mode == "lower")
        m = WitnessMode::LowerLiminf;
    else
        usage("--mode must be upper or lower");

    WitnessPoint w = build_witness(g, m, n_max);

    ordered_json config{{"growth", cfg.growth}, {"mode", mode}, {"n_max", n_max}};
    ordered_json rep = report_shell("witness", std::move(config));

    ordered_json pts = ordered_json::array();
    std::vector<std::vector<std::string>> rows;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const Real& r = w.ratio_series[n - 1];
        const double ld = w.digits[n - 1].approx_log();
        pts.push_back(ordered_json{{"n", n},
                                   {"alpha", w.alpha[n - 1].get_str()},
                                   {"ln_digit", ld},
                                   {"ratio", r.approx()},
                                   {"ratio_lo", r.enc_ref().lo_string()},
                                   {"ratio_hi", r.enc_ref().hi_string()}});
        rows.push_back({std::to_string(n), w.alpha[n - 1].get_str(),
                        fmt_double(ld), fmt_double(r.approx())});
    }
    rep["series"] = ordered_json{{"points", std::move(pts)}};

    const double width = w.ratio_series.back().enc_ref().width_double();
    ordered_json summary;
    summary["mode"] = mode;
    summary["unit_alpha"] = w.unit_alpha;
    summary["touch_count"] = w.touch_indices.size();
    summary["tail_ratio_bounds"] = interval_json(w.tail_ratio_bounds);
    summary["final_ratio"] = real_json(w.ratio_series.back());
    summary["final_ratio_width"] = width;
    rep["summary"] = std::move(summary);

    Asserts as;
    as.add("ratio_certified_narrow", width < 1e-6);
    rep["assertions"] = std::move(as.arr);
    rep["provenance"] = ordered_json{{"precision_bits", working_bits()}};

    return {std::move(rep), series_csv("n,alpha,ln_digit,ratio", rows)};
}

HandlerOut cmd_seq_b(const RunConfig& cfg) {
    GrowthFunction g = need_growth(cfg);
    const std::size_t n_max = pick(cfg.n_max, 1000);
    Rational eps = parse_rational_arg(cfg.epsilon, "--epsilon");

    SeqB s = build_seq_b(g, eps, n_max);

    ordered_json config{{"growth", cfg.growth},
                        {"epsilon", rational_string(eps)},
                        {"n_max", n_max}};
    ordered_json rep = report_shell("seq-b", std::move(config));

    std::vector<bool> touch(n_max + 1, false);
    for (std::size_t t : s.touch_indices) touch[t] = true;

    ordered_json ser = ordered_json::array();
    std::vector<std::vector<std::string>> rows;
    for (std::size_t n = 1; n <= n_max; ++n) {
        std::string lb = s.log_B[n - 1].enc_ref().mid_string();
        ser.push_back(
            ordered_json{{"n", n}, {"log_B", lb}, {"touch", touch[n]}});
        rows.push_back({std::to_string(n), lb, touch[n] ? "1" : "0"});
    }
    rep["series"] = ordered_json{{"log_B", std::move(ser)}};

    // Structural floor for the dimension bound: 1/(b+1+eps) minus slack.
    Rational thr = Rational(1) / (s.b_used + 1 + eps) - Rational(1, 1000000000);

    ordered_json summary;
    summary["b_used"] = rational_string(s.b_used);
    summary["b_estimated"] = s.b_estimated;
    summary["touch_count"] = s.touch_indices.size();
    summary["touch_windows_ok"] = s.touch_windows_ok;
    if (!s.touch_windows_ok) summary["first_bad_window"] = s.first_bad_window;
    summary["sup_ratio"] = real_json(s.sup_ratio);
    summary["dim_lower_bound"] = real_json(s.dim_lower_bound);
    summary["dim_floor"] = rational_string(thr);
    rep["summary"] = std::move(summary);

    Asserts as;
    as.add("touch_windows", s.touch_windows_ok,
           s.touch_windows_ok ? std::nullopt
                              : std::optional<std::size_t>(s.first_bad_window));
    as.add("dim_ge_structural_bound",
           Real::compare_fast(s.dim_lower_bound, Real::of_rational(thr)) >= 0);
    rep["assertions"] = std::move(as.arr);
    rep["provenance"] = ordered_json{{"precision_bits", working_bits()}};

    return {std::move(rep), series_csv("n,log_B,touch", rows)};
}

HandlerOut cmd_seq_t(const RunConfig& cfg) {
    GrowthFunction g = need_growth(cfg);
    const std::size_t j_max = pick(cfg.n_max, 200);
    Rational eps = parse_rational_arg(cfg.epsilon, "--epsilon");

    SeqT t = build_seq_t(g, eps, j_max);

    ordered_json config{{"growth", cfg.growth},
                        {"epsilon", rational_string(eps)},
                        {"n_max", j_max}};
    ordered_json rep = report_shell("seq-t", std::move(config));

    ordered_json ser = ordered_json::array();
    std::vector<std::vector<std::string>> rows;
    for (std::size_t j = 1; j <= j_max; ++j) {
        std::string lt = t.log_T[j - 1].enc_ref().mid_string();
        const double ratio = t.ratio_series[j - 1].approx();
        ser.push_back(ordered_json{{"j", j},
                                   {"t_j", t.t[j - 1]},
                                   {"log_T", lt},
                                   {"ratio", ratio}});
        rows.push_back({std::to_string(j), std::to_string(t.t[j - 1]), lt,
                        fmt_double(ratio)});
    }
    rep["series"] = ordered_json{{"log_T", std::move(ser)}};

    Rational thr = Rational(1) / (t.B_used + 1 + eps) - Rational(1, 1000000000);

    ordered_json summary;
    summary["B_used"] = rational_string(t.B_used);
    summary["cert_start"] = t.cert_start;
    summary["cert_horizon"] = t.cert_horizon;
    summary["sup_step_ratio"] = real_json(t.sup_step_ratio);
    summary["dim_lower_bound"] = real_json(t.dim_lower_bound);
    summary["dim_floor"] = rational_string(thr);
    summary["tail_ratio_inf"] = real_json(t.tail_ratio_inf);
    rep["summary"] = std::move(summary);

    Asserts as;
    as.add("tail_ratio_within_5pc",
           Real::compare_fast(t.tail_ratio_inf,
                              Real::of_rational(Rational(19, 20))) >= 0 &&
               Real::compare_fast(t.tail_ratio_inf,
                                  Real::of_rational(Rational(21, 20))) <= 0);
    as.add("dim_ge_structural_bound",
           Real::compare_fast(t.dim_lower_bound, Real::of_rational(thr)) >= 0);
    rep["assertions"] = std::move(as.arr);
    rep["provenance"] = ordered_json{{"precision_bits", working_bits()}};

    return {std::move(rep), series_csv("j,t_j,log_T,ratio", rows)};
}

HandlerOut cmd_sample_e(const RunConfig& cfg) {
    if (cfg.target.empty()) usage("sample-e requires --target");
    TargetSequence ts = parse_target(cfg.target);
    const std::size_t depth = pick(cfg.depth, 50);
    const std::size_t count = pick(cfg.count, 10);

    SampleESet se = sample_E_set(ts, depth, count, cfg.seed);

    bool member_ok = true;
    std::size_t bad_point = 0, bad_digit = 0;
    for (std::size_t p = 0; p < count && member_ok; ++p) {
        for (std::size_t k = 1; k <= depth; ++k) {
            if (!digit_in_target_range(se.points[p].quotient(k), ts.s(k))) {
                member_ok = false;
                bad_point = p;
                bad_digit = k;
                break;
            }
        }
    }

    ordered_json config{{"target", cfg.target},
                        {"depth", depth},
                        {"count", count},
                        {"seed", cfg.seed}};
    ordered_json rep = report_shell("sample-e", std::move(config));

    ordered_json ser = ordered_json::array();
    std::vector<std::vector<std::string>> rows;
    for (std::size_t n = 1; n <= depth; ++n) {
        std::string ln_s = ts.s(n).ln().enc_ref().mid_string();
        const double div = n - 1 < se.divergence_series.size()
                               ? se.divergence_series[n - 1]
                               : 0.0;
        ordered_json e{{"n", n}, {"ln_s", ln_s}, {"divergence", div}};
        if (n - 1 < se.dim_series.size()) e["dim"] = se.dim_series[n - 1];
        ser.push_back(std::move(e));
        rows.push_back({std::to_string(n), ln_s, fmt_double(div)});
    }
    rep["series"] = ordered_json{{"targets", std::move(ser)}};

    ordered_json summary;
    summary["target"] = se.target_id;
    summary["membership_checked"] = count * depth;
    summary["ratio_tail_sup"] = real_json(se.ratio_tail_sup);
    summary["dim_value"] = real_json(se.dim_value);
    rep["summary"] = std::move(summary);

    Asserts as;
    as.add("membership_exact", member_ok,
           member_ok ? std::nullopt
                     : std::optional<std::size_t>(bad_point * depth + bad_digit));
    rep["assertions"] = std::move(as.arr);
    rep["provenance"] = ordered_json{{"precision_bits", working_bits()}};

    return {std::move(rep), series_csv("n,ln_s,divergence", rows)};
}

HandlerOut cmd_covering(const RunConfig& cfg) {
    Rational eps = parse_rational_arg(cfg.epsilon, "--epsilon");
    Rational K = parse_rational_arg(cfg.K, "--K");
    const std::size_t zeta_terms = pick(cfg.horizon, 10000);
    const std::size_t N = pick(cfg.n_max, 10);

    CoveringParams p = make_covering_params(eps, K, zeta_terms);
    if (!p.gate_ok) {
        throw GateError("covering gate violated: K^eps in [" +
                        p.K_pow_eps.lo_string() + ", " + p.K_pow_eps.hi_string() +
                        "] does not certifiably exceed 2*M_eps, M_eps in [" +
                        p.M_eps.lo_string() + ", " + p.M_eps.hi_string() + "]");
    }
    CoveringBound cb = covering_bound(p, N);

    const unsigned long cap1 = 20000, cap2 = 300;
    Interval brute1 = brute_covering_term(1, K, p.s, cap1);
    Interval brute2 = brute_covering_term(2, K, p.s, cap2);
    Interval chain1 = cb.ratio;
    Interval chain2 = cb.ratio * cb.ratio;
    const bool brute_ok =
        brute1.certainly_le(chain1) && brute2.certainly_le(chain2);

    ordered_json config{{"epsilon", rational_string(eps)},
                        {"K", rational_string(K)},
                        {"N", N},
                        {"zeta_terms", zeta_terms}};
    ordered_json rep = report_shell("covering", std::move(config));

    ordered_json terms = ordered_json::array();
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < cb.terms.size(); ++i) {
        const std::size_t n = N + i;
        terms.push_back(ordered_json{{"n", n},
                                     {"lo", cb.terms[i].lo_string()},
                                     {"hi", cb.terms[i].hi_string()}});
        rows.push_back({std::to_string(n), cb.terms[i].lo_string(),
                        cb.terms[i].hi_string()});
    }
    rep["series"] = ordered_json{{"chain_terms", std::move(terms)}};

    ordered_json summary;
    summary["s"] = rational_string(p.s);
    summary["M_eps"] = interval_json(p.M_eps);
    summary["K_pow_eps"] = interval_json(p.K_pow_eps);
    summary["ratio"] = interval_json(cb.ratio);
    summary["tail_value"] = interval_json(cb.value);
    summary["coarse"] = rational_string(cb.coarse);
    summary["brute_n1"] = interval_json(brute1);
    summary["brute_n2"] = interval_json(brute2);
    summary["brute_caps"] = ordered_json::array({cap1, cap2});
    rep["summary"] = std::move(summary);

    Asserts as;
    as.add("chain_terms_le_dyadic", cb.chain_ok);
    as.add("tail_le_coarse", cb.coarse_ok);
    as.add("brute_le_chain", brute_ok);
    rep["assertions"] = std::move(as.arr);
    rep["provenance"] = ordered_json{{"precision_bits", working_bits()},
                                     {"zeta_terms", zeta_terms}};

    return {std::move(rep), series_csv("n,term_lo,term_hi", rows)};
}

HandlerOut cmd_dims(const RunConfig& cfg) {
    if (!cfg.target.empty()) {
        TargetSequence ts = parse_target(cfg.target);
        const std::size_t depth = pick(cfg.depth, 1000);
        Lemma24Report l = lemma24_dim(ts, depth);

        ordered_json config{{"target", cfg.target}, {"depth", depth}};
        ordered_json rep = report_shell("dims", std::move(config));

        ordered_json ser = ordered_json::array();
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < l.ratio_series.size(); ++i) {
            ser.push_back(l.ratio_series[i]);
            rows.push_back({std::to_string(i + 1), fmt_double(l.ratio_series[i])});
        }
        rep["series"] = ordered_json{{"ratios", std::move(ser)}};

        ordered_json summary;
        summary["target"] = ts.id;
        summary["tail_sup"] = real_json(l.tail_sup);
        summary["value"] = real_json(l.value);
        rep["summary"] = std::move(summary);

        Asserts as;
        as.add("value_at_most_half",
               Real::compare_fast(l.value,
                                  Real::of_rational(Rational(1, 2))) <= 0);
        rep["assertions"] = std::move(as.arr);
        rep["provenance"] = ordered_json{{"precision_bits", working_bits()}};

        return {std::move(rep), series_csv("n,ratio", rows)};
    }

    GrowthFunction g = need_growth(cfg);
    Real b, B, beta;
    bool estimated = false;
    std::size_t horizon = 0;
    if (auto ke = g.known_exponents()) {
        b = LogValue::from_ln(ke->log_b).value_real();
        B = LogValue::from_ln(ke->log_B).value_real();
        beta = ke->beta.value_real();
    } else {
        estimated = true;
        horizon = pick(cfg.horizon, 1024);
        if (auto lim = g.domain_limit(); lim && horizon > *lim) horizon = *lim;
        ExponentReport er = exponents(g, horizon);
        b = er.b_hat.value_real();
        B = er.B_hat.value_real();
        beta = er.beta_hat.value_real();
    }
    const bool ordered =
        not_certainly_gt(b, B) && not_certainly_gt(B, beta);
    DimFormulas d =
        dim_formulas(ExtendedRate::finite(b), ExtendedRate::finite(B),
                     ExtendedRate::finite(beta), /*override_order=*/estimated);

    ordered_json config{{"growth", cfg.growth}};
    if (estimated) config["horizon"] = horizon;
    ordered_json rep = report_shell("dims", std::move(config));

    ordered_json summary;
    summary["estimated"] = estimated;
    summary["b"] = real_json(b);
    summary["B"] = real_json(B);
    summary["beta"] = real_json(beta);
    summary["dim_upper"] = real_json(d.dim_upper);
    summary["dim_lower"] = real_json(d.dim_lower);
    summary["dim_full"] = real_json(d.dim_full);
    rep["summary"] = std::move(summary);

    std::vector<std::vector<std::string>> rows;
    rows.push_back({"1", "upper", fmt_double(d.dim_upper.approx())});
    rows.push_back({"2", "lower", fmt_double(d.dim_lower.approx())});
    rows.push_back({"3", "full", fmt_double(d.dim_full.approx())});

    Asserts as;
    as.add("rates_ordered", ordered);
    as.add("dims_descending",
           not_certainly_gt(d.dim_lower, d.dim_upper) &&
               not_certainly_gt(d.dim_full, d.dim_lower));
    rep["assertions"] = std::move(as.arr);
    rep["provenance"] = ordered_json{{"precision_bits", working_bits()}};

    return {std::move(rep), series_csv("idx,name,dim", rows)};
}

HandlerOut dispatch(const RunConfig& cfg) {
    const std::string& c = cfg.command;
    if (c == "expand") return cmd_expand(cfg);
    if (c == "exponents") return cmd_exponents(cfg);
    if (c == "envelope") return cmd_envelope(cfg);
    if (c == "witness") return cmd_witness(cfg);
    if (c == "seq-b") return cmd_seq_b(cfg);
    if (c == "seq-t") return cmd_seq_t(cfg);
    if (c == "sample-e") return cmd_sample_e(cfg);
    if (c == "covering") return cmd_covering(cfg);
    if (c == "dims") return cmd_dims(cfg);
    if (c == "paper-example") return {staircase_example_report(), ""};
    if (c == "verify-all") {
        if (cfg.profile != "small" && cfg.profile != "standard")
            usage("--profile must be small or standard");
        return {verify_all_report(cfg.profile), ""};
    }
    usage("unknown command '" + c + "'");
}

ordered_json error_report(const RunConfig& cfg, const char* type,
                          const std::string& msg) {
    ordered_json rep;
    rep["schema"] = kReportSchema;
    rep["command"] = cfg.command;
    ordered_json config = ordered_json::object();
    if (!cfg.growth.empty()) config["growth"] = cfg.growth;
    if (!cfg.target.empty()) config["target"] = cfg.target;
    if (!cfg.x.empty()) config["x"] = cfg.x;
    if (!cfg.mode.empty()) config["mode"] = cfg.mode;
    if (!cfg.profile.empty()) config["profile"] = cfg.profile;
    rep["config"] = std::move(config);
    rep["error"] = ordered_json{{"type", type}, {"message", msg}};
    return rep;
}

} // namespace

RunResult run(const RunConfig& cfg) {
    RunResult out;
    try {
        if (cfg.precision_bits < 64 || cfg.precision_bits > 16384)
            throw UsageError("--precision-bits must lie in [64, 16384]");
        Precision::set_working(static_cast<mpfr_prec_t>(cfg.precision_bits));
        if (cfg.format != "json" && cfg.format != "csv")
            throw UsageError("--format must be json or csv");

        HandlerOut h = dispatch(cfg);
        std::string why;
        if (!validate_report(h.rep, &why))
            throw Error("internal: malformed report: " + why);
        if (cfg.format == "csv") {
            if (h.csv.empty())
                usage("command '" + cfg.command + "' has no csv form");
            out.csv = std::move(h.csv);
        }
        out.report = std::move(h.rep);
        for (const auto& a : out.report["assertions"]) {
            if (!a["pass"].get<bool>()) {
                out.exit_code = 1;
                break;
            }
        }
    } catch (const UsageError& e) {
        out.report = error_report(cfg, "usage", e.what());
        out.exit_code = 2;
    } catch (const GateError& e) {
        out.report = error_report(cfg, "gate", e.what());
        out.exit_code = 3;
    } catch (const IndistinguishableError& e) {
        out.report = error_report(cfg, "indistinguishable", e.what());
        out.exit_code = 3;
    } catch (const HorizonError& e) {
        out.report = error_report(cfg, "horizon", e.what());
        out.exit_code = 3;
    } catch (const BudgetError& e) {
        out.report = error_report(cfg, "budget", e.what());
        out.exit_code = 3;
    } catch (const Error& e) {
        out.report = error_report(cfg, "computation", e.what());
        out.exit_code = 3;
    }
    return out;
}

GrowthFunction parse_growth(const std::string& dsl) {
    const auto colon = dsl.find(':');
    const std::string head =
        colon == std::string::npos ? dsl : dsl.substr(0, colon);
    const std::string rest =
        colon == std::string::npos ? std::string() : dsl.substr(colon + 1);

    if (head == "factorial-blocks") {
        if (!rest.empty()) usage("factorial-blocks takes no parameters");
        return GrowthFunction::factorial_blocks();
    }
    if (head == "power") {
        if (rest.rfind("p=", 0) != 0)
            usage("power growth syntax: power:p=<rational>");
        return GrowthFunction::power(
            parse_rational_arg(rest.substr(2), "power exponent"));
    }
    if (head == "exp") {
        std::optional<Rational> c;
        Rational scale = 1;
        std::size_t pos = 0;
        while (pos <= rest.size() && !rest.empty()) {
            auto next = rest.find(',', pos);
            std::string tok = rest.substr(
                pos, next == std::string::npos ? std::string::npos : next - pos);
            if (tok.rfind("c=", 0) == 0)
                c = parse_rational_arg(tok.substr(2), "exponential base");
            else if (tok.rfind("scale=", 0) == 0)
                scale = parse_rational_arg(tok.substr(6), "exponential scale");
            else
                usage("exponential growth syntax: exp:c=<rational>[,scale=<rational>]");
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        if (!c) usage("exponential growth requires c=<rational>");
        return GrowthFunction::exponential(*c, scale);
    }
    if (head == "table") {
        if (rest.empty()) usage("table growth syntax: table:<csv-path>");
        return GrowthFunction::table(read_growth_table(rest));
    }
    usage("unknown growth '" + head +
          "' (expected power | exp | factorial-blocks | table)");
}

TargetSequence parse_target(const std::string& dsl) {
    const auto colon = dsl.find(':');
    const std::string head =
        colon == std::string::npos ? dsl : dsl.substr(0, colon);
    const std::string rest =
        colon == std::string::npos ? std::string() : dsl.substr(colon + 1);

    if (head == "identity") {
        if (!rest.empty()) usage("identity target takes no parameters");
        return TargetSequence::identity();
    }
    if (head == "const")
        return TargetSequence::constant(
            parse_rational_arg(rest, "constant target"));
    if (head == "geometric")
        return TargetSequence::geometric(
            parse_rational_arg(rest, "geometric ratio"));
    if (head == "exp-growth") {
        if (rest.empty()) usage("exp-growth target syntax: exp-growth:<growth>");
        return TargetSequence::exp_of_growth(parse_growth(rest));
    }
    usage("unknown target '" + head +
          "' (expected exp-growth | identity | const | geometric)");
}

} // namespace cfspectra
