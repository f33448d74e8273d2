#include "cfspectra/spectra_constructions.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include "cfspectra/errors.hpp"

namespace cfspectra {

namespace {

int cmp_fast(const Real& a, const Real& b) { return Real::compare_fast(a, b); }

const Real& exact_log_threshold() {
    static const Real t = Real::of_exact(
        LogCombo::prime_log(2, Rational(PartialQuotient::kExactLogBits)));
    return t;
}

// floor(sqrt(v)) for a positive value given in log-domain. Rational values
// reduce to an integer square root (floor(sqrt(x)) = floor(sqrt(floor(x)))
// for x >= 0); otherwise the square root is enclosed at escalating precision.
BigInt floor_sqrt_value(const LogValue& v) {
    if (auto r = v.as_rational()) {
        BigInt fl = floor_rational(*r);
        if (fl < 0) throw UsageError("floor_sqrt_value: negative value");
        BigInt root;
        mpz_sqrt(root.get_mpz_t(), fl.get_mpz_t());
        return root;
    }
    for (mpfr_prec_t prec = Precision::working();
         prec <= Precision::kEscalationLimit; prec *= 2) {
        Interval s = v.ln().enclosure(prec).scaled(Rational(1, 2)).exp();
        if (auto f = s.floor_unique()) return *f;
    }
    throw IndistinguishableError(
        "floor_sqrt_value: square root straddles an integer at the "
        "escalation limit");
}

// floor(m * e^t) for m >= 1. Exact when t == 0; otherwise m e^t is
// irrational for exact rational t != 0, so the enclosure floor resolves.
BigInt floor_scaled_exp(const BigInt& m, const Real& t) {
    if (auto q = t.as_rational()) {
        if (*q == 0) return m;
    }
    double bits_guess = t.approx() / std::log(2.0) +
                        static_cast<double>(bit_length(m));
    mpfr_prec_t prec = Precision::working();
    if (bits_guess + 64 > static_cast<double>(prec) &&
        bits_guess < static_cast<double>(Precision::kEscalationLimit)) {
        prec = static_cast<mpfr_prec_t>(bits_guess) + 64;
    }
    for (; prec <= Precision::kEscalationLimit; prec *= 2) {
        Interval val = Interval::of_bigint(m, prec) * t.enclosure(prec).exp();
        if (auto f = val.floor_unique()) return *f;
    }
    throw IndistinguishableError(
        "floor_scaled_exp: value straddles an integer at the escalation "
        "limit");
}

// a_n = floor(alpha * e^{phi_diff}) as a quotient, symbolic past the
// materialization threshold.
PartialQuotient witness_quotient(const BigInt& alpha, const Real& phi_diff) {
    Real t = phi_diff + Real::log_of_bigint(alpha);
    int cmp;
    try {
        cmp = Real::compare(t, exact_log_threshold());
    } catch (const IndistinguishableError&) {
        cmp = 0; // borderline: either representation is valid, keep it symbolic
    }
    if (cmp >= 0) return PartialQuotient::floor_exp(t);
    return PartialQuotient::exact(floor_scaled_exp(alpha, phi_diff));
}

// Uniform draw from [0, bound), bound >= 1, by rejection on bit blocks.
BigInt uniform_bigint(Xoshiro256& rng, const BigInt& bound) {
    if (bound <= 1) return BigInt(0);
    const std::size_t bits = bit_length(BigInt(bound - 1));
    const std::size_t words = (bits + 63) / 64;
    for (;;) {
        BigInt v = 0;
        for (std::size_t w = 0; w < words; ++w) {
            v <<= 64;
            v += BigInt(static_cast<unsigned long>(rng.next()));
        }
        mpz_fdiv_r_2exp(v.get_mpz_t(), v.get_mpz_t(), bits);
        if (v < bound) return v;
    }
}

Rational resolve_rate(const GrowthFunction& g, const Real& known_log,
                      bool have_known,
                      const std::optional<Rational>& override_value,
                      std::size_t scan_horizon, bool pick_upper,
                      bool* estimated) {
    *estimated = false;
    if (override_value) {
        if (*override_value < 1)
            throw UsageError("rate override must be >= 1");
        return *override_value;
    }
    if (have_known) {
        if (auto r = LogValue::from_ln(known_log).as_rational()) {
            return *r >= 1 ? *r : Rational(1);
        }
    }
    *estimated = true;
    ExponentReport rep = exponents(g, std::max<std::size_t>(scan_horizon, 64));
    double d = std::exp((pick_upper ? rep.B_hat : rep.b_hat).ln().approx());
    if (!(d >= 1.0)) d = 1.0;
    Rational r(std::lround(d * 4096.0), 4096);
    r.canonicalize();
    return r;
}

} // namespace

AlphaPlan build_alpha_plan(const GrowthFunction& g, std::size_t n_max) {
    if (n_max < 1) throw UsageError("build_alpha_plan: n_max must be >= 1");
    if (auto lim = g.domain_limit(); lim && n_max > *lim)
        throw UsageError("build_alpha_plan: n_max exceeds the table domain");

    AlphaPlan plan;
    plan.n_max = n_max;

    // k_n = floor(sqrt(min_{m in [n, n_max]} psi(m)/m)): the largest k whose
    // threshold k^2 persists from n to the verification horizon.
    std::vector<LogValue> suffix(n_max, LogValue::one());
    for (std::size_t n = n_max; n >= 1; --n) {
        LogValue r = g.eval(n) / LogValue::of_bigint(BigInt(static_cast<unsigned long>(n)));
        if (n == n_max) {
            suffix[n - 1] = std::move(r);
        } else {
            suffix[n - 1] =
                LogValue::compare(r, suffix[n]) <= 0 ? std::move(r) : suffix[n];
        }
    }

    plan.alpha.reserve(n_max);
    BigInt prev_k(-1);
    for (std::size_t n = 1; n <= n_max; ++n) {
        BigInt k = floor_sqrt_value(suffix[n - 1]);
        if (k != prev_k) {
            if (k < prev_k)
                throw Error("build_alpha_plan: suffix minima not monotone");
            plan.blocks.push_back({n, k});
            prev_k = k;
        }
        plan.alpha.push_back(BigInt(k + 1));
    }
    if (prev_k < 1)
        throw HorizonError(
            "build_alpha_plan: psi(n)/n stays below 1 up to n_max, no "
            "inflation threshold persists");

    plan.log_alpha_prefix.reserve(n_max);
    plan.ratio_series.reserve(n_max);
    Real acc;
    for (std::size_t n = 1; n <= n_max; ++n) {
        acc = acc + Real::log_of_bigint(plan.alpha[n - 1]);
        plan.log_alpha_prefix.push_back(acc);
        plan.ratio_series.push_back(acc.div(g.eval(n).value_real()));
    }
    return plan;
}

WitnessPoint build_witness(const GrowthFunction& g, WitnessMode mode,
                           std::size_t n_max, bool force_unit_alpha) {
    if (n_max < 2) throw UsageError("build_witness: n_max must be >= 2");

    const bool limsup = mode == WitnessMode::UpperLimsup;
    Envelope env = envelope(g,
                            limsup ? Envelope::Kind::MinTail
                                   : Envelope::Kind::MaxPrefix,
                            n_max, n_max);

    WitnessPoint w;
    w.mode = mode;
    w.n_max = n_max;
    w.unit_alpha = !limsup || force_unit_alpha;
    w.touch_indices = env.touch_indices;

    if (w.unit_alpha) {
        w.alpha.assign(n_max, BigInt(1));
    } else {
        w.alpha = build_alpha_plan(g, n_max).alpha;
    }

    w.phi_log.reserve(n_max);
    for (std::size_t n = 1; n <= n_max; ++n)
        w.phi_log.push_back(env.values[n - 1].value_real());

    w.digits.reserve(n_max);
    Real prev; // phi(0) = 0
    for (std::size_t n = 1; n <= n_max; ++n) {
        Real diff = w.phi_log[n - 1] - prev;
        if (cmp_fast(diff, Real()) < 0)
            throw Error("build_witness: envelope decreased");
        w.digits.push_back(witness_quotient(w.alpha[n - 1], diff));
        prev = w.phi_log[n - 1];
    }

    auto digits = std::make_shared<std::vector<PartialQuotient>>(w.digits);
    w.point = CFPoint::constructed(
        std::string(limsup ? "witness-upper(" : "witness-lower(") +
            g.describe() + ")",
        [digits](std::size_t k) {
            if (k > digits->size())
                throw HorizonError("witness point materialized only to n_max");
            return (*digits)[k - 1];
        });

    w.ratio_series.reserve(n_max);
    Real log_sum;
    for (std::size_t n = 1; n <= n_max; ++n) {
        log_sum = log_sum + w.digits[n - 1].log_value();
        w.ratio_series.push_back(log_sum.div(g.eval(n).value_real()));
    }

    // Certified bounds for the tail statistic: pointwise interval max (sup,
    // limsup mode, over envelope touches) or min (inf, liminf mode, over all
    // tail indices); falls back to the whole tail when no touch lands there.
    std::vector<std::size_t> tail;
    const std::size_t tail_lo = n_max / 2 + 1;
    if (limsup) {
        for (std::size_t n : w.touch_indices)
            if (n >= tail_lo) tail.push_back(n);
    }
    if (tail.empty()) {
        for (std::size_t n = tail_lo; n <= n_max; ++n) tail.push_back(n);
    }
    bool first = true;
    for (std::size_t n : tail) {
        Interval e = w.ratio_series[n - 1].enclosure();
        if (first) {
            w.tail_ratio_bounds = e;
            first = false;
        } else {
            w.tail_ratio_bounds = limsup
                                      ? Interval::max(w.tail_ratio_bounds, e)
                                      : Interval::min(w.tail_ratio_bounds, e);
        }
    }
    return w;
}

SeqB build_seq_b(const GrowthFunction& g, const Rational& epsilon,
                 std::size_t n_max,
                 const std::optional<Rational>& b_override) {
    if (n_max < 2) throw UsageError("build_seq_b: n_max must be >= 2");
    if (epsilon <= 0) throw UsageError("build_seq_b: epsilon must be > 0");

    SeqB s;
    s.epsilon = epsilon;
    s.n_max = n_max;
    auto ke = g.known_exponents();
    s.b_used = resolve_rate(g, ke ? ke->log_b : Real(), ke.has_value(),
                            b_override, n_max, /*pick_upper=*/false,
                            &s.b_estimated);
    const Rational cap_factor = s.b_used + epsilon;

    Envelope env = envelope(g, Envelope::Kind::MinTail, n_max, n_max);
    s.phi_log.reserve(n_max);
    for (std::size_t n = 1; n <= n_max; ++n)
        s.phi_log.push_back(env.values[n - 1].value_real());
    if (cmp_fast(s.phi_log[0], Real::of_long(1)) < 0)
        throw UsageError("build_seq_b: construction needs psi >= 1");

    s.log_B.reserve(n_max);
    s.b_log_ratios.reserve(n_max);
    s.log_B.push_back(s.phi_log[0]);
    s.b_log_ratios.push_back(s.phi_log[0]);
    s.touch_indices.push_back(1);
    for (std::size_t n = 2; n <= n_max; ++n) {
        Real cap = s.log_B[n - 2].scaled(cap_factor);
        int c = cmp_fast(s.phi_log[n - 1], cap);
        s.log_B.push_back(c <= 0 ? s.phi_log[n - 1] : cap);
        if (c <= 0) s.touch_indices.push_back(n);
        s.b_log_ratios.push_back(s.log_B[n - 1] - s.log_B[n - 2]);
        // monotone and capped, by construction of the min; recheck anyway
        if (cmp_fast(s.log_B[n - 1], s.log_B[n - 2]) < 0)
            throw Error("build_seq_b: log B decreased");
        if (cmp_fast(s.log_B[n - 1], s.phi_log[n - 1]) > 0)
            throw Error("build_seq_b: log B exceeded the envelope");
    }

    s.touch_windows_ok = true;
    s.first_bad_window = 0;
    for (std::size_t m = 1; 2 * m <= n_max; ++m) {
        auto it = std::lower_bound(s.touch_indices.begin(),
                                   s.touch_indices.end(), m);
        if (it == s.touch_indices.end() || *it > 2 * m) {
            s.touch_windows_ok = false;
            s.first_bad_window = m;
            break;
        }
    }

    bool have = false;
    for (std::size_t n = 1; n + 1 <= n_max; ++n) {
        Real r = s.b_log_ratios[n].div(s.log_B[n - 1]);
        if (!have || cmp_fast(r, s.sup_ratio) > 0) {
            s.sup_ratio = r;
            have = true;
        }
    }
    s.dim_lower_bound = Real::of_long(1).div(s.sup_ratio.shifted(Rational(2)));
    return s;
}

SeqT build_seq_t(const GrowthFunction& g, const Rational& epsilon,
                 std::size_t j_max,
                 const std::optional<Rational>& B_override) {
    if (j_max < 2) throw UsageError("build_seq_t: j_max must be >= 2");
    if (epsilon <= 0) throw UsageError("build_seq_t: epsilon must be > 0");

    SeqT s;
    s.epsilon = epsilon;
    s.j_max = j_max;
    auto ke = g.known_exponents();
    bool estimated = false;
    s.B_used = resolve_rate(g, ke ? ke->log_B : Real(), ke.has_value(),
                            B_override, j_max, /*pick_upper=*/true, &estimated);
    const Rational Bpe = s.B_used + epsilon;
    const Rational Bpe2 = s.B_used + epsilon / 2;

    const auto domain_lim = g.domain_limit();
    if (domain_lim && *domain_lim < j_max)
        throw UsageError("build_seq_t: domain shorter than j_max");

    // Suffix columns k > j carry psi(k) (B+eps)^{j-k} = (B+eps)^j D(k) with
    // D(k) = psi(k) (B+eps)^{-k}, so one suffix-max pass over D settles every
    // j at once. Past the horizon the decay certificate bounds the columns by
    // (B+eps/2)^m (B+eps)^{j-m}; how long that tail bound takes to drop under
    // T_j depends on how loose the certificate is against the actual growth,
    // so the horizon doubles until the bound closes. Tables are total
    // functions on their domain: the suffix is scanned in full and no tail
    // bound is needed.
    const std::size_t H_cap = 64 * j_max + 1024;
    std::size_t H = 4 * j_max + 64;
    if (domain_lim) H = std::min(H, *domain_lim);
    const Rational inv_Bpe = Rational(1) / Bpe;

    std::vector<Real> psiv, prefmax, sufmax;
    std::vector<std::size_t> prefarg, sufarg;
    bool complete = false;
    for (;;) {
        complete = domain_lim && H == *domain_lim;
        psiv.clear();
        psiv.reserve(H);
        for (std::size_t n = 1; n <= H; ++n) {
            psiv.push_back(g.eval(n).value_real());
            if (cmp_fast(psiv.back(), Real::of_long(1)) < 0)
                throw UsageError("build_seq_t: construction needs psi >= 1");
        }

        // Decay certificate: psi(n) <= (B + eps/2)^n from cert_start on,
        // checked exactly up to the horizon.
        std::size_t last_violation = 0;
        {
            Rational pw(1);
            for (std::size_t n = 1; n <= H; ++n) {
                pw *= Bpe2;
                if (cmp_fast(psiv[n - 1], Real::of_rational(pw)) > 0)
                    last_violation = n;
            }
        }
        s.cert_start = last_violation + 1;
        s.cert_horizon = H;
        if (!complete && s.cert_start > H)
            throw HorizonError(
                "build_seq_t: decay certificate not established at the "
                "horizon");

        // earliest argmax of bare psi over [1, j] ...
        prefmax.clear();
        prefarg.clear();
        prefmax.reserve(H);
        prefarg.reserve(H);
        for (std::size_t k = 1; k <= H; ++k) {
            if (k == 1 || cmp_fast(psiv[k - 1], prefmax.back()) > 0) {
                prefmax.push_back(psiv[k - 1]);
                prefarg.push_back(k);
            } else {
                prefmax.push_back(prefmax.back());
                prefarg.push_back(prefarg.back());
            }
        }
        // ... and of D over [k, H], ties resolved toward the smaller index
        sufmax.assign(H + 1, Real());
        sufarg.assign(H + 1, 0);
        Rational ipow = pow_rational(inv_Bpe, static_cast<long>(H) + 1);
        for (std::size_t k = H; k >= 1; --k) {
            ipow *= Bpe;
            Real d = psiv[k - 1].scaled(ipow);
            if (sufarg[k] == 0 || cmp_fast(d, sufmax[k]) >= 0) {
                sufmax[k - 1] = std::move(d);
                sufarg[k - 1] = k;
            } else {
                sufmax[k - 1] = sufmax[k];
                sufarg[k - 1] = sufarg[k];
            }
        }

        s.log_T.clear();
        s.t.clear();
        s.log_T.reserve(j_max);
        s.t.reserve(j_max);
        bool closes = true;
        const Rational tail0 = pow_rational(Bpe2, static_cast<long>(H) + 1) *
                               pow_rational(inv_Bpe, static_cast<long>(H) + 1);
        Rational bpow(1);
        for (std::size_t j = 1; j <= j_max; ++j) {
            bpow *= Bpe;
            Real best = prefmax[j - 1];
            std::size_t arg = prefarg[j - 1];
            if (j < H) {
                Real scand = sufmax[j].scaled(bpow);
                if (cmp_fast(scand, best) > 0) {
                    best = std::move(scand);
                    arg = sufarg[j];
                }
            }
            if (!complete &&
                cmp_fast(Real::of_rational(tail0 * bpow), best) > 0) {
                closes = false;
                break;
            }
            s.log_T.push_back(std::move(best));
            s.t.push_back(arg);
        }
        if (closes) break;
        if (complete || H >= H_cap)
            throw HorizonError(
                "build_seq_t: tail certificate does not close by the horizon "
                "cap");
        H = std::min(H_cap, 2 * H);
        if (domain_lim) H = std::min(H, *domain_lim);
    }

    for (std::size_t j = 2; j <= j_max; ++j) {
        if (s.t[j - 1] < s.t[j - 2])
            throw Error("build_seq_t: argmax indices decreased");
        if (Real::compare(s.log_T[j - 1], s.log_T[j - 2]) < 0)
            throw Error("build_seq_t: log T decreased");
        if (Real::compare(s.log_T[j - 1], s.log_T[j - 2].scaled(Bpe)) > 0)
            throw Error("build_seq_t: log T outran its cap");
    }

    // The sup at index t_j is the bare column value e^{psi(t_j)}: recompute
    // T at every attained argmax index and match it against psi there.
    {
        std::vector<std::size_t> args(s.t);
        std::sort(args.begin(), args.end());
        args.erase(std::unique(args.begin(), args.end()), args.end());
        Rational bpow(1);
        std::size_t at = 0;
        for (std::size_t m : args) {
            for (; at < m; ++at) bpow *= Bpe;
            Real tm = prefmax[m - 1];
            if (m < H) {
                Real scand = sufmax[m].scaled(bpow);
                if (cmp_fast(scand, tm) > 0) tm = std::move(scand);
            }
            if (Real::compare(tm, psiv[m - 1]) != 0)
                throw Error("build_seq_t: sup at an argmax index is not "
                            "e^psi there");
        }
    }

    s.c_log_ratios.reserve(j_max);
    s.ratio_series.reserve(j_max);
    for (std::size_t j = 1; j <= j_max; ++j) {
        s.c_log_ratios.push_back(j == 1 ? s.log_T[0]
                                        : s.log_T[j - 1] - s.log_T[j - 2]);
        s.ratio_series.push_back(s.log_T[j - 1].div(psiv[j - 1]));
    }

    bool have = false;
    for (std::size_t j = 1; j + 1 <= j_max; ++j) {
        Real r = s.c_log_ratios[j].div(s.log_T[j - 1]);
        if (!have || cmp_fast(r, s.sup_step_ratio) > 0) {
            s.sup_step_ratio = r;
            have = true;
        }
    }
    s.dim_lower_bound =
        Real::of_long(1).div(s.sup_step_ratio.shifted(Rational(2)));

    have = false;
    for (std::size_t j = j_max / 2 + 1; j <= j_max; ++j) {
        if (!have || cmp_fast(s.ratio_series[j - 1], s.tail_ratio_inf) < 0) {
            s.tail_ratio_inf = s.ratio_series[j - 1];
            have = true;
        }
    }
    return s;
}

TargetSequence TargetSequence::exp_of_growth(const GrowthFunction& g) {
    TargetSequence ts;
    ts.id = "exp-growth:" + g.describe();
    ts.s = [g](std::size_t n) {
        return LogValue::from_ln(g.eval(n).value_real());
    };
    return ts;
}

TargetSequence TargetSequence::increments_of_growth(const GrowthFunction& g) {
    TargetSequence ts;
    ts.id = "increments:" + g.describe();
    ts.s = [g](std::size_t n) {
        Real cur = g.eval(n).value_real();
        Real prev = n == 1 ? Real::of_long(1) : g.eval(n - 1).value_real();
        Real diff = cur - prev;
        if (diff.enc_ref().certainly_lt(Interval::of_long(0)))
            throw UsageError(
                "increments_of_growth: growth function must be non-decreasing");
        return LogValue::from_ln(diff);
    };
    return ts;
}

TargetSequence TargetSequence::identity() {
    TargetSequence ts;
    ts.id = "identity";
    ts.s = [](std::size_t n) {
        return LogValue::of_bigint(BigInt(static_cast<unsigned long>(n)));
    };
    return ts;
}

TargetSequence TargetSequence::constant(const Rational& c) {
    if (c < 1) throw UsageError("TargetSequence::constant: need c >= 1");
    TargetSequence ts;
    ts.id = "const:" + to_string(c);
    ts.s = [c](std::size_t) { return LogValue::of_rational(c); };
    return ts;
}

TargetSequence TargetSequence::geometric(const Rational& r) {
    if (r <= 1) throw UsageError("TargetSequence::geometric: need r > 1");
    TargetSequence ts;
    ts.id = "geometric:" + to_string(r);
    ts.s = [r](std::size_t n) {
        return LogValue::of_rational(r).pow(
            Rational(static_cast<unsigned long>(n)));
    };
    return ts;
}

namespace {

PartialQuotient draw_digit(const LogValue& s, Xoshiro256& rng) {
    int cmp;
    try {
        cmp = Real::compare(s.ln(), exact_log_threshold());
    } catch (const IndistinguishableError&) {
        cmp = 0;
    }
    if (cmp <= 0) {
        BigInt lo, hi;
        if (auto r = s.as_rational()) {
            lo = ceil_rational(*r);
            hi = floor_rational(Rational(2) * *r);
        } else {
            // Irrational value small enough to materialize: ceil(s) is
            // floor(s) + 1 (a hidden integer value would stall the
            // enclosure floor and throw, which is the honest outcome).
            lo = floor_scaled_exp(BigInt(1), s.ln()) + 1;
            hi = floor_scaled_exp(BigInt(2), s.ln());
        }
        if (hi < lo)
            throw Error("sample_E_set: empty digit range (target below 1?)");
        return PartialQuotient::exact(lo + uniform_bigint(rng, BigInt(hi - lo + 1)));
    }
    // The range [s, 2s] is too wide to enumerate; draw the exponent
    // uniformly inside (log s, log 2s) with a safety margin of 2^-10 octaves
    // on both sides, so floor(e^t) lands strictly inside the range.
    const Rational delta(1, 1024);
    Rational u(BigInt(static_cast<unsigned long>(rng.next())), BigInt(1) << 64);
    u.canonicalize();
    Rational theta = delta + (Rational(1) - Rational(2) * delta) * u;
    Real t = s.ln() + Real::of_exact(LogCombo::prime_log(2, theta));
    return PartialQuotient::floor_exp(t);
}

} // namespace

bool digit_in_target_range(const PartialQuotient& a, const LogValue& s) {
    if (a.is_exact()) {
        if (auto r = s.as_rational())
            return *r <= a.value() && a.value() <= Rational(2) * *r;
        // Value-domain check, exact for non-integer s: a >= s iff
        // a > floor(s), and a <= 2s iff a <= floor(2s). Log enclosures
        // cannot separate a = ceil(s) from s at any fixed precision.
        return a.value() > floor_scaled_exp(BigInt(1), s.ln()) &&
               a.value() <= floor_scaled_exp(BigInt(2), s.ln());
    }
    Interval la = a.log_value().enclosure();
    Interval ls = s.ln().enclosure();
    Interval l2s =
        (s.ln() + Real::of_exact(LogCombo::prime_log(2, 1))).enclosure();
    return ls.certainly_le(la) && la.certainly_le(l2s);
}

SampleESet sample_E_set(const TargetSequence& ts, std::size_t depth,
                        std::size_t count, std::uint64_t seed) {
    if (depth < 4) throw UsageError("sample_E_set: depth must be >= 4");
    if (count < 1) throw UsageError("sample_E_set: count must be >= 1");

    SampleESet out;
    out.target_id = ts.id;
    out.depth = depth;
    out.count = count;
    out.seed = seed;

    std::vector<Real> lns;
    lns.reserve(depth);
    for (std::size_t n = 1; n <= depth; ++n) {
        lns.push_back(ts.s(n).ln());
        if (cmp_fast(lns.back(), Real()) < 0)
            throw UsageError("sample_E_set: target sequence must stay >= 1");
    }

    std::vector<Real> prefix;
    prefix.reserve(depth);
    Real acc;
    out.divergence_series.reserve(depth);
    for (std::size_t n = 1; n <= depth; ++n) {
        acc = acc + lns[n - 1];
        prefix.push_back(acc);
        out.divergence_series.push_back(
            acc.approx() / static_cast<double>(n));
    }

    // Divergence gate: dyadic-window minima of (sum log s)/n must strictly
    // increase across this depth.
    {
        bool ok = true;
        std::optional<Real> prev_min;
        for (std::size_t lo = 1; lo <= depth && ok; lo *= 2) {
            std::size_t hi = std::min(depth, 2 * lo - 1);
            Real m;
            bool have = false;
            for (std::size_t n = lo; n <= hi; ++n) {
                Real v = prefix[n - 1].scaled(
                    Rational(1, static_cast<unsigned long>(n)));
                if (!have || cmp_fast(v, m) < 0) {
                    m = v;
                    have = true;
                }
            }
            if (prev_min && cmp_fast(m, *prev_min) <= 0) ok = false;
            prev_min = m;
        }
        if (!ok)
            throw UsageError(
                "sample_E_set: divergence hypothesis (sum log s_k)/n -> "
                "infinity fails at this depth");
    }

    out.dim_series.reserve(depth - 1);
    bool have_sup = false;
    for (std::size_t n = 1; n + 1 <= depth; ++n) {
        // An all-ones head leaves the prefix at exactly zero; the ratio is
        // conventionally infinite there and cannot matter for the tail sup.
        if (auto q = prefix[n - 1].as_rational(); q && sgn(*q) == 0) continue;
        Real ratio = lns[n].div(prefix[n - 1]);
        out.dim_series.push_back(1.0 / (2.0 + ratio.approx()));
        if (n > depth / 2) {
            if (!have_sup || cmp_fast(ratio, out.ratio_tail_sup) > 0) {
                out.ratio_tail_sup = ratio;
                have_sup = true;
            }
        }
    }
    if (!have_sup)
        throw UsageError("sample_E_set: log-sum stays at zero over the tail");
    out.dim_value =
        Real::of_long(1).div(out.ratio_tail_sup.shifted(Rational(2)));

    out.points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto rng = std::make_shared<Xoshiro256>(derive_seed(seed, i));
        auto s_fn = ts.s;
        out.points.push_back(CFPoint::constructed(
            ts.id + "#" + std::to_string(i),
            [rng, s_fn](std::size_t k) { return draw_digit(s_fn(k), *rng); }));
    }
    return out;
}

}  // namespace cfspectra
