#include "cfspectra/growth_model.hpp"

#include <algorithm>
#include <cmath>

#include "cfspectra/errors.hpp"

namespace cfspectra {

BigInt fb_boundary(unsigned k) {
    BigInt f(1), sum(0);
    for (unsigned i = 1; i <= k; ++i) {
        f *= i;
        sum += f;
    }
    return sum;
}

BigInt fb_even_sum(unsigned k) {
    BigInt f(1), sum(0);
    for (unsigned i = 1; i <= 2 * k; ++i) {
        f *= i;
        if (i % 2 == 0) sum += f;
    }
    return sum;
}

BigInt fb_odd_sum(unsigned k) {
    BigInt f(1), sum(0);
    for (unsigned i = 1; i + 1 <= 2 * k; ++i) {
        f *= i;
        if (i % 2 == 1) sum += f;
    }
    return sum;
}

GrowthFunction GrowthFunction::power(const Rational& p) {
    if (p <= 1) throw UsageError("GrowthFunction::power: need p > 1");
    auto st = std::make_shared<State>();
    st->family = Family::Power;
    st->id = "power:p=" + to_string(p);
    st->p = p;
    st->monotone_hint = 1;
    st->divergent = true;
    GrowthFunction g;
    g.st_ = std::move(st);
    return g;
}

GrowthFunction GrowthFunction::exponential(const Rational& c, const Rational& scale) {
    if (c <= 1) throw UsageError("GrowthFunction::exponential: need c > 1");
    if (sgn(scale) <= 0)
        throw UsageError("GrowthFunction::exponential: need scale > 0");
    auto st = std::make_shared<State>();
    st->family = Family::Exponential;
    st->id = "exp:c=" + to_string(c) + ",scale=" + to_string(scale);
    st->c = c;
    st->sc = scale;
    st->monotone_hint = 1;
    st->divergent = true;
    GrowthFunction g;
    g.st_ = std::move(st);
    return g;
}

GrowthFunction GrowthFunction::factorial_blocks() {
    auto st = std::make_shared<State>();
    st->family = Family::FactorialBlocks;
    st->id = "factorial-blocks";
    st->monotone_hint = 1; // consecutive ratios are 3, 4 or 15, all > 1
    st->divergent = true;
    GrowthFunction g;
    g.st_ = std::move(st);
    return g;
}

GrowthFunction GrowthFunction::table(std::vector<LogValue> values) {
    if (values.empty()) throw UsageError("GrowthFunction::table: empty table");
    auto st = std::make_shared<State>();
    st->family = Family::Table;
    st->id = "table:" + std::to_string(values.size());
    st->domain_limit = values.size();
    st->table = std::move(values);
    GrowthFunction g;
    g.st_ = std::move(st);
    return g;
}

GrowthFunction GrowthFunction::custom(std::string id,
                                      std::function<LogValue(std::size_t)> eval,
                                      std::optional<std::size_t> monotone_tail_hint,
                                      bool divergent_hint) {
    if (!eval) throw UsageError("GrowthFunction::custom: null evaluator");
    auto st = std::make_shared<State>();
    st->family = Family::Custom;
    st->id = std::move(id);
    st->custom = std::move(eval);
    st->monotone_hint = monotone_tail_hint;
    st->divergent = divergent_hint;
    GrowthFunction g;
    g.st_ = std::move(st);
    return g;
}

namespace {

LogValue fb_eval(std::size_t n) {
    // smallest m >= 1 with fb_boundary(m) >= n
    unsigned m = 1;
    BigInt f(1), bound(1);
    while (bound < static_cast<unsigned long>(n)) {
        ++m;
        f *= m;
        bound += f;
    }
    const BigInt nn(static_cast<unsigned long>(n));
    LogCombo combo;
    if (m % 2 == 1) {
        const unsigned k = (m - 1) / 2;
        const BigInt e = fb_even_sum(k);
        combo = LogCombo::prime_log(5, Rational(BigInt(k))) +
                LogCombo::prime_log(2, Rational(2 * e)) +
                LogCombo::prime_log(3, Rational(nn - e));
    } else {
        const unsigned k = m / 2;
        const BigInt o = fb_odd_sum(k);
        combo = LogCombo::prime_log(5, Rational(BigInt(k - 1))) +
                LogCombo::prime_log(2, Rational(2 * (nn - o))) +
                LogCombo::prime_log(3, Rational(o));
    }
    return LogValue::from_ln(Real::of_exact(std::move(combo)));
}

} // namespace

LogValue GrowthFunction::eval(std::size_t n) const {
    if (n < 1) throw UsageError("GrowthFunction: domain starts at 1");
    switch (st_->family) {
    case Family::Power:
        return LogValue::from_ln(
            Real::log_of_bigint(BigInt(static_cast<unsigned long>(n)))
                .scaled(st_->p));
    case Family::Exponential:
        return LogValue::from_ln(
            Real::log_of_rational(st_->sc) +
            Real::log_of_rational(st_->c)
                .scaled(Rational(static_cast<unsigned long>(n))));
    case Family::FactorialBlocks:
        return fb_eval(n);
    case Family::Table:
        if (n > st_->table.size())
            throw UsageError("GrowthFunction: index past the table");
        return st_->table[n - 1];
    case Family::Custom:
        return st_->custom(n);
    }
    throw Error("GrowthFunction: unreachable family");
}

std::optional<GrowthFunction::KnownExponents> GrowthFunction::known_exponents() const {
    switch (st_->family) {
    case Family::Power:
        return KnownExponents{Real::of_long(0), Real::of_long(0), LogValue::one()};
    case Family::Exponential: {
        Real lc = Real::log_of_rational(st_->c);
        return KnownExponents{lc, lc, LogValue::of_rational(st_->c)};
    }
    case Family::FactorialBlocks:
        return KnownExponents{Real::of_exact(LogCombo::prime_log(3, 1)),
                              Real::of_exact(LogCombo::prime_log(2, 2)),
                              LogValue::of_rational(15)};
    default:
        return std::nullopt;
    }
}

ExponentReport exponents(const GrowthFunction& g, std::size_t horizon) {
    if (horizon < 16) throw UsageError("exponents: horizon must be >= 16");
    if (auto lim = g.domain_limit(); lim && horizon >= *lim)
        throw UsageError("exponents: table too short (psi(horizon+1) needed)");
    const auto log_ratio = [&](std::size_t n) {
        return g.log_psi(n).scaled(Rational(1, static_cast<unsigned long>(n)));
    };
    ExponentReport rep;
    rep.horizon = horizon;
    for (std::size_t lo = 1; lo <= horizon;) {
        const std::size_t hi = std::min(lo * 2, horizon);
        ExponentWindow w;
        w.lo = lo;
        w.hi = hi;
        w.inf_log_ratio = log_ratio(lo);
        w.sup_log_ratio = w.inf_log_ratio;
        w.step_sup_arg = 0;
        LogValue prev = g.eval(lo);
        for (std::size_t n = lo; n <= hi; ++n) {
            if (n > lo) {
                Real r = log_ratio(n);
                if (Real::compare(r, w.inf_log_ratio) < 0) w.inf_log_ratio = r;
                if (Real::compare(r, w.sup_log_ratio) > 0) w.sup_log_ratio = r;
            }
            if (n < hi) {
                LogValue nxt = g.eval(n + 1);
                LogValue step = nxt / prev;
                if (w.step_sup_arg == 0 ||
                    LogValue::compare(step, w.step_sup) > 0) {
                    w.step_sup = std::move(step);
                    w.step_sup_arg = n;
                }
                prev = std::move(nxt);
            }
        }
        rep.tail_series.push_back(std::move(w));
        if (hi >= horizon) break;
        lo = hi;
    }
    // point estimates over the tail window [horizon/2, horizon]
    Real inf = log_ratio(horizon / 2);
    Real sup = inf;
    for (std::size_t n = horizon / 2 + 1; n <= horizon; ++n) {
        Real r = log_ratio(n);
        if (Real::compare(r, inf) < 0) inf = r;
        if (Real::compare(r, sup) > 0) sup = r;
    }
    rep.b_hat = LogValue::from_ln(std::move(inf));
    rep.B_hat = LogValue::from_ln(std::move(sup));
    // largest one-step ratio over n <= horizon
    LogValue prev = g.eval(1);
    rep.beta_arg = 0;
    for (std::size_t n = 1; n <= horizon; ++n) {
        LogValue nxt = g.eval(n + 1);
        LogValue step = nxt / prev;
        if (rep.beta_arg == 0 || LogValue::compare(step, rep.beta_hat) > 0) {
            rep.beta_hat = std::move(step);
            rep.beta_arg = n;
        }
        prev = std::move(nxt);
    }
    return rep;
}

Envelope envelope(const GrowthFunction& g, Envelope::Kind kind,
                  std::size_t n_max, std::size_t horizon,
                  bool allow_finite_horizon) {
    if (n_max < 1) throw UsageError("envelope: n_max must be >= 1");
    if (auto lim = g.domain_limit(); lim && n_max > *lim)
        throw UsageError("envelope: n_max exceeds the table domain");
    Envelope env;
    env.kind = kind;
    env.n_max = n_max;
    env.values.reserve(n_max);
    std::vector<char> is_touch(n_max + 1, 0);

    if (kind == Envelope::Kind::MaxPrefix) {
        env.horizon_used = n_max;
        LogValue cur = g.eval(1);
        env.values.push_back(cur);
        is_touch[1] = 1;
        for (std::size_t n = 2; n <= n_max; ++n) {
            LogValue v = g.eval(n);
            if (LogValue::compare(v, cur) >= 0) {
                cur = std::move(v);
                is_touch[n] = 1;
            }
            env.values.push_back(cur);
        }
        for (std::size_t n = 1; n <= n_max; ++n)
            if (is_touch[n]) env.touch_indices.push_back(n);
        // phi(n) != psi(n) forces phi(n) = phi(n-1)
        for (std::size_t n = 2; n <= n_max; ++n)
            if (!is_touch[n] &&
                LogValue::compare(env.values[n - 1], env.values[n - 2]) != 0)
                throw Error("envelope: MaxPrefix flatness violated");
        return env;
    }

    if (horizon < n_max)
        throw UsageError("envelope: MinTail horizon must cover n_max");
    std::size_t U = 0;
    const auto hint = g.monotone_tail_hint();
    const auto lim = g.domain_limit();
    if (hint && *hint <= horizon) {
        // psi is non-decreasing past the hint, so the tail min stabilizes
        U = std::max(n_max, *hint);
    } else if (lim && *lim <= horizon) {
        U = *lim; // finite domain: full tail scanned
    } else if (allow_finite_horizon) {
        U = horizon;
        env.finite_horizon_flagged = true;
    } else {
        throw HorizonError(
            "envelope: MinTail needs a monotone tail hint, a finite domain, "
            "or an explicit finite-horizon override");
    }
    env.horizon_used = U;
    std::vector<LogValue> psis;
    psis.reserve(U);
    for (std::size_t n = 1; n <= U; ++n) psis.push_back(g.eval(n));
    std::vector<LogValue> phi(n_max, LogValue::one());
    LogValue cur = psis[U - 1];
    for (std::size_t n = U; n >= 1; --n) {
        if (LogValue::compare(psis[n - 1], cur) <= 0) {
            cur = psis[n - 1];
            if (n <= n_max) is_touch[n] = 1;
        }
        if (n <= n_max) phi[n - 1] = cur;
    }
    env.values = std::move(phi);
    for (std::size_t n = 1; n <= n_max; ++n)
        if (is_touch[n]) env.touch_indices.push_back(n);
    // phi(n) != psi(n) forces phi(n) = phi(n+1)
    for (std::size_t n = 1; n + 1 <= n_max; ++n)
        if (!is_touch[n] &&
            LogValue::compare(env.values[n - 1], env.values[n]) != 0)
            throw Error("envelope: MinTail flatness violated");
    return env;
}

EquivalenceReport equiv_check(const GrowthFunction& g, const Envelope& env,
                              std::size_t n_max) {
    if (n_max < 1 || n_max > env.n_max)
        throw UsageError("equiv_check: n_max out of range for the envelope");
    EquivalenceReport rep;
    rep.kind = env.kind;
    rep.n_max = n_max;
    rep.ratios_bounded = true;
    rep.running_extreme_ratio.reserve(n_max);
    const bool min_tail = env.kind == Envelope::Kind::MinTail;
    std::optional<Real> extreme; // ln of the running extreme of phi/psi
    for (std::size_t n = 1; n <= n_max; ++n) {
        Real lnr = env.values[n - 1].ln() - g.log_psi(n);
        const int s = Real::compare(lnr, Real::of_long(0));
        if ((min_tail && s > 0) || (!min_tail && s < 0))
            rep.ratios_bounded = false;
        if (!extreme ||
            (min_tail ? Real::compare(lnr, *extreme) > 0
                      : Real::compare(lnr, *extreme) < 0))
            extreme = std::move(lnr);
        rep.running_extreme_ratio.push_back(std::exp(extreme->approx()));
    }
    std::vector<std::size_t> touches;
    for (std::size_t t : env.touch_indices)
        if (t <= n_max) touches.push_back(t);
    rep.touch_count = touches.size();
    rep.max_touch_gap = 0;
    std::size_t prev = 0;
    for (std::size_t t : touches) {
        rep.max_touch_gap = std::max(rep.max_touch_gap, t - prev);
        prev = t;
    }
    rep.max_touch_gap = std::max(rep.max_touch_gap, n_max - prev);
    rep.touches_recur = true;
    for (std::size_t m = 1; 2 * m <= n_max; ++m) {
        auto it = std::lower_bound(touches.begin(), touches.end(), m);
        if (it == touches.end() || *it > 2 * m) {
            rep.touches_recur = false;
            break;
        }
    }
    rep.evidence = rep.ratios_bounded && rep.touches_recur;
    return rep;
}

DivergenceReport divergence_check(const GrowthFunction& g, std::size_t horizon) {
    if (horizon < 16)
        throw UsageError("divergence_check: horizon must be >= 16");
    if (auto lim = g.domain_limit(); lim && horizon > *lim)
        throw UsageError("divergence_check: horizon exceeds the table domain");
    DivergenceReport rep;
    rep.horizon = horizon;
    for (std::size_t lo = 1; lo <= horizon;) {
        const std::size_t hi = std::min(lo * 2, horizon);
        DivergenceWindow w;
        w.lo = lo;
        w.hi = hi;
        w.min_ratio =
            g.eval(lo) / LogValue::of_bigint(BigInt(static_cast<unsigned long>(lo)));
        w.argmin = lo;
        for (std::size_t n = lo + 1; n <= hi; ++n) {
            LogValue r =
                g.eval(n) / LogValue::of_bigint(BigInt(static_cast<unsigned long>(n)));
            if (LogValue::compare(r, w.min_ratio) < 0) {
                w.min_ratio = std::move(r);
                w.argmin = n;
            }
        }
        rep.windows.push_back(std::move(w));
        if (hi >= horizon) break;
        lo = hi;
    }
    rep.minima_strictly_increasing = true;
    for (std::size_t i = 0; i + 1 < rep.windows.size(); ++i)
        if (LogValue::compare(rep.windows[i + 1].min_ratio,
                              rep.windows[i].min_ratio) <= 0) {
            rep.minima_strictly_increasing = false;
            break;
        }
    rep.flagged_non_divergent = !rep.minima_strictly_increasing;
    return rep;
}

} // namespace cfspectra
