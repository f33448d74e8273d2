#include "cfspectra/dimension_tools.hpp"

#include <algorithm>
#include <utility>

#include "cfspectra/errors.hpp"

namespace cfspectra {

namespace {

Real one_over_succ(const ExtendedRate& r) {
    if (r.infinite) return Real();  // 1/(infinity + 1)
    return Real::of_long(1).div(r.value.shifted(Rational(1)));
}

// le with infinity as the top element
bool rate_le(const ExtendedRate& x, const ExtendedRate& y) {
    if (y.infinite) return true;
    if (x.infinite) return false;
    return Real::compare_fast(x.value, y.value) <= 0;
}

// Enclosure of sum_{j>=1} j^{-e} for rational e > 1: partial sum to J plus
// the integral tail bracket [(J+1)^{1-e}, J^{1-e}] / (e-1).
Interval zeta_enclosure(const Rational& e, std::size_t J) {
    if (e <= 1) throw UsageError("zeta_enclosure: exponent must be > 1");
    if (J < 1) throw UsageError("zeta_enclosure: need at least one term");
    Interval sum = Interval::of_long(1);  // j = 1 term
    const Rational neg_e = -e;
    for (std::size_t j = 2; j <= J; ++j)
        sum = sum + Interval::of_long(static_cast<long>(j)).pow(neg_e);
    const Rational one_minus_e = Rational(1) - e;
    const Rational inv = Rational(1) / (e - 1);
    Interval tail_lo =
        Interval::of_long(static_cast<long>(J) + 1).pow(one_minus_e).scaled(inv);
    Interval tail_hi =
        Interval::of_long(static_cast<long>(J)).pow(one_minus_e).scaled(inv);
    return sum + tail_lo.hull(tail_hi);
}

}  // namespace

DimFormulas dim_formulas(const ExtendedRate& b, const ExtendedRate& B,
                         const ExtendedRate& beta, bool override_order) {
    for (const auto* r : {&b, &B, &beta}) {
        if (!r->infinite &&
            Real::compare_fast(r->value, Real::of_long(1)) < 0)
            throw UsageError("dim_formulas: rates must be >= 1");
    }
    if (!override_order && (!rate_le(b, B) || !rate_le(B, beta)))
        throw UsageError("dim_formulas: expected b <= B <= beta "
                         "(pass override_order to force)");
    DimFormulas d;
    d.dim_upper = one_over_succ(b);
    d.dim_lower = one_over_succ(B);
    d.dim_full = one_over_succ(beta);
    return d;
}

Lemma24Report lemma24_dim(const TargetSequence& ts, std::size_t depth) {
    if (depth < 4) throw UsageError("lemma24_dim: depth must be >= 4");

    std::vector<Real> lns;
    lns.reserve(depth);
    for (std::size_t n = 1; n <= depth; ++n) {
        lns.push_back(ts.s(n).ln());
        if (Real::compare_fast(lns.back(), Real()) < 0)
            throw UsageError("lemma24_dim: target sequence must stay >= 1");
    }

    std::vector<Real> prefix;
    prefix.reserve(depth);
    Real acc;
    for (std::size_t n = 1; n <= depth; ++n) {
        acc = acc + lns[n - 1];
        prefix.push_back(acc);
    }

    // divergence hypothesis at this depth
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
                if (!have || Real::compare_fast(v, m) < 0) {
                    m = std::move(v);
                    have = true;
                }
            }
            if (prev_min && Real::compare_fast(m, *prev_min) <= 0) ok = false;
            prev_min = std::move(m);
        }
        if (!ok)
            throw UsageError(
                "lemma24_dim: divergence hypothesis (sum log s_k)/n -> "
                "infinity fails at this depth");
    }

    Lemma24Report rep;
    rep.depth = depth;
    rep.ratio_series.reserve(depth - 1);
    bool have = false;
    for (std::size_t n = 1; n + 1 <= depth; ++n) {
        // An all-ones head leaves the prefix at exactly zero; the ratio is
        // conventionally infinite there and cannot matter for the tail sup.
        if (auto q = prefix[n - 1].as_rational(); q && sgn(*q) == 0) continue;
        Real ratio = lns[n].div(prefix[n - 1]);
        rep.ratio_series.push_back(ratio.approx());
        if (n > depth / 2) {
            if (!have || Real::compare_fast(ratio, rep.tail_sup) > 0) {
                rep.tail_sup = std::move(ratio);
                have = true;
            }
        }
    }
    if (!have)
        throw UsageError("lemma24_dim: log-sum stays at zero over the tail");
    rep.value = Real::of_long(1).div(rep.tail_sup.shifted(Rational(2)));
    return rep;
}

CoveringParams make_covering_params(const Rational& epsilon, const Rational& K,
                                    std::size_t zeta_terms) {
    if (epsilon <= 0 || epsilon >= 1)
        throw UsageError("make_covering_params: epsilon must be in (0,1)");
    if (K <= 1) throw UsageError("make_covering_params: K must be > 1");

    CoveringParams p;
    p.epsilon = epsilon;
    p.s = Rational(1, 2) + epsilon;
    p.K = K;
    p.zeta_terms = zeta_terms;
    p.M_eps = zeta_enclosure(Rational(1) + epsilon, zeta_terms);
    p.K_pow_eps = Interval::of_rational(K).pow(epsilon);
    p.gate_ok = p.M_eps.scaled(Rational(2)).certainly_lt(p.K_pow_eps);
    return p;
}

CoveringBound covering_bound(const CoveringParams& p, std::size_t N,
                             std::size_t chain_window) {
    if (N < 1) throw UsageError("covering_bound: N must be >= 1");
    if (!p.gate_ok)
        throw GateError("covering_bound: gate K^eps > 2 M_eps is violated");

    CoveringBound cb;
    cb.N = N;
    cb.ratio = p.M_eps / p.K_pow_eps;
    const Rational half(1, 2);
    if (!cb.ratio.certainly_lt(Interval::of_rational(half)))
        throw GateError("covering_bound: term ratio not certified below 1/2");

    Interval term = cb.ratio.pow(Rational(static_cast<unsigned long>(N)));
    cb.value = term / (Interval::of_long(1) - cb.ratio);

    cb.chain_ok = true;
    Interval t = term;
    for (std::size_t i = 0; i < chain_window; ++i) {
        std::size_t n = N + i;
        cb.terms.push_back(t);
        if (!t.certainly_le(Interval::of_rational(
                pow_rational(half, static_cast<long>(n)))))
            cb.chain_ok = false;
        t = t * cb.ratio;
    }

    cb.coarse = pow_rational(half, static_cast<long>(N) - 1);
    cb.coarse_ok = cb.value.certainly_le(Interval::of_rational(cb.coarse));
    return cb;
}

namespace {

struct BruteState {
    Rational threshold;  // K^n
    Rational s;
    unsigned long cap;
    std::size_t n;
    std::size_t budget;
    std::size_t visited = 0;
    Interval sum;

    BruteState() : sum(Interval::of_long(0)) {}

    void recurse(std::size_t depth, const BigInt& q_prev, const BigInt& q_cur,
                 const BigInt& prod) {
        if (depth == n) {
            if (prod < threshold) return;
            BigInt denom = q_cur * (q_cur + q_prev);
            Rational len(1, 1);
            len /= Rational(denom);
            Interval term = s == 1 ? Interval::of_rational(len)
                                   : Interval::of_rational(len).pow(s);
            sum = sum + term;
            return;
        }
        for (unsigned long sigma = 1; sigma <= cap; ++sigma) {
            if (++visited > budget)
                throw BudgetError("brute_covering_term: enumeration budget "
                                  "exceeded");
            // largest completable product from here on
            Rational best = Rational(prod) * Rational(sigma) *
                            pow_rational(Rational(cap),
                                         static_cast<long>(n - depth - 1));
            if (best < threshold) continue;
            BigInt q_next = q_cur * static_cast<long>(sigma) + q_prev;
            recurse(depth + 1, q_cur, q_next, prod * static_cast<long>(sigma));
        }
    }
};

}  // namespace

Interval brute_covering_term(std::size_t n, const Rational& K,
                             const Rational& s, unsigned long sigma_cap,
                             std::size_t budget) {
    if (n < 1 || n > 4)
        throw UsageError("brute_covering_term: n must be in [1, 4]");
    if (K <= 1) throw UsageError("brute_covering_term: K must be > 1");
    if (s <= Rational(1, 2))
        throw UsageError("brute_covering_term: s must exceed 1/2");
    if (sigma_cap < 1)
        throw UsageError("brute_covering_term: sigma_cap must be >= 1");

    BruteState st;
    st.threshold = pow_rational(K, static_cast<long>(n));
    st.s = s;
    st.cap = sigma_cap;
    st.n = n;
    st.budget = budget;
    st.recurse(0, BigInt(0), BigInt(1), BigInt(1));

    // Words with any digit beyond the cap: |I_n|^s <= prod sigma_i^{-2s},
    // so their total is at most n * zeta(2s)^{n-1} * sum_{sigma>cap} sigma^{-2s},
    // and the last factor is below the integral cap^{1-2s}/(2s-1).
    const Rational two_s = Rational(2) * s;
    Interval tail_unit =
        Interval::of_long(static_cast<long>(sigma_cap))
            .pow(Rational(1) - two_s)
            .scaled(Rational(1) / (two_s - 1));
    Interval factor = Interval::of_long(1);
    if (n >= 2) {
        Interval z = zeta_enclosure(two_s, 1000);
        for (std::size_t i = 1; i + 1 <= n; ++i) factor = factor * z;
    }
    Interval extra =
        tail_unit * factor * Interval::of_long(static_cast<long>(n));
    return st.sum + Interval::of_long(0).hull(extra);
}

DoublyExpReport membership_doubly_exp(const CFPoint& x,
                                      const SetPredicateParams& params,
                                      std::size_t n_max) {
    if (params.a <= 1 || params.c <= 1 || params.A <= 1)
        throw UsageError("membership_doubly_exp: a, c, A must be > 1");
    if (n_max < 1) throw UsageError("membership_doubly_exp: n_max >= 1");

    DoublyExpReport rep;
    rep.n_max = n_max;
    rep.digit_flags.reserve(n_max);
    rep.prod_flags.reserve(n_max);

    const Real ln_a = Real::log_of_rational(params.a);
    Real log_prod;
    for (std::size_t n = 1; n <= n_max; ++n) {
        Real thr = ln_a.scaled(pow_rational(params.c, static_cast<long>(n)));
        Real la = x.quotient(n).log_value();
        log_prod = log_prod + la;
        bool df = Real::compare_fast(la, thr) >= 0;
        bool pf = Real::compare_fast(log_prod, thr) >= 0;
        rep.digit_flags.push_back(df);
        rep.prod_flags.push_back(pf);
        if (df) ++rep.digit_true;
        if (pf) ++rep.prod_true;
    }
    return rep;
}

PacReport inclusion_check_pac(const CFPoint& x, const Rational& a,
                              const Rational& c, const Rational& eps,
                              std::size_t n_max) {
    if (a <= 1 || c <= 1)
        throw UsageError("inclusion_check_pac: a and c must be > 1");
    if (eps <= 0 || eps >= c - 1)
        throw UsageError("inclusion_check_pac: need 0 < eps < c - 1");
    if (n_max < 1) throw UsageError("inclusion_check_pac: n_max >= 1");

    PacReport rep;
    rep.n_max = n_max;
    rep.a = a;
    rep.c = c;
    rep.eps = eps;

    const Rational ce = c - eps;  // > 1
    const Real ln_a = Real::log_of_rational(a);

    std::vector<Real> log_prod(n_max);
    Real acc;
    rep.N = 0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        Real la = x.quotient(n).log_value();
        acc = acc + la;
        log_prod[n - 1] = acc;
        Real thr = ln_a.scaled(pow_rational(ce, static_cast<long>(n)));
        if (Real::compare_fast(la, thr) >= 0) rep.N = n;
    }
    rep.applicable = rep.N < n_max;
    rep.bound_holds = true;
    rep.first_violation = 0;
    const Real base = rep.N == 0 ? Real() : log_prod[rep.N - 1];
    for (std::size_t n = rep.N + 1; n <= n_max; ++n) {
        Real rhs = base + ln_a.scaled(pow_rational(ce, static_cast<long>(n) + 1) /
                                      (ce - 1));
        if (Real::compare_fast(log_prod[n - 1], rhs) >= 0) {
            rep.bound_holds = false;
            rep.first_violation = n;
            break;
        }
    }
    return rep;
}

FastRatioReport membership_fast_ratio(const CFPoint& x,
                                      const GrowthFunction& g,
                                      std::size_t n_max,
                                      const std::optional<Rational>& A) {
    if (n_max < 2) throw UsageError("membership_fast_ratio: n_max >= 2");
    if (A && *A <= 1)
        throw UsageError("membership_fast_ratio: A must be > 1");

    FastRatioReport rep;
    rep.n_max = n_max;
    rep.A = A;
    rep.ratio_series.reserve(n_max);
    std::optional<Real> ln_A;
    if (A) ln_A = Real::log_of_rational(*A);

    Real log_sum;
    bool have = false;
    for (std::size_t n = 1; n <= n_max; ++n) {
        log_sum = log_sum + x.quotient(n).log_value();
        LogValue psi = g.eval(n);
        rep.ratio_series.push_back(log_sum.div(psi.value_real()));
        if (ln_A) {
            auto r = psi.as_rational();
            Real rhs = r ? ln_A->scaled(*r) : ln_A->mul(psi.value_real());
            bool flag = Real::compare_fast(log_sum, rhs) >= 0;
            rep.threshold_flags.push_back(flag);
            if (flag) ++rep.threshold_true;
        }
        if (n > n_max / 2) {
            Interval e = rep.ratio_series[n - 1].enclosure();
            if (!have) {
                rep.tail_sup = e;
                rep.tail_inf = e;
                have = true;
            } else {
                rep.tail_sup = Interval::max(rep.tail_sup, e);
                rep.tail_inf = Interval::min(rep.tail_inf, e);
            }
        }
    }
    return rep;
}

}  // namespace cfspectra
