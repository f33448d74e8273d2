#include <doctest.h>

#include <cfspectra/errors.hpp>
#include <cfspectra/spectra_constructions.hpp>

#include <algorithm>
#include <vector>

using namespace cfspectra;

namespace {

Rational frac(long n, long d) { return Rational(n, d); }

bool req(const Real& r, const Rational& q) { return r.eq(Real::of_rational(q)); }

// Largest k with k^2 <= q, for rational q >= 0.
BigInt isqrt_rational(const Rational& q) {
    BigInt fl = floor_rational(q), root;
    mpz_sqrt(root.get_mpz_t(), fl.get_mpz_t());
    return root;
}

}  // namespace

TEST_CASE("alpha plan equals the suffix-minimum square-root oracle") {
    GrowthFunction ex2 = GrowthFunction::exponential(frac(2, 1));
    AlphaPlan plan = build_alpha_plan(ex2, 64);
    REQUIRE(plan.alpha.size() == 64);
    CHECK(plan.alpha[0] == 2);
    CHECK(plan.alpha[8] == 8);

    // independent recomputation over a small prefix
    const std::size_t probe = 20;
    for (std::size_t n = 1; n <= probe; ++n) {
        Rational m = 0;
        bool first = true;
        for (std::size_t k = n; k <= 64; ++k) {
            Rational r = ex2.eval(k).as_rational().value() / Rational(static_cast<long>(k));
            if (first || r < m) m = r, first = false;
        }
        CHECK(plan.alpha[n - 1] == isqrt_rational(m) + 1);
    }

    // frozen k-blocks: (start, k) jump points
    std::vector<std::pair<std::size_t, long>> expect = {
        {1, 1}, {4, 2}, {6, 3}, {7, 4}, {8, 5}, {9, 7}, {10, 10}, {11, 13}, {12, 18}};
    REQUIRE(plan.blocks.size() >= expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK(plan.blocks[i].start == expect[i].first);
        CHECK(plan.blocks[i].k == expect[i].second);
    }

    // alphas never decrease for a monotone-ratio family, and the log prefix
    // stays below n * log alpha_n
    for (std::size_t n = 1; n < 64; ++n) CHECK(plan.alpha[n - 1] <= plan.alpha[n]);
    Interval last = plan.log_alpha_prefix.back().enclosure();
    Interval cap = Interval::log_of_bigint(plan.alpha.back()).scaled(64);
    CHECK(last.certainly_le(cap));

    // power targets jump exactly at the squares
    AlphaPlan pw = build_alpha_plan(GrowthFunction::power(frac(2, 1)), 100);
    for (const auto& blk : pw.blocks) {
        BigInt sq = blk.k * blk.k;
        CHECK(sq == blk.start);
    }
    CHECK(pw.blocks.size() == 10);
}

TEST_CASE("doubling-capped follower matches the exact recursion") {
    GrowthFunction pw2 = GrowthFunction::power(frac(2, 1));
    SeqB sb = build_seq_b(pw2, frac(1, 2), 1000);
    CHECK(sb.b_used == 1);
    CHECK_FALSE(sb.b_estimated);

    // oracle: r_n = min(n^2, (3/2) r_{n-1}) in exact rationals
    Rational r = 1;
    for (std::size_t n = 1; n <= 60; ++n) {
        if (n == 1)
            r = 1;
        else
            r = std::min(Rational(static_cast<long>(n * n)), Rational(r * frac(3, 2)));
        CHECK(req(sb.log_B[n - 1], r));
    }

    // frozen touch structure: {1} then everything from 15 on
    REQUIRE(!sb.touch_indices.empty());
    CHECK(sb.touch_indices[0] == 1);
    CHECK(sb.touch_indices[1] == 15);
    for (std::size_t i = 1; i + 1 < sb.touch_indices.size(); ++i)
        CHECK(sb.touch_indices[i + 1] == sb.touch_indices[i] + 1);
    CHECK(sb.touch_indices.back() == 1000);
    CHECK_FALSE(sb.touch_windows_ok);
    CHECK(sb.first_bad_window == 2);
    CHECK(req(sb.sup_ratio, frac(1, 2)));
    CHECK(req(sb.dim_lower_bound, frac(2, 5)));

    SeqB cube = build_seq_b(GrowthFunction::power(frac(3, 1)), frac(1, 2), 1000);
    CHECK(cube.touch_indices[1] == 25);
    CHECK(req(cube.dim_lower_bound, frac(2, 5)));

    SeqB ex2 = build_seq_b(GrowthFunction::exponential(frac(2, 1)), frac(1, 2), 1000);
    CHECK(ex2.b_used == 2);
    CHECK(ex2.touch_indices.size() == 1000);  // exponential growth always touches
    CHECK(ex2.touch_windows_ok);
    CHECK(ex2.first_bad_window == 0);
    CHECK(req(ex2.log_B[0], frac(2, 1)));
    CHECK(req(ex2.log_B[9], frac(1024, 1)));
    CHECK(req(ex2.sup_ratio, frac(1, 1)));
    CHECK(req(ex2.dim_lower_bound, frac(1, 3)));

    SeqB fb = build_seq_b(GrowthFunction::factorial_blocks(), frac(1, 2), 1000);
    CHECK(fb.b_used == 3);
    REQUIRE(fb.touch_indices.size() == 84);
    CHECK(fb.touch_indices[0] == 1);
    CHECK(fb.touch_indices[1] == 71);
    CHECK(fb.touch_indices.back() == 153);
    CHECK_FALSE(fb.touch_windows_ok);
    CHECK(req(fb.sup_ratio, frac(5, 2)));
    CHECK(req(fb.dim_lower_bound, frac(2, 9)));

    // general invariants on a prefix: monotone, capped, below the envelope
    for (const SeqB& s : {sb, ex2, fb}) {
        for (std::size_t n = 1; n < 300; ++n) {
            CHECK(s.log_B[n - 1].le(s.log_B[n]));
            Real cap = s.log_B[n - 1].scaled(s.b_used + s.epsilon);
            CHECK(s.log_B[n].le(cap));
            CHECK(s.log_B[n].le(s.phi_log[n]));
        }
    }
}

TEST_CASE("max-of-columns sequence matches a direct scan") {
    GrowthFunction pw2 = GrowthFunction::power(frac(2, 1));
    SeqT st = build_seq_t(pw2, frac(1, 2), 1000);
    CHECK(st.B_used == 1);
    CHECK(st.cert_start == 31);

    // direct argmax oracle over a wide column range, exact rationals
    for (std::size_t j = 1; j <= 25; ++j) {
        Rational best = -1;
        std::size_t best_k = 0;
        for (std::size_t k = 1; k <= 200; ++k) {
            Rational v(static_cast<long>(k * k));
            if (k > j) v *= pow_rational(frac(2, 3), static_cast<long>(k - j));
            if (v > best) best = v, best_k = k;
        }
        CHECK(st.t[j - 1] == best_k);
        CHECK(req(st.log_T[j - 1], best));
    }
    CHECK(st.t[0] == 5);
    CHECK(req(st.log_T[0], frac(400, 81)));
    CHECK(req(st.log_T[1], frac(200, 27)));
    CHECK(req(st.sup_step_ratio, frac(1, 2)));
    CHECK(req(st.dim_lower_bound, frac(2, 5)));
    CHECK(req(st.tail_ratio_inf, frac(1, 1)));

    SeqT ex2 = build_seq_t(GrowthFunction::exponential(frac(2, 1)), frac(1, 2), 400);
    CHECK(ex2.B_used == 2);
    CHECK(ex2.cert_start == 1);
    for (std::size_t j = 1; j <= 400; ++j) CHECK(ex2.t[j - 1] == j);
    CHECK(req(ex2.log_T[0], frac(2, 1)));
    CHECK(req(ex2.log_T[9], frac(1024, 1)));
    CHECK(req(ex2.sup_step_ratio, frac(1, 1)));
    CHECK(req(ex2.dim_lower_bound, frac(1, 3)));
    CHECK(req(ex2.tail_ratio_inf, frac(1, 1)));

    SeqT fb = build_seq_t(GrowthFunction::factorial_blocks(), frac(1, 2), 200);
    CHECK(fb.B_used == 4);
    CHECK(fb.cert_start == 7);
    // the scan reaches across the block boundary at 33: columns freeze at the
    // spike until the in-block values catch up
    CHECK(fb.t[0] == 4);
    CHECK(fb.t[3] == 4);
    CHECK(fb.t[21] == 22);
    CHECK(fb.t[22] == 34);
    CHECK(fb.t[33] == 34);
    CHECK(fb.t[34] == 35);
    CHECK(req(fb.log_T[0], frac(640, 81)));
    CHECK(req(fb.log_T[1], frac(320, 9)));
    CHECK(req(fb.log_T[2], frac(160, 1)));
    CHECK(req(fb.log_T[3], frac(720, 1)));
    CHECK(req(fb.sup_step_ratio, frac(7, 2)));
    CHECK(req(fb.dim_lower_bound, frac(2, 11)));
    CHECK(req(fb.tail_ratio_inf, frac(1, 1)));

    // shared invariants: t non-decreasing, T_{j+1} <= T_j^{B+eps}, and the
    // value at an argmax column equals the raw growth value there
    for (const SeqT& s : {st, ex2, fb}) {
        Rational cap = s.B_used + s.epsilon;
        for (std::size_t j = 1; j < s.log_T.size(); ++j) {
            CHECK(s.t[j - 1] <= s.t[j]);
            CHECK(s.log_T[j].le(s.log_T[j - 1].scaled(cap)));
        }
    }
    GrowthFunction fbg = GrowthFunction::factorial_blocks();
    for (std::size_t j = 1; j <= 200; ++j) {
        std::size_t tj = fb.t[j - 1];
        if (tj <= 200) CHECK(fb.log_T[tj - 1].eq(fbg.eval(tj).value_real()));
    }
}

TEST_CASE("witness points track the envelope with inflated quotients") {
    GrowthFunction ex2 = GrowthFunction::exponential(frac(2, 1));
    GrowthFunction fb = GrowthFunction::factorial_blocks();

    WitnessPoint up = build_witness(ex2, WitnessMode::UpperLimsup, 200);
    REQUIRE(up.digits.size() == 200);
    CHECK(up.alpha[0] == 2);
    CHECK(up.digits[0].value() == 14);   // floor(2 e^2)
    CHECK(up.digits[1].value() == 14);
    CHECK(up.digits[2].value() == 109);  // floor(2 e^4)
    CHECK(up.touch_indices.size() == 200);

    WitnessPoint down = build_witness(ex2, WitnessMode::LowerLiminf, 200);
    CHECK(down.alpha[0] == 1);
    CHECK(down.digits[0].value() == 7);   // floor(e^2)
    CHECK(down.digits[1].value() == 7);
    CHECK(down.digits[2].value() == 54);  // floor(e^4)

    WitnessPoint fup = build_witness(fb, WitnessMode::UpperLimsup, 200);
    CHECK(fup.digits[0].value() == 40);     // floor(2 e^3)
    CHECK(fup.digits[1].value() == 24309);  // floor(3 e^9)
    WitnessPoint fdown = build_witness(fb, WitnessMode::LowerLiminf, 200);
    CHECK(fdown.digits[0].value() == 20);    // floor(e^3)
    CHECK(fdown.digits[1].value() == 8103);  // floor(e^9)

    Interval lo_band = Interval::of_rational(frac(99, 100));
    Interval hi_band = Interval::of_rational(frac(101, 100));
    for (const WitnessPoint* w : {&up, &down, &fup, &fdown}) {
        CHECK(lo_band.certainly_le(w->tail_ratio_bounds));
        CHECK(w->tail_ratio_bounds.certainly_le(hi_band));
        CHECK(w->tail_ratio_bounds.width_double() < 1e-6);
    }

    // the sandwich a_n <= alpha_n e^{dphi_n} < a_n + 1, checked symbolically
    // on the prefix where the quotients are still materialized integers
    Real phi_prev = Real::of_long(0);
    std::size_t exact_prefix = 0;
    for (std::size_t n = 1; n <= 10 && fup.digits[n - 1].is_exact(); ++n) {
        Real dphi = fup.phi_log[n - 1] - phi_prev;
        phi_prev = fup.phi_log[n - 1];
        Real target = Real::log_of_bigint(fup.alpha[n - 1]) + dphi;
        const BigInt& a = fup.digits[n - 1].value();
        BigInt a1 = a + 1;
        // ln(a+1) - ln(a) ~ e^{-dphi}: the interval logs need precision on
        // the order of dphi bits, well past the working default
        CHECK(Real::log_of_bigint(a, 8192).le(target));
        CHECK(target.lt(Real::log_of_bigint(a1, 8192)));
        ++exact_prefix;
    }
    CHECK(exact_prefix >= 4);
    // past the materialization threshold the digits go symbolic
    CHECK_FALSE(fup.digits[10].is_exact());

    // without inflation the upper-mode ratio stays certifiably below 1
    WitnessPoint unit = build_witness(ex2, WitnessMode::UpperLimsup, 120, true);
    CHECK(unit.alpha[0] == 1);
    CHECK(unit.tail_ratio_bounds.certainly_lt(Interval::of_long(1)));
}

TEST_CASE("sampled two-sided digit sets respect their target band") {
    SampleESet se = sample_E_set(TargetSequence::identity(), 40, 20, 777);
    REQUIRE(se.points.size() == 20);
    for (const CFPoint& p : se.points)
        for (std::size_t n = 1; n <= 40; ++n) {
            REQUIRE(p.quotient(n).is_exact());
            const BigInt& a = p.quotient(n).value();
            CHECK(a >= static_cast<long>(n));
            CHECK(a <= 2 * static_cast<long>(n));
        }
    Real lo = Real::of_rational(frac(47, 100)), hi = Real::of_rational(frac(13, 25));
    CHECK(lo.lt(se.dim_value));
    CHECK(se.dim_value.lt(hi));

    // same seed, same points
    SampleESet se2 = sample_E_set(TargetSequence::identity(), 40, 20, 777);
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t n = 1; n <= 40; ++n)
            CHECK(se.points[i].quotient(n).value() == se2.points[i].quotient(n).value());

    TargetSequence ex2t = TargetSequence::exp_of_growth(GrowthFunction::exponential(frac(2, 1)));
    SampleESet ge = sample_E_set(ex2t, 30, 10, 778);
    for (const CFPoint& p : ge.points)
        for (std::size_t n = 1; n <= 30; ++n)
            CHECK(digit_in_target_range(p.quotient(n), ex2t.s(n)));
    Real third = Real::of_rational(frac(1, 3));
    CHECK((ge.dim_value - third).enclosure().certainly_le(Interval::of_rational(frac(1, 1000))));
    CHECK((third - ge.dim_value).enclosure().certainly_le(Interval::of_rational(frac(1, 1000))));

    CHECK_THROWS_AS(sample_E_set(TargetSequence::constant(frac(2, 1)), 30, 5, 1), UsageError);
}

TEST_CASE("digit range membership handles the inclusive endpoints") {
    LogValue three = LogValue::of_bigint(BigInt(3));
    CHECK(digit_in_target_range(PartialQuotient::exact(BigInt(3)), three));
    CHECK(digit_in_target_range(PartialQuotient::exact(BigInt(5)), three));
    CHECK(digit_in_target_range(PartialQuotient::exact(BigInt(6)), three));
    CHECK_FALSE(digit_in_target_range(PartialQuotient::exact(BigInt(2)), three));
    CHECK_FALSE(digit_in_target_range(PartialQuotient::exact(BigInt(7)), three));
}

TEST_CASE("increment targets telescope back to the growth function") {
    GrowthFunction fb = GrowthFunction::factorial_blocks();
    TargetSequence inc = TargetSequence::increments_of_growth(fb);
    CHECK(inc.s(1).ln().eq(Real::of_long(2)));  // psi(1) - 1
    CHECK(inc.s(2).ln().eq(Real::of_long(9)));  // psi(2) - psi(1)
    Real sum = Real::of_long(0);
    for (std::size_t k = 1; k <= 5; ++k) sum = sum + inc.s(k).ln();
    CHECK(sum.eq(fb.eval(5).value_real() - Real::of_long(1)));

    std::vector<LogValue> dip;
    for (long v : {5, 3, 4})
        dip.push_back(LogValue::of_bigint(BigInt(v)));
    TargetSequence bad = TargetSequence::increments_of_growth(GrowthFunction::table(std::move(dip)));
    CHECK_THROWS_AS((void)bad.s(2), UsageError);
}
