#include <doctest.h>

#include <cfspectra/cf_core.hpp>
#include <cfspectra/errors.hpp>
#include <cfspectra/rng.hpp>

#include <vector>

using namespace cfspectra;

namespace {

Rational frac(long n, long d) { return Rational(n, d); }

std::vector<BigInt> word(std::initializer_list<long> xs) {
    std::vector<BigInt> w;
    for (long x : xs) w.emplace_back(x);
    return w;
}

// Repeated-subtraction Euclid, deliberately avoiding any division so it
// cannot share a bug with the expansion under test.
std::vector<BigInt> subtractive_quotients(Rational x) {
    std::vector<BigInt> out;
    BigInt p = x.get_num(), q = x.get_den();
    while (p != 0) {
        BigInt a = 0;
        while (q >= p) {
            q -= p;
            ++a;
        }
        out.push_back(a);
        std::swap(p, q);
    }
    return out;
}

}  // namespace

TEST_CASE("expansion matches a division-free Euclid oracle") {
    CHECK(cf_expand(frac(113, 355), 64) == word({3, 7, 16}));
    CHECK(cf_expand(frac(1, 2), 64) == word({2}));
    CHECK(cf_expand(frac(2, 3), 64) == word({1, 2}));
    CHECK(cf_expand(frac(5, 8), 64) == word({1, 1, 1, 2}));
    CHECK(cf_expand(frac(89, 144), 64) == word({1, 1, 1, 1, 1, 1, 1, 1, 1, 2}));

    Xoshiro256 rng(20240901);
    for (int i = 0; i < 100; ++i) {
        Rational x(1 + static_cast<long>(rng.below(9999)),
                   2 + static_cast<long>(rng.below(100000)));
        x.canonicalize();
        if (x >= 1) continue;
        auto got = cf_expand(x, 256);
        CHECK(got == subtractive_quotients(x));
        CHECK(cf_value(got) == x);
        if (got.size() > 1) CHECK(got.back() >= 2);  // canonical form
    }
}

TEST_CASE("gauss map peels exactly one quotient") {
    auto [a, rest] = gauss_step(frac(113, 355));
    CHECK(a == 3);
    CHECK(rest == frac(16, 113));

    auto [a2, rest2] = gauss_step(frac(16, 113));
    CHECK(a2 == 7);
    CHECK(rest2 == frac(1, 16));

    auto [a3, rest3] = gauss_step(frac(1, 16));
    CHECK(a3 == 16);
    CHECK(rest3 == 0);
}

TEST_CASE("cylinders carry exact endpoints and the continuant length formula") {
    Cylinder c2 = make_cylinder(word({2}));
    CHECK(c2.left == frac(1, 3));
    CHECK(c2.right == frac(1, 2));
    CHECK(c2.length == frac(1, 6));

    Cylinder c12 = make_cylinder(word({1, 2}));
    CHECK(c12.left == frac(2, 3));
    CHECK(c12.right == frac(3, 4));
    CHECK(c12.length == frac(1, 12));

    // Fibonacci continuants for the all-ones word
    Cylinder ones = make_cylinder(word({1, 1, 1, 1}));
    CHECK(ones.q_n == 5);
    CHECK(ones.q_prev == 3);
    CHECK(ones.p_n == 3);

    // length = 1 / (q_n (q_n + q_prev)) and endpoints are the convergent pair
    for (auto w : {word({4}), word({2, 5}), word({3, 1, 4}), word({1, 1, 2, 7})}) {
        Cylinder c = make_cylinder(w);
        CHECK(c.length == Rational(1) / (Rational(c.q_n) * Rational(c.q_n + c.q_prev)));
        CHECK(c.right - c.left == c.length);
        CHECK(c.left < c.right);
        // the value of the word is one endpoint
        Rational v = cf_value(w);
        CHECK((v == c.left || v == c.right));
        // nesting: appending a digit shrinks the interval
        auto w2 = w;
        w2.emplace_back(2);
        Cylinder inner = make_cylinder(w2);
        CHECK(inner.left >= c.left);
        CHECK(inner.right <= c.right);
        CHECK(inner.length < c.length);
    }
}

TEST_CASE("birkhoff sums multiply quotients in the exponent domain") {
    CFPoint x = CFPoint::of_rational(frac(113, 355));
    CHECK(birkhoff_log_sum(x, 3).as_rational().value() == 336);  // 3 * 7 * 16
    CHECK(khintchine_estimate(x, 3).scaled(3).eq(
              Real::log_of_bigint(BigInt(336))));
    CHECK(x.finite_length().value() == 3);
    CHECK_THROWS_AS((void)x.quotient(4), UsageError);

    CFPoint y = CFPoint::of_rational(frac(2, 5));  // [2, 2]
    CHECK(birkhoff_log_sum(y, 2).as_rational().value() == 4);
    CHECK(khintchine_estimate(y, 2).eq(Real::log_of_rational(frac(2, 1))));
}

TEST_CASE("floor of exp is certified") {
    CHECK(floor_exp_exact(Real::of_long(1)) == 2);
    CHECK(floor_exp_exact(Real::of_long(10)) == 22026);
    // e^{ln 8} floors to exactly 8 even though the naive enclosure straddles
    CHECK(floor_exp_exact(Real::log_of_rational(frac(8, 1))) == 8);
    CHECK(floor_exp_exact(Real::log_of_rational(frac(7, 2))) == 3);
}

TEST_CASE("partial quotients pick the representation by size") {
    PartialQuotient small = PartialQuotient::from_exponent(Real::of_long(2000));
    CHECK(small.is_exact());
    CHECK(small.as_integer().has_value());

    PartialQuotient big = PartialQuotient::from_exponent(Real::of_long(3000));
    CHECK_FALSE(big.is_exact());
    CHECK_FALSE(big.as_integer().has_value());
    CHECK(big.exponent().eq(Real::of_long(3000)));
    // certified log enclosure sits just below t
    Interval enc = big.log_value().enclosure();
    CHECK(enc.certainly_le(Interval::of_long(3000)));
    CHECK(Interval::of_rational(frac(2999, 1)).certainly_lt(enc));

    PartialQuotient five = PartialQuotient::exact(BigInt(5));
    CHECK(five.value() == 5);
    CHECK(five.log_value().eq(Real::log_of_rational(frac(5, 1))));
}

TEST_CASE("constructed points materialize lazily and deterministically") {
    int calls = 0;
    CFPoint p = CFPoint::constructed("probe", [&calls](std::size_t k) {
        ++calls;
        return PartialQuotient::exact(BigInt(k));
    });
    CHECK(p.quotient(3).value() == 3);
    CHECK(calls == 3);
    CHECK(p.quotient(2).value() == 2);
    CHECK(calls == 3);  // cached prefix, no re-generation
    CHECK_FALSE(p.finite_length().has_value());
}

TEST_CASE("digit sampler agrees with its stream view") {
    for (std::uint64_t seed : {1ULL, 7ULL, 99ULL}) {
        LebesgueCF gen(seed);
        CFPoint pt = sample_cf_point(seed);
        for (std::size_t k = 1; k <= 500; ++k) {
            std::uint64_t d = gen.next_digit();
            BigInt dv = (d == 0) ? gen.big_digit() : BigInt(static_cast<unsigned long>(d));
            PartialQuotient q = pt.quotient(k);
            REQUIRE(q.is_exact());
            CHECK(q.value() == dv);
            CHECK(dv >= 1);
        }
    }

    // big-digit forcing must not change the emitted stream
    LebesgueCF fast(5), slow(5, /*force_big=*/true);
    for (std::size_t k = 0; k < 300; ++k) {
        std::uint64_t a = fast.next_digit();
        std::uint64_t b = slow.next_digit();
        if (a == 0 || b == 0) {
            REQUIRE(a == 0);
            REQUIRE(b == 0);
            CHECK(fast.big_digit() == slow.big_digit());
        } else {
            CHECK(a == b);
        }
    }
}

TEST_CASE("digit sampler follows the gauss measure roughly") {
    LebesgueCF gen(424242);
    std::size_t ones = 0, twos = 0, total = 20000;
    for (std::size_t i = 0; i < total; ++i) {
        std::uint64_t d = gen.next_digit();
        if (d == 1) ++ones;
        if (d == 2) ++twos;
    }
    // P(a=1) = log2(4/3) ~ 0.415, P(a=2) = log2(9/8) ~ 0.170
    CHECK(ones > total * 38 / 100);
    CHECK(ones < total * 45 / 100);
    CHECK(twos > total * 14 / 100);
    CHECK(twos < total * 20 / 100);

    double mean = khintchine_mc_mean(60, 400, 20260814);
    CHECK(mean > 0.7);
    CHECK(mean < 1.3);  // crude bracket around log K ~ 0.98782
}
