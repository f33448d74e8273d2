#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "cfspectra/interval.hpp"
#include "cfspectra/numeric_util.hpp"

namespace cfspectra {

// Exact real of the shape  q + sum_p c_p * ln(p)  with q and the c_p rational
// and the bases p distinct primes. Uniqueness: ln of distinct primes together
// with 1 are linearly independent over Q (exponentiate a vanishing
// combination and compare an algebraic with a transcendental number), so two
// combos are equal iff they are identical after canonicalization. Zero
// coefficients are never stored.
class LogCombo {
public:
    LogCombo() = default;

    static LogCombo rational(const Rational& q);
    // ln(v) for rational v > 0 via full prime factorization of num and den;
    // nullopt when a cofactor resists factoring.
    static std::optional<LogCombo> log_of_rational(const Rational& v);
    static std::optional<LogCombo> log_of_bigint(const BigInt& v,
                                                 unsigned long trial_limit = 100000);
    // c * ln(p) for prime p (not verified here; callers pass known primes).
    static LogCombo prime_log(std::uint64_t p, const Rational& c);
    // t with num == t * den, when the two combos are proportional.
    static std::optional<Rational> proportional(const LogCombo& num,
                                                const LogCombo& den);

    LogCombo operator+(const LogCombo& o) const;
    LogCombo operator-(const LogCombo& o) const;
    LogCombo operator-() const;
    LogCombo scaled(const Rational& c) const;

    bool is_zero() const;
    bool is_rational() const { return coeffs_.empty(); }
    const Rational& rational_part() const { return q_; }
    const std::map<std::uint64_t, Rational>& log_coeffs() const { return coeffs_; }

    // e^{this} as an exact rational: needs q == 0 and integer coefficients.
    // Declines (nullopt) rather than materializing more than max_bits bits.
    std::optional<Rational> exp_rational(std::size_t max_bits = std::size_t{1} << 21) const;

    Interval evaluate(mpfr_prec_t prec) const;
    bool identical(const LogCombo& o) const;

private:
    Rational q_;
    std::map<std::uint64_t, Rational> coeffs_;
};

// A real number carrying a certified enclosure and, when the computation
// history allows it, an exact LogCombo. Arithmetic keeps the exact channel
// alive through +, -, rational scaling and division by exact rationals;
// anything else degrades to the interval channel.
class Real {
public:
    Real(); // exact zero

    static Real of_rational(const Rational& q);
    static Real of_long(long v);
    static Real of_exact(LogCombo c, mpfr_prec_t prec = Precision::working());
    static Real of_interval(Interval enc);
    static Real log_of_rational(const Rational& v, mpfr_prec_t prec = Precision::working());
    static Real log_of_bigint(const BigInt& v, mpfr_prec_t prec = Precision::working());

    bool has_exact() const { return exact_.has_value(); }
    const std::optional<LogCombo>& exact() const { return exact_; }
    std::optional<Rational> as_rational() const;

    Real operator+(const Real& o) const;
    Real operator-(const Real& o) const;
    Real operator-() const;
    Real scaled(const Rational& c) const;
    Real shifted(const Rational& c) const;
    Real mul(const Real& o) const; // exact only when a side is exactly rational
    Real div(const Real& o) const; // exact only when o is exactly rational

    // Enclosure at the requested precision; re-evaluates the exact channel
    // when that can tighten the stored interval.
    Interval enclosure(mpfr_prec_t prec = Precision::working()) const;
    // The stored enclosure as-is (no re-evaluation, no copy); rigorous, just
    // not necessarily at any requested precision.
    const Interval& enc_ref() const { return enc_; }
    double approx() const;

    // Total order; escalates precision on the exact channels and throws
    // IndistinguishableError when the order genuinely cannot be certified.
    static int compare(const Real& a, const Real& b);
    // Same order, but tries the stored enclosures first (one cheap mpfr
    // compare); meant for scan loops over values that are usually far apart.
    static int compare_fast(const Real& a, const Real& b) {
        if (a.enc_.certainly_lt(b.enc_)) return -1;
        if (b.enc_.certainly_lt(a.enc_)) return 1;
        return compare(a, b);
    }
    static Real min(const Real& a, const Real& b);
    static Real max(const Real& a, const Real& b);
    bool lt(const Real& o) const { return compare(*this, o) < 0; }
    bool le(const Real& o) const { return compare(*this, o) <= 0; }
    bool eq(const Real& o) const { return compare(*this, o) == 0; }

private:
    std::optional<LogCombo> exact_;
    Interval enc_;
};

} // namespace cfspectra
