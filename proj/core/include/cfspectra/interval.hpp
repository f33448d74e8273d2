#pragma once

#include <optional>
#include <string>

#include <mpfr.h>

#include "cfspectra/config.hpp"
#include "cfspectra/numeric_util.hpp"

namespace cfspectra {

// Closed interval [lo, hi] with MPFR endpoints, every operation rounded
// outward. Endpoints own their precision; binary operations widen to the
// larger operand precision.
class Interval {
public:
    Interval();
    explicit Interval(mpfr_prec_t prec);
    Interval(const Interval& o);
    Interval(Interval&& o) noexcept;
    Interval& operator=(const Interval& o);
    Interval& operator=(Interval&& o) noexcept;
    ~Interval();

    static Interval of_long(long v, mpfr_prec_t prec = Precision::working());
    static Interval of_bigint(const BigInt& v, mpfr_prec_t prec = Precision::working());
    static Interval of_rational(const Rational& v, mpfr_prec_t prec = Precision::working());
    static Interval of_double(double v, mpfr_prec_t prec = Precision::working());
    // Directed enclosure of ln(v) for rational v > 0.
    static Interval log_of_rational(const Rational& v, mpfr_prec_t prec = Precision::working());
    static Interval log_of_bigint(const BigInt& v, mpfr_prec_t prec = Precision::working());

    mpfr_prec_t precision() const;
    bool is_point() const;

    Interval operator+(const Interval& o) const;
    Interval operator-(const Interval& o) const;
    Interval operator-() const;
    Interval operator*(const Interval& o) const;
    Interval operator/(const Interval& o) const; // o must not contain 0
    Interval scaled(const Rational& c) const;    // c * this, exact scalar
    Interval shifted(const Rational& c) const;   // this + c

    Interval log() const;  // requires certainly positive
    Interval exp() const;
    // this^e for certainly-positive this and rational e, via exp(e*log).
    Interval pow(const Rational& e) const;

    static Interval min(const Interval& a, const Interval& b);
    static Interval max(const Interval& a, const Interval& b);
    Interval hull(const Interval& o) const;

    int sign() const;                  // -1 / +1 certain, 0 straddles or touches
    bool certainly_lt(const Interval& o) const;
    bool certainly_le(const Interval& o) const;
    bool certainly_positive() const;
    bool overlaps(const Interval& o) const;
    bool contains(const Rational& q) const;
    bool contains_zero() const;

    // floor(x) when it is the same for every x in the interval.
    std::optional<BigInt> floor_unique() const;

    double lo_double() const;  // rounded down
    double hi_double() const;  // rounded up
    double mid_double() const;
    double width_double() const;

    std::string lo_string(int digits = 25) const;
    std::string hi_string(int digits = 25) const;
    std::string mid_string(int digits = 25) const;

    const mpfr_t& lo() const { return lo_; }
    const mpfr_t& hi() const { return hi_; }
    mpfr_t& lo_mut() { return lo_; }
    mpfr_t& hi_mut() { return hi_; }

private:
    mpfr_t lo_;
    mpfr_t hi_;
};

} // namespace cfspectra
