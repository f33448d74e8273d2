#pragma once

#include "cfspectra/real.hpp"

namespace cfspectra {

// A positive real v held as ln(v). Multiplication, division and rational
// powers act on the log; the exact channel of the underlying Real doubles as
// the "exact form": ln v = q + sum c_p ln p encodes v = e^q * prod p^{c_p}.
class LogValue {
public:
    LogValue() : ln_(Real::of_long(0)) {} // v = 1

    static LogValue one() { return LogValue(); }
    static LogValue from_ln(Real ln);
    static LogValue of_bigint(const BigInt& v, mpfr_prec_t prec = Precision::working());
    static LogValue of_rational(const Rational& v, mpfr_prec_t prec = Precision::working());

    const Real& ln() const { return ln_; }

    LogValue operator*(const LogValue& o) const { return from_ln(ln_ + o.ln_); }
    LogValue operator/(const LogValue& o) const { return from_ln(ln_ - o.ln_); }
    LogValue pow(const Rational& e) const { return from_ln(ln_.scaled(e)); }

    // v as an exact rational when the exact form is an integer combination.
    std::optional<Rational> as_rational(std::size_t max_bits = std::size_t{1} << 21) const;

    // The value itself as a Real: exact when as_rational succeeds, otherwise
    // the interval exp of the log enclosure.
    Real value_real(mpfr_prec_t prec = Precision::working()) const;

    static int compare(const LogValue& a, const LogValue& b) {
        return Real::compare(a.ln_, b.ln_);
    }
    bool le(const LogValue& o) const { return compare(*this, o) <= 0; }
    bool eq(const LogValue& o) const { return compare(*this, o) == 0; }

private:
    Real ln_;
};

} // namespace cfspectra
