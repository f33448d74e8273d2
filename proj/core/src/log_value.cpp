#include "cfspectra/log_value.hpp"

#include "cfspectra/errors.hpp"

namespace cfspectra {

LogValue LogValue::from_ln(Real ln) {
    LogValue v;
    v.ln_ = std::move(ln);
    return v;
}

LogValue LogValue::of_bigint(const BigInt& v, mpfr_prec_t prec) {
    if (v <= 0) throw UsageError("LogValue::of_bigint: value must be positive");
    return from_ln(Real::log_of_bigint(v, prec));
}

LogValue LogValue::of_rational(const Rational& v, mpfr_prec_t prec) {
    if (v <= 0) throw UsageError("LogValue::of_rational: value must be positive");
    return from_ln(Real::log_of_rational(v, prec));
}

std::optional<Rational> LogValue::as_rational(std::size_t max_bits) const {
    const std::optional<LogCombo>& ex = ln_.exact();
    if (!ex) return std::nullopt;
    return ex->exp_rational(max_bits);
}

Real LogValue::value_real(mpfr_prec_t prec) const {
    if (auto r = as_rational()) return Real::of_rational(*r);
    return Real::of_interval(ln_.enclosure(prec).exp());
}

} // namespace cfspectra
