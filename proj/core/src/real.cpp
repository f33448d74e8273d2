#include "cfspectra/real.hpp"

#include <cmath>
#include <mutex>

#include "cfspectra/errors.hpp"

namespace cfspectra {

namespace {

// ln(p) enclosures are requested over and over for a handful of primes;
// memoize per (prime, precision).
Interval prime_log_enclosure(std::uint64_t p, mpfr_prec_t prec) {
    static std::mutex mu;
    static std::map<std::pair<std::uint64_t, mpfr_prec_t>, Interval> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, prec);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Interval v = Interval::log_of_bigint(BigInt(static_cast<unsigned long>(p)), prec);
    cache.emplace(key, v);
    return v;
}

} // namespace

LogCombo LogCombo::rational(const Rational& q) {
    LogCombo c;
    c.q_ = q;
    return c;
}

LogCombo LogCombo::prime_log(std::uint64_t p, const Rational& c) {
    LogCombo out;
    if (sgn(c) != 0) out.coeffs_[p] = c;
    return out;
}

std::optional<LogCombo> LogCombo::log_of_bigint(const BigInt& v,
                                                unsigned long trial_limit) {
    auto f = factorize(v, trial_limit);
    if (!f) return std::nullopt;
    LogCombo out;
    for (const auto& [p, e] : *f)
        out.coeffs_[p] = Rational(static_cast<unsigned long>(e));
    return out;
}

std::optional<Rational> LogCombo::proportional(const LogCombo& num,
                                               const LogCombo& den) {
    if (num.is_zero()) return Rational(0);
    Rational t;
    if (!den.coeffs_.empty()) {
        const auto& [p, c] = *den.coeffs_.begin();
        auto it = num.coeffs_.find(p);
        if (it == num.coeffs_.end()) return std::nullopt;
        t = it->second / c;
    } else {
        if (sgn(den.q_) == 0) return std::nullopt;
        t = num.q_ / den.q_;
    }
    t.canonicalize();
    if ((num - den.scaled(t)).is_zero()) return t;
    return std::nullopt;
}

std::optional<LogCombo> LogCombo::log_of_rational(const Rational& v) {
    if (sgn(v) <= 0) throw UsageError("log of non-positive rational");
    auto num = log_of_bigint(BigInt(v.get_num()));
    if (!num) return std::nullopt;
    auto den = log_of_bigint(BigInt(v.get_den()));
    if (!den) return std::nullopt;
    return *num - *den;
}

LogCombo LogCombo::operator+(const LogCombo& o) const {
    LogCombo out;
    out.q_ = q_ + o.q_;
    out.coeffs_ = coeffs_;
    for (const auto& [p, c] : o.coeffs_) {
        auto it = out.coeffs_.find(p);
        if (it == out.coeffs_.end()) {
            out.coeffs_[p] = c;
        } else {
            it->second += c;
            if (sgn(it->second) == 0) out.coeffs_.erase(it);
        }
    }
    return out;
}

LogCombo LogCombo::operator-() const {
    LogCombo out;
    out.q_ = -q_;
    for (const auto& [p, c] : coeffs_) out.coeffs_[p] = -c;
    return out;
}

LogCombo LogCombo::operator-(const LogCombo& o) const { return *this + (-o); }

LogCombo LogCombo::scaled(const Rational& c) const {
    LogCombo out;
    if (sgn(c) == 0) return out;
    out.q_ = q_ * c;
    for (const auto& [p, k] : coeffs_) out.coeffs_[p] = k * c;
    return out;
}

bool LogCombo::is_zero() const { return coeffs_.empty() && sgn(q_) == 0; }

std::optional<Rational> LogCombo::exp_rational(std::size_t max_bits) const {
    if (sgn(q_) != 0) return std::nullopt;
    // Estimate the materialized size before committing to it.
    double bits = 0;
    for (const auto& [p, c] : coeffs_) {
        if (c.get_den() != 1) return std::nullopt;
        if (!c.get_num().fits_slong_p()) return std::nullopt;
        bits += std::abs(c.get_num().get_d()) * std::log2(static_cast<double>(p));
    }
    if (bits > static_cast<double>(max_bits)) return std::nullopt;
    Rational out(1);
    for (const auto& [p, c] : coeffs_) {
        long e = c.get_num().get_si();
        BigInt pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), p, static_cast<unsigned long>(e < 0 ? -e : e));
        if (e >= 0)
            out *= Rational(pw);
        else
            out /= Rational(pw);
    }
    out.canonicalize();
    return out;
}

Interval LogCombo::evaluate(mpfr_prec_t prec) const {
    Interval acc = Interval::of_rational(q_, prec);
    for (const auto& [p, c] : coeffs_)
        acc = acc + prime_log_enclosure(p, prec).scaled(c);
    return acc;
}

bool LogCombo::identical(const LogCombo& o) const {
    return q_ == o.q_ && coeffs_ == o.coeffs_;
}

Real::Real() : exact_(LogCombo()), enc_(Interval::of_long(0)) {}

Real Real::of_rational(const Rational& q) {
    Real r;
    r.exact_ = LogCombo::rational(q);
    r.enc_ = Interval::of_rational(q);
    return r;
}

Real Real::of_long(long v) { return of_rational(Rational(v)); }

Real Real::of_exact(LogCombo c, mpfr_prec_t prec) {
    Real r;
    r.enc_ = c.evaluate(prec);
    r.exact_ = std::move(c);
    return r;
}

Real Real::of_interval(Interval enc) {
    Real r;
    r.exact_.reset();
    r.enc_ = std::move(enc);
    return r;
}

Real Real::log_of_rational(const Rational& v, mpfr_prec_t prec) {
    if (auto c = LogCombo::log_of_rational(v)) return of_exact(std::move(*c), prec);
    return of_interval(Interval::log_of_rational(v, prec));
}

Real Real::log_of_bigint(const BigInt& v, mpfr_prec_t prec) {
    // Word-size values get the full trial-division budget. Bigger values are
    // only worth factoring when smooth -- that covers the exact-threshold
    // digits like 2^(2^n) -- so cap the wheel and fall back to a tight
    // interval ln when a cofactor survives.
    const unsigned long limit =
        mpz_fits_ulong_p(v.get_mpz_t()) ? 100000ul : 256ul;
    if (auto c = LogCombo::log_of_bigint(v, limit)) return of_exact(std::move(*c), prec);
    return of_interval(Interval::log_of_bigint(v, prec));
}

std::optional<Rational> Real::as_rational() const {
    if (exact_ && exact_->is_rational()) return exact_->rational_part();
    return std::nullopt;
}

Real Real::operator+(const Real& o) const {
    Real r;
    r.enc_ = enc_ + o.enc_;
    if (exact_ && o.exact_)
        r.exact_ = *exact_ + *o.exact_;
    else
        r.exact_.reset();
    return r;
}

Real Real::operator-(const Real& o) const { return *this + (-o); }

Real Real::operator-() const {
    Real r;
    r.enc_ = -enc_;
    if (exact_)
        r.exact_ = -*exact_;
    else
        r.exact_.reset();
    return r;
}

Real Real::scaled(const Rational& c) const {
    Real r;
    r.enc_ = enc_.scaled(c);
    if (exact_)
        r.exact_ = exact_->scaled(c);
    else
        r.exact_.reset();
    return r;
}

Real Real::shifted(const Rational& c) const {
    Real r;
    r.enc_ = enc_.shifted(c);
    if (exact_)
        r.exact_ = *exact_ + LogCombo::rational(c);
    else
        r.exact_.reset();
    return r;
}

Real Real::mul(const Real& o) const {
    if (auto q = o.as_rational()) return scaled(*q);
    if (auto q = as_rational()) return o.scaled(*q);
    return of_interval(enc_ * o.enc_);
}

Real Real::div(const Real& o) const {
    if (auto q = o.as_rational()) {
        if (sgn(*q) == 0) throw Error("division by exact zero");
        return scaled(Rational(1) / *q);
    }
    // Proportional exact forms divide to an exact rational; this is what
    // keeps ratio series of single-prime growth models exact.
    if (exact_ && o.exact_) {
        if (auto t = LogCombo::proportional(*exact_, *o.exact_))
            return of_rational(*t);
    }
    return of_interval(enc_ / o.enc_);
}

Interval Real::enclosure(mpfr_prec_t prec) const {
    if (exact_ && prec > enc_.precision()) return exact_->evaluate(prec);
    return enc_;
}

double Real::approx() const { return enc_.mid_double(); }

int Real::compare(const Real& a, const Real& b) {
    if (a.exact_ && b.exact_) {
        LogCombo d = *a.exact_ - *b.exact_;
        if (d.is_zero()) return 0;
        if (d.is_rational()) return sgn(d.rational_part());
        for (mpfr_prec_t prec = Precision::working();
             prec <= Precision::kEscalationLimit; prec *= 2) {
            Interval v = d.evaluate(prec);
            int s = v.sign();
            if (s != 0) return s;
        }
        throw IndistinguishableError(
            "distinct exact forms not separated at the escalation limit");
    }
    // Interval comparison; exact sides can be re-evaluated, pure intervals
    // cannot be tightened beyond what they already carry.
    mpfr_prec_t prec = std::max(a.enc_.precision(), b.enc_.precision());
    for (;;) {
        Interval ia = a.enclosure(prec);
        Interval ib = b.enclosure(prec);
        if (ia.certainly_lt(ib)) return -1;
        if (ib.certainly_lt(ia)) return 1;
        if (ia.is_point() && ib.is_point() && !ia.certainly_lt(ib) &&
            !ib.certainly_lt(ia))
            return 0; // identical representable points
        if (!a.exact_ && !b.exact_)
            throw IndistinguishableError(
                "overlapping enclosures with no exact channel to refine");
        if (prec >= Precision::kEscalationLimit)
            throw IndistinguishableError(
                "overlapping enclosures at the escalation limit");
        prec *= 2;
    }
}

Real Real::min(const Real& a, const Real& b) { return compare(a, b) <= 0 ? a : b; }
Real Real::max(const Real& a, const Real& b) { return compare(a, b) >= 0 ? a : b; }

} // namespace cfspectra
