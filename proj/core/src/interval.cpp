#include "cfspectra/interval.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <vector>

#include "cfspectra/errors.hpp"

namespace cfspectra {

namespace {

std::atomic<long> g_working{Precision::kDefault};

void ensure_exponent_range() {
    // The stock exponent range (about 2^30) is too small for quantities like
    // exp(psi(n)); widen once to the library maximum.
    static const bool done = [] {
        mpfr_set_emin(mpfr_get_emin_min());
        mpfr_set_emax(mpfr_get_emax_max());
        return true;
    }();
    (void)done;
}

} // namespace

mpfr_prec_t Precision::working() { return g_working.load(); }

void Precision::set_working(mpfr_prec_t bits) {
    if (bits < kMinWorking || bits > kEscalationLimit)
        throw UsageError("precision out of range");
    g_working.store(bits);
}

Interval::Interval() : Interval(Precision::working()) {}

Interval::Interval(mpfr_prec_t prec) {
    ensure_exponent_range();
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& o) {
    mpfr_init2(lo_, mpfr_get_prec(o.lo_));
    mpfr_init2(hi_, mpfr_get_prec(o.hi_));
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept {
    mpfr_init2(lo_, MPFR_PREC_MIN);
    mpfr_init2(hi_, MPFR_PREC_MIN);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
}

Interval& Interval::operator=(const Interval& o) {
    if (this != &o) {
        mpfr_set_prec(lo_, mpfr_get_prec(o.lo_));
        mpfr_set_prec(hi_, mpfr_get_prec(o.hi_));
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    return *this;
}

Interval& Interval::operator=(Interval&& o) noexcept {
    if (this != &o) {
        mpfr_swap(lo_, o.lo_);
        mpfr_swap(hi_, o.hi_);
    }
    return *this;
}

Interval::~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

Interval Interval::of_long(long v, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_si(r.lo_, v, MPFR_RNDD);
    mpfr_set_si(r.hi_, v, MPFR_RNDU);
    return r;
}

Interval Interval::of_bigint(const BigInt& v, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_z(r.lo_, v.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi_, v.get_mpz_t(), MPFR_RNDU);
    return r;
}

Interval Interval::of_rational(const Rational& v, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_q(r.lo_, v.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, v.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::of_double(double v, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_d(r.lo_, v, MPFR_RNDD);
    mpfr_set_d(r.hi_, v, MPFR_RNDU);
    return r;
}

Interval Interval::log_of_rational(const Rational& v, mpfr_prec_t prec) {
    if (sgn(v) <= 0) throw UsageError("log of non-positive rational");
    Interval x = of_rational(v, prec);
    return x.log();
}

Interval Interval::log_of_bigint(const BigInt& v, mpfr_prec_t prec) {
    if (sgn(v) <= 0) throw UsageError("log of non-positive integer");
    Interval x = of_bigint(v, prec);
    return x.log();
}

mpfr_prec_t Interval::precision() const {
    return std::max(mpfr_get_prec(lo_), mpfr_get_prec(hi_));
}

bool Interval::is_point() const { return mpfr_equal_p(lo_, hi_) != 0; }

Interval Interval::operator+(const Interval& o) const {
    Interval r(std::max(precision(), o.precision()));
    mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::operator-(const Interval& o) const {
    Interval r(std::max(precision(), o.precision()));
    mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
    return r;
}

Interval Interval::operator-() const {
    Interval r(precision());
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
}

Interval Interval::operator*(const Interval& o) const {
    const mpfr_prec_t prec = std::max(precision(), o.precision());
    Interval r(prec);
    mpfr_t t;
    mpfr_init2(t, prec);
    bool first = true;
    const mpfr_srcptr as[2] = {lo_, hi_};
    const mpfr_srcptr bs[2] = {o.lo_, o.hi_};
    for (auto a : as)
        for (auto b : bs) {
            mpfr_mul(t, a, b, MPFR_RNDD);
            if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
            mpfr_mul(t, a, b, MPFR_RNDU);
            if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    return r;
}

Interval Interval::operator/(const Interval& o) const {
    if (o.contains_zero())
        throw Error("interval division by an interval containing zero");
    const mpfr_prec_t prec = std::max(precision(), o.precision());
    Interval r(prec);
    mpfr_t t;
    mpfr_init2(t, prec);
    bool first = true;
    const mpfr_srcptr as[2] = {lo_, hi_};
    const mpfr_srcptr bs[2] = {o.lo_, o.hi_};
    for (auto a : as)
        for (auto b : bs) {
            mpfr_div(t, a, b, MPFR_RNDD);
            if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
            mpfr_div(t, a, b, MPFR_RNDU);
            if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    return r;
}

Interval Interval::scaled(const Rational& c) const {
    Interval r(precision());
    const int s = sgn(c);
    if (s == 0) return r; // [0,0]
    if (s > 0) {
        mpfr_mul_q(r.lo_, lo_, c.get_mpq_t(), MPFR_RNDD);
        mpfr_mul_q(r.hi_, hi_, c.get_mpq_t(), MPFR_RNDU);
    } else {
        mpfr_mul_q(r.lo_, hi_, c.get_mpq_t(), MPFR_RNDD);
        mpfr_mul_q(r.hi_, lo_, c.get_mpq_t(), MPFR_RNDU);
    }
    return r;
}

Interval Interval::shifted(const Rational& c) const {
    Interval r(precision());
    mpfr_add_q(r.lo_, lo_, c.get_mpq_t(), MPFR_RNDD);
    mpfr_add_q(r.hi_, hi_, c.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::log() const {
    if (!certainly_positive()) throw Error("interval log of non-positive interval");
    Interval r(precision());
    mpfr_log(r.lo_, lo_, MPFR_RNDD);
    mpfr_log(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval Interval::exp() const {
    Interval r(precision());
    mpfr_exp(r.lo_, lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval Interval::pow(const Rational& e) const {
    return log().scaled(e).exp();
}

Interval Interval::min(const Interval& a, const Interval& b) {
    Interval r(std::max(a.precision(), b.precision()));
    mpfr_min(r.lo_mut(), a.lo_, b.lo_, MPFR_RNDD);
    mpfr_min(r.hi_mut(), a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::max(const Interval& a, const Interval& b) {
    Interval r(std::max(a.precision(), b.precision()));
    mpfr_max(r.lo_mut(), a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_mut(), a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::hull(const Interval& o) const {
    Interval r(std::max(precision(), o.precision()));
    mpfr_min(r.lo_mut(), lo_, o.lo_, MPFR_RNDD);
    mpfr_max(r.hi_mut(), hi_, o.hi_, MPFR_RNDU);
    return r;
}

int Interval::sign() const {
    if (mpfr_sgn(lo_) > 0) return 1;
    if (mpfr_sgn(hi_) < 0) return -1;
    return 0;
}

bool Interval::certainly_lt(const Interval& o) const {
    return mpfr_less_p(hi_, o.lo_) != 0;
}

bool Interval::certainly_le(const Interval& o) const {
    return mpfr_lessequal_p(hi_, o.lo_) != 0;
}

bool Interval::certainly_positive() const { return mpfr_sgn(lo_) > 0; }

bool Interval::overlaps(const Interval& o) const {
    return !certainly_lt(o) && !o.certainly_lt(*this);
}

bool Interval::contains(const Rational& q) const {
    return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 &&
           mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
}

bool Interval::contains_zero() const {
    return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}

std::optional<BigInt> Interval::floor_unique() const {
    if (!mpfr_number_p(lo_) || !mpfr_number_p(hi_)) return std::nullopt;
    BigInt fl, fh;
    mpfr_get_z(fl.get_mpz_t(), lo_, MPFR_RNDD);
    mpfr_get_z(fh.get_mpz_t(), hi_, MPFR_RNDD);
    if (fl == fh) return fl;
    return std::nullopt;
}

double Interval::lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double Interval::mid_double() const {
    return 0.5 * (lo_double() + hi_double());
}

double Interval::width_double() const {
    mpfr_t w;
    mpfr_init2(w, 64);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
}

namespace {
std::string format_endpoint(const mpfr_t& x, int digits, mpfr_rnd_t rnd) {
    char* s = nullptr;
    // %R*e with explicit rounding; digits after the decimal point.
    const char spec = rnd == MPFR_RNDD ? 'D' : rnd == MPFR_RNDU ? 'U' : 'N';
    char fmt[16];
    std::snprintf(fmt, sizeof fmt, "%%.%dR%ce", digits, spec);
    if (mpfr_asprintf(&s, fmt, x) < 0) throw Error("mpfr formatting failed");
    std::string out(s);
    mpfr_free_str(s);
    return out;
}
} // namespace

std::string Interval::lo_string(int digits) const {
    return format_endpoint(lo_, digits, MPFR_RNDD);
}

std::string Interval::hi_string(int digits) const {
    return format_endpoint(hi_, digits, MPFR_RNDU);
}

std::string Interval::mid_string(int digits) const {
    mpfr_t m;
    mpfr_init2(m, precision());
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    std::string out = format_endpoint(m, digits, MPFR_RNDN);
    mpfr_clear(m);
    return out;
}

} // namespace cfspectra
