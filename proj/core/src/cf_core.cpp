#include "cfspectra/cf_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "cfspectra/errors.hpp"

namespace cfspectra {

namespace {

constexpr double kLn2 = 0.6931471805599453;

double log_of_mpz(const BigInt& v) {
    signed long e = 0;
    const double m = mpz_get_d_2exp(&e, v.get_mpz_t());
    return std::log(m) + static_cast<double>(e) * kLn2;
}

BigInt int128_to_mpz(__int128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v)
                              : static_cast<unsigned __int128>(v);
    BigInt z(static_cast<unsigned long>(u >> 64));
    z <<= 64;
    z += static_cast<unsigned long>(u);
    return neg ? BigInt(-z) : z;
}

__int128 mpz_to_int128(const BigInt& v) {
    BigInt a = abs(v);
    const unsigned long lo = mpz_get_ui(a.get_mpz_t());
    a >>= 64;
    const unsigned long hi = mpz_get_ui(a.get_mpz_t());
    unsigned __int128 u =
        (static_cast<unsigned __int128>(hi) << 64) | lo;
    return sgn(v) < 0 ? -static_cast<__int128>(u) : static_cast<__int128>(u);
}

} // namespace

BigInt floor_exp_exact(const Real& t) {
    if (t.exact()) {
        if (auto r = t.exact()->exp_rational()) return floor_rational(*r);
    }
    // Start near the precision the magnitude demands: floor(e^t) has about
    // t/log 2 bits.
    const double approx_bits = t.approx() / kLn2;
    mpfr_prec_t prec = Precision::working();
    if (approx_bits > static_cast<double>(prec) &&
        approx_bits < static_cast<double>(Precision::kEscalationLimit)) {
        prec = static_cast<mpfr_prec_t>(approx_bits) + 64;
    }
    for (; prec <= Precision::kEscalationLimit; prec *= 2) {
        const Interval ex = t.enclosure(prec).exp();
        if (auto f = ex.floor_unique()) return *f;
    }
    throw IndistinguishableError(
        "floor_exp_exact: floor not pinned at maximum precision");
}

PartialQuotient PartialQuotient::exact(BigInt v) {
    if (v < 1) throw UsageError("PartialQuotient: quotient must be >= 1");
    return PartialQuotient(Kind::Exact, std::move(v), std::nullopt);
}

PartialQuotient PartialQuotient::floor_exp(Real t) {
    if (Real::compare(t, Real::of_long(kFloorExpMinT)) < 0)
        throw UsageError("PartialQuotient: FloorExp exponent below t_min");
    return PartialQuotient(Kind::FloorExp, BigInt(0), std::move(t));
}

PartialQuotient PartialQuotient::from_exponent(const Real& t) {
    static const Real threshold =
        Real::of_exact(LogCombo::prime_log(2, Rational(kExactLogBits)));
    int cmp = 1;
    try {
        cmp = Real::compare(t, threshold);
    } catch (const IndistinguishableError&) {
        cmp = 1; // treat borderline as large; FloorExp stays valid
    }
    if (cmp <= 0) {
        BigInt v = floor_exp_exact(t);
        if (v < 1)
            throw UsageError("PartialQuotient: floor(e^t) < 1, t negative");
        return exact(std::move(v));
    }
    return floor_exp(t);
}

const BigInt& PartialQuotient::value() const {
    if (kind_ != Kind::Exact)
        throw UsageError("PartialQuotient: no exact value for FloorExp kind");
    return value_;
}

const Real& PartialQuotient::exponent() const {
    if (kind_ != Kind::FloorExp)
        throw UsageError("PartialQuotient: no exponent for Exact kind");
    return *t_;
}

Real PartialQuotient::log_value(mpfr_prec_t prec) const {
    if (kind_ == Kind::Exact) return Real::log_of_bigint(value_, prec);
    // log floor(e^t) in [t - eta, t]; eta = -log(1 - e^-t) <= 2 e^-t for
    // t >= 1. The bound survives underflow: exp rounded up stays positive.
    const Interval enc = t_->enclosure(prec);
    Interval res(prec);
    mpfr_t eta;
    mpfr_init2(eta, prec);
    mpfr_neg(eta, enc.lo(), MPFR_RNDU);
    mpfr_exp(eta, eta, MPFR_RNDU);
    mpfr_mul_2ui(eta, eta, 1, MPFR_RNDU);
    mpfr_sub(res.lo_mut(), enc.lo(), eta, MPFR_RNDD);
    mpfr_set(res.hi_mut(), enc.hi(), MPFR_RNDU);
    mpfr_clear(eta);
    return Real::of_interval(std::move(res));
}

double PartialQuotient::approx_log() const {
    if (kind_ == Kind::Exact) return log_of_mpz(value_);
    return t_->approx();
}

std::optional<BigInt> PartialQuotient::as_integer() const {
    if (kind_ == Kind::Exact) return value_;
    return std::nullopt;
}

CFPoint CFPoint::of_rational(const Rational& x) {
    auto st = std::make_shared<State>();
    st->id = "rational:" + to_string(x);
    const auto word = cf_expand(x, std::numeric_limits<std::size_t>::max());
    st->prefix.reserve(word.size());
    for (const auto& a : word) st->prefix.push_back(PartialQuotient::exact(a));
    st->finite_len = word.size();
    CFPoint p;
    p.st_ = std::move(st);
    return p;
}

CFPoint CFPoint::constructed(std::string id,
                             std::function<PartialQuotient(std::size_t)> gen) {
    if (!gen) throw UsageError("CFPoint: null generator");
    auto st = std::make_shared<State>();
    st->id = std::move(id);
    st->gen = std::move(gen);
    CFPoint p;
    p.st_ = std::move(st);
    return p;
}

PartialQuotient CFPoint::quotient(std::size_t k) const {
    if (k == 0) throw UsageError("CFPoint: quotient indices are 1-based");
    std::lock_guard<std::mutex> lock(st_->mu);
    while (st_->prefix.size() < k) {
        if (st_->finite_len)
            throw UsageError("CFPoint: index past the end of a finite expansion");
        st_->prefix.push_back(st_->gen(st_->prefix.size() + 1));
    }
    return st_->prefix[k - 1];
}

std::optional<std::size_t> CFPoint::finite_length() const {
    std::lock_guard<std::mutex> lock(st_->mu);
    return st_->finite_len;
}

const std::string& CFPoint::describe() const { return st_->id; }

std::pair<BigInt, Rational> gauss_step(const Rational& x) {
    if (sgn(x) <= 0 || x >= 1)
        throw UsageError("gauss_step: x must lie in (0,1)");
    const BigInt& p = x.get_num();
    const BigInt& q = x.get_den();
    BigInt a;
    mpz_fdiv_q(a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    Rational y(q - a * p, p);
    y.canonicalize();
    return {std::move(a), std::move(y)};
}

std::vector<BigInt> cf_expand(const Rational& x, std::size_t max_terms) {
    if (sgn(x) <= 0 || x >= 1)
        throw UsageError("cf_expand: x must lie in (0,1)");
    std::vector<BigInt> out;
    Rational y = x;
    while (out.size() < max_terms) {
        auto [a, rest] = gauss_step(y);
        out.push_back(std::move(a));
        if (sgn(rest) == 0) break;
        y = std::move(rest);
    }
    return out;
}

Rational cf_value(const std::vector<BigInt>& word) {
    if (word.empty()) throw UsageError("cf_value: empty word");
    BigInt p_prev(1), q_prev(0), p(0), q(1); // orders -1 and 0
    for (const auto& a : word) {
        if (a < 1) throw UsageError("cf_value: quotients must be >= 1");
        BigInt np = a * p + p_prev;
        BigInt nq = a * q + q_prev;
        p_prev = std::move(p);
        q_prev = std::move(q);
        p = std::move(np);
        q = std::move(nq);
    }
    Rational v(p, q);
    v.canonicalize();
    return v;
}

Cylinder make_cylinder(const std::vector<BigInt>& word) {
    if (word.empty()) throw UsageError("make_cylinder: empty word");
    Cylinder cyl;
    cyl.word = word;
    BigInt p_prev(1), q_prev(0), p(0), q(1);
    for (const auto& s : word) {
        if (s < 1) throw UsageError("make_cylinder: quotients must be >= 1");
        BigInt np = s * p + p_prev;
        BigInt nq = s * q + q_prev;
        p_prev = std::move(p);
        q_prev = std::move(q);
        p = std::move(np);
        q = std::move(nq);
    }
    cyl.p_prev = p_prev;
    cyl.q_prev = q_prev;
    cyl.p_n = p;
    cyl.q_n = q;
    Rational e1(p, q);
    e1.canonicalize();
    Rational e2(p + p_prev, q + q_prev);
    e2.canonicalize();
    cyl.left = std::min(e1, e2);
    cyl.right = std::max(e1, e2);
    cyl.length = cyl.right - cyl.left;
    return cyl;
}

LogValue birkhoff_log_sum(const CFPoint& x, std::size_t n) {
    Real s = Real::of_long(0);
    for (std::size_t k = 1; k <= n; ++k) s = s + x.quotient(k).log_value();
    return LogValue::from_ln(std::move(s));
}

Real khintchine_estimate(const CFPoint& x, std::size_t n) {
    if (n == 0) throw UsageError("khintchine_estimate: n must be >= 1");
    return birkhoff_log_sum(x, n).ln().scaled(
        Rational(1, static_cast<unsigned long>(n)));
}

// ---------------------------------------------------------------------------
// LebesgueCF

LebesgueCF::LebesgueCF(std::uint64_t seed, bool force_big)
    : LebesgueCF(
          [rng = Xoshiro256(seed)]() mutable { return rng.next(); },
          force_big) {}

LebesgueCF::LebesgueCF(std::function<std::uint64_t()> words, bool force_big)
    : words_src_(std::move(words)), big_(force_big), force_big_(force_big) {
    if (!words_src_) throw UsageError("LebesgueCF: null word source");
    if (big_) {
        A_ = 1;
        B_ = 0;
        C_ = 0;
        D_ = 1;
    }
}

void LebesgueCF::promote() {
    A_ = int128_to_mpz(a_);
    B_ = int128_to_mpz(b_);
    C_ = int128_to_mpz(c_);
    D_ = int128_to_mpz(d_);
    big_ = true;
}

void LebesgueCF::maybe_demote() {
    if (force_big_) return;
    const auto small = [](const BigInt& z) {
        return mpz_sizeinbase(z.get_mpz_t(), 2) <= 61;
    };
    if (small(A_) && small(B_) && small(C_) && small(D_)) {
        a_ = mpz_to_int128(A_);
        b_ = mpz_to_int128(B_);
        c_ = mpz_to_int128(C_);
        d_ = mpz_to_int128(D_);
        big_ = false;
    }
}

void LebesgueCF::ingest() {
    const std::uint64_t r = words_src_();
    ++words_;
    if (!big_) {
        // stay in 128-bit words only when products cannot overflow
        const auto fits = [](__int128 v) {
            const __int128 lim = static_cast<__int128>(1) << 61;
            return v > -lim && v < lim;
        };
        if (fits(a_) && fits(b_) && fits(c_) && fits(d_)) {
            const __int128 two64 = static_cast<__int128>(1) << 64;
            b_ = a_ * static_cast<__int128>(r) + b_ * two64;
            d_ = c_ * static_cast<__int128>(r) + d_ * two64;
            return;
        }
        promote();
    }
    B_ = A_ * static_cast<unsigned long>(r) + (B_ << 64);
    D_ = C_ * static_cast<unsigned long>(r) + (D_ << 64);
}

// Emits a digit when floor((c t + d)/(a t + b)) is the same integer at both
// endpoints t = 0, 1 and the residual x' = 1/x - q stays strictly positive
// there; then x' = ((c - q a) t + (d - q b))/(a t + b), realized below via
// the division remainders alone. Returns 1 digit emitted, 0 need more bits,
// -1 state promoted (caller retries).
int LebesgueCF::try_emit_fast(std::uint64_t& out) {
    if (b_ < 1 || d_ < 1) return 0;
    __int128 u1, v1;
    if (__builtin_add_overflow(a_, b_, &u1) ||
        __builtin_add_overflow(c_, d_, &v1)) {
        promote();
        return -1;
    }
    if (u1 < 1 || v1 < 1) return 0;
    const __int128 q0 = d_ / b_, r0 = d_ % b_;
    const __int128 q1 = v1 / u1, r1 = v1 % u1;
    if (q0 != q1 || q0 < 1 || r0 < 1 || r1 < 1) return 0;
    c_ = a_;
    d_ = b_;
    a_ = r1 - r0;
    b_ = r0;
    if (q0 > static_cast<__int128>(UINT64_MAX)) {
        big_digit_ = int128_to_mpz(q0);
        out = 0;
        return 1;
    }
    out = static_cast<std::uint64_t>(q0);
    return 1;
}

bool LebesgueCF::try_emit_big(std::uint64_t& out) {
    if (B_ < 1 || D_ < 1) return false;
    u1_ = A_ + B_;
    v1_ = C_ + D_;
    if (u1_ < 1 || v1_ < 1) return false;
    mpz_fdiv_qr(q_.get_mpz_t(), r0_.get_mpz_t(), D_.get_mpz_t(), B_.get_mpz_t());
    BigInt q1;
    mpz_fdiv_qr(q1.get_mpz_t(), r1_.get_mpz_t(), v1_.get_mpz_t(),
                u1_.get_mpz_t());
    if (q_ != q1 || q_ < 1 || r0_ < 1 || r1_ < 1) return false;
    C_ = A_;
    D_ = B_;
    A_ = r1_ - r0_;
    B_ = r0_;
    if (mpz_sizeinbase(q_.get_mpz_t(), 2) > 64) {
        big_digit_ = q_;
        out = 0;
    } else {
        out = mpz_get_ui(q_.get_mpz_t());
    }
    maybe_demote();
    return true;
}

std::uint64_t LebesgueCF::next_digit() {
    for (;;) {
        std::uint64_t out = 0;
        if (!big_) {
            const int st = try_emit_fast(out);
            if (st == 1) return out;
            if (st == -1) continue;
        } else if (try_emit_big(out)) {
            return out;
        }
        ingest();
    }
}

CFPoint sample_cf_point(std::uint64_t seed) {
    auto src = std::make_shared<LebesgueCF>(seed);
    return CFPoint::constructed(
        "lebesgue:" + std::to_string(seed), [src](std::size_t) {
            const std::uint64_t d = src->next_digit();
            if (d == 0) return PartialQuotient::exact(src->big_digit());
            return PartialQuotient::exact(
                BigInt(static_cast<unsigned long>(d)));
        });
}

double khintchine_mc_mean(std::size_t count, std::size_t n,
                          std::uint64_t master_seed, bool force_big) {
    if (count == 0 || n == 0)
        throw UsageError("khintchine_mc_mean: count and n must be >= 1");
    static const std::array<double, 256> lut = [] {
        std::array<double, 256> t{};
        for (std::size_t i = 1; i < t.size(); ++i)
            t[i] = std::log(static_cast<double>(i));
        return t;
    }();
    double total = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        LebesgueCF s(derive_seed(master_seed, i), force_big);
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const std::uint64_t d = s.next_digit();
            if (d == 0)
                acc += log_of_mpz(s.big_digit());
            else if (d < lut.size())
                acc += lut[d];
            else
                acc += std::log(static_cast<double>(d));
        }
        total += acc / static_cast<double>(n);
    }
    return total / static_cast<double>(count);
}

} // namespace cfspectra
