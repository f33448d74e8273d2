#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfspectra/log_value.hpp"
#include "cfspectra/numeric_util.hpp"
#include "cfspectra/real.hpp"
#include "cfspectra/rng.hpp"

namespace cfspectra {

// floor(e^t) as an exact integer. Resolves symbolically when t is an exact
// rational-log form, otherwise by enclosing e^t at escalating precision until
// the floor is pinned. Intended for t up to a few thousand (the result is
// materialized in full).
BigInt floor_exp_exact(const Real& t);

// One partial quotient: either an exact big integer or, when the integer
// would be astronomically large, the symbolic form floor(e^t) with a
// certified enclosure of its log.
class PartialQuotient {
public:
    // Quotients whose log exceeds kExactLogBits * log 2 are kept symbolic.
    static constexpr long kExactLogBits = 4096;
    // FloorExp requires t >= 1 so floor(e^t) >= 2 and the log defect
    // -log(1 - e^-t) is below 2 e^-t.
    static constexpr long kFloorExpMinT = 1;

    static PartialQuotient exact(BigInt v);   // v >= 1
    static PartialQuotient floor_exp(Real t); // t >= 1
    // floor(e^t), choosing the representation by the size threshold.
    static PartialQuotient from_exponent(const Real& t);

    bool is_exact() const { return kind_ == Kind::Exact; }
    const BigInt& value() const;  // Exact only
    const Real& exponent() const; // FloorExp only

    // Certified log of the represented integer. Exact-channel for factorable
    // exact values; for FloorExp an interval [t - eta, t] with
    // eta >= -log(1 - e^-t).
    Real log_value(mpfr_prec_t prec = Precision::working()) const;
    double approx_log() const;
    // The integer itself when materializable (Exact kind only).
    std::optional<BigInt> as_integer() const;

private:
    enum class Kind { Exact, FloorExp };
    PartialQuotient(Kind k, BigInt v, std::optional<Real> t)
        : kind_(k), value_(std::move(v)), t_(std::move(t)) {}

    Kind kind_;
    BigInt value_;          // Exact
    std::optional<Real> t_; // FloorExp
};

// A point of (0,1) presented through its continued-fraction expansion. The
// materialized prefix is cached; Constructed sources pull quotients from a
// generator in index order under an internal lock, so concurrent reads of
// independent points are safe.
class CFPoint {
public:
    // Full canonical expansion of a rational in (0,1).
    static CFPoint of_rational(const Rational& x);
    // gen(k) must return quotient k (1-based) deterministically; it is only
    // ever invoked with k = prefix_length + 1.
    static CFPoint constructed(std::string id,
                               std::function<PartialQuotient(std::size_t)> gen);

    // 1-based. Throws UsageError past the end of a finite expansion.
    PartialQuotient quotient(std::size_t k) const;
    std::optional<std::size_t> finite_length() const;
    const std::string& describe() const;

private:
    struct State {
        std::mutex mu;
        std::vector<PartialQuotient> prefix;
        std::function<PartialQuotient(std::size_t)> gen;
        std::optional<std::size_t> finite_len;
        std::string id;
    };
    std::shared_ptr<State> st_;
};

// Exact canonical expansion of x in (0,1), truncated to max_terms. The last
// quotient of an untruncated expansion is >= 2 unless the expansion is [a1].
std::vector<BigInt> cf_expand(const Rational& x, std::size_t max_terms);

// (floor(1/x), 1/x - floor(1/x)), exactly.
std::pair<BigInt, Rational> gauss_step(const Rational& x);

// Value of the finite continued fraction [a1, ..., am], exactly.
Rational cf_value(const std::vector<BigInt>& word);

// The interval of points whose expansion starts with the given word.
struct Cylinder {
    std::vector<BigInt> word;
    BigInt p_prev, q_prev, p_n, q_n; // continuants of orders n-1 and n
    Rational left, right;            // sorted endpoints p_n/q_n, (p_n+p_prev)/(q_n+q_prev)
    Rational length;                 // = 1/(q_n (q_n + q_prev))
};

Cylinder make_cylinder(const std::vector<BigInt>& word);

// Product of the first n partial quotients, carried in log-domain:
// ln result = sum_{k<=n} log a_k, with certified interval error from any
// FloorExp quotients. Non-decreasing in n.
LogValue birkhoff_log_sum(const CFPoint& x, std::size_t n);

// (1/n) sum_{k<=n} log a_k as a certified real.
Real khintchine_estimate(const CFPoint& x, std::size_t n);

// Streams the continued-fraction digits of a Lebesgue-uniform point of (0,1).
// The point is the real number whose binary digits are the concatenated
// 64-bit words of the source; digits are emitted exactly (a digit is released
// only once every extension of the consumed bits agrees on it). State is a
// signed 2x2 integer matrix, kept in 128-bit words while it fits and promoted
// to big integers on demand.
class LebesgueCF {
public:
    explicit LebesgueCF(std::uint64_t seed, bool force_big = false);
    LebesgueCF(std::function<std::uint64_t()> words, bool force_big = false);

    // Next partial quotient. Returns the digit, or 0 (never a digit) when it
    // does not fit in 64 bits; the big digit is then in big_digit().
    std::uint64_t next_digit();
    const BigInt& big_digit() const { return big_digit_; }

    std::size_t words_ingested() const { return words_; }
    bool in_big_mode() const { return big_; }

private:
    void ingest();
    void promote();
    void maybe_demote();
    int try_emit_fast(std::uint64_t& out);
    bool try_emit_big(std::uint64_t& out);

    std::function<std::uint64_t()> words_src_;
    bool big_ = false;
    bool force_big_ = false;
    __int128 a_ = 1, b_ = 0, c_ = 0, d_ = 1; // x(t) = (a t + b) / (c t + d)
    BigInt A_, B_, C_, D_;
    BigInt big_digit_;
    BigInt q_, r0_, r1_, u1_, v1_; // big-mode scratch
    std::size_t words_ = 0;
};

// A sampled point as a CFPoint (digits pulled lazily from LebesgueCF).
CFPoint sample_cf_point(std::uint64_t seed);

// Mean over `count` independent points of (1/n) sum_{k<=n} log a_k,
// accumulated in double (statistical use only, not certified).
double khintchine_mc_mean(std::size_t count, std::size_t n,
                          std::uint64_t master_seed, bool force_big = false);

} // namespace cfspectra
