#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cfspectra/log_value.hpp"
#include "cfspectra/numeric_util.hpp"
#include "cfspectra/real.hpp"

namespace cfspectra {

// Boundary indices and exponent bookkeeping for the factorial-blocks growth
// function: fb_boundary(k) = 1! + 2! + ... + k! (fb_boundary(0) = 0).
BigInt fb_boundary(unsigned k);
BigInt fb_even_sum(unsigned k); // 2! + 4! + ... + (2k)!
BigInt fb_odd_sum(unsigned k);  // 1! + 3! + ... + (2k-1)!

// A growth function psi: {1,2,...} -> (0,inf), queried in log-domain.
// Builtin families evaluate with exact symbolic logs; tables and custom
// evaluators supply their own values.
class GrowthFunction {
public:
    enum class Family { Power, Exponential, FactorialBlocks, Table, Custom };

    // psi(n) = n^p, p > 1.
    static GrowthFunction power(const Rational& p);
    // psi(n) = scale * c^n, c > 1, scale > 0.
    static GrowthFunction exponential(const Rational& c, const Rational& scale = 1);
    // The staircase alternating base-4 and base-3 runs on blocks delimited by
    // factorial sums, with a factor 5 at every second boundary:
    //   fb_boundary(2k) < n <= fb_boundary(2k+1):
    //       psi(n) = 5^k * 4^{fb_even_sum(k)} * 3^{n - fb_even_sum(k)}
    //   fb_boundary(2k-1) < n <= fb_boundary(2k):
    //       psi(n) = 5^{k-1} * 4^{n - fb_odd_sum(k)} * 3^{fb_odd_sum(k)}
    // Consecutive ratios are 3 inside the first kind, 4 inside the second,
    // and 15 when stepping past fb_boundary(2k).
    static GrowthFunction factorial_blocks();
    static GrowthFunction table(std::vector<LogValue> values);
    static GrowthFunction custom(std::string id,
                                 std::function<LogValue(std::size_t)> eval,
                                 std::optional<std::size_t> monotone_tail_hint,
                                 bool divergent_hint);

    Family family() const { return st_->family; }
    const std::string& describe() const { return st_->id; }

    LogValue eval(std::size_t n) const; // psi(n)
    Real log_psi(std::size_t n) const { return eval(n).ln(); }

    // Index from which psi is known non-decreasing (1 for builtin families).
    std::optional<std::size_t> monotone_tail_hint() const {
        return st_->monotone_hint;
    }
    // Whether psi(n)/n -> infinity is known for this function.
    bool divergent_hint() const { return st_->divergent; }
    // Table length; nullopt for unbounded domains.
    std::optional<std::size_t> domain_limit() const { return st_->domain_limit; }

    // Exact asymptotics where the family determines them: liminf and limsup
    // of log psi(n)/n, and limsup of psi(n+1)/psi(n).
    struct KnownExponents {
        Real log_b;
        Real log_B;
        LogValue beta;
    };
    std::optional<KnownExponents> known_exponents() const;

private:
    struct State {
        Family family;
        std::string id;
        Rational p;     // Power
        Rational c, sc; // Exponential
        std::vector<LogValue> table;
        std::function<LogValue(std::size_t)> custom;
        std::optional<std::size_t> monotone_hint;
        std::optional<std::size_t> domain_limit;
        bool divergent = false;
    };
    std::shared_ptr<const State> st_;
};

// Finite-horizon window statistics standing in for the asymptotic exponents.
struct ExponentWindow {
    std::size_t lo, hi;        // inclusive index window
    Real inf_log_ratio;        // inf over the window of log psi(n)/n
    Real sup_log_ratio;        // sup over the window of log psi(n)/n
    LogValue step_sup;         // sup of psi(n+1)/psi(n), n in [lo, hi)
    std::size_t step_sup_arg;  // first n attaining step_sup (0 if window empty)
};

struct ExponentReport {
    std::size_t horizon;
    // exp of inf/sup of log psi(n)/n over [horizon/2, horizon]
    LogValue b_hat, B_hat;
    // sup of psi(n+1)/psi(n) over n < horizon, and the first attaining index
    LogValue beta_hat;
    std::size_t beta_arg;
    std::vector<ExponentWindow> tail_series; // dyadic windows up to horizon
};

ExponentReport exponents(const GrowthFunction& g, std::size_t horizon);

// Monotone comparison function phi for psi: the non-decreasing minorant
// min_{k>=n} psi(k) or majorant max_{k<=n} psi(k).
struct Envelope {
    enum class Kind { MinTail, MaxPrefix };
    Kind kind;
    std::vector<LogValue> values; // values[i] = phi(i+1), i < n_max
    std::vector<std::size_t> touch_indices; // n with phi(n) = psi(n)
    std::size_t n_max = 0;
    std::size_t horizon_used = 0;
    // set when a MinTail had to truncate the tail min at the horizon without
    // monotonicity coverage (result only valid as a finite approximation)
    bool finite_horizon_flagged = false;
};

Envelope envelope(const GrowthFunction& g, Envelope::Kind kind,
                  std::size_t n_max, std::size_t horizon,
                  bool allow_finite_horizon = false);

// Evidence that psi is limsup-equivalent (MinTail) or liminf-equivalent
// (MaxPrefix) to its monotone envelope: the bounded-ratio law holds and
// touches recur in every window [m, 2m].
struct EquivalenceReport {
    Envelope::Kind kind;
    std::size_t n_max;
    std::size_t touch_count;
    std::size_t max_touch_gap; // max gap between consecutive touches (first touch counts from 0)
    bool ratios_bounded;       // MinTail: phi <= psi everywhere; MaxPrefix: phi >= psi
    bool touches_recur;        // >= 1 touch in every window [m, 2m], m <= n_max/2
    bool evidence;             // both of the above
    std::vector<double> running_extreme_ratio; // running sup (MinTail) / inf (MaxPrefix) of phi/psi
};

EquivalenceReport equiv_check(const GrowthFunction& g, const Envelope& env,
                              std::size_t n_max);

// Dyadic-window minima of psi(n)/n; strictly increasing minima are the
// finite-horizon certificate that psi(n)/n diverges.
struct DivergenceWindow {
    std::size_t lo, hi;
    LogValue min_ratio; // min over the window of psi(n)/n
    std::size_t argmin;
};

struct DivergenceReport {
    std::size_t horizon;
    std::vector<DivergenceWindow> windows;
    bool minima_strictly_increasing;
    bool flagged_non_divergent; // = !minima_strictly_increasing
};

DivergenceReport divergence_check(const GrowthFunction& g, std::size_t horizon);

} // namespace cfspectra
