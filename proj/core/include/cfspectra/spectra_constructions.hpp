#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cfspectra/cf_core.hpp"
#include "cfspectra/growth_model.hpp"
#include "cfspectra/numeric_util.hpp"
#include "cfspectra/real.hpp"

namespace cfspectra {

// Staircase of quotient inflation factors used by the limsup-side witness.
// For each n, alpha[n-1] = k_n + 1 where k_n is the largest k whose
// threshold k^2 is dominated by psi(m)/m for every m in [n, n_max].  The
// per-index values are exact integers (they can be hundreds of bits wide for
// fast-growing psi, which is why they are BigInt and why the k-blocks are
// reported as jump points rather than as one entry per k).
struct AlphaPlan {
  std::size_t n_max = 0;
  std::vector<BigInt> alpha;  // alpha[n-1], n = 1..n_max, each >= 1

  struct Block {
    std::size_t start = 0;  // first index n with k_n == k
    BigInt k;               // value of k_n from `start` on
  };
  std::vector<Block> blocks;  // strictly increasing starts and k values

  // Prefix sums of log alpha and their ratio against psi(n); certified
  // enclosures (the alphas are too large to factor, so the logs are
  // interval-backed).
  std::vector<Real> log_alpha_prefix;  // sum_{k<=n} log alpha_k
  std::vector<Real> ratio_series;      // log_alpha_prefix[n-1] / psi(n)
};

AlphaPlan build_alpha_plan(const GrowthFunction& g, std::size_t n_max);

enum class WitnessMode {
  UpperLimsup,  // min-tail envelope, inflated quotients from an AlphaPlan
  LowerLiminf,  // max-prefix envelope, unit alphas
};

// A continued-fraction point whose Birkhoff log-sums track the chosen
// envelope of psi.  Quotients are floor(alpha_n * e^{phi(n) - phi(n-1)});
// they are exact integers when small enough and floor-of-exponential
// placeholders beyond the materialization threshold.
struct WitnessPoint {
  WitnessMode mode = WitnessMode::UpperLimsup;
  std::size_t n_max = 0;
  bool unit_alpha = false;  // diagnostic variant: alpha forced to 1

  std::vector<BigInt> alpha;             // inflation factors actually used
  std::vector<PartialQuotient> digits;   // a_1..a_{n_max}
  std::vector<Real> phi_log;             // envelope values phi(n)
  std::vector<Real> ratio_series;        // birkhoff_log_sum(n) / psi(n)
  std::vector<std::size_t> touch_indices;  // envelope touch set, within n_max

  CFPoint point;  // lazy view over `digits`

  // Hull bounds for the ratio series over the tail (n_max/2, n_max],
  // restricted to touch indices for the limsup mode.
  Interval tail_ratio_bounds;
};

WitnessPoint build_witness(const GrowthFunction& g, WitnessMode mode,
                           std::size_t n_max, bool force_unit_alpha = false);

// Doubling-capped envelope follower: log B_n = min(phi(n), (b+eps) log B_{n-1})
// with phi the min-tail envelope of psi.  Everything lives in the exponent
// domain (log B_n is a number like psi(n), not its logarithm squared), and is
// exact whenever psi takes rational values.
struct SeqB {
  Rational epsilon;
  Rational b_used;        // growth rate fed to the cap, >= 1
  bool b_estimated = false;
  std::size_t n_max = 0;

  std::vector<Real> log_B;         // log B_n, n = 1..n_max
  std::vector<Real> b_log_ratios;  // log b_n = log B_n - log B_{n-1}; [0] is log B_1
  std::vector<Real> phi_log;       // min-tail envelope values
  std::vector<std::size_t> touch_indices;  // n with log B_n == phi(n)

  bool touch_windows_ok = true;    // every window [m, 2m] within n_max touches
  std::size_t first_bad_window = 0;

  Real sup_ratio;        // sup_n log b_{n+1} / log B_n
  Real dim_lower_bound;  // 1 / (2 + sup_ratio)
};

SeqB build_seq_b(const GrowthFunction& g, const Rational& epsilon,
                 std::size_t n_max,
                 const std::optional<Rational>& b_override = std::nullopt);

// Max-of-columns sequence T_j = max_k c_{j,k} with
//   c_{j,k} = e^{psi(k)}                      for k <= j,
//   c_{j,k} = e^{psi(k) (B+eps)^{j-k}}        for k > j.
// The scan over k terminates through a decay certificate
// psi(n) <= (B + eps/2)^n checked exactly on [cert_start, cert_horizon];
// past the horizon it bounds the columns by a geometric tail. The horizon
// doubles (up to 64 j_max + 1024) until that tail bound drops below every
// T_j. Tables are scanned across their whole domain instead.
struct SeqT {
  Rational epsilon;
  Rational B_used;
  std::size_t j_max = 0;

  std::size_t cert_start = 0;    // first index from which the certificate holds
  std::size_t cert_horizon = 0;  // last index it was checked at

  std::vector<Real> log_T;              // log T_j (exponent domain)
  std::vector<std::size_t> t;           // t_j = least argmax column
  std::vector<Real> c_log_ratios;       // log c_j = log T_j - log T_{j-1}
  std::vector<Real> ratio_series;       // log T_j / psi(j)

  Real sup_step_ratio;   // sup_j log c_{j+1} / log T_j  (== cap margin check)
  Real dim_lower_bound;  // 1 / (2 + sup_step_ratio)
  Real tail_ratio_inf;   // inf of ratio_series over (j_max/2, j_max]
};

SeqT build_seq_t(const GrowthFunction& g, const Rational& epsilon,
                 std::size_t j_max,
                 const std::optional<Rational>& B_override = std::nullopt);

// Target sequence s_n >= 1 for the two-sided digit set
// E = {x : s_n <= a_n(x) <= 2 s_n for all n}.
struct TargetSequence {
  std::string id;
  std::function<LogValue(std::size_t)> s;  // 1-based

  static TargetSequence exp_of_growth(const GrowthFunction& g);  // s_n = e^{psi(n)}
  // s_n = e^{psi(n) - psi(n-1)} with psi(0) := 1, so sum log s_k telescopes
  // to psi(n); requires psi non-decreasing.
  static TargetSequence increments_of_growth(const GrowthFunction& g);
  static TargetSequence identity();                              // s_n = n
  static TargetSequence constant(const Rational& c);             // s_n = c
  static TargetSequence geometric(const Rational& r);            // s_n = r^n
};

struct SampleESet {
  std::string target_id;
  std::size_t depth = 0;
  std::size_t count = 0;
  std::uint64_t seed = 0;

  std::vector<CFPoint> points;

  std::vector<double> divergence_series;  // (sum_{k<=n} log s_k) / n
  std::vector<double> dim_series;         // 1/(2 + log s_{n+1} / sum_{k<=n} log s_k)
  Real ratio_tail_sup;  // sup of the ratio over (depth/2, depth]
  Real dim_value;       // 1 / (2 + ratio_tail_sup)
};

// Draws `count` points with digits uniform over the integer range
// [ceil(s_n), floor(2 s_n)] (a certified exponential placeholder once the
// range outgrows exact integers).  Throws UsageError when the divergence
// hypothesis (sum log s_k)/n -> infinity visibly fails at this depth.
SampleESet sample_E_set(const TargetSequence& ts, std::size_t depth,
                        std::size_t count, std::uint64_t seed);

// Exact / certified check that the digit lies in [s, 2s].
bool digit_in_target_range(const PartialQuotient& a, const LogValue& s);

}  // namespace cfspectra
