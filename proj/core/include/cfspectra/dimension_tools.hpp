#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cfspectra/cf_core.hpp"
#include "cfspectra/growth_model.hpp"
#include "cfspectra/interval.hpp"
#include "cfspectra/numeric_util.hpp"
#include "cfspectra/real.hpp"
#include "cfspectra/spectra_constructions.hpp"

namespace cfspectra {

// A rate that may degenerate to +infinity (slowly or explosively growing
// psi); the dimension formulas send infinity to 0.
struct ExtendedRate {
  bool infinite = false;
  Real value;  // >= 1 when finite

  static ExtendedRate finite(Real v) { return {false, std::move(v)}; }
  static ExtendedRate inf() { return {true, Real()}; }
};

struct DimFormulas {
  Real dim_upper;  // 1/(b+1)
  Real dim_lower;  // 1/(B+1)
  Real dim_full;   // 1/(beta+1)
};

// Requires b <= B <= beta unless override_order; outputs then satisfy
// dim_upper >= dim_lower >= dim_full.
DimFormulas dim_formulas(const ExtendedRate& b, const ExtendedRate& B,
                         const ExtendedRate& beta,
                         bool override_order = false);

// (2 + limsup_n log s_{n+1} / (log s_1 + ... + log s_n))^{-1}, the limsup
// replaced by the tail-window sup over (depth/2, depth-1].
struct Lemma24Report {
  std::size_t depth = 0;
  std::vector<double> ratio_series;
  Real tail_sup;
  Real value;
};

Lemma24Report lemma24_dim(const TargetSequence& ts, std::size_t depth);

// Parameters of the covering-sum bound: exponent s = 1/2 + epsilon, digit
// threshold K, and a rigorous enclosure of M_eps = sum_{j>=1} j^{-(1+eps)}
// (partial sum to zeta_terms plus integral tail brackets).
struct CoveringParams {
  Rational epsilon;          // in (0,1)
  Rational s;                // 1/2 + epsilon
  Rational K;                // > 1
  std::size_t zeta_terms = 0;
  Interval M_eps;
  Interval K_pow_eps;        // K^eps
  bool gate_ok = false;      // K^eps > 2 M_eps, certified
};

CoveringParams make_covering_params(const Rational& epsilon, const Rational& K,
                                    std::size_t zeta_terms = 10000);

// Certified evaluation of sum_{n>=N} (M_eps / K^eps)^n together with the
// per-term chain term_n <= 2^-n and the coarse closed form 2^{-N+1}.
struct CoveringBound {
  std::size_t N = 0;
  Interval ratio;              // M_eps / K^eps, certainly < 1/2 when gated
  Interval value;              // the full geometric tail from N
  std::vector<Interval> terms; // (M/K^eps)^n for n = N .. N+chain_window-1
  Rational coarse;             // 2^{-N+1}
  bool chain_ok = false;       // every reported term certified <= 2^-n
  bool coarse_ok = false;      // value certified <= 2^{-N+1}
};

CoveringBound covering_bound(const CoveringParams& p, std::size_t N,
                             std::size_t chain_window = 16);

// Direct enumeration oracle for one covering term: sums |I_n|^s over words
// of length n with sigma_1...sigma_n >= K^n and digits <= sigma_cap, plus a
// rigorous tail for the digits beyond the cap. n <= 4 only; enumeration is
// budget-capped.
Interval brute_covering_term(std::size_t n, const Rational& K,
                             const Rational& s, unsigned long sigma_cap,
                             std::size_t budget = 10000000);

struct SetPredicateParams {
  Rational a;  // > 1
  Rational c;  // > 1
  Rational A;  // > 1
};

// Flags a_n >= a^{c^n} and Pi_n >= a^{c^n} along the prefix (Pi_n is the
// quotient product), with certified log-domain comparisons.
struct DoublyExpReport {
  std::size_t n_max = 0;
  std::vector<bool> digit_flags;
  std::vector<bool> prod_flags;
  std::size_t digit_true = 0;
  std::size_t prod_true = 0;
};

DoublyExpReport membership_doubly_exp(const CFPoint& x,
                                      const SetPredicateParams& params,
                                      std::size_t n_max);

// Contrapositive digit-product implication on a prefix: once every index
// past N has a_n < a^{(c-eps)^n}, the products obey
// Pi_n < Pi_N * a^{(c-eps)^{n+1}/(c-eps-1)}.
struct PacReport {
  std::size_t n_max = 0;
  Rational a, c, eps;
  std::size_t N = 0;        // last index violating the smallness hypothesis
  bool applicable = false;  // N < n_max
  bool bound_holds = true;  // checked for n in (N, n_max]
  std::size_t first_violation = 0;
};

PacReport inclusion_check_pac(const CFPoint& x, const Rational& a,
                              const Rational& c, const Rational& eps,
                              std::size_t n_max);

// Birkhoff ratio series sum log a_k / psi(n) with tail statistics, plus the
// threshold flags Pi_n >= A^{psi(n)} when a base A is supplied.
struct FastRatioReport {
  std::size_t n_max = 0;
  std::vector<Real> ratio_series;
  Interval tail_sup;  // pointwise-fold bounds over (n_max/2, n_max]
  Interval tail_inf;
  std::optional<Rational> A;
  std::vector<bool> threshold_flags;
  std::size_t threshold_true = 0;
};

FastRatioReport membership_fast_ratio(
    const CFPoint& x, const GrowthFunction& g, std::size_t n_max,
    const std::optional<Rational>& A = std::nullopt);

}  // namespace cfspectra
