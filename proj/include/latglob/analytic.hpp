#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "latglob/bigint.hpp"
#include "latglob/system.hpp"

namespace latglob {

inline constexpr double kDefaultEps = 1e-9;

/// Where the true value sits relative to `partial`.
enum class Bracket {
  kAbove,     ///< true in [partial, partial + tail_bound]
  kBelow,     ///< true in [partial - tail_bound, partial]
  kTwoSided,  ///< true in [partial - tail_bound, partial + tail_bound]
};

/// A floating-point value with a rigorous bracket for the true quantity.
/// Rounding slack is folded into tail_bound, so the bracket holds for the
/// exact infinite sum/product, not only for the truncation.
struct TailBoundedValue {
  double partial = 0.0;
  double tail_bound = 0.0;
  std::uint64_t terms_used = 0;
  std::uint64_t cutoff_prime = 0;
  Bracket bracket = Bracket::kAbove;

  double lower() const noexcept { return bracket == Bracket::kAbove ? partial : partial - tail_bound; }
  double upper() const noexcept { return bracket == Bracket::kBelow ? partial : partial + tail_bound; }
  bool brackets(double x) const noexcept { return lower() <= x && x <= upper(); }
};

/// A finite set of places: optional archimedean place plus primes.
struct PlaceSet {
  bool infinity = false;
  std::vector<std::uint64_t> primes;
};

/// Bound on sum_{p > cutoff} C / p^k from pi(x) < 1.25506 x / ln x:
///   C * 1.25506 * k / ((k - 1) * cutoff^(k-1) * ln cutoff).
double prime_tail_bound(const TailMajorant& majorant, std::uint64_t cutoff);

/// Smallest cutoff (up to a factor ~1.01) with prime_tail_bound <= target
/// and majorant(p) <= 1/2 beyond it.
std::uint64_t choose_cutoff(const TailMajorant& majorant, double target);

/// zeta(s) for integer s >= 2: partial sum to N plus the lower integral
/// tail; the integral bracket width (plus slack) is the tail_bound.
TailBoundedValue riemann_zeta(int s, double eps = kDefaultEps);

/// s_inf + sum_p s_p.
TailBoundedValue prime_series(const LocalSystem& system, double eps = kDefaultEps);
TailBoundedValue prime_series_to_cutoff(const LocalSystem& system, std::uint64_t cutoff);

/// prod_p (1 - s_p).
TailBoundedValue euler_product(const LocalSystem& system, double eps = kDefaultEps);
TailBoundedValue euler_product_to_cutoff(const LocalSystem& system, std::uint64_t cutoff);

/// Density of points in at least one U_nu: 1 - (1 - s_inf) prod_p (1 - s_p).
TailBoundedValue predicted_density_T(const LocalSystem& system, double eps = kDefaultEps);

/// prime_series / predicted_density_T with interval propagation.
/// DegenerateDenominator when the density interval reaches 0.
TailBoundedValue predicted_restricted_mean(const LocalSystem& system, double eps = kDefaultEps);

/// prod_{nu in S} s_nu * prod_{nu not in S} (1 - s_nu).
TailBoundedValue product_formula(const LocalSystem& system, const PlaceSet& in_set, double eps = kDefaultEps);

/// Exact probability that P(A) meets the finite prime set `constrained`
/// exactly in `in_set`, other places unconstrained:
///   prod_{p in in_set} s_p * prod_{p in constrained \ in_set} (1 - s_p).
Rational pattern_probability(const LocalSystem& system, std::span<const std::uint64_t> constrained,
                             std::span<const std::uint64_t> in_set);

}  // namespace latglob
