#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latglob/analytic.hpp"
#include "latglob/bigint.hpp"
#include "latglob/system.hpp"

namespace latglob {

/// The integer box [-H, H)^d.
struct BoxSpec {
  std::int64_t H = 1;
  int d = 1;

  /// (2H)^d; DomainError for H < 1 or d < 1.
  BigInt point_count() const;
};

struct ExactEstimate {
  BigInt numerator;
  BigInt denominator{1};
  Rational value;
  std::int64_t H = 0;
  std::string metadata;
};

struct EnumerationOptions {
  /// 0 picks LATGLOB_THREADS, then the hardware concurrency.
  unsigned threads = 0;
  /// Refuse boxes with more points than this (BudgetError).
  std::uint64_t max_points = 2'000'000'000;
};

unsigned resolve_threads(const EnumerationOptions& options);

/// Largest H with (2H)^d <= max_points.
std::int64_t max_feasible_h(int d, std::uint64_t max_points);

/// One pass over the box.
struct BoxTally {
  BigInt points;       ///< (2H)^d
  BigInt exceptional;  ///< points of I
  BigInt in_T;         ///< non-exceptional points with P(A) nonempty
  BigInt place_sum;    ///< sum of |P(A)| over non-exceptional points
};

BoxTally box_tally(const LocalSystem& system, const BoxSpec& box, const EnumerationOptions& options = {});

/// |U_p cap box| / (2H)^d, exceptional points included.
ExactEstimate empirical_density(const LocalSystem& system, std::uint64_t p, const BoxSpec& box,
                                const EnumerationOptions& options = {});

/// sum |P(A)| over box_I, divided by (2H)^d.
ExactEstimate empirical_mean(const LocalSystem& system, const BoxSpec& box, const EnumerationOptions& options = {});

/// Same numerator over |box_I cap T|; EmptyRestriction when that is 0.
ExactEstimate empirical_restricted_mean(const LocalSystem& system, const BoxSpec& box,
                                        const EnumerationOptions& options = {});

/// |box_I cap T| / (2H)^d.
ExactEstimate empirical_density_T(const LocalSystem& system, const BoxSpec& box,
                                  const EnumerationOptions& options = {});

/// |{A in box_I : P(A) = S}| / (2H)^d.
ExactEstimate empirical_P_inverse_density(const LocalSystem& system, const PlaceSet& places, const BoxSpec& box,
                                          const EnumerationOptions& options = {});

/// Counts of A in box_I by the pattern P(A) cap F, F a finite prime set.
/// cells[mask] has bit i set when primes[i] is in P(A). Together with the
/// exceptional count the cells partition the box.
struct PatternTable {
  std::vector<std::uint64_t> primes;
  std::vector<ExactEstimate> cells;
  ExactEstimate exceptional;
};

PatternTable pattern_table(const LocalSystem& system, const std::vector<std::uint64_t>& primes, const BoxSpec& box,
                           const EnumerationOptions& options = {});

/// Density of {A : exceptional, or A in U_p for some prime p > M}.
ExactEstimate tail_union_density(const LocalSystem& system, std::uint64_t M, const BoxSpec& box,
                                 const EnumerationOptions& options = {});

struct PrimeOccupancy {
  std::uint64_t p = 0;
  Rational occupancy;            ///< |U_p cap box_I| / (2H)^d
  std::optional<double> vp;      ///< system's v_p, if it has one
  bool within_majorant = true;   ///< occupancy <= vp (true when vp is absent)
};

struct ConditionProfile {
  double alpha = 1.0;
  std::int64_t H = 0;
  double threshold = 0.0;  ///< H^alpha
  std::uint64_t max_ell = 0;
  std::vector<std::int64_t> max_ell_witness;
  /// Primes below the threshold with nonzero occupancy, ascending.
  std::vector<PrimeOccupancy> per_prime_occupancy;
  Rational occupancy_sum;  ///< sum of occupancy over p < H^alpha
  std::uint64_t vp_violations = 0;
  std::string vp_majorant_name;
  bool vp_majorant_summable = false;
};

/// l_{A,H} = |{p > H^alpha : A in U_p}| maximized over box_I, plus the
/// per-prime occupancy for p < H^alpha.
ConditionProfile newcond_profile(const LocalSystem& system, const BoxSpec& box, double alpha,
                                 const EnumerationOptions& options = {});

/// Integer polynomial in d variables as a term list.
struct MultiPoly {
  struct Term {
    BigInt coefficient;
    std::vector<unsigned> exponents;
  };
  std::vector<Term> terms;

  /// "x1", "x2", ... helpers.
  static MultiPoly variable(int index, int d);
  BigInt evaluate(Point a) const;
  int dimension() const;
};

/// Density of S_M(f, g): points where f(a), g(a) share a prime factor > M,
/// counting common zeros as members.
ExactEstimate ekedahl_estimate(const MultiPoly& f, const MultiPoly& g, std::uint64_t M, const BoxSpec& box,
                               const EnumerationOptions& options = {});

enum class SweepKind { kMean, kDensityT, kRestricted };

/// One independent estimate per H (strictly increasing).
std::vector<ExactEstimate> sweep(const LocalSystem& system, const std::vector<std::int64_t>& h_list, SweepKind kind,
                                 const EnumerationOptions& options = {});

}  // namespace latglob
