#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latglob/bigint.hpp"

namespace latglob {

/// A lattice point of Z^d as a flat coordinate vector. Matrix systems read
/// it row-major; polynomial systems read it constant term first.
using Point = std::span<const std::int64_t>;

/// s_p <= coefficient / p^exponent for every prime p >= valid_from.
/// A zero coefficient means every s_p vanishes.
struct TailMajorant {
  double coefficient = 0.0;
  int exponent = 2;
  std::uint64_t valid_from = 2;
  std::string description;

  bool zero() const noexcept { return coefficient == 0.0; }
};

/// Per-prime occupancy majorant v_p with |U_p cap box_I| <= v_p (2H)^d for
/// p < H^alpha.
struct VpMajorantInfo {
  std::string name;
  bool available = false;
  bool summable = false;
};

/// The system (U_nu) of local conditions over the places of Q.
///
/// Only finite places carry points in the built-in systems (U_inf is empty);
/// `s_infinity()` exists so predictors handle a nonzero archimedean measure.
///
/// Contract:
///  - contains(A, p) is total and deterministic for every point and prime p.
///  - measure(p) is the exact Haar measure of U_p, in [0, 1].
///  - exceptional(A) holds exactly when A lies in infinitely many U_p.
///  - prime_support_bound(A) = B implies contains(A, p) is false for p > B.
///  - place_count(A) = |{p : contains(A, p)}| for non-exceptional A.
///
/// Instances are immutable after construction apart from internal memo
/// tables, which are safe under concurrent use.
class LocalSystem {
 public:
  virtual ~LocalSystem() = default;

  virtual std::string key() const = 0;
  virtual int dimension() const = 0;
  virtual Rational s_infinity() const { return Rational(0); }

  virtual Rational measure(std::uint64_t p) const = 0;
  /// Double-precision s_p for the series predictors (a few ulps of error).
  virtual double measure_approx(std::uint64_t p) const { return measure(p).get_d(); }

  virtual bool contains(Point a, std::uint64_t p) const = 0;
  virtual bool exceptional(Point a) const = 0;

  /// Largest prime that can contain `a`; 0 when no prime does. nullopt
  /// means the system cannot bound the support of this point.
  virtual std::optional<BigInt> prime_support_bound(Point a) const = 0;

  /// |P(A)| for a non-exceptional point; nullopt for exceptional points.
  virtual std::optional<std::uint64_t> place_count(Point a) const = 0;

  /// Ascending primes p <= limit with contains(a, p).
  virtual std::vector<std::uint64_t> places_up_to(Point a, std::uint64_t limit) const = 0;

  std::vector<std::uint64_t> places(Point a) const {
    return places_up_to(a, std::numeric_limits<std::uint64_t>::max());
  }

  virtual TailMajorant tail_majorant() const = 0;

  virtual VpMajorantInfo vp_majorant_info() const = 0;
  virtual std::optional<double> vp_majorant(std::uint64_t p) const = 0;

  /// Free-form remark reported alongside predictions (may be empty).
  virtual std::string note() const { return {}; }
};

using SystemPtr = std::unique_ptr<LocalSystem>;

}  // namespace latglob
