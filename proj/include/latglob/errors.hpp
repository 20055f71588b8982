#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace latglob {

/// Argument outside the documented domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A LocalSystem broke its own contract (e.g. a non-exceptional point
/// without a finite support bound).
class IntegrityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Trial division stopped with a cofactor whose primality cannot be
/// certified within the configured bound.
class IncompleteFactorization : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A ratio whose denominator interval contains zero.
class DegenerateDenominator : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Restricted mean requested over a box with no point of T.
class EmptyRestriction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Enumeration would exceed the configured point budget.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, std::uint64_t max_feasible_h)
      : std::runtime_error(what), max_feasible_h_(max_feasible_h) {}

  std::uint64_t max_feasible_h() const noexcept { return max_feasible_h_; }

 private:
  std::uint64_t max_feasible_h_;
};

}  // namespace latglob
