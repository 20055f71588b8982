#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "latglob/bigint.hpp"

namespace latglob {

/// Trial division goes this far by default; a cofactor below its square is
/// certified prime.
inline constexpr std::uint64_t kDefaultTrialLimit = 1'000'000;

/// Dense row-major integer matrix with arbitrary-precision entries.
class IntMatrix {
 public:
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<BigInt> entries);
  static IntMatrix from_i64(std::size_t rows, std::size_t cols, std::span<const std::int64_t> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const BigInt& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  BigInt& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

  void swap_rows(std::size_t a, std::size_t b);
  void negate_row(std::size_t r);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<BigInt> entries_;
};

/// Integer polynomial in tuple form: coeffs[k] is the coefficient of x^k
/// (constant term first). The nominal degree is coeffs.size() - 1 even when
/// the top coefficient is zero.
struct IntPolynomial {
  std::vector<BigInt> coeffs;

  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<BigInt> c) : coeffs(std::move(c)) {}
  static IntPolynomial from_i64(std::span<const std::int64_t> c);

  std::size_t degree() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  const BigInt& leading() const { return coeffs.back(); }
  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;
};

/// Distinct prime factors found by trial division, plus whatever is left.
/// `cofactor` is 1 when the factorization is complete; otherwise every prime
/// factor of the cofactor exceeds the trial limit.
struct PartialFactorization {
  std::vector<BigInt> primes;
  BigInt cofactor{1};

  bool complete() const { return cofactor == 1; }
};

/// gcd with gcd(0, k) = |k| and gcd(0, 0) = 0.
BigInt gcd(const BigInt& a, const BigInt& b);

/// Rank over F_p of A with entries reduced mod p. DomainError unless p is prime.
std::size_t rank_mod_p(const IntMatrix& a, std::uint64_t p);

/// gcd of all rows x rows minors; 0 iff the rational rank is below rows.
BigInt n_minor_gcd(const IntMatrix& a);

/// Distinct primes dividing |k| (ascending). DomainError for k == 0;
/// IncompleteFactorization if a cofactor survives trial division to `limit`
/// and exceeds limit^2.
std::vector<std::uint64_t> distinct_prime_divisors(std::int64_t k, std::uint64_t limit = kDefaultTrialLimit);

PartialFactorization factor_by_trial_division(const BigInt& k, std::uint64_t limit = kDefaultTrialLimit);

/// disc(f) = (-1)^(d(d-1)/2) * Res(f, f') / a_d with Res the Sylvester
/// determinant (f rows first). DomainError for degree 0 or a_d == 0.
BigInt discriminant(const IntPolynomial& f);

/// Coefficients of f(x + shift).
IntPolynomial taylor_shift(const IntPolynomial& f, const BigInt& shift);

/// Fraction-free Gaussian elimination; `a` is n x n row-major and is
/// consumed. Exact for any integral T wide enough for the intermediate
/// minors.
template <class T>
T bareiss_determinant(std::vector<T> a, std::size_t n) {
  if (n == 0) return T(1);
  T sign(1);
  T prev(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r * n + k] == 0) ++r;
      if (r == n) return T(0);
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[r * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
      }
    }
    prev = a[k * n + k];
  }
  return sign * a[n * n - 1];
}

namespace detail {

// Machine-word fast paths used by the per-point hot loops. Each has a
// BigInt counterpart above; the unit tests cross-check the two.

/// True when every k x k minor and the Bareiss cross products of an n x n
/// block with entries bounded by max_abs stay inside __int128.
bool minors_fit_int128(std::size_t n, std::uint64_t max_abs);

/// n_minor_gcd on int64 entries; caller checks minors_fit_int128 first.
unsigned __int128 n_minor_gcd_small(std::span<const std::int64_t> entries, std::size_t n, std::size_t m);

std::size_t rank_mod_p_small(std::span<const std::int64_t> entries, std::size_t n, std::size_t m,
                             std::uint64_t p);

/// Discriminant for int64 coefficients when the Sylvester determinant
/// provably fits; returns false otherwise.
bool discriminant_small(std::span<const std::int64_t> coeffs, __int128& out);

/// Primes <= kDefaultTrialLimit, shared and immutable after first use.
std::span<const std::uint64_t> trial_primes();

/// Distinct prime divisors of k > 0 with the same cofactor rule as
/// factor_by_trial_division. Returns the unfactored cofactor (1 if none).
std::uint64_t distinct_prime_divisors_u64(std::uint64_t k, std::vector<std::uint64_t>& out,
                                          std::uint64_t limit = kDefaultTrialLimit);

/// Number of distinct prime divisors of k > 0; throws IncompleteFactorization
/// when the count cannot be certified.
unsigned omega_u64(std::uint64_t k, std::uint64_t limit = kDefaultTrialLimit);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m);
std::uint64_t mod_floor(std::int64_t a, std::uint64_t m);

}  // namespace detail

}  // namespace latglob
