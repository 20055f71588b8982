#include "latglob/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "latglob/errors.hpp"
#include "latglob/primes.hpp"

namespace latglob {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<BigInt> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw DomainError("IntMatrix: dimensions must be positive");
  if (entries_.size() != rows * cols) throw DomainError("IntMatrix: entry count does not match rows * cols");
}

IntMatrix IntMatrix::from_i64(std::size_t rows, std::size_t cols, std::span<const std::int64_t> entries) {
  std::vector<BigInt> big;
  big.reserve(entries.size());
  for (std::int64_t v : entries) big.push_back(big_from_i64(v));
  return IntMatrix(rows, cols, std::move(big));
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  for (std::size_t j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
}

void IntMatrix::negate_row(std::size_t r) {
  for (std::size_t j = 0; j < cols_; ++j) at(r, j) = -at(r, j);
}

IntPolynomial IntPolynomial::from_i64(std::span<const std::int64_t> c) {
  std::vector<BigInt> big;
  big.reserve(c.size());
  for (std::int64_t v : c) big.push_back(big_from_i64(v));
  return IntPolynomial(std::move(big));
}

BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

namespace {

std::size_t rank_mod_p_reduced(std::vector<std::uint64_t> a, std::size_t n, std::size_t m, std::uint64_t p) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m && rank < n; ++col) {
    std::size_t pivot = rank;
    while (pivot < n && a[pivot * m + col] == 0) ++pivot;
    if (pivot == n) continue;
    if (pivot != rank) {
      for (std::size_t j = 0; j < m; ++j) std::swap(a[pivot * m + j], a[rank * m + j]);
    }
    const std::uint64_t inv = detail::powmod(a[rank * m + col], p - 2, p);
    for (std::size_t i = rank + 1; i < n; ++i) {
      const std::uint64_t v = a[i * m + col];
      if (v == 0) continue;
      const std::uint64_t factor = detail::mulmod(v, inv, p);
      for (std::size_t j = col; j < m; ++j) {
        const std::uint64_t sub = detail::mulmod(factor, a[rank * m + j], p);
        a[i * m + j] = a[i * m + j] >= sub ? a[i * m + j] - sub : a[i * m + j] + (p - sub);
      }
    }
    ++rank;
  }
  return rank;
}

// Calls fn(cols) for every increasing n-subset of {0..m-1}; stops when fn
// returns false.
template <class Fn>
void for_each_column_subset(std::size_t n, std::size_t m, Fn&& fn) {
  std::vector<std::size_t> cols(n);
  std::iota(cols.begin(), cols.end(), std::size_t{0});
  while (true) {
    if (!fn(cols)) return;
    std::size_t i = n;
    while (i > 0 && cols[i - 1] == m - n + (i - 1)) --i;
    if (i == 0) return;
    ++cols[i - 1];
    for (std::size_t j = i; j < n; ++j) cols[j] = cols[j - 1] + 1;
  }
}

}  // namespace

std::size_t rank_mod_p(const IntMatrix& a, std::uint64_t p) {
  if (!is_prime_u64(p)) throw DomainError("rank_mod_p: modulus must be prime");
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  std::vector<std::uint64_t> reduced(n * m);
  const BigInt bp = big_from_u64(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      BigInt r;
      mpz_fdiv_r(r.get_mpz_t(), a.at(i, j).get_mpz_t(), bp.get_mpz_t());
      reduced[i * m + j] = to_u64(r);
    }
  }
  return rank_mod_p_reduced(std::move(reduced), n, m, p);
}

BigInt n_minor_gcd(const IntMatrix& a) {
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  BigInt g = 0;
  if (n > m) return g;
  std::vector<BigInt> block(n * n);
  for_each_column_subset(n, m, [&](const std::vector<std::size_t>& cols) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) block[i * n + j] = a.at(i, cols[j]);
    }
    g = gcd(g, bareiss_determinant(block, n));
    return g != 1;
  });
  return g;
}

PartialFactorization factor_by_trial_division(const BigInt& k, std::uint64_t limit) {
  PartialFactorization out;
  BigInt c = abs(k);
  if (c == 0) throw DomainError("factor_by_trial_division: zero has no finite factorization");
  bool sqrt_reached = false;
  for (std::uint64_t p : detail::trial_primes()) {
    if (p > limit) break;
    const BigInt bp = big_from_u64(p);
    if (bp * bp > c) {
      sqrt_reached = true;
      break;
    }
    if (mpz_divisible_ui_p(c.get_mpz_t(), p)) {
      out.primes.push_back(bp);
      while (mpz_divisible_ui_p(c.get_mpz_t(), p)) mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), p);
    }
  }
  if (c == 1) return out;
  // Every prime factor of c exceeds the last trial prime, so c is prime once
  // it is below the square of the trial limit.
  const BigInt bl = big_from_u64(limit);
  if (sqrt_reached || c <= bl * bl) {
    out.primes.push_back(c);
  } else {
    out.cofactor = c;
  }
  std::sort(out.primes.begin(), out.primes.end());
  return out;
}

std::vector<std::uint64_t> distinct_prime_divisors(std::int64_t k, std::uint64_t limit) {
  if (k == 0) throw DomainError("distinct_prime_divisors: k must be nonzero");
  const std::uint64_t mag = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1u : static_cast<std::uint64_t>(k);
  std::vector<std::uint64_t> out;
  if (detail::distinct_prime_divisors_u64(mag, out, limit) != 1) {
    throw IncompleteFactorization("distinct_prime_divisors: cofactor exceeds trial-division certification bound");
  }
  return out;
}

namespace {

// Sylvester matrix of f (degree d) and f' (degree d-1), f rows first.
template <class T, class C>
std::vector<T> sylvester_with_derivative(const std::vector<C>& a, std::size_t d) {
  const std::size_t size = 2 * d - 1;
  std::vector<T> s(size * size, T(0));
  // d-1 rows of f, highest coefficient first.
  for (std::size_t r = 0; r + 1 < d; ++r) {
    for (std::size_t k = 0; k <= d; ++k) s[r * size + r + k] = T(a[d - k]);
  }
  // d rows of f'.
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t power = d - 1 - k;
      s[(d - 1 + r) * size + r + k] = T(a[power + 1]) * T(static_cast<long>(power + 1));
    }
  }
  return s;
}

}  // namespace

BigInt discriminant(const IntPolynomial& f) {
  const std::size_t d = f.degree();
  if (f.coeffs.size() < 2) throw DomainError("discriminant: degree must be >= 1");
  if (f.leading() == 0) throw DomainError("discriminant: leading coefficient must be nonzero");
  const std::size_t size = 2 * d - 1;
  BigInt res = bareiss_determinant(sylvester_with_derivative<BigInt>(f.coeffs, d), size);
  BigInt disc;
  mpz_divexact(disc.get_mpz_t(), res.get_mpz_t(), f.leading().get_mpz_t());
  if ((d * (d - 1) / 2) % 2 == 1) disc = -disc;
  return disc;
}

IntPolynomial taylor_shift(const IntPolynomial& f, const BigInt& shift) {
  IntPolynomial g = f;
  const std::size_t d = g.degree();
  if (g.coeffs.size() < 2 || shift == 0) return g;
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t j = d; j-- > k;) g.coeffs[j] += shift * g.coeffs[j + 1];
  }
  return g;
}

namespace detail {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t mod_floor(std::int64_t a, std::uint64_t m) {
  if (a >= 0) return static_cast<std::uint64_t>(a) % m;
  const std::uint64_t mag = static_cast<std::uint64_t>(-(a + 1)) + 1u;
  const std::uint64_t r = mag % m;
  return r == 0 ? 0 : m - r;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

bool minors_fit_int128(std::size_t n, std::uint64_t max_abs) {
  if (max_abs == 0) return true;
  const double log_bound =
      static_cast<double>(n) * (0.5 * std::log2(static_cast<double>(n)) + std::log2(static_cast<double>(max_abs)));
  return log_bound < 61.0;
}

namespace {

unsigned __int128 abs128(__int128 v) {
  return v < 0 ? static_cast<unsigned __int128>(-(v + 1)) + 1u : static_cast<unsigned __int128>(v);
}

unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) {
  while (b != 0) {
    const unsigned __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

unsigned __int128 n_minor_gcd_small(std::span<const std::int64_t> entries, std::size_t n, std::size_t m) {
  if (n > m) return 0;
  if (n == 1) {
    unsigned __int128 g = 0;
    for (std::int64_t v : entries) {
      g = gcd128(g, abs128(v));
      if (g == 1) break;
    }
    return g;
  }
  if (n == 2) {
    unsigned __int128 g = 0;
    for (std::size_t c0 = 0; c0 < m && g != 1; ++c0) {
      for (std::size_t c1 = c0 + 1; c1 < m; ++c1) {
        const __int128 det = static_cast<__int128>(entries[c0]) * entries[m + c1] -
                             static_cast<__int128>(entries[c1]) * entries[m + c0];
        g = gcd128(g, abs128(det));
        if (g == 1) break;
      }
    }
    return g;
  }
  unsigned __int128 g = 0;
  std::vector<__int128> block(n * n);
  for_each_column_subset(n, m, [&](const std::vector<std::size_t>& cols) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) block[i * n + j] = entries[i * m + cols[j]];
    }
    g = gcd128(g, abs128(bareiss_determinant(block, n)));
    return g != 1;
  });
  return g;
}

std::size_t rank_mod_p_small(std::span<const std::int64_t> entries, std::size_t n, std::size_t m,
                             std::uint64_t p) {
  std::vector<std::uint64_t> reduced(n * m);
  for (std::size_t i = 0; i < n * m; ++i) reduced[i] = mod_floor(entries[i], p);
  return rank_mod_p_reduced(std::move(reduced), n, m, p);
}

bool discriminant_small(std::span<const std::int64_t> coeffs, __int128& out) {
  const std::size_t d = coeffs.size() - 1;
  if (coeffs.size() < 2 || coeffs.back() == 0) return false;
  std::uint64_t max_abs = 0;
  for (std::int64_t c : coeffs) max_abs = std::max<std::uint64_t>(max_abs, c < 0 ? -static_cast<std::uint64_t>(c) : c);
  const std::size_t size = 2 * d - 1;
  // Hadamard bound on every minor of the Sylvester matrix.
  const double log_entry = std::log2(static_cast<double>(max_abs) * static_cast<double>(d) + 1.0);
  const double log_bound = static_cast<double>(size) * (0.5 * std::log2(static_cast<double>(size)) + log_entry);
  if (log_bound >= 61.0) return false;
  std::vector<__int128> a(coeffs.begin(), coeffs.end());
  __int128 res = bareiss_determinant(sylvester_with_derivative<__int128>(a, d), size);
  __int128 disc = res / static_cast<__int128>(coeffs.back());
  if ((d * (d - 1) / 2) % 2 == 1) disc = -disc;
  out = disc;
  return true;
}

std::span<const std::uint64_t> trial_primes() {
  static const std::vector<std::uint64_t> primes = [] {
    const PrimeTable table = sieve_primes(kDefaultTrialLimit);
    return std::vector<std::uint64_t>(table.primes().begin(), table.primes().end());
  }();
  return primes;
}

std::uint64_t distinct_prime_divisors_u64(std::uint64_t k, std::vector<std::uint64_t>& out, std::uint64_t limit) {
  out.clear();
  if (k == 0) throw DomainError("distinct_prime_divisors: k must be nonzero");
  std::uint64_t c = k;
  bool sqrt_reached = false;
  for (std::uint64_t p : trial_primes()) {
    if (p > limit) break;
    if (p * p > c) {
      sqrt_reached = true;
      break;
    }
    if (c % p == 0) {
      out.push_back(p);
      do c /= p;
      while (c % p == 0);
    }
  }
  if (c == 1) return 1;
  const unsigned __int128 lim2 = static_cast<unsigned __int128>(limit) * limit;
  if (sqrt_reached || c <= lim2) {
    out.push_back(c);
    return 1;
  }
  return c;
}

unsigned omega_u64(std::uint64_t k, std::uint64_t limit) {
  if (k == 0) throw DomainError("omega: k must be nonzero");
  unsigned count = 0;
  std::uint64_t c = k;
  if ((c & 1) == 0) {
    ++count;
    c >>= __builtin_ctzll(c);
  }
  bool sqrt_reached = false;
  for (std::uint64_t p : trial_primes().subspan(1)) {
    if (p > limit) break;
    if (p * p > c) {
      sqrt_reached = true;
      break;
    }
    if (c % p == 0) {
      ++count;
      do c /= p;
      while (c % p == 0);
    }
  }
  if (c == 1) return count;
  const unsigned __int128 lim2 = static_cast<unsigned __int128>(limit) * limit;
  if (sqrt_reached || c <= lim2) return count + 1;
  throw IncompleteFactorization("omega: cofactor exceeds trial-division certification bound");
}

}  // namespace detail

}  // namespace latglob
