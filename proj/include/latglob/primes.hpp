#pragma once

#include <cstdint>
#include <functional>
#include <shared_mutex>
#include <span>
#include <vector>

namespace latglob {

/// All primes up to `limit`, ascending. Access is 1-indexed through `nth`,
/// matching the usual p_1 = 2, p_2 = 3, ... numbering.
class PrimeTable {
 public:
  PrimeTable() = default;
  PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes)
      : limit_(limit), primes_(std::move(primes)) {}

  std::uint64_t limit() const noexcept { return limit_; }
  std::size_t size() const noexcept { return primes_.size(); }
  std::span<const std::uint64_t> primes() const noexcept { return primes_; }

  /// p_j for 1 <= j <= size().
  std::uint64_t nth(std::size_t j) const;

  /// Number of primes <= x; requires x <= limit().
  std::size_t count_up_to(std::uint64_t x) const;

  /// Index j with p_j == p, or 0 when p is not a prime <= limit().
  std::size_t index_of(std::uint64_t p) const;

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint64_t> primes_;
};

/// Segmented sieve of Eratosthenes. Throws DomainError for limit < 2.
PrimeTable sieve_primes(std::uint64_t limit);

/// Calls `fn(p)` for every prime p in [lo, hi], ascending, without storing
/// them. Memory is O(sqrt(hi) + segment).
void for_each_prime(std::uint64_t lo, std::uint64_t hi,
                    const std::function<void(std::uint64_t)>& fn);

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

/// Process-wide prime table that grows on demand by re-sieving the new
/// segment only. Reads take a shared lock; growth takes an exclusive lock.
class PrimeCache {
 public:
  static PrimeCache& instance();

  /// j-th prime, j >= 1 (DomainError for j == 0).
  std::uint64_t nth_prime(std::uint64_t j);

  /// Index of the prime p, or 0 when p is not prime.
  std::uint64_t index_of(std::uint64_t p);

  /// pi(x).
  std::uint64_t count_up_to(std::uint64_t x);

  /// Ascending primes <= limit (copy).
  std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

  /// Largest index this cache will extend to before refusing.
  static constexpr std::uint64_t kMaxLimit = std::uint64_t{1} << 33;

 private:
  PrimeCache();
  void ensure_limit(std::uint64_t limit);
  void ensure_count(std::uint64_t count);

  std::shared_mutex mutex_;
  std::uint64_t limit_ = 0;
  std::vector<std::uint64_t> primes_;
};

inline std::uint64_t nth_prime(std::uint64_t j) { return PrimeCache::instance().nth_prime(j); }

}  // namespace latglob
