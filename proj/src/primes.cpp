#include "latglob/primes.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "latglob/errors.hpp"

namespace latglob {
namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Odd primes <= limit by a plain (unsegmented) sieve; only used for the
// base primes of the segmented sieve, so limit stays around sqrt(hi).
std::vector<std::uint64_t> small_odd_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 3) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 3; i <= limit; i += 2) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += 2 * i) composite[j] = true;
  }
  return out;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace

std::uint64_t PrimeTable::nth(std::size_t j) const {
  if (j == 0 || j > primes_.size()) throw DomainError("PrimeTable::nth: index out of range");
  return primes_[j - 1];
}

std::size_t PrimeTable::count_up_to(std::uint64_t x) const {
  if (x > limit_) throw DomainError("PrimeTable::count_up_to: beyond table limit");
  return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
}

std::size_t PrimeTable::index_of(std::uint64_t p) const {
  auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
  if (it == primes_.end() || *it != p) return 0;
  return static_cast<std::size_t>(it - primes_.begin()) + 1;
}

void for_each_prime(std::uint64_t lo, std::uint64_t hi, const std::function<void(std::uint64_t)>& fn) {
  if (hi < 2 || lo > hi) return;
  if (lo <= 2) {
    fn(2);
    lo = 3;
  }
  if (lo % 2 == 0) ++lo;
  if (lo > hi) return;

  const std::vector<std::uint64_t> base = small_odd_primes(isqrt(hi));
  constexpr std::uint64_t kSpan = std::uint64_t{1} << 20;  // even, keeps segment starts odd
  std::vector<std::uint8_t> mark;

  for (std::uint64_t start = lo; start <= hi; start += kSpan) {
    const std::uint64_t end = std::min(hi, start + kSpan - 1);
    const std::uint64_t count = (end - start) / 2 + 1;
    mark.assign(count, 1);
    for (std::uint64_t p : base) {
      if (p * p > end) break;
      std::uint64_t first = std::max(p * p, (start + p - 1) / p * p);
      if (first % 2 == 0) first += p;
      for (std::uint64_t x = first; x <= end; x += 2 * p) mark[(x - start) / 2] = 0;
    }
    for (std::uint64_t i = 0; i < count; ++i) {
      if (mark[i]) fn(start + 2 * i);
    }
    if (end == hi) break;
  }
}

PrimeTable sieve_primes(std::uint64_t limit) {
  if (limit < 2) throw DomainError("sieve_primes: limit must be >= 2");
  std::vector<std::uint64_t> primes;
  for_each_prime(2, limit, [&](std::uint64_t p) { primes.push_back(p); });
  return PrimeTable(limit, std::move(primes));
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

PrimeCache& PrimeCache::instance() {
  static PrimeCache cache;
  return cache;
}

PrimeCache::PrimeCache() {
  limit_ = std::uint64_t{1} << 16;
  for_each_prime(2, limit_, [&](std::uint64_t p) { primes_.push_back(p); });
}

// Callers hold the exclusive lock.
void PrimeCache::ensure_limit(std::uint64_t limit) {
  if (limit <= limit_) return;
  if (limit > kMaxLimit) throw BudgetError("prime cache limit exceeded", 0);
  const std::uint64_t target = std::min(kMaxLimit, std::max(limit, 2 * limit_));
  for_each_prime(limit_ + 1, target, [&](std::uint64_t p) { primes_.push_back(p); });
  limit_ = target;
}

void PrimeCache::ensure_count(std::uint64_t count) {
  while (primes_.size() < count) {
    const double j = static_cast<double>(count);
    const double estimate = j * (std::log(j) + std::log(std::log(j + 3.0))) + 16.0;
    ensure_limit(std::max<std::uint64_t>(static_cast<std::uint64_t>(estimate), limit_ + 1));
  }
}

std::uint64_t PrimeCache::nth_prime(std::uint64_t j) {
  if (j == 0) throw DomainError("nth_prime: index must be >= 1");
  {
    std::shared_lock lock(mutex_);
    if (j <= primes_.size()) return primes_[j - 1];
  }
  std::unique_lock lock(mutex_);
  ensure_count(j);
  return primes_[j - 1];
}

std::uint64_t PrimeCache::index_of(std::uint64_t p) {
  auto lookup = [&] {
    auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
    if (it == primes_.end() || *it != p) return std::uint64_t{0};
    return static_cast<std::uint64_t>(it - primes_.begin()) + 1;
  };
  {
    std::shared_lock lock(mutex_);
    if (p <= limit_) return lookup();
  }
  std::unique_lock lock(mutex_);
  ensure_limit(p);
  return lookup();
}

std::uint64_t PrimeCache::count_up_to(std::uint64_t x) {
  auto lookup = [&] {
    return static_cast<std::uint64_t>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
  };
  {
    std::shared_lock lock(mutex_);
    if (x <= limit_) return lookup();
  }
  std::unique_lock lock(mutex_);
  ensure_limit(x);
  return lookup();
}

std::vector<std::uint64_t> PrimeCache::primes_up_to(std::uint64_t limit) {
  auto copy = [&] {
    auto end = std::upper_bound(primes_.begin(), primes_.end(), limit);
    return std::vector<std::uint64_t>(primes_.begin(), end);
  };
  {
    std::shared_lock lock(mutex_);
    if (limit <= limit_) return copy();
  }
  std::unique_lock lock(mutex_);
  ensure_limit(limit);
  return copy();
}

}  // namespace latglob
