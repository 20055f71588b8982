#pragma once

// Helpers shared by the built-in systems; not part of the public API.

#include <cmath>
#include <cstdint>
#include <vector>

#include "latglob/arith.hpp"
#include "latglob/errors.hpp"
#include "latglob/primes.hpp"
#include "latglob/system.hpp"

namespace latglob {

inline unsigned __int128 max_abs_entry(Point a) {
  unsigned __int128 best = 0;
  for (std::int64_t v : a) {
    const unsigned __int128 mag =
        v < 0 ? static_cast<unsigned __int128>(-(v + 1)) + 1u : static_cast<unsigned __int128>(v);
    if (mag > best) best = mag;
  }
  return best;
}

/// Largest prime factor of g >= 1 (0 for g == 1). An incomplete trial
/// factorization falls back to the unfactored cofactor, which is still an
/// upper bound on every remaining prime factor.
inline BigInt largest_prime_factor_bound(const BigInt& g) {
  if (g == 1) return BigInt(0);
  const PartialFactorization f = factor_by_trial_division(g);
  BigInt best = f.primes.empty() ? BigInt(0) : f.primes.back();
  if (!f.complete() && f.cofactor > best) best = f.cofactor;
  return best;
}

/// Distinct primes of g (nonzero) that are <= limit.
inline std::vector<std::uint64_t> primes_of_up_to(const BigInt& g, std::uint64_t limit) {
  const PartialFactorization f = factor_by_trial_division(g);
  if (!f.complete() && limit > kDefaultTrialLimit) {
    throw IncompleteFactorization("cofactor beyond trial-division bound; cannot list large prime divisors");
  }
  std::vector<std::uint64_t> out;
  for (const BigInt& q : f.primes) {
    if (!fits_u64(q)) break;
    const std::uint64_t v = to_u64(q);
    if (v > limit) break;
    out.push_back(v);
  }
  return out;
}

/// An upper bound for p_k: exact from the prime cache for moderate k,
/// otherwise p_k < k (ln k + ln ln k) (valid for k >= 6).
inline BigInt prime_upper_bound_at_index(const BigInt& k) {
  if (k <= BigInt(1) << 24) return big_from_u64(PrimeCache::instance().nth_prime(to_u64(k)));
  const double bits = static_cast<double>(mpz_sizeinbase(k.get_mpz_t(), 2));
  const double ln_k = bits * std::log(2.0);  // ln k < bits * ln 2
  const BigInt factor(static_cast<unsigned long>(std::ceil(ln_k + std::log(ln_k))) + 1);
  return k * factor;
}

}  // namespace latglob
