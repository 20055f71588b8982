#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace latglob {

using BigInt = mpz_class;
using Rational = mpq_class;

inline BigInt big_from_u64(std::uint64_t v) {
  BigInt r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return r;
}

inline BigInt big_from_i64(std::int64_t v) {
  if (v >= 0) return big_from_u64(static_cast<std::uint64_t>(v));
  BigInt r = big_from_u64(static_cast<std::uint64_t>(-(v + 1)) + 1u);
  return -r;
}

inline BigInt big_from_u128(unsigned __int128 v) {
  BigInt hi = big_from_u64(static_cast<std::uint64_t>(v >> 64));
  BigInt lo = big_from_u64(static_cast<std::uint64_t>(v));
  return (hi << 64) + lo;
}

inline BigInt big_from_i128(__int128 v) {
  if (v >= 0) return big_from_u128(static_cast<unsigned __int128>(v));
  return -big_from_u128(static_cast<unsigned __int128>(-(v + 1)) + 1u);
}

inline bool fits_u64(const BigInt& v) { return sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64; }

inline std::uint64_t to_u64(const BigInt& v) {
  std::uint64_t out = 0;
  std::size_t count = 0;
  mpz_export(&out, &count, 1, sizeof(out), 0, 0, v.get_mpz_t());
  return count == 0 ? 0 : out;
}

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Decimal rendering with `significant` significant digits, computed from
/// the exact value (round-half-even at the last digit via GMP floats).
std::string to_decimal(const Rational& q, int significant = 12);

}  // namespace latglob
