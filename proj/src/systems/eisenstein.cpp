#include <cmath>
#include <sstream>

#include "latglob/arith.hpp"
#include "latglob/errors.hpp"
#include "latglob/systems.hpp"
#include "support.hpp"

namespace latglob {
namespace {

constexpr std::uint64_t kSquareSafe = 0xFFFFFFFFull;  // p <= this keeps p^2 in 64 bits

// p | a_i for i < d, p does not divide a_d, p^2 does not divide a_0.
bool is_p_eisenstein(Point a, std::uint64_t p) {
  const std::size_t d = a.size() - 1;
  if (detail::mod_floor(a[d], p) == 0) return false;
  for (std::size_t i = 0; i < d; ++i) {
    if (detail::mod_floor(a[i], p) != 0) return false;
  }
  if (p > kSquareSafe) return a[0] != 0;  // |a_0| < p^2
  return detail::mod_floor(a[0], p * p) != 0;
}

bool is_p_eisenstein(const IntPolynomial& f, std::uint64_t p) {
  const BigInt bp = big_from_u64(p);
  const std::size_t d = f.degree();
  if (mpz_divisible_p(f.coeffs[d].get_mpz_t(), bp.get_mpz_t())) return false;
  for (std::size_t i = 0; i < d; ++i) {
    if (!mpz_divisible_p(f.coeffs[i].get_mpz_t(), bp.get_mpz_t())) return false;
  }
  const BigInt p2 = bp * bp;
  return !mpz_divisible_p(f.coeffs[0].get_mpz_t(), p2.get_mpz_t());
}

// f(x + shift) reduced mod p^2 is p-Eisenstein.
bool shift_is_p_eisenstein(Point a, std::uint64_t p, std::uint64_t shift) {
  const std::size_t d = a.size() - 1;
  if (p > kSquareSafe) {
    const IntPolynomial g = taylor_shift(IntPolynomial::from_i64(a), big_from_u64(shift));
    return is_p_eisenstein(g, p);
  }
  const std::uint64_t q = p * p;
  std::vector<std::uint64_t> c(a.size());
  for (std::size_t k = 0; k <= d; ++k) c[k] = detail::mod_floor(a[k], q);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t j = d; j-- > k;) c[j] = (c[j] + detail::mulmod(shift, c[j + 1], q)) % q;
  }
  if (c[d] % p == 0) return false;
  for (std::size_t k = 0; k < d; ++k) {
    if (c[k] % p != 0) return false;
  }
  return c[0] != 0;
}

class EisensteinSystem final : public LocalSystem {
 public:
  explicit EisensteinSystem(int d) : d_(d) {}

  std::string key() const override { return "eisenstein:d=" + std::to_string(d_); }
  int dimension() const override { return d_ + 1; }

  Rational measure(std::uint64_t p) const override {
    const BigInt bp = big_from_u64(p);
    BigInt den;
    mpz_pow_ui(den.get_mpz_t(), bp.get_mpz_t(), static_cast<unsigned long>(d_ + 2));
    return make_rational((bp - 1) * (bp - 1), den);
  }

  double measure_approx(std::uint64_t p) const override {
    const double inv = 1.0 / static_cast<double>(p);
    return (1.0 - inv) * (1.0 - inv) * std::pow(inv, d_);
  }

  bool contains(Point a, std::uint64_t p) const override { return is_p_eisenstein(a, p); }
  bool exceptional(Point) const override { return false; }

  std::optional<BigInt> prime_support_bound(Point a) const override {
    return a[0] == 0 ? BigInt(0) : abs(big_from_i64(a[0]));
  }

  std::optional<std::uint64_t> place_count(Point a) const override {
    std::uint64_t count = 0;
    for_each_candidate(a, [&](std::uint64_t q) { count += is_p_eisenstein(a, q) ? 1 : 0; });
    return count;
  }

  std::vector<std::uint64_t> places_up_to(Point a, std::uint64_t limit) const override {
    std::vector<std::uint64_t> out;
    for_each_candidate(a, [&](std::uint64_t q) {
      if (q <= limit && is_p_eisenstein(a, q)) out.push_back(q);
    });
    return out;
  }

  TailMajorant tail_majorant() const override {
    return TailMajorant{1.0, d_, 2, "1/p^" + std::to_string(d_)};
  }

  VpMajorantInfo vp_majorant_info() const override {
    return VpMajorantInfo{"(3/2)^" + std::to_string(d_) + "/p^" + std::to_string(d_), true, true};
  }

  std::optional<double> vp_majorant(std::uint64_t p) const override {
    return std::pow(1.5 / static_cast<double>(p), d_);
  }

 private:
  // Every qualifying prime divides gcd(a_0, ..., a_{d-1}), which is nonzero
  // exactly when a_0 is.
  template <class Fn>
  void for_each_candidate(Point a, Fn&& fn) const {
    if (a[0] == 0) return;
    std::uint64_t g = 0;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
      g = detail::gcd_u64(g, a[i] < 0 ? static_cast<std::uint64_t>(-(a[i] + 1)) + 1u : static_cast<std::uint64_t>(a[i]));
    }
    std::vector<std::uint64_t> primes;
    if (detail::distinct_prime_divisors_u64(g, primes) != 1) {
      throw IncompleteFactorization("eisenstein: coefficient gcd not fully factored");
    }
    for (std::uint64_t q : primes) fn(q);
  }

  int d_;
};

class ShiftedEisensteinSystem final : public LocalSystem {
 public:
  explicit ShiftedEisensteinSystem(int d) : d_(d) {}

  std::string key() const override { return "shifted-eisenstein:d=" + std::to_string(d_); }
  int dimension() const override { return d_ + 1; }

  Rational measure(std::uint64_t p) const override {
    const BigInt bp = big_from_u64(p);
    BigInt den;
    mpz_pow_ui(den.get_mpz_t(), bp.get_mpz_t(), static_cast<unsigned long>(d_ + 1));
    return make_rational((bp - 1) * (bp - 1), den);
  }

  double measure_approx(std::uint64_t p) const override {
    const double inv = 1.0 / static_cast<double>(p);
    return (1.0 - inv) * (1.0 - inv) * std::pow(inv, d_ - 1);
  }

  // f(x+i) p-Eisenstein forces f = a_d (x - i)^d mod p, so for p > d the
  // x^(d-1) coefficient pins i = -a_{d-1} / (d a_d) mod p. Smaller p are
  // scanned over all i < p.
  bool contains(Point a, std::uint64_t p) const override {
    const std::size_t d = a.size() - 1;
    const std::uint64_t lead = detail::mod_floor(a[d], p);
    if (lead == 0) return false;
    if (p > d) {
      const std::uint64_t denom = detail::mulmod(d % p, lead, p);
      const std::uint64_t inv = detail::powmod(denom, p - 2, p);
      const std::uint64_t neg_next = (p - detail::mod_floor(a[d - 1], p)) % p;
      return shift_is_p_eisenstein(a, p, detail::mulmod(neg_next, inv, p));
    }
    for (std::uint64_t i = 0; i < p; ++i) {
      if (shift_is_p_eisenstein(a, p, i)) return true;
    }
    return false;
  }

  bool exceptional(Point) const override { return false; }

  // Qualifying primes divide disc(f): the shift preserves the discriminant
  // and an Eisenstein polynomial of degree >= 2 has a repeated root mod p.
  std::optional<BigInt> prime_support_bound(Point a) const override {
    if (a.back() == 0) return BigInt(0);
    const BigInt disc = discriminant_of(a);
    if (disc == 0) return BigInt(0);
    return largest_prime_factor_bound(abs(disc));
  }

  std::optional<std::uint64_t> place_count(Point a) const override {
    std::uint64_t count = 0;
    for_each_candidate(a, [&](std::uint64_t q) { count += contains(a, q) ? 1 : 0; });
    return count;
  }

  std::vector<std::uint64_t> places_up_to(Point a, std::uint64_t limit) const override {
    std::vector<std::uint64_t> out;
    for_each_candidate(a, [&](std::uint64_t q) {
      if (q <= limit && contains(a, q)) out.push_back(q);
    });
    return out;
  }

  TailMajorant tail_majorant() const override {
    return TailMajorant{1.0, d_ - 1, 2, "1/p^" + std::to_string(d_ - 1)};
  }

  VpMajorantInfo vp_majorant_info() const override {
    return VpMajorantInfo{"(3/2)^" + std::to_string(d_) + "/p^" + std::to_string(d_ - 1), true, true};
  }

  std::optional<double> vp_majorant(std::uint64_t p) const override {
    return std::pow(1.5, d_) / std::pow(static_cast<double>(p), d_ - 1);
  }

 private:
  static BigInt discriminant_of(Point a) {
    __int128 small = 0;
    if (detail::discriminant_small(a, small)) return big_from_i128(small);
    return discriminant(IntPolynomial::from_i64(a));
  }

  // Matching the x^(d-1) and x^(d-2) coefficients of a_d (x - i)^d gives
  //   2 d a_d a_{d-2} == (d - 1) a_{d-1}^2  (mod p)
  // for every qualifying p. When that integer is nonzero its prime divisors
  // are the candidates; otherwise fall back to the discriminant's.
  template <class Fn>
  void for_each_candidate(Point a, Fn&& fn) const {
    const std::size_t d = a.size() - 1;
    if (a[d] == 0) return;
    const __int128 e = static_cast<__int128>(2 * static_cast<__int128>(d)) * a[d] * a[d - 2] -
                       static_cast<__int128>(d - 1) * a[d - 1] * a[d - 1];
    if (e != 0) {
      const unsigned __int128 mag = e < 0 ? static_cast<unsigned __int128>(-(e + 1)) + 1u : static_cast<unsigned __int128>(e);
      if (mag <= std::numeric_limits<std::uint64_t>::max()) {
        std::vector<std::uint64_t> primes;
        if (detail::distinct_prime_divisors_u64(static_cast<std::uint64_t>(mag), primes) != 1) {
          throw IncompleteFactorization("shifted-eisenstein: candidate witness not fully factored");
        }
        for (std::uint64_t q : primes) fn(q);
        return;
      }
    }
    BigInt witness = e != 0 ? big_from_i128(e) : discriminant_of(a);
    if (witness == 0) return;
    witness = abs(witness);
    const PartialFactorization f = factor_by_trial_division(witness);
    if (!f.complete()) throw IncompleteFactorization("shifted-eisenstein: candidate witness not fully factored");
    for (const BigInt& q : f.primes) fn(to_u64(q));
  }

  int d_;
};

}  // namespace

SystemPtr eisenstein_system(int d) {
  if (d < 2) throw DomainError("eisenstein_system: requires d >= 2");
  return std::make_unique<EisensteinSystem>(d);
}

SystemPtr shifted_eisenstein_system(int d) {
  if (d < 3) throw DomainError("shifted_eisenstein_system: requires d >= 3");
  return std::make_unique<ShiftedEisensteinSystem>(d);
}

}  // namespace latglob
