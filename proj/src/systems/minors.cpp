#include <algorithm>
#include <cmath>
#include <sstream>

#include "latglob/arith.hpp"
#include "latglob/errors.hpp"
#include "latglob/systems.hpp"
#include "support.hpp"

namespace latglob {
namespace {

class MinorsSystem final : public LocalSystem {
 public:
  MinorsSystem(int n, int m) : n_(static_cast<std::size_t>(n)), m_(static_cast<std::size_t>(m)) {}

  std::string key() const override {
    std::ostringstream os;
    os << "minors:n=" << n_ << ",m=" << m_;
    return os.str();
  }

  int dimension() const override { return static_cast<int>(n_ * m_); }

  Rational measure(std::uint64_t p) const override {
    Rational keep(1);
    const BigInt bp = big_from_u64(p);
    for (std::size_t i = 0; i < n_; ++i) {
      BigInt pk;
      mpz_pow_ui(pk.get_mpz_t(), bp.get_mpz_t(), m_ - i);
      keep *= Rational(pk - 1, pk);
    }
    return Rational(1) - keep;
  }

  double measure_approx(std::uint64_t p) const override {
    const double inv = 1.0 / static_cast<double>(p);
    double log_keep = 0.0;
    for (std::size_t i = 0; i < n_; ++i) log_keep += std::log1p(-std::pow(inv, static_cast<double>(m_ - i)));
    return -std::expm1(log_keep);
  }

  bool contains(Point a, std::uint64_t p) const override {
    return detail::rank_mod_p_small(a, n_, m_, p) < n_;
  }

  bool exceptional(Point a) const override { return minor_gcd(a) == 0; }

  std::optional<BigInt> prime_support_bound(Point a) const override {
    const BigInt g = minor_gcd(a);
    if (g == 0) return std::nullopt;
    return largest_prime_factor_bound(g);
  }

  std::optional<std::uint64_t> place_count(Point a) const override {
    const unsigned __int128 max_abs = max_abs_entry(a);
    if (detail::minors_fit_int128(n_, static_cast<std::uint64_t>(max_abs))) {
      const unsigned __int128 g = detail::n_minor_gcd_small(a, n_, m_);
      if (g == 0) return std::nullopt;
      if (g <= std::numeric_limits<std::uint64_t>::max()) return detail::omega_u64(static_cast<std::uint64_t>(g));
    }
    const BigInt g = minor_gcd(a);
    if (g == 0) return std::nullopt;
    const PartialFactorization f = factor_by_trial_division(g);
    if (!f.complete()) throw IncompleteFactorization("minors: gcd of minors not fully factored");
    return f.primes.size();
  }

  std::vector<std::uint64_t> places_up_to(Point a, std::uint64_t limit) const override {
    const unsigned __int128 max_abs = max_abs_entry(a);
    if (detail::minors_fit_int128(n_, static_cast<std::uint64_t>(max_abs))) {
      const unsigned __int128 g = detail::n_minor_gcd_small(a, n_, m_);
      std::vector<std::uint64_t> out;
      if (g != 0 && g <= std::numeric_limits<std::uint64_t>::max() &&
          detail::distinct_prime_divisors_u64(static_cast<std::uint64_t>(g), out) == 1) {
        out.erase(std::upper_bound(out.begin(), out.end(), limit), out.end());
        return out;
      }
    }
    const BigInt g = minor_gcd(a);
    if (g == 0) throw DomainError("minors: exceptional point lies in every U_p");
    return primes_of_up_to(g, limit);
  }

  TailMajorant tail_majorant() const override {
    std::ostringstream os;
    os << n_ << "/p^" << (m_ - n_ + 1);
    return TailMajorant{static_cast<double>(n_), static_cast<int>(m_ - n_ + 1), 2, os.str()};
  }

  VpMajorantInfo vp_majorant_info() const override {
    std::ostringstream os;
    os << "6^" << n_ * m_ << "/p^2";
    return VpMajorantInfo{os.str(), true, true};
  }

  std::optional<double> vp_majorant(std::uint64_t p) const override {
    const double pd = static_cast<double>(p);
    return std::pow(6.0, static_cast<double>(n_ * m_)) / (pd * pd);
  }

 private:
  BigInt minor_gcd(Point a) const {
    const unsigned __int128 max_abs = max_abs_entry(a);
    if (max_abs <= std::numeric_limits<std::uint64_t>::max() &&
        detail::minors_fit_int128(n_, static_cast<std::uint64_t>(max_abs))) {
      return big_from_u128(detail::n_minor_gcd_small(a, n_, m_));
    }
    return n_minor_gcd(IntMatrix::from_i64(n_, m_, a));
  }

  std::size_t n_;
  std::size_t m_;
};

}  // namespace

SystemPtr minors_system(int n, int m) {
  if (n < 1 || m < 1) throw DomainError("minors_system: n and m must be positive");
  if (n >= m) throw DomainError("minors_system: requires n < m");
  return std::make_unique<MinorsSystem>(n, m);
}

}  // namespace latglob
