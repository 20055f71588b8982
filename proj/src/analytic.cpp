#include "latglob/analytic.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "latglob/errors.hpp"
#include "latglob/primes.hpp"

namespace latglob {
namespace {

constexpr double kUnit = DBL_EPSILON / 2;
// Relative slack per accumulated quantity: covers a few ulps per term from
// measure_approx plus compensated-summation error.
constexpr double kSlack = 64 * kUnit;
constexpr double kPiConstant = 1.25506;
constexpr double kDusart = 1.2762;

void require_eps(double eps, const char* who) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError(std::string(who) + ": eps must be > 0");
}

// Neumaier compensated sum.
class Accumulator {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct LogProduct {
  double log_value = 0.0;  // sum of logs
  double magnitude = 0.0;  // sum of |logs|
  std::uint64_t terms = 0;
};

// Sum of log(1 - s_p) over primes p <= cutoff, with p in `in_set` using
// log(s_p) instead. Returns nullopt-like flag through `zero` when a factor
// vanishes.
LogProduct log_product(const LocalSystem& system, std::uint64_t cutoff, std::span<const std::uint64_t> in_set,
                       bool& zero) {
  Accumulator acc;
  Accumulator mag;
  LogProduct out;
  zero = false;
  if (cutoff < 2) return out;
  for_each_prime(2, cutoff, [&](std::uint64_t p) {
    ++out.terms;
    const double s = system.measure_approx(p);
    const bool member = std::binary_search(in_set.begin(), in_set.end(), p);
    const double l = member ? std::log(s) : std::log1p(-s);
    if (std::isinf(l)) {
      zero = true;
      return;
    }
    acc.add(l);
    mag.add(std::fabs(l));
  });
  out.log_value = acc.value();
  out.magnitude = mag.value();
  return out;
}

// Turns a computed log-product over p <= cutoff into a bracket for the
// infinite product: the tail factor lies in [exp(-2T), 1].
TailBoundedValue close_product(const LogProduct& lp, double factor, const TailMajorant& majorant,
                               std::uint64_t cutoff) {
  const double value = factor * std::exp(lp.log_value);
  const double rel = kSlack * (lp.magnitude + 1.0);
  const double tail = majorant.zero() ? 0.0 : 2.0 * prime_tail_bound(majorant, cutoff);
  TailBoundedValue out;
  out.terms_used = lp.terms;
  out.cutoff_prime = cutoff;
  out.bracket = Bracket::kBelow;
  out.partial = value * (1.0 + rel);
  const double low = value * (1.0 - rel) * std::exp(-tail);
  out.tail_bound = out.partial - low;
  return out;
}

std::uint64_t largest_prime_at_most(std::uint64_t n) {
  while (n >= 2 && !is_prime_u64(n)) --n;
  return n;
}

}  // namespace

double prime_tail_bound(const TailMajorant& majorant, std::uint64_t cutoff) {
  if (majorant.zero()) return 0.0;
  if (majorant.exponent < 2) throw DomainError("prime_tail_bound: majorant exponent must be >= 2");
  if (cutoff < 2 || cutoff + 1 < majorant.valid_from) {
    throw DomainError("prime_tail_bound: cutoff below the majorant's validity range");
  }
  const double k = majorant.exponent;
  const double P = static_cast<double>(cutoff);
  const double L = std::log(P);
  double factor = kPiConstant * k / (k - 1.0);
  if (cutoff >= 17) {
    // partial summation with pi(t) <= t/log t (1 + 1.2762/log t) and pi(P) >= P/log P
    factor = std::min(factor, k / (k - 1.0) * (1.0 + kDusart / L) - 1.0);
  }
  const double bound = majorant.coefficient * factor / (std::pow(P, k - 1.0) * L);
  return bound * (1.0 + 16 * kUnit);
}

std::uint64_t choose_cutoff(const TailMajorant& majorant, double target) {
  require_eps(target, "choose_cutoff");
  if (majorant.zero()) return 2;
  const double k = majorant.exponent;
  // Past this point every term is <= 1/2, so log(1 - s_p) >= -2 s_p.
  const double half_point = std::ceil(std::pow(2.0 * majorant.coefficient, 1.0 / k));
  std::uint64_t lo = std::max<std::uint64_t>({majorant.valid_from, 3, static_cast<std::uint64_t>(half_point)});
  if (prime_tail_bound(majorant, lo) <= target) return lo;
  std::uint64_t hi = lo;
  while (prime_tail_bound(majorant, hi) > target) {
    lo = hi;
    hi *= 2;
    if (hi > PrimeCache::kMaxLimit * 8) throw BudgetError("choose_cutoff: eps too small for the prime cutoff budget", 0);
  }
  while (hi - lo > std::max<std::uint64_t>(1, hi / 128)) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (prime_tail_bound(majorant, mid) <= target ? hi : lo) = mid;
  }
  return hi;
}

TailBoundedValue riemann_zeta(int s, double eps) {
  if (s < 2) throw DomainError("riemann_zeta: s must be >= 2");
  require_eps(eps, "riemann_zeta");
  const double sm1 = s - 1.0;
  // Bracket width of sum_{n > N} n^-s between the two integral bounds.
  auto width = [&](double N) { return std::pow(N, -sm1) * -std::expm1(-sm1 * std::log1p(1.0 / N)) / sm1; };
  double N = std::max(1.0, std::floor(std::pow(2.0 / eps, 1.0 / s)));
  while (N > 1.0 && width(N - 1.0) <= eps / 2) N -= 1.0;
  while (width(N) > eps / 2) N += 1.0;

  Accumulator acc;
  const auto n_max = static_cast<std::uint64_t>(N);
  for (std::uint64_t n = n_max; n >= 1; --n) acc.add(std::pow(static_cast<double>(n), -s));
  const double lower_tail = std::pow(N + 1.0, -sm1) / sm1;
  acc.add(lower_tail);
  const double sum = acc.value();
  const double slack = kSlack * sum;

  TailBoundedValue out;
  out.partial = sum - slack;
  out.tail_bound = width(N) + 2 * slack;
  out.terms_used = n_max;
  out.cutoff_prime = 0;
  out.bracket = Bracket::kAbove;
  return out;
}

TailBoundedValue prime_series_to_cutoff(const LocalSystem& system, std::uint64_t cutoff) {
  const TailMajorant majorant = system.tail_majorant();
  const double s_inf = system.s_infinity().get_d();
  TailBoundedValue out;
  out.bracket = Bracket::kAbove;
  if (majorant.zero()) {
    out.partial = s_inf;
    return out;
  }
  Accumulator acc;
  acc.add(s_inf);
  std::uint64_t terms = 0;
  if (cutoff >= 2) {
    for_each_prime(2, cutoff, [&](std::uint64_t p) {
      ++terms;
      acc.add(system.measure_approx(p));
    });
  }
  const double sum = acc.value();
  const double slack = kSlack * sum;
  out.partial = sum - slack;
  out.tail_bound = prime_tail_bound(majorant, cutoff) + 2 * slack;
  out.terms_used = terms;
  out.cutoff_prime = cutoff;
  return out;
}

TailBoundedValue prime_series(const LocalSystem& system, double eps) {
  require_eps(eps, "prime_series");
  const TailMajorant majorant = system.tail_majorant();
  if (majorant.zero()) return prime_series_to_cutoff(system, 0);
  return prime_series_to_cutoff(system, largest_prime_at_most(choose_cutoff(majorant, eps / 2)));
}

TailBoundedValue euler_product_to_cutoff(const LocalSystem& system, std::uint64_t cutoff) {
  const TailMajorant majorant = system.tail_majorant();
  if (majorant.zero()) {
    TailBoundedValue out;
    out.partial = 1.0;
    out.bracket = Bracket::kBelow;
    return out;
  }
  bool zero = false;
  const LogProduct lp = log_product(system, cutoff, {}, zero);
  if (zero) {
    TailBoundedValue out;
    out.bracket = Bracket::kBelow;
    out.cutoff_prime = cutoff;
    return out;
  }
  return close_product(lp, 1.0, majorant, cutoff);
}

TailBoundedValue euler_product(const LocalSystem& system, double eps) {
  require_eps(eps, "euler_product");
  const TailMajorant majorant = system.tail_majorant();
  if (majorant.zero()) return euler_product_to_cutoff(system, 0);
  // Relative width ~ 2T, and the product is <= 1.
  return euler_product_to_cutoff(system, largest_prime_at_most(choose_cutoff(majorant, eps / 4)));
}

TailBoundedValue predicted_density_T(const LocalSystem& system, double eps) {
  const TailBoundedValue e = euler_product(system, eps);
  const double keep_inf = 1.0 - system.s_infinity().get_d();
  TailBoundedValue out;
  out.terms_used = e.terms_used;
  out.cutoff_prime = e.cutoff_prime;
  out.bracket = Bracket::kAbove;
  if (e.tail_bound == 0.0 && keep_inf == 1.0) {
    out.partial = 1.0 - e.partial;
    return out;
  }
  const double lo = 1.0 - keep_inf * e.upper();
  const double hi = 1.0 - keep_inf * e.lower();
  out.partial = lo - 4 * kUnit;
  out.tail_bound = (hi - lo) + 8 * kUnit;
  return out;
}

TailBoundedValue predicted_restricted_mean(const LocalSystem& system, double eps) {
  const TailBoundedValue rho = predicted_density_T(system, eps);
  if (!(rho.lower() > 0.0)) {
    throw DegenerateDenominator("predicted_restricted_mean: density of T is not bounded away from 0");
  }
  const TailBoundedValue mu = prime_series(system, eps);
  const double lo = mu.lower() / rho.upper();
  const double hi = mu.upper() / rho.lower();
  TailBoundedValue out;
  out.bracket = Bracket::kAbove;
  out.partial = lo * (1.0 - 4 * kUnit);
  out.tail_bound = hi * (1.0 + 4 * kUnit) - out.partial;
  out.terms_used = std::max(mu.terms_used, rho.terms_used);
  out.cutoff_prime = std::max(mu.cutoff_prime, rho.cutoff_prime);
  return out;
}

TailBoundedValue product_formula(const LocalSystem& system, const PlaceSet& in_set, double eps) {
  require_eps(eps, "product_formula");
  std::vector<std::uint64_t> primes = in_set.primes;
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (std::uint64_t p : primes) {
    if (!is_prime_u64(p)) throw DomainError("product_formula: place " + std::to_string(p) + " is not prime");
  }

  const double s_inf = system.s_infinity().get_d();
  const double factor = in_set.infinity ? s_inf : 1.0 - s_inf;
  const TailMajorant majorant = system.tail_majorant();

  TailBoundedValue out;
  out.bracket = Bracket::kBelow;
  if (factor == 0.0) return out;

  std::uint64_t cutoff = primes.empty() ? 0 : primes.back();
  if (!majorant.zero()) cutoff = std::max(cutoff, largest_prime_at_most(choose_cutoff(majorant, eps / 4)));
  bool zero = false;
  const LogProduct lp = log_product(system, cutoff, primes, zero);
  out.cutoff_prime = cutoff;
  out.terms_used = lp.terms;
  if (zero) return out;
  if (majorant.zero()) {
    // Every factor outside S is exactly 1 and every factor inside is 0.
    out.partial = primes.empty() ? factor : 0.0;
    return out;
  }
  return close_product(lp, factor, majorant, cutoff);
}

Rational pattern_probability(const LocalSystem& system, std::span<const std::uint64_t> constrained,
                             std::span<const std::uint64_t> in_set) {
  Rational out(1);
  for (std::uint64_t p : in_set) {
    if (std::find(constrained.begin(), constrained.end(), p) == constrained.end()) {
      throw DomainError("pattern_probability: in_set must be a subset of the constrained primes");
    }
  }
  for (std::uint64_t p : constrained) {
    if (!is_prime_u64(p)) throw DomainError("pattern_probability: place " + std::to_string(p) + " is not prime");
    const Rational s = system.measure(p);
    const bool member = std::find(in_set.begin(), in_set.end(), p) != in_set.end();
    out *= member ? s : Rational(1 - s);
  }
  return out;
}

}  // namespace latglob
