#include "latglob/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <sstream>
#include <thread>

#include "latglob/arith.hpp"
#include "latglob/errors.hpp"
#include "latglob/primes.hpp"

namespace latglob {
namespace {

void check_box(const LocalSystem& system, const BoxSpec& box) {
  (void)box.point_count();
  if (box.d != system.dimension()) {
    throw DomainError("box dimension " + std::to_string(box.d) + " does not match system " + system.key() +
                      " (d = " + std::to_string(system.dimension()) + ")");
  }
}

void check_budget(const BoxSpec& box, const EnumerationOptions& options) {
  if (box.point_count() > big_from_u64(options.max_points)) {
    const std::int64_t best = max_feasible_h(box.d, options.max_points);
    std::ostringstream os;
    os << "box [-" << box.H << ',' << box.H << ")^" << box.d << " exceeds the point budget of " << options.max_points
       << "; max feasible H = " << best;
    throw BudgetError(os.str(), static_cast<std::uint64_t>(best));
  }
}

// Splits the 2H slices along the first coordinate into contiguous blocks,
// one per worker, and merges the per-worker accumulators in worker order.
// Acc must provide merge(const Acc&); every field is an exact integer, so
// the result does not depend on the worker count.
template <class Acc, class Visit>
Acc reduce_box(const BoxSpec& box, const EnumerationOptions& options, Visit visit) {
  check_budget(box, options);
  const std::int64_t H = box.H;
  const auto d = static_cast<std::size_t>(box.d);
  const auto slices = static_cast<std::uint64_t>(2 * H);
  const std::uint64_t workers = std::min<std::uint64_t>(resolve_threads(options), slices);

  std::vector<Acc> accs(workers);
  std::vector<std::exception_ptr> errors(workers);

  auto run = [&](std::uint64_t w) {
    try {
      const std::uint64_t begin = slices * w / workers;
      const std::uint64_t end = slices * (w + 1) / workers;
      std::vector<std::int64_t> pt(d, -H);
      for (std::uint64_t s = begin; s < end; ++s) {
        std::fill(pt.begin(), pt.end(), -H);
        pt[0] = -H + static_cast<std::int64_t>(s);
        while (true) {
          visit(accs[w], Point(pt));
          std::size_t i = d - 1;
          for (; i >= 1; --i) {
            if (++pt[i] < H) break;
            pt[i] = -H;
          }
          if (i == 0) break;
        }
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (std::uint64_t w = 1; w < workers; ++w) accs[0].merge(accs[w]);
  return std::move(accs[0]);
}

// |P(A)| or nullopt for exceptional points, enforcing the system contract.
std::optional<std::uint64_t> checked_count(const LocalSystem& system, Point a) {
  const auto c = system.place_count(a);
  if (!c && !system.exceptional(a)) {
    throw IntegrityError(system.key() + ": non-exceptional point without a finite place count");
  }
  return c;
}

struct Counter {
  std::uint64_t n = 0;
  void merge(const Counter& o) { n += o.n; }
};

struct TallyAcc {
  std::uint64_t exceptional = 0;
  std::uint64_t in_T = 0;
  std::uint64_t place_sum = 0;
  void merge(const TallyAcc& o) {
    exceptional += o.exceptional;
    in_T += o.in_T;
    place_sum += o.place_sum;
  }
};

ExactEstimate make_estimate(const BigInt& num, const BigInt& den, std::string metadata, const BoxSpec& box) {
  ExactEstimate out;
  out.numerator = num;
  out.denominator = den;
  out.value = make_rational(num, den);
  out.H = box.H;
  out.metadata = std::move(metadata);
  return out;
}

std::string describe(std::string_view what, const LocalSystem& system, const BoxSpec& box) {
  std::ostringstream os;
  os << what << " system=" << system.key() << " H=" << box.H << " d=" << box.d;
  return os.str();
}

unsigned __int128 abs_u128(__int128 v) {
  return v < 0 ? static_cast<unsigned __int128>(-(v + 1)) + 1u : static_cast<unsigned __int128>(v);
}

unsigned __int128 gcd_u128(unsigned __int128 a, unsigned __int128 b) {
  while (b != 0) {
    const unsigned __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Does g > 1 have a prime factor > M? Decided by trial division; throws when
// a composite cofactor with every factor beyond the trial bound remains.
bool has_prime_above(std::uint64_t g, std::uint64_t M) {
  const std::uint64_t L = kDefaultTrialLimit;
  const std::uint64_t bound = std::min(M, L);
  bool sqrt_reached = false;
  for (std::uint64_t p : detail::trial_primes()) {
    if (p > bound) break;
    if (p * p > g) {
      sqrt_reached = true;
      break;
    }
    while (g % p == 0) g /= p;
  }
  if (g == 1) return false;
  if (sqrt_reached) return g > M;  // g is prime
  if (M <= L) return true;         // every factor of g exceeds M
  if (g <= M) return false;
  if (is_prime_u64(g)) return true;
  throw IncompleteFactorization("ekedahl: cofactor " + std::to_string(g) + " not factored beyond the trial bound");
}

bool has_prime_above(BigInt g, std::uint64_t M) {
  if (fits_u64(g)) return has_prime_above(to_u64(g), M);
  const std::uint64_t bound = std::min<std::uint64_t>(M, kDefaultTrialLimit);
  for (std::uint64_t p : detail::trial_primes()) {
    if (p > bound) break;
    while (mpz_divisible_ui_p(g.get_mpz_t(), p)) mpz_divexact_ui(g.get_mpz_t(), g.get_mpz_t(), p);
  }
  if (fits_u64(g)) return has_prime_above(to_u64(g), M);
  if (M <= kDefaultTrialLimit) return g > 1;
  if (g <= big_from_u64(M)) return false;
  if (mpz_probab_prime_p(g.get_mpz_t(), 40) == 2) return true;
  throw IncompleteFactorization("ekedahl: large cofactor not factored beyond the trial bound");
}

// Fast evaluation; false on overflow or oversized coefficients.
bool evaluate_small(const MultiPoly& f, Point a, __int128& out) {
  __int128 sum = 0;
  for (const auto& term : f.terms) {
    if (!term.coefficient.fits_slong_p()) return false;
    __int128 t = term.coefficient.get_si();
    for (std::size_t i = 0; i < term.exponents.size(); ++i) {
      for (unsigned e = 0; e < term.exponents[i]; ++e) {
        if (__builtin_mul_overflow(t, static_cast<__int128>(a[i]), &t)) return false;
      }
    }
    if (__builtin_add_overflow(sum, t, &sum)) return false;
  }
  out = sum;
  return true;
}

bool ekedahl_member(const MultiPoly& f, const MultiPoly& g, Point a, std::uint64_t M) {
  __int128 u = 0;
  __int128 v = 0;
  if (evaluate_small(f, a, u) && evaluate_small(g, a, v)) {
    if (u == 0 && v == 0) return true;
    const unsigned __int128 G = gcd_u128(abs_u128(u), abs_u128(v));
    if (G <= 1) return false;
    if (G <= std::numeric_limits<std::uint64_t>::max()) return has_prime_above(static_cast<std::uint64_t>(G), M);
    return has_prime_above(big_from_u128(G), M);
  }
  const BigInt fu = f.evaluate(a);
  const BigInt gv = g.evaluate(a);
  if (fu == 0 && gv == 0) return true;
  const BigInt G = gcd(fu, gv);
  if (G <= 1) return false;
  return has_prime_above(G, M);
}

}  // namespace

BigInt BoxSpec::point_count() const {
  if (H < 1) throw DomainError("box: H must be >= 1");
  if (H > (std::int64_t{1} << 62)) throw DomainError("box: H too large");
  if (d < 1) throw DomainError("box: d must be >= 1");
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), big_from_i64(2 * H).get_mpz_t(), static_cast<unsigned long>(d));
  return out;
}

unsigned resolve_threads(const EnumerationOptions& options) {
  unsigned n = options.threads;
  if (n == 0) {
    if (const char* env = std::getenv("LATGLOB_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != env && *end == '\0' && v > 0) n = static_cast<unsigned>(std::min(v, 1024L));
    }
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

std::int64_t max_feasible_h(int d, std::uint64_t max_points) {
  if (d < 1) throw DomainError("max_feasible_h: d must be >= 1");
  auto fits = [&](std::int64_t h) { return BoxSpec{h, d}.point_count() <= big_from_u64(max_points); };
  auto h = static_cast<std::int64_t>(std::pow(static_cast<double>(max_points), 1.0 / d) / 2.0);
  h = std::max<std::int64_t>(h, 0);
  while (h > 0 && !fits(h)) --h;
  while (fits(h + 1)) ++h;
  return h;
}

BoxTally box_tally(const LocalSystem& system, const BoxSpec& box, const EnumerationOptions& options) {
  check_box(system, box);
  const TallyAcc acc = reduce_box<TallyAcc>(box, options, [&](TallyAcc& t, Point a) {
    const auto c = checked_count(system, a);
    if (!c) {
      ++t.exceptional;
      return;
    }
    t.place_sum += *c;
    if (*c > 0) ++t.in_T;
  });
  return BoxTally{box.point_count(), big_from_u64(acc.exceptional), big_from_u64(acc.in_T),
                  big_from_u64(acc.place_sum)};
}

ExactEstimate empirical_density(const LocalSystem& system, std::uint64_t p, const BoxSpec& box,
                                const EnumerationOptions& options) {
  check_box(system, box);
  if (!is_prime_u64(p)) throw DomainError("empirical_density: " + std::to_string(p) + " is not prime");
  const Counter c = reduce_box<Counter>(box, options, [&](Counter& acc, Point a) {
    if (system.contains(a, p)) ++acc.n;
  });
  return make_estimate(big_from_u64(c.n), box.point_count(),
                       describe("density p=" + std::to_string(p), system, box), box);
}

ExactEstimate empirical_mean(const LocalSystem& system, const BoxSpec& box, const EnumerationOptions& options) {
  const BoxTally t = box_tally(system, box, options);
  return make_estimate(t.place_sum, t.points, describe("mean", system, box), box);
}

ExactEstimate empirical_restricted_mean(const LocalSystem& system, const BoxSpec& box,
                                        const EnumerationOptions& options) {
  const BoxTally t = box_tally(system, box, options);
  if (t.in_T == 0) {
    throw EmptyRestriction("restricted mean: no point of the box lies in any U_p (" + system.key() +
                           ", H=" + std::to_string(box.H) + ")");
  }
  return make_estimate(t.place_sum, t.in_T, describe("restricted-mean", system, box), box);
}

ExactEstimate empirical_density_T(const LocalSystem& system, const BoxSpec& box, const EnumerationOptions& options) {
  const BoxTally t = box_tally(system, box, options);
  return make_estimate(t.in_T, t.points, describe("density-T", system, box), box);
}

ExactEstimate empirical_P_inverse_density(const LocalSystem& system, const PlaceSet& places, const BoxSpec& box,
                                          const EnumerationOptions& options) {
  check_box(system, box);
  std::vector<std::uint64_t> S = places.primes;
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  std::ostringstream meta;
  meta << "P-inverse S={";
  for (std::size_t i = 0; i < S.size(); ++i) meta << (i ? "," : "") << S[i];
  if (places.infinity) meta << (S.empty() ? "" : ",") << "inf";
  meta << '}';
  // The archimedean place carries no lattice points in this interface.
  if (places.infinity) {
    check_budget(box, options);
    return make_estimate(BigInt(0), box.point_count(), describe(meta.str(), system, box), box);
  }
  const Counter c = reduce_box<Counter>(box, options, [&](Counter& acc, Point a) {
    const auto n = checked_count(system, a);
    if (!n || *n != S.size()) return;
    for (std::uint64_t p : S) {
      if (!system.contains(a, p)) return;
    }
    ++acc.n;
  });
  return make_estimate(big_from_u64(c.n), box.point_count(), describe(meta.str(), system, box), box);
}

PatternTable pattern_table(const LocalSystem& system, const std::vector<std::uint64_t>& primes, const BoxSpec& box,
                           const EnumerationOptions& options) {
  check_box(system, box);
  if (primes.size() > 20) throw DomainError("pattern_table: at most 20 constrained primes");
  for (std::uint64_t p : primes) {
    if (!is_prime_u64(p)) throw DomainError("pattern_table: " + std::to_string(p) + " is not prime");
  }
  const std::size_t cells = std::size_t{1} << primes.size();
  struct Acc {
    std::vector<std::uint64_t> cells;
    std::uint64_t exceptional = 0;
    void merge(const Acc& o) {
      if (cells.size() < o.cells.size()) cells.resize(o.cells.size());
      for (std::size_t i = 0; i < o.cells.size(); ++i) cells[i] += o.cells[i];
      exceptional += o.exceptional;
    }
  };
  Acc acc = reduce_box<Acc>(box, options, [&](Acc& t, Point a) {
    if (t.cells.empty()) t.cells.assign(cells, 0);
    const auto n = checked_count(system, a);
    if (!n) {
      ++t.exceptional;
      return;
    }
    std::size_t mask = 0;
    if (*n > 0) {
      for (std::size_t i = 0; i < primes.size(); ++i) {
        if (system.contains(a, primes[i])) mask |= std::size_t{1} << i;
      }
    }
    ++t.cells[mask];
  });
  acc.cells.resize(cells);

  PatternTable out;
  out.primes = primes;
  const BigInt den = box.point_count();
  for (std::size_t mask = 0; mask < cells; ++mask) {
    std::ostringstream meta;
    meta << "pattern in={";
    bool first = true;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (mask >> i & 1) {
        meta << (first ? "" : ",") << primes[i];
        first = false;
      }
    }
    meta << '}';
    out.cells.push_back(make_estimate(big_from_u64(acc.cells[mask]), den, describe(meta.str(), system, box), box));
  }
  out.exceptional = make_estimate(big_from_u64(acc.exceptional), den, describe("exceptional", system, box), box);
  return out;
}

ExactEstimate tail_union_density(const LocalSystem& system, std::uint64_t M, const BoxSpec& box,
                                 const EnumerationOptions& options) {
  check_box(system, box);
  const Counter c = reduce_box<Counter>(box, options, [&](Counter& acc, Point a) {
    const auto n = checked_count(system, a);
    if (!n) {
      ++acc.n;  // in infinitely many U_p
      return;
    }
    if (*n == 0) return;
    if (system.places_up_to(a, M).size() < *n) ++acc.n;
  });
  return make_estimate(big_from_u64(c.n), box.point_count(),
                       describe("tail-union M=" + std::to_string(M), system, box), box);
}

ConditionProfile newcond_profile(const LocalSystem& system, const BoxSpec& box, double alpha,
                                 const EnumerationOptions& options) {
  check_box(system, box);
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("newcond_profile: alpha must be > 0");
  const double threshold = std::pow(static_cast<double>(box.H), alpha);
  const std::uint64_t limit =
      threshold >= 1.8e19 ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(threshold);

  struct Acc {
    std::uint64_t max_ell = 0;
    std::vector<std::int64_t> witness;
    std::map<std::uint64_t, std::uint64_t> occupancy;
    void merge(const Acc& o) {
      if (o.max_ell > max_ell || (witness.empty() && !o.witness.empty() && o.max_ell == max_ell)) {
        max_ell = o.max_ell;
        witness = o.witness;
      }
      for (const auto& [p, n] : o.occupancy) occupancy[p] += n;
    }
  };
  const Acc acc = reduce_box<Acc>(box, options, [&](Acc& t, Point a) {
    const auto n = checked_count(system, a);
    if (!n || *n == 0) return;
    const std::vector<std::uint64_t> small = system.places_up_to(a, limit);
    const std::uint64_t ell = *n - small.size();
    if (ell > t.max_ell || t.witness.empty()) {
      t.max_ell = ell;
      t.witness.assign(a.begin(), a.end());
    }
    for (std::uint64_t p : small) {
      if (static_cast<double>(p) < threshold) ++t.occupancy[p];
    }
  });

  ConditionProfile out;
  out.alpha = alpha;
  out.H = box.H;
  out.threshold = threshold;
  out.max_ell = acc.max_ell;
  out.max_ell_witness = acc.witness;
  const VpMajorantInfo info = system.vp_majorant_info();
  out.vp_majorant_name = info.name;
  out.vp_majorant_summable = info.summable;
  const BigInt den = box.point_count();
  out.occupancy_sum = 0;
  for (const auto& [p, n] : acc.occupancy) {
    PrimeOccupancy row;
    row.p = p;
    row.occupancy = make_rational(big_from_u64(n), den);
    row.vp = system.vp_majorant(p);
    row.within_majorant = !row.vp || row.occupancy.get_d() <= *row.vp;
    if (!row.within_majorant) ++out.vp_violations;
    out.occupancy_sum += row.occupancy;
    out.per_prime_occupancy.push_back(std::move(row));
  }
  return out;
}

MultiPoly MultiPoly::variable(int index, int d) {
  if (index < 1 || index > d) throw DomainError("MultiPoly::variable: index out of range");
  Term t{BigInt(1), std::vector<unsigned>(static_cast<std::size_t>(d), 0)};
  t.exponents[static_cast<std::size_t>(index - 1)] = 1;
  return MultiPoly{{t}};
}

int MultiPoly::dimension() const {
  if (terms.empty()) return 0;
  const std::size_t d = terms.front().exponents.size();
  for (const auto& t : terms) {
    if (t.exponents.size() != d) throw DomainError("MultiPoly: terms disagree on the number of variables");
  }
  return static_cast<int>(d);
}

BigInt MultiPoly::evaluate(Point a) const {
  BigInt sum = 0;
  for (const auto& term : terms) {
    BigInt t = term.coefficient;
    for (std::size_t i = 0; i < term.exponents.size(); ++i) {
      if (term.exponents[i] == 0) continue;
      BigInt power;
      mpz_pow_ui(power.get_mpz_t(), big_from_i64(a[i]).get_mpz_t(), term.exponents[i]);
      t *= power;
    }
    sum += t;
  }
  return sum;
}

ExactEstimate ekedahl_estimate(const MultiPoly& f, const MultiPoly& g, std::uint64_t M, const BoxSpec& box,
                               const EnumerationOptions& options) {
  (void)box.point_count();
  const int df = f.dimension();
  const int dg = g.dimension();
  if ((df != 0 && df != box.d) || (dg != 0 && dg != box.d)) {
    throw DomainError("ekedahl_estimate: polynomial variable count does not match the box dimension");
  }
  const Counter c = reduce_box<Counter>(box, options, [&](Counter& acc, Point a) {
    if (ekedahl_member(f, g, a, M)) ++acc.n;
  });
  std::ostringstream meta;
  meta << "ekedahl M=" << M << " H=" << box.H << " d=" << box.d;
  return make_estimate(big_from_u64(c.n), box.point_count(), meta.str(), box);
}

std::vector<ExactEstimate> sweep(const LocalSystem& system, const std::vector<std::int64_t>& h_list, SweepKind kind,
                                 const EnumerationOptions& options) {
  if (h_list.empty()) throw DomainError("sweep: empty H list");
  for (std::size_t i = 1; i < h_list.size(); ++i) {
    if (h_list[i] <= h_list[i - 1]) throw DomainError("sweep: H values must be strictly increasing");
  }
  for (std::int64_t H : h_list) check_budget(BoxSpec{H, system.dimension()}, options);
  std::vector<ExactEstimate> out;
  out.reserve(h_list.size());
  for (std::int64_t H : h_list) {
    const BoxSpec box{H, system.dimension()};
    switch (kind) {
      case SweepKind::kMean:
        out.push_back(empirical_mean(system, box, options));
        break;
      case SweepKind::kDensityT:
        out.push_back(empirical_density_T(system, box, options));
        break;
      case SweepKind::kRestricted:
        out.push_back(empirical_restricted_mean(system, box, options));
        break;
    }
  }
  return out;
}

}  // namespace latglob
