#include <algorithm>
#include <bit>
#include <mutex>
#include <shared_mutex>

#include "latglob/errors.hpp"
#include "latglob/primes.hpp"
#include "latglob/systems.hpp"
#include "support.hpp"

namespace latglob {
namespace {

constexpr std::uint64_t kMaxEnumerableIndex = std::uint64_t{1} << 28;

bool is_power_of_two(std::int64_t a) { return a > 0 && std::has_single_bit(static_cast<std::uint64_t>(a)); }

unsigned floor_log2(std::uint64_t v) { return 63u - static_cast<unsigned>(std::countl_zero(v)); }

unsigned ceil_log2(std::uint64_t v) { return v <= 1 ? 0u : floor_log2(v - 1) + 1; }

// Indices j in [first, last] with p_j <= limit, as primes.
std::vector<std::uint64_t> primes_by_index(std::uint64_t first, std::uint64_t last, std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (first > last) return out;
  auto& cache = PrimeCache::instance();
  if (last > kMaxEnumerableIndex) {
    if (limit > PrimeCache::kMaxLimit) throw BudgetError("place set too large to enumerate", 0);
    last = std::min(last, cache.count_up_to(limit));
  }
  for (std::uint64_t j = first; j <= last; ++j) {
    const std::uint64_t p = cache.nth_prime(j);
    if (p > limit) break;
    out.push_back(p);
  }
  return out;
}

// Counterexample systems share: d = 1, every s_p = 0, no exceptional points.
class CounterexampleBase : public LocalSystem {
 public:
  int dimension() const override { return 1; }
  Rational measure(std::uint64_t) const override { return Rational(0); }
  double measure_approx(std::uint64_t) const override { return 0.0; }
  bool exceptional(Point) const override { return false; }
  TailMajorant tail_majorant() const override { return TailMajorant{0.0, 2, 2, "0"}; }
};

class CounterexampleA final : public CounterexampleBase {
 public:
  std::string key() const override { return "cex:A"; }

  bool contains(Point a, std::uint64_t p) const override {
    if (!is_power_of_two(a[0])) return false;
    const std::uint64_t j = PrimeCache::instance().index_of(p);
    if (j == 0) return false;
    return (std::uint64_t{1} << floor_log2(j)) == static_cast<std::uint64_t>(a[0]);
  }

  std::optional<BigInt> prime_support_bound(Point a) const override {
    if (!is_power_of_two(a[0])) return BigInt(0);
    return prime_upper_bound_at_index(2 * big_from_i64(a[0]) - 1);
  }

  std::optional<std::uint64_t> place_count(Point a) const override {
    return is_power_of_two(a[0]) ? static_cast<std::uint64_t>(a[0]) : 0;
  }

  std::vector<std::uint64_t> places_up_to(Point a, std::uint64_t limit) const override {
    if (!is_power_of_two(a[0])) return {};
    const auto first = static_cast<std::uint64_t>(a[0]);
    return primes_by_index(first, 2 * first - 1, limit);
  }

  VpMajorantInfo vp_majorant_info() const override { return VpMajorantInfo{"1/p (not summable)", true, false}; }
  std::optional<double> vp_majorant(std::uint64_t p) const override { return 1.0 / static_cast<double>(p); }

  std::string note() const override {
    return "mean does not exist: oscillates between subsequences tending to 1/2 and 1";
  }
};

class CounterexampleB final : public CounterexampleBase {
 public:
  std::string key() const override { return "cex:B"; }

  bool contains(Point a, std::uint64_t p) const override {
    const std::uint64_t k = prime_index(a[0]);
    if (k == 0) return false;
    const std::uint64_t j = PrimeCache::instance().index_of(p);
    if (j == 0 || j > k) return false;
    return j >= 64 || k <= (std::uint64_t{1} << j);
  }

  std::optional<BigInt> prime_support_bound(Point a) const override {
    return prime_index(a[0]) == 0 ? BigInt(0) : big_from_i64(a[0]);
  }

  // A = p_k lies in U_{p_j} for ceil(log2 k) <= j <= k.
  std::optional<std::uint64_t> place_count(Point a) const override {
    const std::uint64_t k = prime_index(a[0]);
    if (k == 0) return 0;
    return k - std::max<std::uint64_t>(1, ceil_log2(k)) + 1;
  }

  std::vector<std::uint64_t> places_up_to(Point a, std::uint64_t limit) const override {
    const std::uint64_t k = prime_index(a[0]);
    if (k == 0) return {};
    return primes_by_index(std::max<std::uint64_t>(1, ceil_log2(k)), k, limit);
  }

  VpMajorantInfo vp_majorant_info() const override { return VpMajorantInfo{"none", false, false}; }
  std::optional<double> vp_majorant(std::uint64_t) const override { return std::nullopt; }

  // l_{A,H} is always 0 (A in U_{p_j} forces p_j <= A); the occupancy
  // majorant is what fails.
  std::string note() const override {
    return "mean diverges while every s_p = 0; no summable occupancy majorant exists";
  }

 private:
  static std::uint64_t prime_index(std::int64_t a) {
    if (a < 2) return 0;
    return PrimeCache::instance().index_of(static_cast<std::uint64_t>(a));
  }
};

class CounterexampleC final : public CounterexampleBase {
 public:
  std::string key() const override { return "cex:C"; }

  bool contains(Point a, std::uint64_t p) const override {
    const std::uint64_t m = root_of_square(a[0]);
    if (m == 0) return false;
    const std::uint64_t j = PrimeCache::instance().index_of(p);
    if (j == 0 || !std::has_single_bit(j)) return false;
    return cex::schedule_root(floor_log2(j)) == m;
  }

  std::optional<BigInt> prime_support_bound(Point a) const override {
    const std::uint64_t m = root_of_square(a[0]);
    if (m == 0) return BigInt(0);
    const std::uint64_t last_n = cex::block_start(m + 1) - 1;
    BigInt index = 1;
    index <<= last_n;
    return prime_upper_bound_at_index(index);
  }

  std::optional<std::uint64_t> place_count(Point a) const override {
    const std::uint64_t m = root_of_square(a[0]);
    return m * m * m;
  }

  std::vector<std::uint64_t> places_up_to(Point a, std::uint64_t limit) const override {
    std::vector<std::uint64_t> out;
    const std::uint64_t m = root_of_square(a[0]);
    if (m == 0) return out;
    auto& cache = PrimeCache::instance();
    const std::uint64_t first = cex::block_start(m);
    const std::uint64_t end = cex::block_start(m + 1);
    for (std::uint64_t n = first; n < end; ++n) {
      // p_{2^n} > 2^n, so nothing further can be <= limit.
      if (n >= 64 || (std::uint64_t{1} << n) > limit) break;
      if ((std::uint64_t{1} << n) > kMaxEnumerableIndex) {
        if (limit > PrimeCache::kMaxLimit) throw BudgetError("place set too large to enumerate", 0);
        if ((std::uint64_t{1} << n) > cache.count_up_to(limit)) break;
      }
      const std::uint64_t p = cache.nth_prime(std::uint64_t{1} << n);
      if (p > limit) break;
      out.push_back(p);
    }
    return out;
  }

  VpMajorantInfo vp_majorant_info() const override {
    return VpMajorantInfo{"1/p on p_{2^n}, 0 elsewhere", true, true};
  }

  std::optional<double> vp_majorant(std::uint64_t p) const override {
    const std::uint64_t j = PrimeCache::instance().index_of(p);
    return std::has_single_bit(j) ? 1.0 / static_cast<double>(p) : 0.0;
  }

  std::string note() const override {
    return "mean diverges (A = m^2 lies in m^3 places) while every s_p = 0";
  }

 private:
  static std::uint64_t root_of_square(std::int64_t a) {
    if (a < 1) return 0;
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(a)));
    while (r * r > static_cast<std::uint64_t>(a)) --r;
    while ((r + 1) * (r + 1) <= static_cast<std::uint64_t>(a)) ++r;
    return r * r == static_cast<std::uint64_t>(a) ? r : 0;
  }
};

// Block boundaries of counterexample C, grown on demand:
// starts_[m - 1] = first n with U_{p_{2^n}} = {m^2}.
class ScheduleTable {
 public:
  static ScheduleTable& instance() {
    static ScheduleTable table;
    return table;
  }

  std::uint64_t block_start(std::uint64_t m) {
    if (m == 0) throw DomainError("block_start: m must be >= 1");
    {
      std::shared_lock lock(mutex_);
      if (m <= starts_.size()) return starts_[m - 1];
    }
    std::unique_lock lock(mutex_);
    grow_to(m);
    return starts_[m - 1];
  }

  std::uint64_t root(std::uint64_t n) {
    {
      std::shared_lock lock(mutex_);
      if (!starts_.empty() && n < next_start_) return lookup(n);
    }
    std::unique_lock lock(mutex_);
    while (n >= next_start_) grow_to(starts_.size() + 1);
    return lookup(n);
  }

 private:
  ScheduleTable() { grow_to(1); }

  void grow_to(std::uint64_t m) {
    while (starts_.size() < m) {
      const std::uint64_t k = starts_.size() + 1;
      if (k > 90'000) throw BudgetError("counterexample C schedule index overflow", 0);
      starts_.push_back(next_start_);
      next_start_ += k * k * k;
    }
  }

  std::uint64_t lookup(std::uint64_t n) const {
    auto it = std::upper_bound(starts_.begin(), starts_.end(), n);
    return static_cast<std::uint64_t>(it - starts_.begin());
  }

  std::shared_mutex mutex_;
  std::vector<std::uint64_t> starts_;
  std::uint64_t next_start_ = 0;
};

}  // namespace

namespace cex {

std::uint64_t schedule_root(std::uint64_t n) { return ScheduleTable::instance().root(n); }

std::uint64_t block_start(std::uint64_t m) { return ScheduleTable::instance().block_start(m); }

}  // namespace cex

SystemPtr counterexample_a() { return std::make_unique<CounterexampleA>(); }
SystemPtr counterexample_b() { return std::make_unique<CounterexampleB>(); }
SystemPtr counterexample_c() { return std::make_unique<CounterexampleC>(); }

}  // namespace latglob
