#include <doctest.h>

#include <cmath>
#include <numbers>

#include "latglob/analytic.hpp"
#include "latglob/errors.hpp"
#include "latglob/systems.hpp"
#include "oracle.hpp"

using namespace latglob;

namespace {

constexpr double kEps = 1e-9;

double zeta_ld(int s) { return static_cast<double>(oracle::zeta(s)); }

// Direct prime sum of (p - 1)^2 / p^k to 10^7 plus 2 sum_{p > 10^7} 1/p^(k-2)
// comparison bound; returns the midpoint.
double eisenstein_oracle(int k) {
  long double total = 0;
  for (auto p : oracle::plain_sieve(10'000'000)) {
    const long double q = static_cast<long double>(p);
    total += (q - 1) * (q - 1) / std::pow(q, k);
  }
  return static_cast<double>(total);
}

}  // namespace

TEST_SUITE("analytic") {
  TEST_CASE("riemann_zeta") {
    const auto z2 = riemann_zeta(2, kEps);
    CHECK(z2.tail_bound <= kEps);
    CHECK(z2.brackets(std::numbers::pi * std::numbers::pi / 6));
    CHECK(std::fabs(z2.partial - 1.6449340668) < 1e-9);

    const auto z3 = riemann_zeta(3, kEps);
    CHECK(z3.brackets(zeta_ld(3)));
    CHECK(std::fabs(z3.partial - 1.2020569) < 1e-7);

    const auto z20 = riemann_zeta(20, kEps);
    CHECK(z20.lower() > 1.0);
    CHECK(z20.upper() < 1.0 + std::ldexp(1.0, -19));

    double prev = z2.partial;
    for (int s = 3; s <= 40; ++s) {
      const auto z = riemann_zeta(s, 1e-12);
      CHECK(z.partial < prev);
      CHECK(z.brackets(zeta_ld(s)));
      prev = z.partial;
    }
    CHECK_THROWS_AS((riemann_zeta(1, kEps)), DomainError);
    CHECK_THROWS_AS((riemann_zeta(2, 0.0)), DomainError);
    CHECK_THROWS_AS((riemann_zeta(2, -1.0)), DomainError);
  }

  TEST_CASE("prime_tail_bound dominates a direct tail") {
    const TailMajorant m{1.0, 2, 2, "1/p^2"};
    long double direct = 0;
    for (auto p : oracle::plain_sieve(20'000'000)) {
      if (p > 1000) direct += 1.0L / (static_cast<long double>(p) * p);
    }
    CHECK(direct < prime_tail_bound(m, 1000));
    CHECK(prime_tail_bound(m, 2000) < prime_tail_bound(m, 1000));
    CHECK(prime_tail_bound(m, choose_cutoff(m, 1e-6)) <= 1e-6);
  }

  TEST_CASE("prime_series") {
    const auto s12 = minors_system(1, 2);
    const auto v = prime_series(*s12, kEps);
    CHECK(v.tail_bound <= kEps);
    CHECK(v.brackets(static_cast<double>(oracle::prime_zeta(2))));
    CHECK(std::fabs(v.partial - 0.4522474200) < 1e-9);

    for (auto key : {"cex:A", "cex:B", "cex:C"}) {
      const auto c = prime_series(*make_system(key), kEps);
      CHECK(c.partial == 0.0);
      CHECK(c.tail_bound == 0.0);
    }

    const auto e2 = prime_series(*eisenstein_system(2), 1e-6);
    CHECK(std::fabs(e2.partial - eisenstein_oracle(4)) < 1e-6);
    CHECK(e2.lower() <= eisenstein_oracle(4) + 1e-12);

    CHECK_THROWS_AS((prime_series(*s12, 0.0)), DomainError);
  }

  TEST_CASE("euler_product") {
    const auto e12 = euler_product(*minors_system(1, 2), kEps);
    CHECK(e12.brackets(1.0 / zeta_ld(2)));
    CHECK(std::fabs(e12.partial - 0.6079271) < 1e-7);
    CHECK(e12.tail_bound <= kEps);

    const auto e23 = euler_product(*minors_system(2, 3), kEps);
    CHECK(e23.brackets(1.0 / (zeta_ld(2) * zeta_ld(3))));

    for (auto key : {"cex:A", "cex:B", "cex:C"}) {
      const auto c = euler_product(*make_system(key), kEps);
      CHECK(c.partial == 1.0);
      CHECK(c.tail_bound == 0.0);
    }
    CHECK_THROWS_AS((euler_product(*minors_system(1, 2), -1.0)), DomainError);
  }

  TEST_CASE("predicted_density_T and its complement") {
    for (auto key : {"minors:n=1,m=2", "minors:n=2,m=3", "eisenstein:d=2", "shifted-eisenstein:d=3"}) {
      const auto s = make_system(key);
      const auto e = euler_product(*s, 1e-7);
      const auto t = predicted_density_T(*s, 1e-7);
      CHECK(std::fabs(e.partial + t.partial - 1.0) < 1e-12);
    }
    CHECK(predicted_density_T(*minors_system(1, 2), kEps).brackets(1.0 - 1.0 / zeta_ld(2)));
    CHECK(std::fabs(predicted_density_T(*minors_system(1, 2), kEps).partial - 0.3920729) < 1e-7);
    for (auto key : {"cex:A", "cex:B", "cex:C"}) {
      const auto t = predicted_density_T(*make_system(key), kEps);
      CHECK(t.partial == 0.0);
      CHECK(t.tail_bound == 0.0);
    }
    // eisenstein d=2 against a direct product over primes to 10^6
    long double prod = 1;
    for (auto p : oracle::plain_sieve(1'000'000)) {
      const long double q = static_cast<long double>(p);
      prod *= 1 - (q - 1) * (q - 1) / (q * q * q * q);
    }
    CHECK(std::fabs(predicted_density_T(*eisenstein_system(2), 1e-8).partial - (1 - static_cast<double>(prod))) < 1e-7);
  }

  TEST_CASE("predicted_restricted_mean") {
    const auto r = predicted_restricted_mean(*minors_system(1, 2), kEps);
    const double want = static_cast<double>(oracle::prime_zeta(2)) / (1.0 - 1.0 / zeta_ld(2));
    CHECK(r.brackets(want));
    CHECK(std::fabs(r.partial - 1.153478) < 1e-6);

    // eisenstein: (1 - prod(1 - s_p))^-1 sum s_p
    for (int d : {2, 3, 4}) {
      const auto s = eisenstein_system(d);
      const double q = prime_series(*s, 1e-7).partial / predicted_density_T(*s, 1e-7).partial;
      CHECK(predicted_restricted_mean(*s, 1e-7).brackets(q));
    }
    for (auto key : {"cex:A", "cex:B", "cex:C"}) {
      CHECK_THROWS_AS((predicted_restricted_mean(*make_system(key), kEps)), DegenerateDenominator);
    }
  }

  TEST_CASE("product_formula") {
    const auto s = minors_system(1, 2);
    const auto empty = product_formula(*s, PlaceSet{}, kEps);
    CHECK(empty.brackets(1.0 / zeta_ld(2)));
    const auto two = product_formula(*s, PlaceSet{false, {2}}, kEps);
    CHECK(two.brackets(0.25 * (4.0 / 3.0) / zeta_ld(2)));
    const auto two_three = product_formula(*s, PlaceSet{false, {3, 2}}, kEps);
    CHECK(two_three.brackets((1.0 / 4) * (4.0 / 3) * (1.0 / 9) * (9.0 / 8) / zeta_ld(2)));
    const auto far = product_formula(*s, PlaceSet{false, {1'000'003}}, 1e-6);
    CHECK(far.cutoff_prime >= 1'000'003);
    CHECK(far.brackets(1.0 / (1'000'003.0 * 1'000'003.0 - 1.0) / zeta_ld(2)));
    for (auto key : {"minors:n=1,m=2", "eisenstein:d=2", "cex:A"}) {
      const auto inf = product_formula(*make_system(key), PlaceSet{true, {}}, kEps);
      CHECK(inf.partial == 0.0);
      CHECK(inf.tail_bound == 0.0);
    }
    CHECK(product_formula(*make_system("cex:B"), PlaceSet{}, kEps).partial == 1.0);
    CHECK(product_formula(*make_system("cex:B"), PlaceSet{false, {2}}, kEps).partial == 0.0);
    CHECK_THROWS_AS((product_formula(*s, PlaceSet{false, {4}}, kEps)), DomainError);
  }

  TEST_CASE("pattern probabilities form a probability measure") {
    const std::vector<std::uint64_t> first{2, 3, 5, 7};
    for (auto key : {"minors:n=1,m=2", "minors:n=2,m=3", "eisenstein:d=2", "shifted-eisenstein:d=3", "cex:A"}) {
      const auto s = make_system(key);
      Rational total(0);
      for (unsigned mask = 0; mask < 16; ++mask) {
        std::vector<std::uint64_t> in;
        for (unsigned i = 0; i < 4; ++i) {
          if (mask >> i & 1) in.push_back(first[i]);
        }
        total += pattern_probability(*s, first, in);
      }
      CHECK(total == 1);
    }
    const auto s = minors_system(1, 2);
    CHECK(pattern_probability(*s, std::vector<std::uint64_t>{2, 3}, std::vector<std::uint64_t>{2}) ==
          Rational(1, 4) * Rational(8, 9));
    CHECK_THROWS_AS(pattern_probability(*s, std::vector<std::uint64_t>{2}, std::vector<std::uint64_t>{3}),
                    DomainError);
  }

  TEST_CASE("monotone refinement of the cutoff") {
    for (auto key : {"minors:n=1,m=2", "minors:n=2,m=3", "eisenstein:d=2", "shifted-eisenstein:d=3"}) {
      const auto s = make_system(key);
      TailBoundedValue prev_series = prime_series_to_cutoff(*s, 10);
      TailBoundedValue prev_product = euler_product_to_cutoff(*s, 10);
      for (std::uint64_t cutoff : {20, 50, 100, 1000, 10'000, 100'000, 1'000'000}) {
        const auto series = prime_series_to_cutoff(*s, cutoff);
        const auto product = euler_product_to_cutoff(*s, cutoff);
        CHECK(series.partial >= prev_series.lower());
        CHECK(series.partial <= prev_series.upper());
        CHECK(series.tail_bound < prev_series.tail_bound);
        CHECK(product.partial >= prev_product.lower());
        CHECK(product.partial <= prev_product.upper());
        CHECK(product.tail_bound < prev_product.tail_bound);
        prev_series = series;
        prev_product = product;
      }
    }
  }

  TEST_CASE("prime series of minors 1x2 matches the zeta-based prime zeta") {
    const auto v = prime_series(*minors_system(1, 2), 1e-10);
    const double pz = static_cast<double>(oracle::prime_zeta(2));
    CHECK(v.lower() <= pz + 1e-15);
    CHECK(pz <= v.upper() + 1e-15);
    // a second route to the same value: log zeta(2) = sum_k P(2k)/k
    long double via_log = std::log(oracle::zeta(2));
    for (int k = 2; 2 * k <= 120; ++k) via_log -= oracle::prime_zeta(2 * k) / k;
    CHECK(v.brackets(static_cast<double>(via_log)));
  }
}
