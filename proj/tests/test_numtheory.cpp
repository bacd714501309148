#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "latcorr/numtheory.hpp"

using namespace latcorr;

TEST_CASE("arithmetic functions") {
  CHECK(totient(1) == 1);
  CHECK(totient(12) == 4);
  CHECK(totient(997) == 996);
  CHECK(mobius(30) == -1);
  CHECK(mobius(4) == 0);
  CHECK(mobius(1) == 1);
  CHECK(mod_inverse(3, 7) == 5);
  CHECK(mod_inverse(1, 1) == 1);
  CHECK_THROWS_AS((void)mod_inverse(4, 8), no_inverse_error);
}

TEST_CASE("inverse tables are exact") {
  for (long long q : {2LL, 7LL, 12LL, 30LL, 97LL, 360LL}) {
    auto inv = inverse_table(q);
    for (long long x = 1; x < q; ++x) {
      if (std::gcd(x, q) != 1) {
        CHECK(inv[static_cast<std::size_t>(x)] == 0);
      } else {
        CHECK((x * inv[static_cast<std::size_t>(x)]) % q == 1);
      }
    }
  }
}

TEST_CASE("full sums: degenerate and hand-checked values") {
  for (long long q : {1LL, 2LL, 12LL, 30LL, 101LL})
    CHECK(kloosterman(0, 0, q).real() == doctest::Approx((double)totient(q)).epsilon(1e-12));
  CHECK(kloosterman(1, 1, 2).real() == doctest::Approx(1.0).epsilon(1e-12));
  // q=5: inverse pairs (1,1),(2,3),(3,2),(4,4)
  CHECK(kloosterman(1, 1, 5).real() ==
        doctest::Approx(2 + 2 * std::cos(4 * kPi / 5)).epsilon(1e-12));
  CHECK(std::fabs(kloosterman(3, 7, 30).imag()) < 1e-9 * 30);
}

TEST_CASE("prime sweep stays inside the modulus bound") {
  for (long long p : {101LL, 199LL, 251LL}) {
    auto sw = kloosterman_prime_sweep(p);
    CHECK(sw.max_abs <= 2 * std::sqrt((double)p) + 1e-6);
    CHECK(sw.max_abs_imag < 1e-9 * (double)p);
    // sweep agrees with the generic evaluator at its argmax
    auto direct = kloosterman(sw.argmax_m, sw.argmax_n, p);
    CHECK(std::hypot(direct.real(), direct.imag()) ==
          doctest::Approx(sw.max_abs).epsilon(1e-9));
  }
}

TEST_CASE("incomplete sums") {
  for (long long q : {7LL, 12LL, 36LL})
    CHECK(incomplete_kloosterman({0, q}, 0, q).real() ==
          doctest::Approx((double)totient(q)).epsilon(1e-12));
  // full-period case reduces to a Moebius value
  auto ram = incomplete_kloosterman({0, 5}, 1, 5);
  CHECK(ram.real() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::fabs(ram.imag()) < 1e-12);
  CHECK_THROWS_AS((void)incomplete_kloosterman({-1, 3}, 1, 5), validation_error);
}

TEST_CASE("incomplete sum empirical envelope") {
  std::mt19937_64 rng(1234);
  double worst_ratio = 0;
  for (int trial = 0; trial < 300; ++trial) {
    long long q = 20 + static_cast<long long>(uniform01(rng) * 1980);
    long long n = static_cast<long long>(uniform01(rng) * q);
    long long lo = static_cast<long long>(uniform01(rng) * q);
    long long hi = lo + static_cast<long long>(uniform01(rng) * (q - lo));
    auto s = incomplete_kloosterman({lo, hi}, n, q);
    double g = static_cast<double>(std::gcd(n == 0 ? q : n, q));
    double ratio = std::hypot(s.real(), s.imag()) /
                   (std::sqrt(g) * std::pow((double)q, 0.6));
    worst_ratio = std::max(worst_ratio, ratio);
  }
  MESSAGE("fitted envelope constant: ", worst_ratio);
  CHECK(worst_ratio < 3.0);
}

TEST_CASE("hyperbola counts") {
  auto full = hyperbola_count({5, 1, {0, 5}, {0, 5}});
  CHECK(full.count == 4);
  CHECK(full.main_term == doctest::Approx(4.0));
  CHECK(full.error == doctest::Approx(0.0));

  auto unit = hyperbola_count({1, 0, {0, 1}, {0, 1}});
  CHECK(unit.count == 1);  // every residue pair qualifies mod 1

  auto prime = hyperbola_count({1009, 1, {0, 504}, {0, 504}});
  CHECK(std::fabs(prime.error) <= 1.0 * std::pow(1009.0, 0.6));

  CHECK_THROWS_AS((void)hyperbola_count({5, 1, {0, 9}, {0, 5}}), validation_error);

  // brute force cross-check on a composite modulus
  for (long long q : {12LL, 30LL}) {
    HyperbolaQuery query{q, 7, {2, q - 1}, {1, q / 2}};
    auto fastc = hyperbola_count(query);
    long long brute = 0;
    for (long long x = query.I1.lo; x < query.I1.hi; ++x)
      for (long long y = query.I2.lo; y < query.I2.hi; ++y)
        if (std::gcd(x, q) == 1 && (x * y - query.h) % q == 0) ++brute;
    CHECK(fastc.count == brute);
  }
}

TEST_CASE("error exponent stays near the square-root scale") {
  std::mt19937_64 rng(5150);
  std::vector<long long> moduli{251, 503, 1009};
  std::vector<double> logq, logerr;
  for (long long q : moduli) {
    double worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
      long long lo1 = static_cast<long long>(uniform01(rng) * q / 2);
      long long hi1 = lo1 + static_cast<long long>(uniform01(rng) * (q - lo1));
      long long lo2 = static_cast<long long>(uniform01(rng) * q / 2);
      long long hi2 = lo2 + static_cast<long long>(uniform01(rng) * (q - lo2));
      long long h = 1 + static_cast<long long>(uniform01(rng) * (q - 1));
      auto r = hyperbola_count({q, h, {lo1, hi1}, {lo2, hi2}});
      worst = std::max(worst, std::fabs(r.error));
    }
    logq.push_back(std::log((double)q));
    logerr.push_back(std::log(std::max(worst, 1e-9)));
  }
  // least squares slope
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < logq.size(); ++i) {
    mx += logq[i];
    my += logerr[i];
  }
  mx /= logq.size();
  my /= logerr.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < logq.size(); ++i) {
    num += (logq[i] - mx) * (logerr[i] - my);
    den += (logq[i] - mx) * (logq[i] - mx);
  }
  double slope = num / den;
  MESSAGE("error exponent estimate: ", slope);
  CHECK(slope <= 0.75);
}

TEST_CASE("weighted hyperbola sums") {
  // unit weight, residue coprime to the modulus: reduces to the plain count
  HyperbolaQuery query{7, 3, {0, 7}, {0, 7}};
  auto w = weighted_hyperbola_sum(query, [](double, double) { return 1.0; });
  auto c = hyperbola_count(query);
  CHECK(w.sum == doctest::Approx((double)c.count));
  CHECK(w.main_term == doctest::Approx(c.main_term).epsilon(1e-6));

  // linear weight: enumeration oracle
  auto lin = weighted_hyperbola_sum(query, [](double x, double y) { return x + y; });
  double brute = 0;
  for (long long a = 0; a < 7; ++a)
    for (long long b = 0; b < 7; ++b)
      if (std::gcd(b, 7LL) == 1 && (a * b - 3) % 7 == 0) brute += double(a + b);
  CHECK(lin.sum == doctest::Approx(brute));
  CHECK(lin.main_term ==
        doctest::Approx((totient(7) / 49.0) * (7.0 * 7 * 7)).epsilon(1e-6));

  // smooth product weight on a longer modulus: the equidistribution envelope
  HyperbolaQuery q2{101, 3, {5, 90}, {0, 101}};
  auto f = [](double x, double y) { return (x - 5) * x * std::sqrt(1 + y / 101.0); };
  auto ws = weighted_hyperbola_sum(q2, f);
  double fmax = 0, dfmax = 0;
  for (double x = 5; x <= 90; x += 0.5)
    for (double y = 0; y <= 101; y += 0.5) {
      fmax = std::max(fmax, std::fabs(f(x, y)));
      dfmax = std::max(dfmax, std::fabs(2 * x - 5) + std::fabs((x - 5) * x / 202.0));
    }
  const double T = 2, delta = 0.1, g = 1;
  double envelope = T * T * fmax * std::pow(101.0, 0.5 + delta) * g +
                    T * dfmax * std::pow(101.0, 1.5 + delta) * g +
                    85.0 * 101.0 * dfmax / T;
  CHECK(std::fabs(ws.sum - ws.main_term) <= envelope);
}

TEST_CASE("coprime progression counts match brute force") {
  CHECK(coprime_progression_count(1, 1, 1) == 2);
  CHECK(coprime_progression_count(1, 2, 4) == 8);
  CHECK(coprime_progression_count(2, 3, 6) == 6);
  CHECK_THROWS_AS((void)coprime_progression_count(2, 4, 6), validation_error);
  for (long long d = 1; d <= 30; ++d)
    for (long long b = 1; b <= d; ++b)
      for (long long a = 1; a <= d; ++a) {
        if (std::gcd(a, std::gcd(b, d)) != 1) continue;
        long long brute = 0;
        for (long long m = 0; m <= 2 * d - 1; ++m)
          if (std::gcd(a + b * m, d) == 1) ++brute;
        REQUIRE(coprime_progression_count(a, b, d) == brute);
      }
}

TEST_CASE("solution pair sets") {
  auto set = build_solution_pairs(1, 1, 4);
  std::vector<std::pair<long long, long long>> expected{
      {1, 1}, {1, 5}, {3, 7}, {5, 1}, {7, 3}};
  CHECK(set.pairs == expected);

  // restricting the range to [1,q] with b=a collapses the set to (1,1)
  auto diag = build_solution_pairs(3, 3, 7);
  std::vector<std::pair<long long, long long>> small;
  for (auto [A, B] : diag.pairs)
    if (A <= 7 && B <= 7) small.push_back({A, B});
  CHECK(small == std::vector<std::pair<long long, long long>>{{1, 1}});

  // density floor at a prime modulus
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 5; ++trial) {
    long long q = 997;
    long long a = 1 + static_cast<long long>(uniform01(rng) * (q - 1));
    long long b = 1 + static_cast<long long>(uniform01(rng) * (q - 1));
    auto s = build_solution_pairs(a, b, q);
    double floor = totient(q) / (2 * std::log((double)q));
    CHECK((double)s.pairs.size() >= floor);
    for (auto [A, B] : s.pairs) {
      CHECK(A >= 1);
      CHECK(A <= 2 * q);
      CHECK(B >= 1);
      CHECK(B <= 2 * q);
      CHECK(std::gcd(A, B) == 1);
      CHECK((A * b - B * a) % q == 0);
    }
  }
  CHECK_THROWS_AS((void)build_solution_pairs(2, 4, 6), validation_error);
  CHECK_THROWS_AS((void)build_solution_pairs(9, 1, 7), validation_error);
}

TEST_CASE("solution pairs match a quadratic brute force") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 8; ++trial) {
    long long q = 5 + static_cast<long long>(uniform01(rng) * 60);
    long long a = 1 + static_cast<long long>(uniform01(rng) * (q - 1));
    long long b = 1 + static_cast<long long>(uniform01(rng) * (q - 1));
    if (std::gcd(a, std::gcd(b, q)) != 1) continue;
    auto s = build_solution_pairs(a, b, q);
    std::vector<std::pair<long long, long long>> brute;
    for (long long A = 1; A <= 2 * q; ++A)
      for (long long B = 1; B <= 2 * q; ++B)
        if (std::gcd(A, B) == 1 && (A * b - B * a) % q == 0) brute.push_back({A, B});
    CHECK(s.pairs == brute);
  }
}
