#include "latcorr/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace latcorr {

long long totient(long long n) {
  if (n < 1) throw validation_error("totient requires n >= 1");
  long long result = n;
  long long m = n;
  for (long long p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      result -= result / p;
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

int mobius(long long n) {
  if (n < 1) throw validation_error("mobius requires n >= 1");
  int primes = 0;
  long long m = n;
  for (long long p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      m /= p;
      if (m % p == 0) return 0;
      ++primes;
    }
  }
  if (m > 1) ++primes;
  return (primes % 2 == 0) ? 1 : -1;
}

long long mod_inverse(long long x, long long q) {
  if (q < 1) throw validation_error("modulus must be positive");
  long long xr = ((x % q) + q) % q;
  auto [g, s, t] = xgcd(xr, q);
  (void)t;
  if (g != 1) throw no_inverse_error("no inverse: gcd(x,q) != 1");
  long long inv = ((s % q) + q) % q;
  if (inv == 0) inv = q;  // normalized to [1,q]; only hit when q = 1
  return inv;
}

std::vector<long long> inverse_table(long long q) {
  std::vector<long long> inv(static_cast<std::size_t>(q), 0);
  if (q == 1) return inv;
  inv[1] = 1;
  for (long long x = 2; x < q; ++x) {
    auto [g, s, t] = xgcd(x, q);
    (void)t;
    if (g != 1) continue;  // slot stays 0 for non-units
    inv[static_cast<std::size_t>(x)] = ((s % q) + q) % q;
  }
  return inv;
}

namespace {

struct UnitCircleTable {
  std::vector<double> cos_v, sin_v;
  explicit UnitCircleTable(long long q)
      : cos_v(static_cast<std::size_t>(q)), sin_v(static_cast<std::size_t>(q)) {
    for (long long k = 0; k < q; ++k) {
      double t = kTwoPi * static_cast<double>(k) / static_cast<double>(q);
      cos_v[static_cast<std::size_t>(k)] = std::cos(t);
      sin_v[static_cast<std::size_t>(k)] = std::sin(t);
    }
  }
};

long long reduce_mod(long long v, long long q) { return ((v % q) + q) % q; }

}  // namespace

std::complex<double> kloosterman(long long m, long long n, long long q) {
  if (q < 1) throw validation_error("modulus must be positive");
  if (q == 1) return {1.0, 0.0};  // single residue x = 0, e(0) = 1
  const auto inv = inverse_table(q);
  const UnitCircleTable tab(q);
  const long long mr = reduce_mod(m, q);
  const long long nr = reduce_mod(n, q);
  double re = 0.0, im = 0.0;
  for (long long x = 1; x < q; ++x) {
    long long xb = inv[static_cast<std::size_t>(x)];
    if (xb == 0) continue;  // not a unit
    long long idx = (mr * x + nr * xb) % q;
    re += tab.cos_v[static_cast<std::size_t>(idx)];
    im += tab.sin_v[static_cast<std::size_t>(idx)];
  }
  return {re, im};
}

KloostermanSweep kloosterman_prime_sweep(long long p) {
  if (p < 2) throw validation_error("sweep requires a prime p >= 2");
  const auto inv = inverse_table(p);
  const UnitCircleTable tab(p);
  KloostermanSweep out;
  for (long long m = 1; m < p; ++m) {
    for (long long n = 1; n < p; ++n) {
      double re = 0.0, im = 0.0;
      long long mx = 0;
      for (long long x = 1; x < p; ++x) {
        mx += m;
        if (mx >= p) mx -= p;
        long long idx = (mx + n * inv[static_cast<std::size_t>(x)]) % p;
        re += tab.cos_v[static_cast<std::size_t>(idx)];
        im += tab.sin_v[static_cast<std::size_t>(idx)];
      }
      double mod = std::hypot(re, im);
      if (mod > out.max_abs) {
        out.max_abs = mod;
        out.argmax_m = m;
        out.argmax_n = n;
      }
      out.max_abs_imag = std::max(out.max_abs_imag, std::fabs(im));
    }
  }
  return out;
}

std::complex<double> incomplete_kloosterman(const IntInterval& I, long long n, long long q) {
  if (q < 1) throw validation_error("modulus must be positive");
  if (I.lo < 0 || I.hi > q || I.lo > I.hi)
    throw validation_error("interval must lie inside [0,q)");
  if (q == 1) return {I.length() > 0 ? 1.0 : 0.0, 0.0};
  const auto inv = inverse_table(q);
  const UnitCircleTable tab(q);
  const long long nr = reduce_mod(n, q);
  double re = 0.0, im = 0.0;
  for (long long x = I.lo; x < I.hi; ++x) {
    if (x == 0) continue;
    long long xb = inv[static_cast<std::size_t>(x)];
    if (xb == 0) continue;
    long long idx = (nr * xb) % q;
    re += tab.cos_v[static_cast<std::size_t>(idx)];
    im += tab.sin_v[static_cast<std::size_t>(idx)];
  }
  return {re, im};
}

HyperbolaCount hyperbola_count(const HyperbolaQuery& query) {
  const long long q = query.q;
  if (q < 1) throw validation_error("modulus must be positive");
  for (const auto* I : {&query.I1, &query.I2}) {
    if (I->lo < 0 || I->hi > q || I->lo > I->hi)
      throw validation_error("intervals must lie inside [0,q)");
  }
  HyperbolaCount out;
  if (q == 1) {
    out.count = query.I1.length() * query.I2.length();
    out.main_term = static_cast<double>(out.count);
    out.error = 0.0;
    return out;
  }
  const auto inv = inverse_table(q);
  const long long hr = reduce_mod(query.h, q);
  long long count = 0;
  for (long long x = query.I1.lo; x < query.I1.hi; ++x) {
    if (x == 0) continue;
    long long xb = inv[static_cast<std::size_t>(x)];
    if (xb == 0) continue;
    long long y = (hr * xb) % q;
    if (y >= query.I2.lo && y < query.I2.hi) ++count;
  }
  out.count = count;
  out.main_term = static_cast<double>(totient(q)) *
                  static_cast<double>(query.I1.length()) *
                  static_cast<double>(query.I2.length()) /
                  (static_cast<double>(q) * static_cast<double>(q));
  out.error = static_cast<double>(count) - out.main_term;
  return out;
}

namespace {

double simpson_1d(const std::function<double(double)>& f, double a, double b, int cells) {
  if (a == b) return 0.0;
  double h = (b - a) / cells;
  double acc = f(a) + f(b);
  for (int i = 1; i < cells; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

}  // namespace

WeightedHyperbolaSum weighted_hyperbola_sum(const HyperbolaQuery& query,
                                            const std::function<double(double, double)>& f) {
  const long long q = query.q;
  if (q < 1) throw validation_error("modulus must be positive");
  for (const auto* I : {&query.I1, &query.I2}) {
    if (I->lo < 0 || I->hi > q || I->lo > I->hi)
      throw validation_error("intervals must lie inside [0,q)");
  }
  WeightedHyperbolaSum out;
  const long long hr = reduce_mod(query.h, q);
  if (q == 1) {
    for (long long x = query.I1.lo; x < query.I1.hi; ++x)
      for (long long y = query.I2.lo; y < query.I2.hi; ++y)
        out.sum += f(static_cast<double>(x), static_cast<double>(y));
  } else {
    const auto inv = inverse_table(q);
    // iterate the coprime variable; the other is determined mod q and has at
    // most one representative inside I1 since |I1| <= q
    for (long long b = query.I2.lo; b < query.I2.hi; ++b) {
      if (b == 0) continue;
      long long bb = inv[static_cast<std::size_t>(b)];
      if (bb == 0) continue;
      long long a0 = (hr * bb) % q;
      long long k = (query.I1.lo - a0 + q - 1) / q;
      long long a = a0 + k * q;
      if (a >= query.I1.lo && a < query.I1.hi)
        out.sum += f(static_cast<double>(a), static_cast<double>(b));
    }
  }
  const int cells = 256;
  auto inner = [&](double y) {
    return simpson_1d([&](double x) { return f(x, y); },
                      static_cast<double>(query.I1.lo), static_cast<double>(query.I1.hi), cells);
  };
  double integral =
      (query.I1.length() == 0 || query.I2.length() == 0)
          ? 0.0
          : simpson_1d(inner, static_cast<double>(query.I2.lo),
                       static_cast<double>(query.I2.hi), cells);
  out.main_term = static_cast<double>(totient(q)) /
                  (static_cast<double>(q) * static_cast<double>(q)) * integral;
  return out;
}

long long coprime_progression_count(long long a, long long b, long long d) {
  if (a < 1 || b < 1 || d < 1) throw validation_error("a, b, d must be positive");
  if (std::gcd(a, std::gcd(b, d)) != 1)
    throw validation_error("requires gcd(a,b,d) = 1");
  // strip from d every prime factor shared with b
  long long d1 = d;
  long long g = std::gcd(d1, b);
  while (g > 1) {
    while (d1 % g == 0) d1 /= g;
    g = std::gcd(d1, b);
  }
  long long d2 = d / d1;
  return 2 * totient(d1) * d2;
}

SolutionPairSet build_solution_pairs(long long a, long long b, long long q) {
  if (q < 1 || a < 1 || b < 1 || a > q || b > q)
    throw validation_error("requires 1 <= a,b <= q");
  if (std::gcd(a, std::gcd(b, q)) != 1)
    throw validation_error("requires gcd(a,b,q) = 1");
  SolutionPairSet out{a, b, q, {}};
  // For fixed A, solve a*B = A*b (mod q): solvable iff gcd(a,q) | A*b, and B
  // then runs over one residue class mod q/gcd(a,q).
  const long long ga = std::gcd(a, q);
  const long long q1 = q / ga;
  const long long a1 = a / ga;
  const long long a1_inv = (q1 == 1) ? 1 : mod_inverse(a1, q1);
  for (long long A = 1; A <= 2 * q; ++A) {
    __int128 rhs = static_cast<__int128>(A) * b;
    if (rhs % ga != 0) continue;
    long long rhs_red = static_cast<long long>((rhs / ga) % q1);
    long long B0 = (q1 == 1) ? 0 : (rhs_red * (a1_inv % q1)) % q1;
    for (long long B = (B0 == 0 ? q1 : B0); B <= 2 * q; B += q1) {
      if (std::gcd(A, B) != 1) continue;
      __int128 lhs = static_cast<__int128>(A) * b - static_cast<__int128>(B) * a;
      if (lhs % q != 0) continue;  // paranoia; the class construction implies it
      out.pairs.emplace_back(A, B);
    }
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

}  // namespace latcorr
