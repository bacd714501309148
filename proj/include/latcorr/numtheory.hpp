#pragma once

// Exact integer arithmetic: totient/Moebius/inverses, Kloosterman sums,
// modular hyperbola counts, coprime progressions and the (A,B) solution
// pairs used by the divergence construction.

#include <complex>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "latcorr/common.hpp"

namespace latcorr {

struct Modulus {
  long long q = 1;
};

// Half-open integer interval [lo, hi).
struct IntInterval {
  long long lo = 0;
  long long hi = 0;
  long long length() const { return hi - lo; }
};

struct HyperbolaQuery {
  long long q = 1;
  long long h = 0;
  IntInterval I1, I2;  // inside [0,q], lengths <= q
};

long long totient(long long n);
int mobius(long long n);

// Inverse of x mod q, normalized to [1,q]; throws no_inverse_error when
// gcd(x,q) != 1.
long long mod_inverse(long long x, long long q);

// inv[x] for gcd(x,q)=1, 0 elsewhere; inv[x] in [0,q).
std::vector<long long> inverse_table(long long q);

// Full Kloosterman sum K(m,n;q), exact O(q) summation. The imaginary part is
// returned for auditing; conjugate symmetry of the summands keeps it at
// rounding level.
std::complex<double> kloosterman(long long m, long long n, long long q);

struct KloostermanSweep {
  double max_abs = 0.0;
  double max_abs_imag = 0.0;
  long long argmax_m = 0, argmax_n = 0;
};

// max |K(m,n;p)| over all 1 <= m,n < p for a prime p, with the inverse and
// root-of-unity tables built once. Used by the Weil-bound scan.
KloostermanSweep kloosterman_prime_sweep(long long p);

// Incomplete sum over x in I (subset of [0,q)) with gcd(x,q)=1 of e(n*xbar/q).
std::complex<double> incomplete_kloosterman(const IntInterval& I, long long n, long long q);

struct HyperbolaCount {
  long long count = 0;
  double main_term = 0.0;
  double error = 0.0;
};

// Exact count of {(x,y) in I1 x I2 : gcd(x,q)=1, xy = h (mod q)} together
// with the equidistribution main term phi(q)|I1||I2|/q^2.
HyperbolaCount hyperbola_count(const HyperbolaQuery& query);

struct WeightedHyperbolaSum {
  double sum = 0.0;
  double main_term = 0.0;
};

// Sum of f(a,b) over a in I1, b in I2, ab = h (mod q), gcd(b,q)=1, plus the
// main term phi(q)/q^2 * integral of f over the rectangle.
WeightedHyperbolaSum weighted_hyperbola_sum(const HyperbolaQuery& query,
                                            const std::function<double(double, double)>& f);

// #{0 <= m <= 2d-1 : gcd(a+bm,d)=1} = 2*phi(d1)*d2 where d1 is the largest
// divisor of d coprime to b and d2 = d/d1. Requires gcd(a,b,d)=1.
long long coprime_progression_count(long long a, long long b, long long d);

struct SolutionPairSet {
  long long a = 0, b = 0, q = 1;
  std::vector<std::pair<long long, long long>> pairs;  // (A,B), sorted
};

// All (A,B) with 1 <= A,B <= 2q, gcd(A,B)=1 and q | A*b - B*a.
// Requires 1 <= a,b <= q and gcd(a,b,q)=1.
SolutionPairSet build_solution_pairs(long long a, long long b, long long q);

}  // namespace latcorr
