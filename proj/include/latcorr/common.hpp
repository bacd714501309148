#pragma once

// Shared scalar helpers, error types and the deterministic parallel map used
// by the counting and summation engines.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace latcorr {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.1415926535897932384626433832795;

// Absolute slack for every "angle <= threshold" comparison. The oracle and
// the fast engines share this constant so their tuple counts agree exactly.
inline constexpr double kAngleSlack = 9.094947017729282379150390625e-13;  // 2^-40

struct size_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct degenerate_point_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct no_inverse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct tolerance_error : std::runtime_error {
  double achieved;
  tolerance_error(const std::string& msg, double got)
      : std::runtime_error(msg), achieved(got) {}
};

inline bool within_threshold(double separation, double threshold) {
  return separation <= threshold + kAngleSlack;
}

struct XgcdResult {
  long long g, s, t;  // g = gcd(a,b) = s*a + t*b
};

inline XgcdResult xgcd(long long a, long long b) {
  long long old_r = a, r = b;
  long long old_s = 1, s = 0;
  long long old_t = 0, t = 1;
  while (r != 0) {
    long long qt = old_r / r;
    long long tmp = old_r - qt * r; old_r = r; r = tmp;
    tmp = old_s - qt * s; old_s = s; s = tmp;
    tmp = old_t - qt * t; old_t = t; t = tmp;
  }
  if (old_r < 0) { old_r = -old_r; old_s = -old_s; old_t = -old_t; }
  return {old_r, old_s, old_t};
}

// m*(m-1)*...*(m-k+1) as a saturating 128-bit product; clamped to u64.
inline std::uint64_t falling_factorial(std::uint64_t m, int k, bool* overflowed = nullptr) {
  unsigned __int128 acc = 1;
  for (int i = 0; i < k; ++i) {
    if (static_cast<std::uint64_t>(i) >= m) return 0;
    acc *= (m - static_cast<std::uint64_t>(i));
    if (acc > static_cast<unsigned __int128>(UINT64_MAX)) {
      if (overflowed) *overflowed = true;
      return UINT64_MAX;
    }
  }
  return static_cast<std::uint64_t>(acc);
}

int max_threads();
void set_max_threads(int n);

// Runs fn(i) for i in [0,n). Work is split into contiguous index ranges, one
// per worker; fn must only write to per-index slots so the result does not
// depend on the schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Kahan sum in index order; used for schedule-independent reductions.
double sum_ordered(const std::vector<double>& values);

// 53-bit uniform in [0,1), built directly from the engine output so the
// sequence does not depend on the standard library's distribution internals.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace latcorr
