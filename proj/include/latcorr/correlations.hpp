#pragma once

// Counting engines for the nu-level correlations of lattice directions:
// a brute-force oracle, a sorted-window pair counter, and a cluster DFS for
// general nu with a falling-factorial fast path on exactly-collinear rays.

#include <cstdint>
#include <vector>

#include "latcorr/lattice.hpp"

namespace latcorr {

struct CorrelationSpec {
  int nu = 2;
  std::vector<double> lambdas;  // nu-1 window sizes
  long long Q = 1;
  Observer observer;

  void validate() const;
  double threshold(std::size_t i, std::uint64_t N) const;  // 2*pi*lambda_i/N
};

enum class CountingEngine { oracle, fast };

struct CorrelationResult {
  std::uint64_t tuple_count = 0;
  std::uint64_t N = 1;          // (2Q+1)^2, the normalization
  double value = 0.0;           // tuple_count / N
  double scale = 0.0;           // 2*pi/N
  CountingEngine engine = CountingEngine::fast;
  bool truncated = false;       // true => tuple_count is a certified lower bound
};

struct NuOptions {
  std::uint64_t work_cap = 1'000'000'000;  // DFS extension steps
  // optional post-hoc verification hook: record every sample_stride-th
  // completed tuple (capped), for re-checking against the definition
  std::uint64_t sample_stride = 0;
  std::size_t sample_cap = 1000;
  std::vector<std::vector<LatticePoint>>* samples = nullptr;
};

// O(N^2) definitional count of ordered pairs; pair_budget guards the work
// (N^2 comparisons) and throws size_error beyond it.
CorrelationResult pair_correlation_oracle(const CorrelationSpec& spec,
                                          std::uint64_t pair_budget = 1'000'000);

// Sorted-window counter, O(N log N); exactly the oracle's tuple count.
CorrelationResult pair_correlation_fast(const CorrelationSpec& spec);
CorrelationResult pair_correlation_fast(const CorrelationSpec& spec,
                                        const std::vector<LatticePoint>& points);

// Ordered nu-tuples of pairwise-distinct points with consecutive separations
// within the windows. Work-capped: on cap the result is flagged truncated
// and is a certified lower bound.
CorrelationResult nu_correlation(const CorrelationSpec& spec, const NuOptions& opts = {});

// Definitional DFS over raw points, independent of the sorted-window engine;
// refuses (size_error) beyond work_budget.
CorrelationResult nu_correlation_oracle(const CorrelationSpec& spec,
                                        std::uint64_t work_budget = 400'000'000);

// 2^{nu-1} * lambda_1 * ... * lambda_{nu-1}.
double poisson_baseline(int nu, const std::vector<double>& lambdas);

}  // namespace latcorr
