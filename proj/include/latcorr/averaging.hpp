#pragma once

// Disc averaging of the pair correlation: seeded Monte Carlo sampling and a
// deterministic grid alternative, reported against the limit 2*pi*lambda/3.

#include <cstdint>
#include <vector>

#include "latcorr/lattice.hpp"

namespace latcorr {

struct Disc {
  double x0 = 0.5;
  double y0 = 0.5;
  double r0 = 0.25;

  void validate() const;  // center in [0,1)^2, r0 > 0; spill-over is allowed
};

struct AverageReport {
  long long Q = 0;
  double lambda = 0.0;
  long long sample_count = 0;
  double mean = 0.0;
  double standard_error = 0.0;
  double theory = 0.0;  // 2*pi*lambda/3
  std::uint64_t seed = 0;
};

// Uniform i.i.d. observers in the disc by rejection from the bounding
// square; bit-reproducible for a fixed seed.
std::vector<Observer> sample_disc(const Disc& disc, long long count, std::uint64_t seed);

// Monte Carlo mean of pair_correlation_fast over sampled observers.
// Observer evaluations run in parallel; the reduction is in sample order, so
// the report does not depend on the thread count.
AverageReport average_pair_correlation(const Disc& disc, long long Q, double lambda,
                                       long long samples, std::uint64_t seed);

// Deterministic quadrature alternative: equal-weight mean over the grid
// points (x0 + i*step, y0 + j*step) inside the disc; standard_error = 0.
AverageReport grid_average_pair_correlation(const Disc& disc, long long Q, double lambda,
                                            double grid_step);

}  // namespace latcorr
