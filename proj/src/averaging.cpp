#include "latcorr/averaging.hpp"

#include <cmath>

#include "latcorr/correlations.hpp"

namespace latcorr {

void Disc::validate() const {
  if (!(r0 > 0)) throw validation_error("disc radius must be positive");
  if (x0 < 0 || x0 >= 1 || y0 < 0 || y0 >= 1)
    throw validation_error("disc center must lie in [0,1)^2");
}

std::vector<Observer> sample_disc(const Disc& disc, long long count, std::uint64_t seed) {
  disc.validate();
  if (count < 0) throw validation_error("sample count must be non-negative");
  std::mt19937_64 rng(seed);
  std::vector<Observer> out;
  out.reserve(static_cast<std::size_t>(count));
  while (out.size() < static_cast<std::size_t>(count)) {
    double x = disc.x0 + disc.r0 * (2.0 * uniform01(rng) - 1.0);
    double y = disc.y0 + disc.r0 * (2.0 * uniform01(rng) - 1.0);
    double dx = x - disc.x0, dy = y - disc.y0;
    if (dx * dx + dy * dy <= disc.r0 * disc.r0) out.push_back({x, y});
  }
  return out;
}

namespace {

AverageReport reduce_report(const std::vector<double>& values, long long Q, double lambda,
                            std::uint64_t seed) {
  AverageReport rep;
  rep.Q = Q;
  rep.lambda = lambda;
  rep.sample_count = static_cast<long long>(values.size());
  rep.seed = seed;
  rep.theory = kTwoPi * lambda / 3.0;
  rep.mean = sum_ordered(values) / static_cast<double>(values.size());
  if (values.size() >= 2) {
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      double d = values[i] - rep.mean;
      sq[i] = d * d;
    }
    double var = sum_ordered(sq) / static_cast<double>(values.size() - 1);
    rep.standard_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return rep;
}

}  // namespace

AverageReport average_pair_correlation(const Disc& disc, long long Q, double lambda,
                                       long long samples, std::uint64_t seed) {
  disc.validate();
  if (samples < 2) throw validation_error("need at least 2 samples");
  const auto observers = sample_disc(disc, samples, seed);
  const auto points = enumerate_box(Q);
  std::vector<double> values(observers.size());
  parallel_for(observers.size(), [&](std::size_t i) {
    CorrelationSpec spec{2, {lambda}, Q, observers[i]};
    values[i] = pair_correlation_fast(spec, points).value;
  });
  return reduce_report(values, Q, lambda, seed);
}

AverageReport grid_average_pair_correlation(const Disc& disc, long long Q, double lambda,
                                            double grid_step) {
  disc.validate();
  if (!(grid_step > 0)) throw validation_error("grid step must be positive");
  std::vector<Observer> grid;
  long long span = static_cast<long long>(std::floor(disc.r0 / grid_step));
  for (long long i = -span; i <= span; ++i)
    for (long long j = -span; j <= span; ++j) {
      double x = disc.x0 + static_cast<double>(i) * grid_step;
      double y = disc.y0 + static_cast<double>(j) * grid_step;
      double dx = x - disc.x0, dy = y - disc.y0;
      if (dx * dx + dy * dy <= disc.r0 * disc.r0) grid.push_back({x, y});
    }
  if (grid.empty()) throw validation_error("grid has no interior points");
  const auto points = enumerate_box(Q);
  std::vector<double> values(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    CorrelationSpec spec{2, {lambda}, Q, grid[i]};
    values[i] = pair_correlation_fast(spec, points).value;
  });
  AverageReport rep = reduce_report(values, Q, lambda, 0);
  rep.standard_error = 0.0;
  return rep;
}

}  // namespace latcorr
