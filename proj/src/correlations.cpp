#include "latcorr/correlations.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace latcorr {

void CorrelationSpec::validate() const {
  if (nu < 2) throw validation_error("nu must be at least 2");
  if (nu > 8) throw validation_error("nu > 8 unsupported");
  if (lambdas.size() != static_cast<std::size_t>(nu - 1))
    throw validation_error("need exactly nu-1 lambdas");
  for (double l : lambdas)
    if (!(l >= 0.0)) throw validation_error("lambdas must be non-negative");
  if (Q < 0) throw validation_error("Q must be non-negative");
}

double CorrelationSpec::threshold(std::size_t i, std::uint64_t N) const {
  return kTwoPi * lambdas[i] / static_cast<double>(N);
}

double poisson_baseline(int nu, const std::vector<double>& lambdas) {
  if (nu < 2 || lambdas.size() != static_cast<std::size_t>(nu - 1))
    throw validation_error("need exactly nu-1 lambdas");
  double v = 1.0;
  for (double l : lambdas) v *= 2.0 * l;
  return v;
}

namespace {

CorrelationResult make_result(std::uint64_t count, std::uint64_t N, CountingEngine engine,
                              bool truncated) {
  CorrelationResult r;
  r.tuple_count = count;
  r.N = N;
  r.value = static_cast<double>(count) / static_cast<double>(N);
  r.scale = kTwoPi / static_cast<double>(N);
  r.engine = engine;
  r.truncated = truncated;
  return r;
}

// Sorted angles plus exact-duplicate grouping. Points on one ray from the
// observer yield bitwise-equal atan2 values, so the duplicate groups are the
// exactly-collinear ray clusters.
struct SortedAngles {
  std::vector<AngleEntry> entries;
  std::vector<double> angles;

  struct Cluster {
    double angle;
    std::size_t begin;  // [begin, begin+size) into entries
    std::size_t size;
  };
  std::vector<Cluster> clusters;

  explicit SortedAngles(const AngleMultiset& ms) : entries(ms.entries()) {
    angles.reserve(entries.size());
    for (const auto& e : entries) angles.push_back(e.angle);
    std::size_t i = 0;
    while (i < entries.size()) {
      std::size_t j = i;
      while (j < entries.size() && angles[j] == angles[i]) ++j;
      clusters.push_back({angles[i], i, j - i});
      i = j;
    }
  }
};

}  // namespace

CorrelationResult pair_correlation_oracle(const CorrelationSpec& spec,
                                          std::uint64_t pair_budget) {
  CorrelationSpec s = spec;
  s.nu = 2;
  if (s.lambdas.size() != 1) throw validation_error("pair oracle expects one lambda");
  s.validate();
  Box box = Box::of(s.Q);
  if (box.N > pair_budget / box.N + 1 || box.N * box.N > pair_budget)
    throw size_error("pair budget exceeded; use pair_correlation_fast");
  AngleMultiset ms(s.observer, enumerate_box(s.Q));
  const auto& es = ms.entries();
  const double thr = s.threshold(0, box.N);
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < es.size(); ++i)
    for (std::size_t j = 0; j < es.size(); ++j) {
      if (i == j) continue;
      if (within_threshold(angular_separation(es[i].angle, es[j].angle), thr)) ++count;
    }
  return make_result(count, box.N, CountingEngine::oracle, false);
}

CorrelationResult pair_correlation_fast(const CorrelationSpec& spec) {
  return pair_correlation_fast(spec, enumerate_box(spec.Q));
}

CorrelationResult pair_correlation_fast(const CorrelationSpec& spec,
                                        const std::vector<LatticePoint>& points) {
  CorrelationSpec s = spec;
  s.nu = 2;
  if (s.lambdas.size() != 1) throw validation_error("pair counter expects one lambda");
  s.validate();
  Box box = Box::of(s.Q);
  AngleMultiset ms(s.observer, points);
  SortedAngles sorted(ms);
  const double thr = s.threshold(0, box.N);
  const std::size_t nc = sorted.clusters.size();
  const std::uint64_t n_entries = sorted.angles.size();
  std::uint64_t count = 0;
  // cluster-level windows: the qualifying set around a cluster is a
  // contiguous circular arc, walked with the definitional predicate so the
  // count matches the oracle exactly
  for (std::size_t ci = 0; ci < nc; ++ci) {
    const auto& c = sorted.clusters[ci];
    std::uint64_t partners;
    if (thr + kAngleSlack >= kPi) {
      partners = n_entries;
    } else {
      auto ok = [&](std::size_t j) {
        return within_threshold(
            angular_separation(c.angle, sorted.clusters[j].angle), thr);
      };
      partners = c.size;
      std::size_t j = (ci + nc - 1) % nc;
      while (j != ci && ok(j)) {
        partners += sorted.clusters[j].size;
        j = (j + nc - 1) % nc;
      }
      if (j == ci) {
        partners = n_entries;  // wrapped the whole circle
      } else {
        std::size_t k = (ci + 1) % nc;
        while (k != j && ok(k)) {
          partners += sorted.clusters[k].size;
          k = (k + 1) % nc;
        }
      }
    }
    // each of the c.size members pairs with (partners - 1) others
    count += static_cast<std::uint64_t>(c.size) * (partners - 1);
  }
  return make_result(count, box.N, CountingEngine::fast, false);
}

namespace {

constexpr unsigned __int128 kRunningCap = static_cast<unsigned __int128>(1) << 96;

struct ClusterDfs {
  const CorrelationSpec& spec;
  const SortedAngles& sorted;
  const NuOptions& opts;
  std::vector<double> thresholds;
  unsigned __int128 total = 0;
  std::uint64_t work = 0;
  bool truncated = false;
  std::uint64_t leaves = 0;
  std::array<std::size_t, 8> path{};

  ClusterDfs(const CorrelationSpec& sp, const SortedAngles& so, const NuOptions& op,
             std::uint64_t n)
      : spec(sp), sorted(so), opts(op) {
    for (int i = 0; i + 1 < sp.nu; ++i) thresholds.push_back(sp.threshold(i, n));
  }

  std::size_t uses_in_path(std::size_t cluster, int depth) const {
    std::size_t u = 0;
    for (int d = 0; d < depth; ++d)
      if (path[static_cast<std::size_t>(d)] == cluster) ++u;
    return u;
  }

  void record_sample() {
    if (!opts.samples || opts.samples->size() >= opts.sample_cap) return;
    if (opts.sample_stride == 0 || leaves % opts.sample_stride != 0) return;
    std::vector<LatticePoint> tuple;
    for (int d = 0; d < spec.nu; ++d) {
      std::size_t c = path[static_cast<std::size_t>(d)];
      std::size_t offset = 0;
      for (int e = 0; e < d; ++e)
        if (path[static_cast<std::size_t>(e)] == c) ++offset;
      const auto& cl = sorted.clusters[c];
      tuple.push_back(sorted.entries[cl.begin + offset].point);
    }
    opts.samples->push_back(std::move(tuple));
  }

  void visit(std::size_t cand, int depth, unsigned __int128 running) {
    std::size_t m = sorted.clusters[cand].size;
    std::size_t used = uses_in_path(cand, depth);
    if (m <= used) return;
    unsigned __int128 next = running * static_cast<unsigned __int128>(m - used);
    if (next > kRunningCap) next = kRunningCap;  // saturates; total will flag truncated
    path[static_cast<std::size_t>(depth)] = cand;
    extend(depth + 1, next);
  }

  void extend(int depth, unsigned __int128 running) {
    if (truncated) return;
    if (depth == spec.nu) {
      ++leaves;
      total += running;
      record_sample();
      return;
    }
    const double thr = thresholds[static_cast<std::size_t>(depth - 1)];
    const std::size_t prev = path[static_cast<std::size_t>(depth - 1)];
    const std::size_t nc = sorted.clusters.size();
    auto ok = [&](std::size_t c) {
      return within_threshold(
          angular_separation(sorted.clusters[prev].angle, sorted.clusters[c].angle), thr);
    };
    if (++work > opts.work_cap) {
      truncated = true;
      return;
    }
    visit(prev, depth, running);
    if (truncated || nc == 1) return;
    // left stretch of the window arc
    std::size_t j = (prev + nc - 1) % nc;
    while (j != prev && ok(j)) {
      if (++work > opts.work_cap) {
        truncated = true;
        return;
      }
      visit(j, depth, running);
      if (truncated) return;
      j = (j + nc - 1) % nc;
    }
    if (j == prev) return;  // whole circle already visited
    // right stretch, stopping at the left walk's failure index
    std::size_t k = (prev + 1) % nc;
    while (k != j && ok(k)) {
      if (++work > opts.work_cap) {
        truncated = true;
        return;
      }
      visit(k, depth, running);
      if (truncated) return;
      k = (k + 1) % nc;
    }
  }
};

}  // namespace

CorrelationResult nu_correlation(const CorrelationSpec& spec, const NuOptions& opts) {
  spec.validate();
  Box box = Box::of(spec.Q);
  AngleMultiset ms(spec.observer, enumerate_box(spec.Q));
  SortedAngles sorted(ms);
  ClusterDfs dfs(spec, sorted, opts, box.N);
  for (std::size_t c = 0; c < sorted.clusters.size(); ++c) {
    dfs.path[0] = c;
    dfs.extend(1, sorted.clusters[c].size);
    if (dfs.truncated) break;
  }
  bool truncated = dfs.truncated;
  std::uint64_t count;
  if (dfs.total > static_cast<unsigned __int128>(UINT64_MAX)) {
    count = UINT64_MAX;
    truncated = true;
  } else {
    count = static_cast<std::uint64_t>(dfs.total);
  }
  return make_result(count, box.N, CountingEngine::fast, truncated);
}

namespace {

struct OracleDfs {
  const CorrelationSpec& spec;
  const std::vector<double>& angles;
  std::vector<double> thresholds;
  std::uint64_t work = 0, budget;
  std::uint64_t count = 0;
  std::array<std::size_t, 8> path{};

  OracleDfs(const CorrelationSpec& sp, const std::vector<double>& an, std::uint64_t n,
            std::uint64_t bud)
      : spec(sp), angles(an), budget(bud) {
    for (int i = 0; i + 1 < sp.nu; ++i) thresholds.push_back(sp.threshold(i, n));
  }

  void extend(int depth) {
    if (depth == spec.nu) {
      ++count;
      return;
    }
    const double prev = angles[path[static_cast<std::size_t>(depth - 1)]];
    const double thr = thresholds[static_cast<std::size_t>(depth - 1)];
    for (std::size_t j = 0; j < angles.size(); ++j) {
      if (++work > budget) throw size_error("nu oracle budget exceeded");
      bool dup = false;
      for (int d = 0; d < depth; ++d)
        if (path[static_cast<std::size_t>(d)] == j) {
          dup = true;
          break;
        }
      if (dup) continue;
      if (!within_threshold(angular_separation(prev, angles[j]), thr)) continue;
      path[static_cast<std::size_t>(depth)] = j;
      extend(depth + 1);
    }
  }
};

}  // namespace

CorrelationResult nu_correlation_oracle(const CorrelationSpec& spec, std::uint64_t work_budget) {
  spec.validate();
  Box box = Box::of(spec.Q);
  AngleMultiset ms(spec.observer, enumerate_box(spec.Q));
  std::vector<double> angles;
  angles.reserve(ms.entries().size());
  for (const auto& e : ms.entries()) angles.push_back(e.angle);
  OracleDfs dfs(spec, angles, box.N, work_budget);
  for (std::size_t i = 0; i < angles.size(); ++i) {
    dfs.path[0] = i;
    dfs.extend(1);
  }
  return make_result(dfs.count, box.N, CountingEngine::oracle, false);
}

}  // namespace latcorr
