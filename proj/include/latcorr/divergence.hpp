#pragma once

// The 6-level divergence construction: simultaneous approximation of the
// observer, cluster sets along (A,B) directions, their structural
// guarantees, angle bounds, and the certified lower bound on R^(6).

#include <cstdint>
#include <string>
#include <vector>

#include "latcorr/correlations.hpp"
#include "latcorr/lattice.hpp"
#include "latcorr/numtheory.hpp"

namespace latcorr {

struct ApproximationTriple {
  long long a = 0, b = 0, q = 1;
  double err_x = 0.0, err_y = 0.0;  // |qx-a|, |qy-b| before reduction
  long long T = 2;
};

// Smallest q in [1,T] with <qx> and <qy> both <= 1/sqrt(T); a and b are the
// nearest integers, and the triple is reduced by gcd(a,b,q). Candidates with
// a = b = 0 are degenerate for the construction and are skipped.
ApproximationTriple minkowski_approx(double x, double y, long long T);

// min{ floor(Q/4q), floor(sqrt(T)/ln Q) }; throws config_error when < 1.
long long choose_M(long long q, long long Q, long long T);

struct ClusterSet {
  long long A = 1, B = 1;   // the defining direction, as drawn from the pair set
  long long C = 0;          // b*A - a*B = q*C
  long long u = 0, v = 0;   // base point offsets
  long long s = 0;          // floor(Q/max(A,B)) in construction orientation
  long long M = 0;
  bool swapped = false;     // built through the x<->y involution (B > A case)
  std::vector<LatticePoint> points;
};

// Builds M points in arithmetic progression along (A,B). When B > A the
// construction runs on the coordinate-swapped data and the points are
// swapped back, so the B <= A derivation applies verbatim.
ClusterSet build_cluster(long long a, long long b, long long q, long long A, long long B,
                         long long Q, long long M);

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// Exact integer checks: distance from [0,1]^2 at least Q/3, containment in
// [0,Q]^2, pairwise disjointness, and the defining relations of each cluster.
ValidationReport validate_construction(const std::vector<ClusterSet>& clusters, long long Q);

struct AngleAudit {
  double max_angle = 0.0;      // max pairwise angular separation in the cluster
  double max_abs_sin = 0.0;
  double bound_415 = 0.0;      // 9*M*|C + B*x - A*y| / Q^2, bounds |sin|
  double bound_418 = 0.0;      // M*(|b-q*y| + |q*x-a|) / Q^2 angle shape
  double implied_constant_418 = 0.0;  // max_angle / bound_418
};

// Exact pairwise maximum over the cluster; throws validation_error if the
// non-asymptotic |sin| bound fails.
AngleAudit cluster_angle_audit(const ClusterSet& cluster, const Observer& obs, long long Q,
                               long long M, long long a, long long b, long long q);

struct DivergenceReport {
  long long Q = 0;
  long long T = 0;
  long long q = 0, a = 0, b = 0;
  long long M = 0;              // cluster size used for the certified bound
  long long M_formula = 0;      // the min{floor(Q/4q), floor(sqrt(T)/lnQ)} value
  long long cluster_total = 0;  // |N_{a,b,q}|
  long long cluster_count = 0;  // clusters whose angles pass the window check
  double r6_lower_bound = 0.0;  // certified: sum of M!/(M-6)! over passing clusters / N
  double r6_counted = 0.0;      // full engine count when affordable
  bool counted_available = false;
  bool counted_truncated = false;
  double paper_floor = 0.0;     // Q^{1/4-delta}, recorded, not asserted
  bool floor_attained = false;
  bool active = false;          // at least one cluster certified
  bool rational_path = false;   // observer had an exact small denominator
  double err_x = 0.0, err_y = 0.0;
};

struct R6Options {
  double delta = 0.05;
  long long T_override = 0;   // 0: floor(Q^(3/4))
  long long M_override = 0;   // 0: best certified M <= floor(Q/4q)
  std::uint64_t counted_point_budget = 8'000'000;  // max N for the exact count
  std::uint64_t work_cap = 1'000'000'000;
  long long rational_denominator_cap = 1'000'000;
};

// Full pipeline. For observers with an exact small common denominator the
// collinear-family bound is used; otherwise approximation + cluster sets.
// Every certified bound is backed by an explicit per-cluster angle check
// against min_i 2*pi*lambda_i/N.
DivergenceReport r6_divergence_demo(double x, double y, long long Q,
                                    const std::vector<double>& lambdas,
                                    const R6Options& opts = {});

}  // namespace latcorr
