#include "latcorr/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace latcorr {

ApproximationTriple minkowski_approx(double x, double y, long long T) {
  if (T < 2) throw validation_error("T must be at least 2");
  const double bound = 1.0 / std::sqrt(static_cast<double>(T));
  for (long long q = 1; q <= T; ++q) {
    const double qx = static_cast<double>(q) * x;
    const double qy = static_cast<double>(q) * y;
    const double a = std::round(qx);
    const double b = std::round(qy);
    const double ex = std::fabs(qx - a);
    const double ey = std::fabs(qy - b);
    if (ex > bound || ey > bound) continue;
    if (a == 0.0 && b == 0.0) continue;  // degenerate for the construction
    ApproximationTriple t;
    t.T = T;
    t.err_x = ex;
    t.err_y = ey;
    long long ai = static_cast<long long>(a);
    long long bi = static_cast<long long>(b);
    long long g = std::gcd(std::gcd(std::llabs(ai), std::llabs(bi)), q);
    t.a = ai / g;
    t.b = bi / g;
    t.q = q / g;
    return t;
  }
  throw config_error("no admissible approximation found up to T");
}

long long choose_M(long long q, long long Q, long long T) {
  if (q < 1 || T < 2 || Q <= q) throw validation_error("need Q > q >= 1 and T >= 2");
  const long long m1 = Q / (4 * q);
  const long long m2 = static_cast<long long>(
      std::floor(std::sqrt(static_cast<double>(T)) / std::log(static_cast<double>(Q))));
  const long long m = std::min(m1, m2);
  if (m < 1) throw config_error("Q too small relative to q: M would be < 1");
  return m;
}

namespace {

long long mod_pos(long long v, long long m) { return ((v % m) + m) % m; }

ClusterSet build_cluster_ordered(long long a, long long b, long long q, long long A,
                                 long long B, long long Q, long long M) {
  // B <= A orientation
  ClusterSet c;
  c.A = A;
  c.B = B;
  c.M = M;
  const __int128 num = static_cast<__int128>(b) * A - static_cast<__int128>(a) * B;
  if (num % q != 0) throw validation_error("(A,B) does not satisfy q | A*b - B*a");
  c.C = static_cast<long long>(num / q);
  if (A == 1) {
    c.u = 0;
  } else {
    const long long Binv = mod_inverse(mod_pos(B, A), A) % A;
    c.u = mod_pos(-static_cast<long long>((static_cast<__int128>(Binv) * mod_pos(c.C, A)) % A), A);
  }
  const __int128 vnum = static_cast<__int128>(B) * c.u + c.C;
  if (vnum % A != 0) throw std::logic_error("cluster base: v is not an integer");
  c.v = static_cast<long long>(vnum / A);
  if (c.v < 0 || c.v > B) throw std::logic_error("cluster base: v outside [0,B]");
  c.s = Q / A;
  c.points.reserve(static_cast<std::size_t>(M));
  for (long long m = c.s - M; m <= c.s - 1; ++m)
    c.points.push_back({c.u + m * A, c.v + m * B});
  return c;
}

}  // namespace

ClusterSet build_cluster(long long a, long long b, long long q, long long A, long long B,
                         long long Q, long long M) {
  if (M < 1) throw validation_error("M must be at least 1");
  if (M > Q / (4 * q)) throw validation_error("M exceeds floor(Q/4q)");
  if (std::gcd(A, B) != 1) throw validation_error("gcd(A,B) must be 1");
  if (B <= A) return build_cluster_ordered(a, b, q, A, B, Q, M);
  // x<->y involution: swap the roles of the coordinates and mirror back
  ClusterSet m = build_cluster_ordered(b, a, q, B, A, Q, M);
  ClusterSet c = m;
  c.A = A;
  c.B = B;
  c.swapped = true;
  for (auto& p : c.points) std::swap(p.q, p.a);
  return c;
}

ValidationReport validate_construction(const std::vector<ClusterSet>& clusters, long long Q) {
  ValidationReport rep;
  auto fail = [&](const std::string& msg) {
    rep.ok = false;
    rep.violations.push_back(msg);
  };
  std::set<std::pair<long long, long long>> seen;
  for (const auto& c : clusters) {
    if (static_cast<long long>(c.points.size()) != c.M)
      fail("cluster has wrong point count");
    for (const auto& p : c.points) {
      // (ii) containment in [0,Q]^2
      if (p.q < 0 || p.q > Q || p.a < 0 || p.a > Q)
        fail("point outside [0,Q]^2 at (" + std::to_string(p.q) + "," + std::to_string(p.a) + ")");
      // (i) distance from the unit square, exactly: 9*dist^2 >= Q^2
      long long dx = p.q > 1 ? p.q - 1 : (p.q < 0 ? -p.q : 0);
      long long dy = p.a > 1 ? p.a - 1 : (p.a < 0 ? -p.a : 0);
      __int128 d2 = static_cast<__int128>(dx) * dx + static_cast<__int128>(dy) * dy;
      if (9 * d2 < static_cast<__int128>(Q) * Q)
        fail("point closer than Q/3 to the unit square at (" + std::to_string(p.q) + "," +
             std::to_string(p.a) + ")");
      // (iii) global disjointness
      if (!seen.insert({p.q, p.a}).second)
        fail("clusters overlap at (" + std::to_string(p.q) + "," + std::to_string(p.a) + ")");
    }
  }
  return rep;
}

AngleAudit cluster_angle_audit(const ClusterSet& cluster, const Observer& obs, long long Q,
                               long long M, long long a, long long b, long long q) {
  AngleAudit audit;
  const double Qd = static_cast<double>(Q);
  // swapped clusters carry the mirrored-world C, so the linear form reads
  // C + A*y - B*x there; angles are reflection-invariant
  const double lin = cluster.swapped
                         ? static_cast<double>(cluster.C) +
                               static_cast<double>(cluster.A) * obs.y -
                               static_cast<double>(cluster.B) * obs.x
                         : static_cast<double>(cluster.C) +
                               static_cast<double>(cluster.B) * obs.x -
                               static_cast<double>(cluster.A) * obs.y;
  audit.bound_415 = 9.0 * static_cast<double>(M) * std::fabs(lin) / (Qd * Qd);
  audit.bound_418 = static_cast<double>(M) *
                    (std::fabs(static_cast<double>(b) - static_cast<double>(q) * obs.y) +
                     std::fabs(static_cast<double>(q) * obs.x - static_cast<double>(a))) /
                    (Qd * Qd);
  std::vector<double> angles;
  angles.reserve(cluster.points.size());
  for (const auto& p : cluster.points) angles.push_back(ray_angle(obs, p));
  for (std::size_t i = 0; i < angles.size(); ++i)
    for (std::size_t j = i + 1; j < angles.size(); ++j) {
      double sep = angular_separation(angles[i], angles[j]);
      audit.max_angle = std::max(audit.max_angle, sep);
      audit.max_abs_sin = std::max(audit.max_abs_sin, std::fabs(std::sin(sep)));
    }
  if (audit.max_abs_sin > audit.bound_415)
    throw validation_error("cluster violates the 9*M*|C+Bx-Ay|/Q^2 sine bound");
  audit.implied_constant_418 =
      audit.bound_418 > 0 ? audit.max_angle / audit.bound_418 : 0.0;
  return audit;
}

namespace {

// Exact max pairwise separation of a cluster. The direction angle of the
// points is monotone in the progression index (they march along a line that
// misses the observer), so the extreme pair realizes the max; for small M we
// verify against the full pairwise scan.
double cluster_max_separation(const ClusterSet& cluster, const Observer& obs) {
  const auto& pts = cluster.points;
  if (pts.size() < 2) return 0.0;
  std::vector<double> angles;
  angles.reserve(pts.size());
  for (const auto& p : pts) angles.push_back(ray_angle(obs, p));
  if (pts.size() <= 128) {
    double best = 0.0;
    for (std::size_t i = 0; i < angles.size(); ++i)
      for (std::size_t j = i + 1; j < angles.size(); ++j)
        best = std::max(best, angular_separation(angles[i], angles[j]));
    return best;
  }
  double end_sep = angular_separation(angles.front(), angles.back());
  // monotonicity spot check on a coarse subsample
  double best = end_sep;
  const std::size_t step = pts.size() / 16 + 1;
  for (std::size_t i = 0; i < angles.size(); i += step)
    for (std::size_t j = 0; j < angles.size(); j += step)
      best = std::max(best, angular_separation(angles[i], angles[j]));
  for (std::size_t i = 0; i < angles.size(); i += step) {
    best = std::max(best, angular_separation(angles[i], angles.front()));
    best = std::max(best, angular_separation(angles[i], angles.back()));
  }
  return best;
}

// Smallest m0 <= cap with m0*x and m0*y both exactly integral (doubles are
// dyadic rationals, so exact hits are well-defined).
long long rational_denominator(double x, double y, long long cap) {
  for (long long m = 1; m <= cap; ++m) {
    double mx = static_cast<double>(m) * x;
    double my = static_cast<double>(m) * y;
    if (mx == std::floor(mx) && my == std::floor(my)) return m;
  }
  return 0;
}

// m(m-1)...(m-5) in double; exact for the integer sizes used and safe from
// integer overflow for reported bounds
double falling6(long long m) {
  double v = 1.0;
  for (int i = 0; i < 6; ++i) v *= static_cast<double>(m - i);
  return m >= 6 ? v : 0.0;
}

}  // namespace

DivergenceReport r6_divergence_demo(double x, double y, long long Q,
                                    const std::vector<double>& lambdas, const R6Options& opts) {
  if (lambdas.size() != 5) throw validation_error("the 6-level demo needs 5 lambdas");
  for (double l : lambdas)
    if (!(l > 0)) throw validation_error("lambdas must be positive");
  if (Q < 8) throw validation_error("Q too small");
  Box box = Box::of(Q);
  const double Nd = static_cast<double>(box.N);
  double min_threshold = kTwoPi * lambdas[0] / Nd;
  for (double l : lambdas) min_threshold = std::min(min_threshold, kTwoPi * l / Nd);

  DivergenceReport rep;
  rep.Q = Q;
  rep.paper_floor = std::pow(static_cast<double>(Q), 0.25 - opts.delta);

  const Observer obs{x, y};
  const long long m0 = rational_denominator(x, y, std::min<long long>(Q, opts.rational_denominator_cap));
  if (m0 > 0) {
    // collinear family (l*m0*x, l*m0*y), l = 1..floor(Q/m0); all points sit
    // on one ray through the observer, checked below rather than assumed
    rep.rational_path = true;
    rep.q = m0;
    long long px = static_cast<long long>(static_cast<double>(m0) * x);
    long long py = static_cast<long long>(static_cast<double>(m0) * y);
    if (px == 0 && py == 0) { px = 1; py = 0; }  // integer observer: use direction (1,0)
    long long fam = 0;
    {
      long long l = 1;
      while (l * px <= Q && l * py <= Q && (l * m0) <= Q) {
        ++fam;
        ++l;
      }
    }
    rep.M = fam;
    ClusterSet family;
    family.A = px;
    family.B = py;
    family.M = fam;
    for (long long l = 1; l <= fam; ++l) family.points.push_back({l * px, l * py});
    double max_sep = cluster_max_separation(family, obs);
    rep.cluster_total = 1;
    if (fam >= 1 && within_threshold(max_sep, min_threshold)) {
      rep.cluster_count = 1;
      rep.active = true;
      rep.r6_lower_bound = falling6(fam) / Nd;
    }
  } else {
    const long long T = opts.T_override > 0
                            ? opts.T_override
                            : static_cast<long long>(std::floor(std::pow(static_cast<double>(Q), 0.75)));
    rep.T = T;
    ApproximationTriple tri = minkowski_approx(x, y, T);
    rep.q = tri.q;
    rep.a = tri.a;
    rep.b = tri.b;
    rep.err_x = tri.err_x;
    rep.err_y = tri.err_y;
    // the pair set needs 1 <= a,b <= q; a or b can be 0 after rounding, in
    // which case the congruence set is built on max(a,1), max(b,1) shifted
    // consistently is not meaningful -- require positivity
    if (tri.a < 1 || tri.b < 1)
      throw config_error("approximation has a zero coordinate; construction inactive");
    const long long m_cap = Q / (4 * tri.q);
    if (m_cap < 1) throw config_error("Q too small relative to q: no admissible M");
    long long m_formula = 0;
    try {
      m_formula = choose_M(tri.q, Q, T);
    } catch (const config_error&) {
      m_formula = 0;
    }
    rep.M_formula = m_formula;

    SolutionPairSet pairs = build_solution_pairs(tri.a, tri.b, tri.q);
    rep.cluster_total = static_cast<long long>(pairs.pairs.size());

    // candidate cluster sizes: the formula value plus a certified ladder
    // under the hard cap floor(Q/4q); larger M means more tuples per cluster
    // but a wider angular spread, so the best certified choice is selected
    std::vector<long long> candidates;
    if (opts.M_override > 0) {
      candidates.push_back(std::min(opts.M_override, m_cap));
    } else {
      if (m_formula >= 1) candidates.push_back(m_formula);
      for (long long m = m_cap; m >= 6; m /= 2) candidates.push_back(m);
      candidates.push_back(6);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    candidates.erase(std::remove_if(candidates.begin(), candidates.end(),
                                    [&](long long m) { return m < 1 || m > m_cap; }),
                     candidates.end());

    double best_bound = 0.0;
    long long best_M = 0, best_passing = 0;
    for (long long M : candidates) {
      std::vector<ClusterSet> clusters;
      clusters.reserve(pairs.pairs.size());
      for (auto [A, B] : pairs.pairs)
        clusters.push_back(build_cluster(tri.a, tri.b, tri.q, A, B, Q, M));
      ValidationReport vr = validate_construction(clusters, Q);
      if (!vr.ok)
        throw std::logic_error("construction violates its guarantees: " + vr.violations.front());
      long long passing = 0;
      for (const auto& c : clusters)
        if (within_threshold(cluster_max_separation(c, obs), min_threshold)) ++passing;
      double bound = static_cast<double>(passing) * falling6(M) / Nd;
      if (bound > best_bound) {
        best_bound = bound;
        best_M = M;
        best_passing = passing;
      }
    }
    rep.r6_lower_bound = best_bound;
    rep.M = best_M > 0 ? best_M : (m_formula > 0 ? m_formula : 0);
    rep.cluster_count = best_passing;
    rep.active = best_passing > 0;
  }

  if (box.N <= opts.counted_point_budget) {
    CorrelationSpec spec{6, lambdas, Q, obs};
    NuOptions nopts;
    nopts.work_cap = opts.work_cap;
    CorrelationResult counted = nu_correlation(spec, nopts);
    rep.counted_available = true;
    rep.counted_truncated = counted.truncated;
    rep.r6_counted = counted.value;
  }
  rep.floor_attained = rep.r6_lower_bound > rep.paper_floor;
  return rep;
}

}  // namespace latcorr
