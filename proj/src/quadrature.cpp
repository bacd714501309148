#include "latcorr/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace latcorr {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1,1] (QUADPACK dqk15 values).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkResult {
  double kronrod;
  double err;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    double x = h * kXgk[j];
    double fsum = f(c - x) + f(c + x);
    kron += kWgk[j] * fsum;
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  kron *= h;
  gauss *= h;
  return {kron, std::fabs(kron - gauss)};
}

struct Segment {
  double a, b, value, err;
};

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          const QuadratureConfig& cfg) {
  if (a == b) return 0.0;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::vector<Segment> segs;
  GkResult first = gk15(f, a, b);
  segs.push_back({a, b, first.kronrod, first.err});
  int splits = 0;
  while (true) {
    double total_err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      total_err += segs[i].err;
      if (segs[i].err > segs[worst].err) worst = i;
    }
    if (total_err <= cfg.abs_tol) break;
    if (splits >= cfg.max_subdivisions) {
      double v = 0.0;
      for (auto& s : segs) v += s.value;
      throw tolerance_error("adaptive quadrature did not converge", v * sign);
    }
    Segment s = segs[worst];
    double mid = 0.5 * (s.a + s.b);
    if (mid <= s.a || mid >= s.b) break;  // interval exhausted by rounding
    GkResult left = gk15(f, s.a, mid);
    GkResult right = gk15(f, mid, s.b);
    segs[worst] = {s.a, mid, left.kronrod, left.err};
    segs.push_back({mid, s.b, right.kronrod, right.err});
    ++splits;
  }
  // accumulate left-to-right for determinism
  std::sort(segs.begin(), segs.end(), [](const Segment& l, const Segment& r) { return l.a < r.a; });
  double v = 0.0;
  for (auto& s : segs) v += s.value;
  return v * sign;
}

double adaptive_integrate_sqrtend(const std::function<double(double)>& f, double a, double b,
                                  bool singular_at_a, bool singular_at_b,
                                  const QuadratureConfig& cfg) {
  if (a >= b) return 0.0;
  if (singular_at_a && singular_at_b) {
    double mid = 0.5 * (a + b);
    return adaptive_integrate_sqrtend(f, a, mid, true, false, cfg) +
           adaptive_integrate_sqrtend(f, mid, b, false, true, cfg);
  }
  if (singular_at_a) {
    double w = std::sqrt(b - a);
    return adaptive_integrate([&](double s) { return 2.0 * s * f(a + s * s); }, 0.0, w, cfg);
  }
  if (singular_at_b) {
    double w = std::sqrt(b - a);
    return adaptive_integrate([&](double s) { return 2.0 * s * f(b - s * s); }, 0.0, w, cfg);
  }
  return adaptive_integrate(f, a, b, cfg);
}

}  // namespace latcorr
