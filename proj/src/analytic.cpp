#include "latcorr/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "latcorr/numtheory.hpp"

namespace latcorr {

double determinant_L(const DeterminantForm& form, double x, double y) {
  const double q = static_cast<double>(form.P.q);
  const double a = static_cast<double>(form.P.a);
  const double qp = static_cast<double>(form.Pprime.q);
  const double ap = static_cast<double>(form.Pprime.a);
  return (ap - y) * (q - x) - (a - y) * (qp - x);
}

double strip_disc_area(double r0, double t1, double t2) {
  if (!(r0 > 0)) throw validation_error("radius must be positive");
  if (t1 > t2) throw validation_error("need t1 <= t2");
  auto F = [r0](double t) {
    t = std::clamp(t, -r0, r0);
    return t * std::sqrt(std::max(0.0, r0 * r0 - t * t)) + r0 * r0 * std::asin(t / r0);
  };
  double lo = std::clamp(t1, -r0, r0);
  double hi = std::clamp(t2, -r0, r0);
  if (lo >= hi) return 0.0;
  return F(hi) - F(lo);
}

double beta_threshold(long long Q, double lambda) {
  Box box = Box::of(Q);
  return std::sin(kTwoPi * lambda / static_cast<double>(box.N));
}

namespace {

// [min,max] of the distance from point p to the axis-aligned box.
void point_box_distance_bounds(double px, double py, double x0, double x1, double y0,
                               double y1, double& dmin, double& dmax) {
  double dx_min = (px < x0) ? (x0 - px) : (px > x1 ? px - x1 : 0.0);
  double dy_min = (py < y0) ? (y0 - py) : (py > y1 ? py - y1 : 0.0);
  double dx_max = std::max(std::fabs(px - x0), std::fabs(px - x1));
  double dy_max = std::max(std::fabs(py - y0), std::fabs(py - y1));
  dmin = std::hypot(dx_min, dy_min);
  dmax = std::hypot(dx_max, dy_max);
}

}  // namespace

double weight_area(const LatticePoint& P, const LatticePoint& Pprime, const Disc& disc,
                   long long Q, double lambda, double abs_tol) {
  if (P == Pprime) throw validation_error("points must be distinct");
  disc.validate();
  const double beta = beta_threshold(Q, lambda);
  const DeterminantForm form{P, Pprime};
  const double px = static_cast<double>(P.q), py = static_cast<double>(P.a);
  const double ppx = static_cast<double>(Pprime.q), ppy = static_cast<double>(Pprime.a);
  // L is affine in (x,y), so its range over a cell is spanned by the corners;
  // the threshold side is bounded through point-box distance ranges. Cells
  // with an undecidable sign are split until their total area is below tol.
  struct Cell {
    double x0, x1, y0, y1;
  };
  auto cell_state = [&](const Cell& c) -> int {  // 1 inside, 0 outside, -1 mixed
    double d0x = disc.x0 - std::clamp(disc.x0, c.x0, c.x1);
    double d0y = disc.y0 - std::clamp(disc.y0, c.y0, c.y1);
    double center_min = std::hypot(d0x, d0y);
    if (center_min > disc.r0) return 0;  // cell misses the disc entirely
    double corner_L[4] = {determinant_L(form, c.x0, c.y0), determinant_L(form, c.x0, c.y1),
                          determinant_L(form, c.x1, c.y0), determinant_L(form, c.x1, c.y1)};
    double lmin = *std::min_element(corner_L, corner_L + 4);
    double lmax = *std::max_element(corner_L, corner_L + 4);
    double abs_min = (lmin > 0 || lmax < 0) ? std::min(std::fabs(lmin), std::fabs(lmax)) : 0.0;
    double abs_max = std::max(std::fabs(lmin), std::fabs(lmax));
    double d1min, d1max, d2min, d2max;
    point_box_distance_bounds(px, py, c.x0, c.x1, c.y0, c.y1, d1min, d1max);
    point_box_distance_bounds(ppx, ppy, c.x0, c.x1, c.y0, c.y1, d2min, d2max);
    double thr_min = beta * d1min * d2min;
    double thr_max = beta * d1max * d2max;
    // a definite "inside" needs the whole cell inside the disc
    double far1 = std::hypot(c.x0 - disc.x0, c.y0 - disc.y0);
    double far2 = std::hypot(c.x0 - disc.x0, c.y1 - disc.y0);
    double far3 = std::hypot(c.x1 - disc.x0, c.y0 - disc.y0);
    double far4 = std::hypot(c.x1 - disc.x0, c.y1 - disc.y0);
    double center_max = std::max(std::max(far1, far2), std::max(far3, far4));
    bool disc_inside = center_max <= disc.r0;
    if (disc_inside && abs_max <= thr_min) return 1;
    if (abs_min > thr_max) return 0;
    return -1;
  };
  double area = 0.0;
  std::vector<Cell> stack{{disc.x0 - disc.r0, disc.x0 + disc.r0, disc.y0 - disc.r0,
                           disc.y0 + disc.r0}};
  std::vector<Cell> next;
  while (!stack.empty()) {
    double undecided = 0.0;
    next.clear();
    for (const Cell& c : stack) {
      int st = cell_state(c);
      double cell_area = (c.x1 - c.x0) * (c.y1 - c.y0);
      if (st == 1) {
        area += cell_area;
      } else if (st == -1) {
        undecided += cell_area;
        double mx = 0.5 * (c.x0 + c.x1), my = 0.5 * (c.y0 + c.y1);
        next.push_back({c.x0, mx, c.y0, my});
        next.push_back({c.x0, mx, my, c.y1});
        next.push_back({mx, c.x1, c.y0, my});
        next.push_back({mx, c.x1, my, c.y1});
      }
    }
    if (undecided <= 2.0 * abs_tol || next.empty()) {
      area += 0.5 * undecided;  // mixed cells estimated at half weight
      break;
    }
    stack.swap(next);
  }
  return area;
}

double strip_area_A(const LatticePoint& P, const LatticePoint& Pprime, const Disc& disc,
                    long long Q, double mu) {
  if (P == Pprime) throw validation_error("points must be distinct");
  disc.validate();
  if (mu < 0) throw validation_error("mu must be non-negative");
  const double Qd = static_cast<double>(Q);
  const double gamma = std::hypot(static_cast<double>(P.q), static_cast<double>(P.a)) *
                       std::hypot(static_cast<double>(Pprime.q), static_cast<double>(Pprime.a)) /
                       (Qd * Qd);
  // L(x,y) = C0 + (a-a')x + (q'-q)y; the constraint |L| <= mu*gamma is a
  // strip of width 2*mu*gamma/||P-P'|| around the line through P and P'
  const double gx = static_cast<double>(P.a - Pprime.a);
  const double gy = static_cast<double>(Pprime.q - P.q);
  const double gnorm = std::hypot(gx, gy);
  const DeterminantForm form{P, Pprime};
  const double L_center = determinant_L(form, disc.x0, disc.y0);
  // signed normal coordinate t relative to the disc center: L = L_center + t*gnorm
  const double t1 = (-mu * gamma - L_center) / gnorm;
  const double t2 = (mu * gamma - L_center) / gnorm;
  return strip_disc_area(disc.r0, t1, t2);
}

bool strip_support_possible(const LatticePoint& P, const LatticePoint& Pprime,
                            const Disc& disc, double mu) {
  const double k = static_cast<double>(Pprime.q - P.q);
  const double l = static_cast<double>(Pprime.a - P.a);
  const double c0 = std::fabs(static_cast<double>(Pprime.a) * static_cast<double>(P.q) -
                              static_cast<double>(P.a) * static_cast<double>(Pprime.q));
  const double mx = std::fabs(disc.x0) + disc.r0;
  const double my = std::fabs(disc.y0) + disc.r0;
  return c0 <= 2.0 * mu + std::fabs(l) * mx + std::fabs(k) * my;
}

namespace {

bool same_quadrant(const LatticePoint& P, const LatticePoint& Pprime) {
  // closed quadrants: a shared quadrant exists iff neither coordinate pair
  // has strictly opposite signs
  return (P.q * Pprime.q >= 0) && (P.a * Pprime.a >= 0);
}

}  // namespace

double g_sum_GQ(long long Q, double mu, const Disc& disc, long long budget) {
  disc.validate();
  if (Q < 1) throw validation_error("Q must be positive");
  if (Q > budget) throw size_error("G_Q enumeration budget exceeded");
  if (mu < 0) throw validation_error("mu must be non-negative");
  if (mu == 0.0) return 0.0;
  const double mx = std::fabs(disc.x0) + disc.r0;
  const double my = std::fabs(disc.y0) + disc.r0;
  // drive the sum by difference vectors (k,l) = (q'-q, a'-a); the support
  // condition |l*q - k*a| <= 2mu + |l|*mx + |k|*my keeps the candidate set
  // near O(Q) per difference
  const long long kmax = 2 * Q;
  std::vector<double> partial(static_cast<std::size_t>(2 * kmax + 1), 0.0);
  parallel_for(static_cast<std::size_t>(2 * kmax + 1), [&](std::size_t ki) {
    const long long k = static_cast<long long>(ki) - kmax;
    double acc = 0.0;
    for (long long l = -kmax; l <= kmax; ++l) {
      if (k == 0 && l == 0) continue;
      const double rbound = 2.0 * mu + std::fabs(static_cast<double>(l)) * mx +
                            std::fabs(static_cast<double>(k)) * my;
      const long long R = static_cast<long long>(std::floor(rbound));
      auto eval_candidate = [&](long long q, long long a) {
        const long long qp = q + k, ap = a + l;
        if (q < -Q || q > Q || a < -Q || a > Q) return;
        if (qp < -Q || qp > Q || ap < -Q || ap > Q) return;
        LatticePoint P{q, a}, Pp{qp, ap};
        if (!same_quadrant(P, Pp)) return;
        acc += strip_area_A(P, Pp, disc, Q, mu);
      };
      if (l == 0) {
        // |k*a| <= R
        const long long abound = R / std::llabs(k);
        for (long long a = -abound; a <= abound; ++a)
          for (long long q = std::max(-Q, -Q - k); q <= std::min(Q, Q - k); ++q)
            eval_candidate(q, a);
        continue;
      }
      if (k == 0) {
        const long long qbound = R / std::llabs(l);
        for (long long q = -qbound; q <= qbound; ++q)
          for (long long a = std::max(-Q, -Q - l); a <= std::min(Q, Q - l); ++a)
            eval_candidate(q, a);
        continue;
      }
      // l*q - k*a = D, |D| <= R; lines advance along (k/g, l/g)
      const long long g = std::gcd(std::llabs(k), std::llabs(l));
      const long long sk = k / g, sl = l / g;
      auto [gg, s, t] = xgcd(l, -k);  // l*s + (-k)*t = gg, |gg| = g
      long long gsig = gg;            // xgcd returns gg = g > 0
      for (long long D = -R; D <= R; ++D) {
        if (D % gsig != 0) continue;
        const long long f = D / gsig;
        long long q0 = s * f, a0 = t * f;
        // general solution: q = q0 + sk*n, a = a0 + sl*n
        const long long qlo = std::max(-Q, -Q - k), qhi = std::min(Q, Q - k);
        const long long alo = std::max(-Q, -Q - l), ahi = std::min(Q, Q - l);
        // intersect the n-ranges from both coordinates
        auto range_for = [](long long lo, long long hi, long long base, long long step,
                            long long& nlo, long long& nhi) {
          if (step > 0) {
            nlo = static_cast<long long>(
                std::ceil(static_cast<double>(lo - base) / static_cast<double>(step)));
            nhi = static_cast<long long>(
                std::floor(static_cast<double>(hi - base) / static_cast<double>(step)));
          } else {
            nlo = static_cast<long long>(
                std::ceil(static_cast<double>(hi - base) / static_cast<double>(step)));
            nhi = static_cast<long long>(
                std::floor(static_cast<double>(lo - base) / static_cast<double>(step)));
          }
        };
        long long n1lo, n1hi, n2lo, n2hi;
        range_for(qlo, qhi, q0, sk, n1lo, n1hi);
        range_for(alo, ahi, a0, sl, n2lo, n2hi);
        const long long nlo = std::max(n1lo, n2lo), nhi = std::min(n1hi, n2hi);
        for (long long n = nlo; n <= nhi; ++n) eval_candidate(q0 + sk * n, a0 + sl * n);
      }
    }
    partial[ki] = acc;
  });
  const double Qd = static_cast<double>(Q);
  return sum_ordered(partial) / (Qd * Qd);
}

double s_sum_SQ(long long Q, const Disc& disc, long long budget) {
  disc.validate();
  if (Q < 1) throw validation_error("Q must be positive");
  if (Q > budget) throw size_error("S_Q enumeration budget exceeded");
  const double x0 = disc.x0, y0 = disc.y0, r0 = disc.r0;
  std::vector<double> partial(static_cast<std::size_t>(Q), 0.0);
  parallel_for(static_cast<std::size_t>(Q), [&](std::size_t qi) {
    const long long q = static_cast<long long>(qi) + 1;
    const double qd = static_cast<double>(q);
    double acc = 0.0;
    for (long long a = 1; a <= q; ++a) {
      const double ad = static_cast<double>(a);
      const double radius = r0 * std::sqrt(qd * qd + ad * ad);
      const double center = -qd * y0 + ad * x0;
      const long long Dlo = static_cast<long long>(std::ceil(center - radius));
      const long long Dhi = static_cast<long long>(std::floor(center + radius));
      const long long g = std::gcd(a, q);
      for (long long D = Dlo; D <= Dhi; ++D) {
        // q' in [q,Q] with a*q' = D (mod q); a' = (a q' - D)/q must lie in [a,Q]
        if (D % g != 0) continue;
        const double arg = y0 * qd - x0 * ad + static_cast<double>(D);
        const double radicand = r0 * r0 * (qd * qd + ad * ad) - arg * arg;
        if (radicand <= 0) continue;  // boundary of the support window
        const double root = std::sqrt(radicand);
        const long long qred = q / g;
        long long qp0 = 0;  // residue class of q' mod qred
        if (qred > 1) {
          const long long ainv = mod_inverse(a / g, qred) % qred;
          qp0 = static_cast<long long>(
              (static_cast<__int128>(((D / g) % qred + qred) % qred) * ainv) % qred);
        }
        // smallest q' >= q congruent to qp0 mod qred
        const long long steps = (q - qp0 + qred - 1) / qred;
        long long qp = qp0 + steps * qred;
        for (; qp <= Q; qp += qred) {
          const __int128 num = static_cast<__int128>(a) * qp - D;
          if (num % q != 0) continue;  // defensive; congruence should hold
          const long long ap = static_cast<long long>(num / q);
          if (ap < a || ap > Q) continue;
          acc += (static_cast<double>(qp - q) * static_cast<double>(qp)) / (qd * qd) * root;
        }
      }
    }
    partial[qi] = acc;
  });
  const double Qd = static_cast<double>(Q);
  return 2.0 / (Qd * Qd * Qd * Qd) * sum_ordered(partial);
}

double g_of_t(double t) {
  const double u = t - 1.0;
  return u * u * u / 3.0 + u * u / 2.0;
}

double mq_main_term(long long Q, double r0) {
  if (Q < 1) throw validation_error("Q must be positive");
  std::vector<double> terms(static_cast<std::size_t>(Q));
  for (long long q = 1; q <= Q; ++q) {
    const double qd = static_cast<double>(q);
    terms[static_cast<std::size_t>(q - 1)] = qd * qd * qd * g_of_t(static_cast<double>(Q) / qd);
  }
  const double Qd = static_cast<double>(Q);
  return 4.0 * kPi * r0 * r0 / (3.0 * Qd * Qd * Qd * Qd) * sum_ordered(terms);
}

double phi_value(const PhiParams& params, double t, double x) {
  const double w = params.beta0 - t * params.alpha0 + x;
  return 1.0 + t * t - w * w;
}

std::pair<double, double> phi_projection(const PhiParams& params) {
  // Phi >= 0 iff |c - alpha0*t| <= sqrt(1+t^2) with c = x + beta0;
  // alpha0*t + sqrt(1+t^2) is convex and alpha0*t - sqrt(1+t^2) concave, so
  // both envelopes over t in [0,1] are attained at the endpoints.
  const double hi_c = std::max(1.0, params.alpha0 + std::sqrt(2.0));
  const double lo_c = std::min(-1.0, params.alpha0 - std::sqrt(2.0));
  return {lo_c - params.beta0, hi_c - params.beta0};
}

namespace {

// The quadratic A t^2 + B t + C behind Phi(., x), with its root structure,
// so pieces can be evaluated in factored form. The expanded form cancels
// catastrophically near the roots, which is exactly where the sqrt weights
// need it most.
struct PhiQuad {
  double A = 0, B = 0, C = 0;
  int kind = 0;       // 0: no real roots, 1: linear, 2: two roots
  double r1 = 0, r2 = 0;  // sorted roots (kind 2) or the single root (kind 1)
};

PhiQuad phi_quad(const PhiParams& params, double x) {
  PhiQuad qd;
  const double c = x + params.beta0;
  qd.A = 1.0 - params.alpha0 * params.alpha0;
  qd.B = 2.0 * params.alpha0 * c;
  qd.C = 1.0 - c * c;
  if (std::fabs(qd.A) < 1e-14) {
    qd.kind = std::fabs(qd.B) < 1e-300 ? 0 : 1;
    if (qd.kind == 1) qd.r1 = qd.r2 = -qd.C / qd.B;
    return qd;
  }
  const double disc = qd.B * qd.B - 4.0 * qd.A * qd.C;
  if (disc <= 0) {
    qd.kind = 0;
    return qd;
  }
  const double sq = std::sqrt(disc);
  const double qform = -0.5 * (qd.B + (qd.B >= 0 ? sq : -sq));
  double r1 = qform / qd.A;
  double r2 = (qform == 0.0) ? r1 : qd.C / qform;
  if (r1 > r2) std::swap(r1, r2);
  qd.kind = 2;
  qd.r1 = r1;
  qd.r2 = r2;
  return qd;
}

// Phi(t0 + du), with every factor formed as (t0 - root) + du. Near a piece
// endpoint sitting on a root the offset is exact, so no cancellation.
double phi_stable(const PhiQuad& qd, double t0, double du) {
  switch (qd.kind) {
    case 1:
      return qd.B * ((t0 - qd.r1) + du);
    case 2:
      return qd.A * (((t0 - qd.r1) + du) * ((t0 - qd.r2) + du));
    default: {
      if (qd.A == 0.0) return qd.C;
      const double tv = -qd.B / (2.0 * qd.A);
      const double m = qd.C - qd.B * qd.B / (4.0 * qd.A);
      const double dt = (t0 - tv) + du;
      return qd.A * dt * dt + m;
    }
  }
}

struct PhiSection {
  PhiQuad quad;
  struct Piece {
    double lo, hi;
  };
  Piece pieces[2];
  int count = 0;
};

PhiSection phi_section(const PhiParams& params, double x) {
  PhiSection out;
  out.quad = phi_quad(params, x);
  const PhiQuad& qd = out.quad;
  auto add = [&](double lo, double hi) {
    if (hi - lo > 0) out.pieces[out.count++] = {lo, hi};
  };
  if (qd.kind == 0) {
    // constant sign; sample the vertex-free stable form at the midpoint
    if (phi_stable(qd, 0.5, 0.0) >= 0) add(0.0, 1.0);
    return out;
  }
  if (qd.kind == 1) {
    const double r = qd.r1;
    if (qd.B > 0)
      add(std::max(0.0, r), 1.0);
    else
      add(0.0, std::min(1.0, r));
    return out;
  }
  if (qd.A > 0) {
    // Phi >= 0 outside (r1, r2)
    add(0.0, std::min(1.0, qd.r1));
    add(std::max(0.0, qd.r2), 1.0);
  } else {
    // Phi >= 0 inside [r1, r2]
    add(std::max(0.0, qd.r1), std::min(1.0, qd.r2));
  }
  return out;
}

// Integrates g(t) * Phi^(power) over a piece, power in {+1/2, -1/2}. Each
// half is integrated in the substituted variable t = end -+ s^2 with Phi
// evaluated through phi_stable, which keeps endpoint roots noiseless.
double integrate_piece(const PhiSection& sec, int piece_idx,
                       const std::function<double(double)>& g, bool inverse_weight,
                       const QuadratureConfig& cfg) {
  const auto& p = sec.pieces[piece_idx];
  const PhiQuad& qd = sec.quad;
  const double mid = 0.5 * (p.lo + p.hi);
  auto half = [&](double anchor, double sign, double width) {
    return adaptive_integrate(
        [&](double s) {
          const double du = sign * s * s;
          const double phi = phi_stable(qd, anchor, du);
          if (phi <= 0) return 0.0;
          const double w = std::sqrt(phi);
          const double gv = g(anchor + du);
          return inverse_weight ? 2.0 * s * gv / w : 2.0 * s * gv * w;
        },
        0.0, std::sqrt(width), cfg);
  };
  return half(p.lo, 1.0, mid - p.lo) + half(p.hi, -1.0, p.hi - mid);
}

}  // namespace

double psi_integral(const PhiParams& params, double x, const QuadratureConfig& cfg) {
  PhiSection sec = phi_section(params, x);
  double v = 0.0;
  for (int i = 0; i < sec.count; ++i)
    v += integrate_piece(sec, i, [](double) { return 1.0; }, false, cfg);
  return v;
}

namespace {

// d psi / dx = integral over I_x of (t*alpha0 - beta0 - x)/sqrt(Phi) dt; the
// inverse-square-root endpoint singularities are integrable and disappear
// under the substitution.
double psi_prime(const PhiParams& params, double x, const QuadratureConfig& cfg) {
  PhiSection sec = phi_section(params, x);
  double v = 0.0;
  for (int i = 0; i < sec.count; ++i)
    v += integrate_piece(
        sec, i, [&](double t) { return t * params.alpha0 - params.beta0 - x; }, true, cfg);
  return v;
}

// x-values where the section structure changes: roots crossing t=0 or t=1,
// or the discriminant vanishing
std::vector<double> section_breakpoints(const PhiParams& params) {
  std::vector<double> xs;
  const double a0 = params.alpha0, b0 = params.beta0;
  xs.push_back(1.0 - b0);
  xs.push_back(-1.0 - b0);
  xs.push_back(a0 + std::sqrt(2.0) - b0);
  xs.push_back(a0 - std::sqrt(2.0) - b0);
  const double A = 1.0 - a0 * a0;
  if (A > 1e-14) {
    const double c = std::sqrt(A);
    xs.push_back(c - b0);
    xs.push_back(-c - b0);
  }
  return xs;
}

}  // namespace

Lemma30Integrals lemma30_integrals(const PhiParams& params, const QuadratureConfig& cfg) {
  auto [xlo, xhi] = phi_projection(params);
  std::vector<double> cuts{xlo, xhi};
  for (double c : section_breakpoints(params))
    if (c > xlo && c < xhi) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  QuadratureConfig inner = cfg;
  inner.abs_tol = std::max(cfg.abs_tol * 1e-2, 1e-12);
  Lemma30Integrals out{0.0, 0.0};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] <= 0) continue;
    out.sqrt_phi_integral += adaptive_integrate(
        [&](double x) { return psi_integral(params, x, inner); }, cuts[i], cuts[i + 1], cfg);
    out.abs_psi_prime_integral += adaptive_integrate(
        [&](double x) { return std::fabs(psi_prime(params, x, inner)); }, cuts[i], cuts[i + 1],
        cfg);
  }
  return out;
}

double quadratic_sublevel_measure(double u, double v, double w, double K, double L) {
  if (u == 0.0) throw validation_error("quadratic coefficient must be nonzero");
  const double L2 = L * L;
  // measure of {F <= Y} relative to the extremum of F
  const double extremum = w - v * v / (4.0 * u);
  auto sublevel_len = [&](double Y) {
    // u > 0: {F <= Y} is an interval of length 2*sqrt((Y-extremum)/u)
    double d = (Y - extremum) / u;
    return d > 0 ? 2.0 * std::sqrt(d) : 0.0;
  };
  auto superlevel_len = [&](double Y) {
    // u < 0: {F >= Y} is an interval of length 2*sqrt((Y-extremum)/u) as well
    double d = (Y - extremum) / u;
    return d > 0 ? 2.0 * std::sqrt(d) : 0.0;
  };
  if (u > 0) return std::max(0.0, sublevel_len(K + L2) - sublevel_len(K));
  return std::max(0.0, superlevel_len(K) - superlevel_len(K + L2));
}

}  // namespace latcorr
