#pragma once

// Closed-form and quadrature machinery for the strip/disc weight sums: the
// determinant form L, exact strip-cap areas, the big pair sums G_Q and S_Q,
// the single-sum main term for S_Q, and the sqrt(Phi) integrals whose values
// pin the limiting constants.

#include <functional>
#include <utility>

#include "latcorr/averaging.hpp"
#include "latcorr/lattice.hpp"
#include "latcorr/quadrature.hpp"

namespace latcorr {

struct DeterminantForm {
  LatticePoint P;
  LatticePoint Pprime;
};

// L(x,y) = (a'-y)(q-x) - (a-y)(q'-x); affine in (x,y) with gradient
// (a-a', q'-q), so |L| = ||P-z|| * ||P'-z|| * |sin(angle at z)|.
double determinant_L(const DeterminantForm& form, double x, double y);

// Exact area of {(u,t) : u^2 + t^2 <= r0^2, t1 <= t <= t2}.
double strip_disc_area(double r0, double t1, double t2);

// sin(2*pi*lambda/N), the sine threshold matching the angular window.
double beta_threshold(long long Q, double lambda);

// Area{z in disc : |L(z)| <= beta * ||P-z|| * ||P'-z||}, by quadtree
// subdivision with rigorous per-cell bounds (the threshold varies with z, so
// there is no closed form). abs_tol bounds the undecided area.
double weight_area(const LatticePoint& P, const LatticePoint& Pprime, const Disc& disc,
                   long long Q, double lambda, double abs_tol = 1e-5);

// Area{z in disc : |L(z)| <= mu * gamma(Q)} with gamma = |OP||OP'|/Q^2;
// a constant-threshold strip, hence exact via strip_disc_area.
double strip_area_A(const LatticePoint& P, const LatticePoint& Pprime, const Disc& disc,
                    long long Q, double mu);

// Necessary support condition for strip_area_A != 0, exact for the given
// disc: |a'q - aq'| <= 2mu + |a'-a|(|x0|+r0) + |q'-q|(|y0|+r0).
bool strip_support_possible(const LatticePoint& P, const LatticePoint& Pprime,
                            const Disc& disc, double mu);

// G_Q(mu) = Q^{-2} * sum of strip_area_A over ordered same-quadrant distinct
// pairs of the box. The pair sum is driven by difference vectors and the
// support condition, keeping the cost near O(Q^2 polylog).
double g_sum_GQ(long long Q, double mu, const Disc& disc, long long budget = 400);

// S_Q: the first-quadrant normalized pair sum, evaluated by the congruence
// loop (a <= q <= Q, integer D in the support window, q' in the residue
// class of D/a mod q). Converges to pi*r0^2/6.
double s_sum_SQ(long long Q, const Disc& disc, long long budget = 2000);

// Single-sum main term (4 pi r0^2 / (3 Q^4)) * sum q^3 g(Q/q) with
// g(t) = (t-1)^3/3 + (t-1)^2/2; limit pi*r0^2/6.
double mq_main_term(long long Q, double r0);
double g_of_t(double t);

// Normalized disc-center parameters: x0 = r0*alpha0, y0 = r0*beta0.
struct PhiParams {
  double alpha0 = 0.0;
  double beta0 = 0.0;
};

// Phi(t,x) = 1 + t^2 - (beta0 - t*alpha0 + x)^2.
double phi_value(const PhiParams& params, double t, double x);

// x-range of the domain D = {0<=t<=1, Phi >= 0} projected to the x-axis.
std::pair<double, double> phi_projection(const PhiParams& params);

// psi(x) = integral of sqrt(Phi(t,x)) over I_x = {t in [0,1] : Phi >= 0}
// (one or two intervals). Returns 0 outside the projection.
double psi_integral(const PhiParams& params, double x, const QuadratureConfig& cfg = {});

struct Lemma30Integrals {
  double abs_psi_prime_integral;  // <= sqrt(2) + ln(1+sqrt(2)), equality at (0,0)
  double sqrt_phi_integral;       // = 2*pi/3 for every parameter choice
};

Lemma30Integrals lemma30_integrals(const PhiParams& params, const QuadratureConfig& cfg = {});

// Lebesgue measure of {a : K <= u a^2 + v a + w <= K + L^2}; exact via root
// intervals, requires u != 0. Always <= 2|L|/sqrt(|u|).
double quadratic_sublevel_measure(double u, double v, double w, double K, double L);

}  // namespace latcorr
