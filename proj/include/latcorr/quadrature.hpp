#pragma once

// Adaptive 1-D quadrature (Gauss-Kronrod 7/15), with a substitution variant
// for integrable square-root endpoint singularities.

#include <functional>

#include "latcorr/common.hpp"

namespace latcorr {

struct QuadratureConfig {
  double abs_tol = 1e-8;
  int max_subdivisions = 2000;
};

// Integrates f over [a,b] by adaptive bisection; throws tolerance_error with
// the achieved estimate when the subdivision budget runs out.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          const QuadratureConfig& cfg = {});

// Like adaptive_integrate, but the integrand is allowed an integrable
// inverse-square-root style endpoint singularity: a substitution
// t = endpoint +- s^2 is applied on the flagged side(s) before integrating.
double adaptive_integrate_sqrtend(const std::function<double(double)>& f, double a, double b,
                                  bool singular_at_a, bool singular_at_b,
                                  const QuadratureConfig& cfg = {});

}  // namespace latcorr
