// SPDX-License-Identifier: Apache-2.0

#ifndef NSMX_MANUFACTURED_HPP
#define NSMX_MANUFACTURED_HPP

#include <cmath>

#include "nsmx/nsm.hpp"

namespace nsmx {

// Analytic band-limited fields with known time derivatives. Not a solution
// of the system; the point is that their equation residuals are computable
// exactly, which calibrates the finite-difference residual evaluator and
// the diffusive-scaling mapping.
struct Manufactured {
  double au = 0.3;
  double ab = 0.2;
  double ae = 0.25;

  static Field3 shape_u(Grid g) {
    ScalarField2D zero(g);
    return {ScalarField2D::from_function(
                g, [](double x1, double x2) { return -std::sin(x1) * std::cos(x2); }),
            ScalarField2D::from_function(
                g, [](double x1, double x2) { return std::cos(x1) * std::sin(x2); }),
            zero};
  }
  static Field3 shape_B(Grid g) {
    ScalarField2D zero(g);
    return {ScalarField2D::from_function(
                g, [](double x1, double x2) { return -std::cos(x1) * std::cos(x2); }),
            ScalarField2D::from_function(
                g, [](double x1, double x2) { return -std::sin(x1) * std::sin(x2); }),
            zero};
  }
  static Field3 shape_E(Grid g) {
    ScalarField2D zero(g);
    return {zero, zero,
            ScalarField2D::from_function(
                g, [](double x1, double) { return std::sin(x1); })};
  }

  double gu(double t) const { return std::exp(-t); }
  double gb(double t) const { return std::cos(t); }
  double ge(double t) const { return std::cos(0.7 * t); }
  double dgu(double t) const { return -std::exp(-t); }
  double dgb(double t) const { return -std::sin(t); }
  double dge(double t) const { return -0.7 * std::sin(0.7 * t); }

  NsmState state(Grid g, double t, double eps) const {
    return {au * gu(t) * shape_u(g), ab * gb(t) * shape_B(g),
            ae * ge(t) * shape_E(g), eps, t, 1.0};
  }

  // Exact equation residuals at time t (analytic time derivatives).
  NsmResidual exact_residual(Grid g, double t, double eps) const {
    NsmState s = state(g, t, eps);
    Field3 dtu = au * dgu(t) * shape_u(g);
    Field3 dtB = ab * dgb(t) * shape_B(g);
    Field3 dtE = ae * dge(t) * shape_E(g);
    Field3 j = ohm_current(s.u, s.B, s.E);
    Field3 r_mom = leray_project(dtu - s.nu * laplacian(s.u) +
                                 advect(s.u, s.u) - cross(j, s.B));
    pin_zero_mean(r_mom);
    Field3 r_far = dtB + curl25(s.E);
    Field3 r_amp = eps * dtE - curl25(s.B) + j;
    return {t, l2_norm(r_mom), l2_norm(r_far), l2_norm(r_amp),
            l2_norm(divergence(s.u)), l2_norm(divergence(s.B))};
  }
};

}  // namespace nsmx

#endif
