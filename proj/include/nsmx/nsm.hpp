// SPDX-License-Identifier: Apache-2.0

#ifndef NSMX_NSM_HPP
#define NSMX_NSM_HPP

#include <cmath>
#include <tuple>
#include <vector>

#include "nsmx/mhd.hpp"

namespace nsmx {

struct NsmState {
  Field3 u;
  Field3 B;
  Field3 E;
  double eps = 1.0;
  double t = 0.0;
  double nu = 1.0;
};

// Time-derivative fields computed from the equations, never by finite
// differences: j = E + u x B, dtB = -curl E, dtE = (curl B - j)/eps,
// dttB = -curl dtE.
struct DerivedFields {
  Field3 j;
  Field3 dtB;
  Field3 dtE;
  Field3 dttB;
};

inline DerivedFields derived_fields(const NsmState& s) {
  Field3 j = ohm_current(s.u, s.B, s.E);
  Field3 dtB = -1.0 * curl25(s.E);
  Field3 dtE = (1.0 / s.eps) * (curl25(s.B) - j);
  Field3 dttB = -1.0 * curl25(dtE);
  return {std::move(j), std::move(dtB), std::move(dtE), std::move(dttB)};
}

inline std::tuple<Field3, Field3, Field3> nsm_rhs(const NsmState& s) {
  detail::check_state_invariants(s.u, s.B);
  Field3 j = ohm_current(s.u, s.B, s.E);
  Field3 du =
      leray_project(s.nu * laplacian(s.u) - advect(s.u, s.u) + cross(j, s.B));
  pin_zero_mean(du);
  Field3 dB = -1.0 * curl25(s.E);
  Field3 dE = (1.0 / s.eps) * (curl25(s.B) - j);
  return {std::move(du), std::move(dB), std::move(dE)};
}

// ---------------------------------------------------------------------------
// Exact per-mode propagator for the linear Maxwell-Ohm block
//   dtB = -(ik x)E,   eps dtE = (ik x)B - E
// In 2.5D each mode splits into two 3x3 blocks, (B1,B2,E3) and (B3,E1,E2),
// and each block reduces to a 2x2 system with characteristic polynomial
// eps l^2 + l + |k|^2 = 0. The closed form is evaluated through the two
// exponentials exp(l+-dt) so that no hyperbolic function overflows.
// ---------------------------------------------------------------------------

struct ModeVector {
  std::complex<double> B1, B2, B3, E1, E2, E3;
};

namespace detail {

struct Propagator2x2 {
  // exp(M dt) for M = [[0, -alpha], [beta, -1/eps]]; entries depend on
  // alpha and beta only through the shared scalars ec, es.
  double ec, es, inv2eps;
  double p11() const { return ec + es * inv2eps; }
  double p22() const { return ec - es * inv2eps; }
};

inline Propagator2x2 make_propagator(double ksq, double dt, double eps) {
  const double x = eps * ksq;          // discriminant is 1 - 4x
  const double disc = 1.0 - 4.0 * x;
  const double tau = -0.5 / eps;
  double ec, es;
  if (std::abs(disc) < 1e-8) {
    // double-root neighborhood: series in delta*dt^2, delta = disc/(4 eps^2)
    const double d = disc / (4.0 * eps * eps);
    const double z = d * dt * dt;
    const double e0 = std::exp(tau * dt);
    ec = e0 * (1.0 + z / 2.0 + z * z / 24.0);
    es = e0 * dt * (1.0 + z / 6.0 + z * z / 120.0);
  } else if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    // cancellation-free slow root: (-1+sq)/(2 eps) = -2 ksq/(1+sq)
    const double lp = -2.0 * ksq / (1.0 + sq);
    const double lm = (-1.0 - sq) / (2.0 * eps);
    const double ep = std::exp(lp * dt);
    const double em = std::exp(lm * dt);
    ec = 0.5 * (ep + em);
    es = (ep - em) / (lp - lm);
  } else {
    const double s = std::sqrt(-disc) / (2.0 * eps);
    const double e0 = std::exp(tau * dt);
    ec = e0 * std::cos(s * dt);
    es = e0 * std::sin(s * dt) / s;
  }
  return {ec, es, -tau};
}

}  // namespace detail

// Advances one Fourier mode of the linear Maxwell-Ohm block exactly.
inline ModeVector propagate_mode(int k1, int k2, const ModeVector& m,
                                 double dt, double eps) {
  const std::complex<double> I(0.0, 1.0);
  if (k1 == 0 && k2 == 0) {
    const double damp = std::exp(-dt / eps);
    return {m.B1, m.B2, m.B3, damp * m.E1, damp * m.E2, damp * m.E3};
  }
  const double ksq = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
  const auto pr = detail::make_propagator(ksq, dt, eps);

  ModeVector out;

  // Block (B1,B2,E3): k.B is conserved, the scalar curl b = i(k1 B2 - k2 B1)
  // pairs with E3 as [[0,-ksq],[1/eps,-1/eps]].
  {
    const std::complex<double> dpar = double(k1) * m.B1 + double(k2) * m.B2;
    std::complex<double> b = I * (double(k1) * m.B2 - double(k2) * m.B1);
    std::complex<double> e = m.E3;
    const std::complex<double> bn = pr.p11() * b - ksq * pr.es * e;
    const std::complex<double> en = (pr.es / eps) * b + pr.p22() * e;
    // rebuild the in-plane components from (k.B, b)
    const std::complex<double> c = -I * bn;  // k1 B2 - k2 B1
    out.B1 = (double(k1) * dpar - double(k2) * c) / ksq;
    out.B2 = (double(k2) * dpar + double(k1) * c) / ksq;
    out.E3 = en;
  }

  // Block (B3,E1,E2): k.E decays as exp(-dt/eps); g = i(k1 E2 - k2 E1)
  // pairs with B3 as [[0,-1],[ksq/eps,-1/eps]].
  {
    const std::complex<double> epar = double(k1) * m.E1 + double(k2) * m.E2;
    std::complex<double> b3 = m.B3;
    std::complex<double> gg = I * (double(k1) * m.E2 - double(k2) * m.E1);
    const std::complex<double> b3n = pr.p11() * b3 - pr.es * gg;
    const std::complex<double> gn = (ksq / eps) * pr.es * b3 + pr.p22() * gg;
    const std::complex<double> eparn = std::exp(-dt / eps) * epar;
    const std::complex<double> c = -I * gn;  // k1 E2 - k2 E1
    out.E1 = (double(k1) * eparn - double(k2) * c) / ksq;
    out.E2 = (double(k2) * eparn + double(k1) * c) / ksq;
    out.B3 = b3n;
  }
  return out;
}

// Applies the exact linear propagator to full spectra in place.
inline void maxwell_propagate(Field3& B, Field3& E, double dt, double eps) {
  const Grid& g = B.grid();
  const int n = g.n();
  auto& b1 = B.c1.coeffs();
  auto& b2 = B.c2.coeffs();
  auto& b3 = B.c3.coeffs();
  auto& e1 = E.c1.coeffs();
  auto& e2 = E.c2.coeffs();
  auto& e3 = E.c3.coeffs();
  for (int j1 = 0; j1 < n; ++j1) {
    const int k1 = g.wavenumber(j1);
    for (int j2 = 0; j2 < n; ++j2) {
      const int k2 = g.wavenumber(j2);
      const size_t i = static_cast<size_t>(j1) * n + j2;
      const ModeVector out = propagate_mode(
          k1, k2, {b1[i], b2[i], b3[i], e1[i], e2[i], e3[i]}, dt, eps);
      b1[i] = out.B1;
      b2[i] = out.B2;
      b3[i] = out.B3;
      e1[i] = out.E1;
      e2[i] = out.E2;
      e3[i] = out.E3;
    }
  }
}

// Variation-of-constants step for the Maxwell-Ohm block with a source held
// frozen over the step:
//   dtB = -(ik x)E,   eps dtE = (ik x)B - E - G,   G constant.
// The particular contribution is M^{-1}(exp(M dt) - I) f per 2x2 block,
// which both blocks express through the shared scalars
//   q1 = es/2 + eps (ec - 1),   q2 = es,
// so the update stays overflow-safe for any dt/eps. This filtering of the
// source through the exact propagator is what keeps the scheme consistent
// when dt >> eps: a plain splitting kick would be annihilated by the
// trailing exp(-dt/2eps) damping stage.
inline ModeVector propagate_mode_forced(int k1, int k2, const ModeVector& m,
                                        const std::complex<double>& g1,
                                        const std::complex<double>& g2,
                                        const std::complex<double>& g3,
                                        double dt, double eps) {
  const std::complex<double> I(0.0, 1.0);
  const double damp = std::exp(-dt / eps);
  const double wm = std::expm1(-dt / eps);  // = damp - 1
  if (k1 == 0 && k2 == 0) {
    return {m.B1,
            m.B2,
            m.B3,
            damp * m.E1 + wm * g1,
            damp * m.E2 + wm * g2,
            damp * m.E3 + wm * g3};
  }
  const double ksq = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
  const auto pr = detail::make_propagator(ksq, dt, eps);
  const double q1 = 0.5 * pr.es + eps * (pr.ec - 1.0);
  const double q2 = pr.es;

  ModeVector out;

  {
    const std::complex<double> dpar = double(k1) * m.B1 + double(k2) * m.B2;
    const std::complex<double> b = I * (double(k1) * m.B2 - double(k2) * m.B1);
    const std::complex<double> e = m.E3;
    const std::complex<double> phi = -g3 / eps;
    const std::complex<double> bn = pr.p11() * b - ksq * pr.es * e + phi * q1;
    const std::complex<double> en = (pr.es / eps) * b + pr.p22() * e + phi * q2;
    const std::complex<double> c = -I * bn;
    out.B1 = (double(k1) * dpar - double(k2) * c) / ksq;
    out.B2 = (double(k2) * dpar + double(k1) * c) / ksq;
    out.E3 = en;
  }

  {
    const std::complex<double> epar = double(k1) * m.E1 + double(k2) * m.E2;
    const std::complex<double> gpar = double(k1) * g1 + double(k2) * g2;
    const std::complex<double> b3 = m.B3;
    const std::complex<double> gg = I * (double(k1) * m.E2 - double(k2) * m.E1);
    const std::complex<double> gamma =
        I * (double(k1) * g2 - double(k2) * g1);
    const std::complex<double> psi = -gamma / eps;
    const std::complex<double> b3n =
        pr.p11() * b3 - pr.es * gg + (psi / ksq) * q1;
    const std::complex<double> gn =
        (ksq / eps) * pr.es * b3 + pr.p22() * gg + psi * q2;
    const std::complex<double> eparn = damp * epar + wm * gpar;
    const std::complex<double> c = -I * gn;
    out.E1 = (double(k1) * eparn - double(k2) * c) / ksq;
    out.E2 = (double(k2) * eparn + double(k1) * c) / ksq;
    out.B3 = b3n;
  }
  return out;
}

// Advances (B, E) through the forced Maxwell-Ohm block with G frozen.
inline void maxwell_propagate_forced(Field3& B, Field3& E, const Field3& G,
                                     double dt, double eps) {
  const Grid& g = B.grid();
  const int n = g.n();
  auto& b1 = B.c1.coeffs();
  auto& b2 = B.c2.coeffs();
  auto& b3 = B.c3.coeffs();
  auto& e1 = E.c1.coeffs();
  auto& e2 = E.c2.coeffs();
  auto& e3 = E.c3.coeffs();
  const auto& g1 = G.c1.coeffs();
  const auto& g2 = G.c2.coeffs();
  const auto& g3 = G.c3.coeffs();
  for (int j1 = 0; j1 < n; ++j1) {
    const int k1 = g.wavenumber(j1);
    for (int j2 = 0; j2 < n; ++j2) {
      const int k2 = g.wavenumber(j2);
      const size_t i = static_cast<size_t>(j1) * n + j2;
      const ModeVector out = propagate_mode_forced(
          k1, k2, {b1[i], b2[i], b3[i], e1[i], e2[i], e3[i]}, g1[i], g2[i],
          g3[i], dt, eps);
      b1[i] = out.B1;
      b2[i] = out.B2;
      b3[i] = out.B3;
      e1[i] = out.E1;
      e2[i] = out.E2;
      e3[i] = out.E3;
    }
  }
}

namespace detail {
inline Field3 nsm_nonlinear_du(const Field3& u, const Field3& B,
                               const Field3& E) {
  Field3 j = ohm_current(u, B, E);
  Field3 du = leray_project(cross(j, B) - advect(u, u));
  pin_zero_mean(du);
  return du;
}
}  // namespace detail

// Exponential midpoint step. The Maxwell-Ohm block advances through its
// exact propagator with the Ohm source u x B frozen at the midpoint
// (variation of constants, see propagate_mode_forced), so the relaxation
// scale eps never constrains dt. The velocity advances by the viscous
// integrating factor with an explicit midpoint evaluation of the projected
// nonlinearity. As eps -> 0 the update reduces to a midpoint step of the
// resistive induction equation, so accuracy is uniform in eps for
// well-prepared data.
inline NsmState step_nsm(const NsmState& s, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("step_nsm: dt must be positive");
  if (dt > cfl_limit(s.u, s.B)) {
    throw SolverError("step_nsm: CFL violation at t=" + std::to_string(s.t));
  }

  // predictor to t + dt/2
  Field3 G0 = cross(s.u, s.B);
  Field3 du0 = detail::nsm_nonlinear_du(s.u, s.B, s.E);
  Field3 um = s.u + (0.5 * dt) * du0;
  apply_heat_factor(um, s.nu, 0.5 * dt);
  Field3 Bm = s.B, Em = s.E;
  maxwell_propagate_forced(Bm, Em, G0, 0.5 * dt, s.eps);

  // corrector over the full step
  Field3 Gm = cross(um, Bm);
  Field3 dum = detail::nsm_nonlinear_du(um, Bm, Em);
  apply_heat_factor(dum, s.nu, 0.5 * dt);
  Field3 u = s.u;
  apply_heat_factor(u, s.nu, dt);
  u += dt * dum;
  Field3 B = s.B, E = s.E;
  maxwell_propagate_forced(B, E, Gm, dt, s.eps);

  u = leray_project(u);
  pin_zero_mean(u);
  B = leray_project(B);
  B.c1.set_mode(0, 0, 0.0);
  B.c2.set_mode(0, 0, 0.0);
  B.c3.set_mode(0, 0, 0.0);

  if (!all_finite(u) || !all_finite(B) || !all_finite(E)) {
    throw SolverError("step_nsm: NaN detected at t=" + std::to_string(s.t));
  }
  return {std::move(u), std::move(B), std::move(E), s.eps, s.t + dt, s.nu};
}

inline std::vector<NsmState> run_nsm(const NsmState& s0, double t_end,
                                     double dt, int sample_every) {
  if (t_end < 0.0) throw std::invalid_argument("run_nsm: t_end must be >= 0");
  if (sample_every < 1) throw std::invalid_argument("run_nsm: sample_every >= 1");
  std::vector<NsmState> out;
  out.push_back(s0);
  if (t_end == 0.0) return out;
  const long steps = std::lround(t_end / dt);
  NsmState s = s0;
  for (long i = 1; i <= steps; ++i) {
    s = step_nsm(s, dt);
    if (i % sample_every == 0 || i == steps) out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Equation residuals from a finite-difference time stencil of states.
// The momentum residual is Leray-projected and mean-free, i.e. the defect
// of the pressure-eliminated equation the solver integrates.
// ---------------------------------------------------------------------------

struct NsmResidual {
  double t;
  double momentum;
  double faraday;
  double ampere;
  double div_u;
  double div_B;
};

inline std::vector<NsmResidual> residual_nsm(const std::vector<NsmState>& sts) {
  if (sts.size() < 3) {
    throw std::invalid_argument("residual_nsm: need at least 3 states");
  }
  const double dt = sts[1].t - sts[0].t;
  for (size_t i = 1; i < sts.size(); ++i) {
    require_same_grid(sts[i].u.grid(), sts[0].u.grid());
    if (std::abs((sts[i].t - sts[i - 1].t) - dt) > 1e-10 * std::max(1.0, dt)) {
      throw std::invalid_argument("residual_nsm: nonuniform dt");
    }
    if (sts[i].eps != sts[0].eps) {
      throw std::invalid_argument("residual_nsm: eps mismatch");
    }
  }

  std::vector<NsmResidual> out;
  const double inv2dt = 1.0 / (2.0 * dt);
  for (size_t i = 1; i + 1 < sts.size(); ++i) {
    const NsmState& s = sts[i];
    Field3 dtu = inv2dt * (sts[i + 1].u - sts[i - 1].u);
    Field3 dtB = inv2dt * (sts[i + 1].B - sts[i - 1].B);
    Field3 dtE = inv2dt * (sts[i + 1].E - sts[i - 1].E);

    Field3 j = ohm_current(s.u, s.B, s.E);
    Field3 r_mom = leray_project(dtu - s.nu * laplacian(s.u) +
                                 advect(s.u, s.u) - cross(j, s.B));
    pin_zero_mean(r_mom);
    Field3 r_far = dtB + curl25(s.E);
    Field3 r_amp = s.eps * dtE - curl25(s.B) + j;

    out.push_back({s.t, l2_norm(r_mom), l2_norm(r_far), l2_norm(r_amp),
                   l2_norm(divergence(s.u)), l2_norm(divergence(s.B))});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Diffusive scaling: for eps = 1/m^2 the parabolic rescaling
//   u^eps(x,t) = (1/sqrt(eps)) u(x/sqrt(eps), t/eps),  E^eps = (1/eps) E(...)
// maps the unit-dielectric system onto the eps-system. Spatially this is the
// mode re-indexing k -> m k with the amplitude factors above.
// ---------------------------------------------------------------------------

inline int scaling_factor_of(double eps) {
  const double m_real = 1.0 / std::sqrt(eps);
  const int m = static_cast<int>(std::lround(m_real));
  if (m < 1 || std::abs(1.0 / (double(m) * m) - eps) > 1e-12 * eps) {
    throw std::invalid_argument(
        "diffusive_scaling: eps must equal 1/m^2 for integer m");
  }
  return m;
}

namespace detail {
inline ScalarField2D rescale_modes(const ScalarField2D& f, int m, double amp) {
  const Grid& g = f.grid();
  const int n = g.n();
  const int kc = g.dealias_cutoff();
  ScalarField2D out(g);
  // Coefficients at relative roundoff level are transform noise, not content;
  // carrying them through the re-indexing would spuriously trip the band
  // limit guard.
  double fmax = 0.0;
  for (const auto& c : f.coeffs()) fmax = std::max(fmax, std::abs(c));
  const double floor_abs = 1e-14 * fmax;
  for (int j1 = 0; j1 < n; ++j1) {
    const int k1 = g.wavenumber(j1);
    for (int j2 = 0; j2 < n; ++j2) {
      const int k2 = g.wavenumber(j2);
      const auto c = f.coeffs()[static_cast<size_t>(j1) * n + j2];
      if (std::abs(c) <= floor_abs) continue;
      const int mk = std::max(std::abs(m * k1), std::abs(m * k2));
      if (mk > kc) {
        throw std::invalid_argument(
            "diffusive_scaling: scaled mode exceeds the band limit");
      }
      out.set_mode_raw(m * k1, m * k2, amp * c);
    }
  }
  return out;
}

inline Field3 rescale_modes(const Field3& v, int m, double amp) {
  return {rescale_modes(v.c1, m, amp), rescale_modes(v.c2, m, amp),
          rescale_modes(v.c3, m, amp)};
}
}  // namespace detail

// Input: a state of the unit-dielectric system at time s. Output: the scaled
// state of the eps-system at time t = eps*s (the time contract t -> t/eps is
// recorded in the returned state's clock).
inline NsmState diffusive_scaling(const NsmState& base, double eps) {
  const int m = scaling_factor_of(eps);
  const double amp_ub = std::sqrt(1.0 / eps);  // = m
  const double amp_e = 1.0 / eps;              // = m^2
  return {detail::rescale_modes(base.u, m, amp_ub),
          detail::rescale_modes(base.B, m, amp_ub),
          detail::rescale_modes(base.E, m, amp_e),
          eps,
          eps * base.t,
          base.nu};
}

}  // namespace nsmx

#endif
