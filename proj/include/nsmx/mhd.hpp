// SPDX-License-Identifier: Apache-2.0

#ifndef NSMX_MHD_HPP
#define NSMX_MHD_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nsmx/field3.hpp"

namespace nsmx {

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Exact diffusion propagator: multiply the coefficient at k by
// exp(-nu |k|^2 dt), componentwise.
inline void apply_heat_factor(ScalarField2D& f, double nu, double dt) {
  const Grid& g = f.grid();
  const int n = g.n();
  auto& c = f.coeffs();
  for (int j1 = 0; j1 < n; ++j1) {
    const double k1 = g.wavenumber(j1);
    for (int j2 = 0; j2 < n; ++j2) {
      const double k2 = g.wavenumber(j2);
      c[static_cast<size_t>(j1) * n + j2] *=
          std::exp(-nu * (k1 * k1 + k2 * k2) * dt);
    }
  }
}

inline void apply_heat_factor(Field3& v, double nu, double dt) {
  apply_heat_factor(v.c1, nu, dt);
  apply_heat_factor(v.c2, nu, dt);
  apply_heat_factor(v.c3, nu, dt);
}

// Advective CFL bound: dt <= 0.5 h / max(|u|_inf, |B|_inf, 1).
inline double cfl_limit(const Field3& u, const Field3& B) {
  const double speed = std::max({linf_norm(u), linf_norm(B), 1.0});
  return 0.5 * u.grid().spacing() / speed;
}

struct MhdState {
  Field3 u;
  Field3 B;
  double t = 0.0;
  double nu = 1.0;
  double mu = 1.0;
};

namespace detail {
inline void check_state_invariants(const Field3& u, const Field3& B,
                                   double tol = 1e-9) {
  if (l2_norm(divergence(u)) > tol || l2_norm(divergence(B)) > tol) {
    throw std::invalid_argument("state invariant violated: nonzero divergence");
  }
  if (std::abs(mean_value(u.c1)) > tol || std::abs(mean_value(u.c2)) > tol ||
      std::abs(mean_value(B.c1)) > tol || std::abs(mean_value(B.c2)) > tol) {
    throw std::invalid_argument("state invariant violated: nonzero mean");
  }
}
}  // namespace detail

// Full right-hand side of the MHD system with pressure eliminated:
//   du = P[nu lap u - (u.grad)u + (B.grad)B]
//   dB = mu lap B - (u.grad)B + (B.grad)u   (projected defensively)
inline std::pair<Field3, Field3> mhd_rhs(const MhdState& s) {
  detail::check_state_invariants(s.u, s.B);
  Field3 du = leray_project(s.nu * laplacian(s.u) - advect(s.u, s.u) +
                            advect(s.B, s.B));
  Field3 dB = leray_project(s.mu * laplacian(s.B) - advect(s.u, s.B) +
                            advect(s.B, s.u));
  pin_zero_mean(du);
  pin_zero_mean(dB);
  return {std::move(du), std::move(dB)};
}

namespace detail {
// Nonlinear (advection) part only; diffusion is handled by the exact
// integrating factor in step_mhd.
inline std::pair<Field3, Field3> mhd_nonlinear(const Field3& u, const Field3& B) {
  Field3 du = leray_project(advect(B, B) - advect(u, u));
  Field3 dB = leray_project(advect(B, u) - advect(u, B));
  pin_zero_mean(du);
  pin_zero_mean(dB);
  return {std::move(du), std::move(dB)};
}
}  // namespace detail

// One step of the integrating-factor midpoint scheme (IF-RK2): diffusion is
// exact per mode, the advective terms are advanced with an explicit
// two-stage midpoint rule in the transformed variable. Order 2 in dt.
inline MhdState step_mhd(const MhdState& s, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("step_mhd: dt must be positive");
  if (dt > cfl_limit(s.u, s.B)) {
    throw SolverError("step_mhd: CFL violation at t=" + std::to_string(s.t));
  }

  auto [k1u, k1B] = detail::mhd_nonlinear(s.u, s.B);

  Field3 um = s.u + (0.5 * dt) * k1u;
  Field3 Bm = s.B + (0.5 * dt) * k1B;
  apply_heat_factor(um, s.nu, 0.5 * dt);
  apply_heat_factor(Bm, s.mu, 0.5 * dt);

  auto [k2u, k2B] = detail::mhd_nonlinear(um, Bm);
  apply_heat_factor(k2u, s.nu, 0.5 * dt);
  apply_heat_factor(k2B, s.mu, 0.5 * dt);

  Field3 un = s.u;
  Field3 Bn = s.B;
  apply_heat_factor(un, s.nu, dt);
  apply_heat_factor(Bn, s.mu, dt);
  un += dt * k2u;
  Bn += dt * k2B;

  un = leray_project(un);
  Bn = leray_project(Bn);
  pin_zero_mean(un);
  pin_zero_mean(Bn);

  if (!all_finite(un) || !all_finite(Bn)) {
    throw SolverError("step_mhd: NaN detected at t=" + std::to_string(s.t));
  }
  return {std::move(un), std::move(Bn), s.t + dt, s.nu, s.mu};
}

// Integrates to t_end with fixed dt, sampling every sample_every steps.
// The returned trajectory always includes the initial and final states.
inline std::vector<MhdState> run_mhd(const MhdState& s0, double t_end,
                                     double dt, int sample_every) {
  if (t_end < 0.0) throw std::invalid_argument("run_mhd: t_end must be >= 0");
  if (sample_every < 1) throw std::invalid_argument("run_mhd: sample_every >= 1");
  std::vector<MhdState> out;
  out.push_back(s0);
  if (t_end == 0.0) return out;
  const long steps = std::lround(t_end / dt);
  MhdState s = s0;
  for (long i = 1; i <= steps; ++i) {
    s = step_mhd(s, dt);
    if (i % sample_every == 0 || i == steps) out.push_back(s);
  }
  return out;
}

}  // namespace nsmx

#endif
