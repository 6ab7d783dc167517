// SPDX-License-Identifier: Apache-2.0

#ifndef NSMX_DIAGNOSTICS_HPP
#define NSMX_DIAGNOSTICS_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nsmx/nsm.hpp"

namespace nsmx {

// One time-sample of every functional and norm the run tracks.
struct EnergyReport {
  double t = 0.0;
  double e_classical = 0.0;  // int |u|^2 + |B|^2 + eps|E|^2
  double dissipation = 0.0;  // int |grad u|^2 + |j|^2
  double e1 = 0.0;
  double d1 = 0.0;
  double e2 = 0.0;
  double d2 = 0.0;
  double linf_u = 0.0;
  double linf_B = 0.0;
  double smallness_margin = 0.0;  // C/sqrt(eps) - (linf_u + linf_B)
  double div_u_l2 = 0.0;
  double div_B_l2 = 0.0;
  double third_u_l2 = 0.0;
  double third_B_l2 = 0.0;
  double ampere_residual = 0.0;  // |curl B - j|_2
  double mean_E = 0.0;           // |mean vector of E|
};

// --- first-order energy functionals (printed integrands, dtB/dtE from the
// equations) ---

inline double functional_E1(const NsmState& s, const DerivedFields& d,
                            std::optional<double> eps_override = {}) {
  const double eps = eps_override.value_or(s.eps);
  return 0.5 * sq_l2(s.u) + 0.5 * sq_l2(s.B + (2.0 * eps) * d.dtB) +
         3.0 * eps * sq_grad(s.B) + eps * eps * sq_l2(d.dtB) +
         0.5 * eps * sq_l2(s.E);
}

inline double functional_D1(const NsmState& s, const DerivedFields& d,
                            std::optional<double> eps_override = {}) {
  const double eps = eps_override.value_or(s.eps);
  return eps * eps * sq_l2(d.dtE) + 0.5 * sq_grad(s.u) + 0.5 * sq_grad(s.B) +
         eps * sq_l2(d.dtB);
}

inline double functional_E1(const NsmState& s) {
  return functional_E1(s, derived_fields(s));
}
inline double functional_D1(const NsmState& s) {
  return functional_D1(s, derived_fields(s));
}

// --- second-order functionals; dt(grad u) comes from the projected momentum
// tendency ---

inline double functional_E2(const NsmState& s, const DerivedFields& d) {
  const double eps = s.eps;
  return 0.5 * sq_grad(s.u) + 0.5 * eps * sq_lap(s.u) +
         0.5 * sq_grad(s.B + (2.0 * eps) * d.dtB) + 3.0 * eps * sq_lap(s.B) +
         eps * eps * sq_grad(d.dtB) + 0.5 * eps * sq_grad(s.E);
}

inline double functional_D2(const NsmState& s, const DerivedFields& d) {
  const auto [du, dB, dE] = nsm_rhs(s);
  (void)dB;
  (void)dE;
  const double eps = s.eps;
  return 0.25 * (sq_lap(s.u) + sq_lap(s.B) + eps * sq_grad(du) +
                 eps * eps * sq_grad(d.dtE));
}

inline double functional_E2(const NsmState& s) {
  return functional_E2(s, derived_fields(s));
}
inline double functional_D2(const NsmState& s) {
  return functional_D2(s, derived_fields(s));
}

inline EnergyReport energy_report(const NsmState& s, double threshold_c = 1.0) {
  const DerivedFields d = derived_fields(s);
  EnergyReport r;
  r.t = s.t;
  r.e_classical = sq_l2(s.u) + sq_l2(s.B) + s.eps * sq_l2(s.E);
  r.dissipation = sq_grad(s.u) + sq_l2(d.j);
  r.e1 = functional_E1(s, d);
  r.d1 = functional_D1(s, d);
  r.e2 = functional_E2(s, d);
  r.d2 = functional_D2(s, d);
  r.linf_u = linf_norm(s.u);
  r.linf_B = linf_norm(s.B);
  r.smallness_margin = threshold_c / std::sqrt(s.eps) - (r.linf_u + r.linf_B);
  r.div_u_l2 = l2_norm(divergence(s.u));
  r.div_B_l2 = l2_norm(divergence(s.B));
  r.third_u_l2 = l2_norm(s.u.c3);
  r.third_B_l2 = l2_norm(s.B.c3);
  r.ampere_residual = l2_norm(curl25(s.B) - d.j);
  const double m1 = mean_value(s.E.c1), m2 = mean_value(s.E.c2),
               m3 = mean_value(s.E.c3);
  r.mean_E = std::sqrt(m1 * m1 + m2 * m2 + m3 * m3);
  return r;
}

// MHD reference runs are reported through the same columns in the eps -> 0
// limit: E = 0, eps = 0, j = curl B.
inline EnergyReport energy_report(const MhdState& s) {
  EnergyReport r;
  r.t = s.t;
  r.e_classical = sq_l2(s.u) + sq_l2(s.B);
  Field3 j = curl25(s.B);
  r.dissipation = sq_grad(s.u) + sq_l2(j);
  r.e1 = 0.5 * sq_l2(s.u) + 0.5 * sq_l2(s.B);
  r.d1 = 0.5 * sq_grad(s.u) + 0.5 * sq_grad(s.B);
  r.e2 = 0.5 * sq_grad(s.u) + 0.5 * sq_grad(s.B);
  r.d2 = 0.25 * (sq_lap(s.u) + sq_lap(s.B));
  r.linf_u = linf_norm(s.u);
  r.linf_B = linf_norm(s.B);
  r.smallness_margin = std::numeric_limits<double>::infinity();
  r.div_u_l2 = l2_norm(divergence(s.u));
  r.div_B_l2 = l2_norm(divergence(s.B));
  r.third_u_l2 = l2_norm(s.u.c3);
  r.third_B_l2 = l2_norm(s.B.c3);
  r.ampere_residual = 0.0;
  r.mean_E = 0.0;
  return r;
}

// --- differential-inequality monitors ---

enum class IntervalStatus { satisfied, violated, not_applicable };

struct IntervalCheck {
  double t0, t1;
  double lhs;    // dE/dt + D estimate for the interval
  double slack;  // admissible tolerance
  IntervalStatus status;
};

// Differential-inequality monitor for dE1/dt + D1 <= 0 under the smallness condition
// |u|_inf + |B|_inf <= C1/sqrt(eps). Intervals where the condition fails at
// either endpoint are marked not_applicable.
inline std::vector<IntervalCheck> check_lemma_e1(
    const std::vector<EnergyReport>& samples, double c1 = 1.0,
    double tol_abs = 1e-6, double tol_rel = 1e-2) {
  if (samples.size() < 2) {
    throw std::invalid_argument("check_lemma_e1: need at least 2 samples");
  }
  std::vector<IntervalCheck> out;
  for (size_t i = 0; i + 1 < samples.size(); ++i) {
    const auto& a = samples[i];
    const auto& b = samples[i + 1];
    const double dt = b.t - a.t;
    const double d1_mean = 0.5 * (a.d1 + b.d1);
    const double lhs = (b.e1 - a.e1) / dt + d1_mean;
    const double slack = tol_abs + tol_rel * d1_mean;
    IntervalCheck c{a.t, b.t, lhs, slack, IntervalStatus::satisfied};
    // smallness_margin already encodes C/sqrt(eps) - (linf_u + linf_B) with
    // the run's threshold constant
    auto holds = [&](const EnergyReport& r) { return r.smallness_margin >= 0.0; };
    (void)c1;
    if (!holds(a) || !holds(b)) {
      c.status = IntervalStatus::not_applicable;
    } else if (lhs > slack) {
      c.status = IntervalStatus::violated;
    }
    out.push_back(c);
  }
  return out;
}

// Monitor for the inequality dE2/dt + D2 <= C (1+E1) D1 E2; the constant is
// unquantified, so the report emits the implied per-interval ratio and the
// caller asserts only boundedness over the run.
struct RatioCheck {
  double t0, t1;
  double ratio;  // implied constant C-hat for the interval
  IntervalStatus status;
};

inline std::vector<RatioCheck> check_lemma_e2(
    const std::vector<EnergyReport>& samples) {
  if (samples.size() < 2) {
    throw std::invalid_argument("check_lemma_e2: need at least 2 samples");
  }
  std::vector<RatioCheck> out;
  for (size_t i = 0; i + 1 < samples.size(); ++i) {
    const auto& a = samples[i];
    const auto& b = samples[i + 1];
    const double dt = b.t - a.t;
    const double lhs = std::max(0.0, (b.e2 - a.e2) / dt + 0.5 * (a.d2 + b.d2));
    const double denom = (1.0 + 0.5 * (a.e1 + b.e1)) * 0.5 * (a.d1 + b.d1) *
                         0.5 * (a.e2 + b.e2);
    RatioCheck c{a.t, b.t, 0.0, IntervalStatus::satisfied};
    auto holds = [&](const EnergyReport& r) { return r.smallness_margin >= 0.0; };
    if (!holds(a) || !holds(b) || denom <= 1e-300) {
      c.status = IntervalStatus::not_applicable;
    } else {
      c.ratio = lhs / denom;
    }
    out.push_back(c);
  }
  return out;
}

// --- classical energy balance (the differential equality) ---

// Per-interval residual of d/dt(int |u|^2+|B|^2+eps|E|^2) =
// -2 int |grad u|^2 + |j|^2, from sampled values.
inline std::vector<double> energy_balance_residual(
    const std::vector<EnergyReport>& samples) {
  if (samples.size() < 2) {
    throw std::invalid_argument("energy_balance_residual: need >= 2 samples");
  }
  std::vector<double> out;
  for (size_t i = 0; i + 1 < samples.size(); ++i) {
    const auto& a = samples[i];
    const auto& b = samples[i + 1];
    const double dt = b.t - a.t;
    out.push_back((b.e_classical - a.e_classical) / dt +
                  2.0 * 0.5 * (a.dissipation + b.dissipation));
  }
  return out;
}

// --- vanishing singular terms (weak-form diagnostics) ---

// Fixed default test functions: a divergence-free planar phi (stream
// function sin x1 sin x2) and a smooth planar psi. Both live on the
// (1,+-1) wavenumbers so they pair with the energy-carrying modes of the
// stock initial data instead of vanishing by parity.
inline Field3 default_phi(Grid g) {
  ScalarField2D zero(g);
  return {ScalarField2D::from_function(
              g, [](double x1, double x2) { return -std::sin(x1) * std::cos(x2); }),
          ScalarField2D::from_function(
              g, [](double x1, double x2) { return std::cos(x1) * std::sin(x2); }),
          zero};
}

inline Field3 default_psi(Grid g) {
  ScalarField2D zero(g);
  return {ScalarField2D::from_function(
              g, [](double x1, double x2) { return -std::cos(x1) * std::cos(x2); }),
          ScalarField2D::from_function(
              g, [](double x1, double x2) { return -std::sin(x1) * std::sin(x2); }),
          zero};
}

// Time-trapezoid of eps*int (dtE x B).phi and eps*int dttB.psi along a
// uniformly sampled trajectory; returns the two magnitudes.
inline std::pair<double, double> vanishing_terms(
    const std::vector<NsmState>& traj, const Field3& phi, const Field3& psi) {
  if (traj.size() < 2) {
    throw std::invalid_argument("vanishing_terms: need >= 2 samples");
  }
  require_same_grid(traj[0].u.grid(), phi.grid());
  require_same_grid(traj[0].u.grid(), psi.grid());
  std::vector<double> i1, i2;
  for (const auto& s : traj) {
    const DerivedFields d = derived_fields(s);
    i1.push_back(s.eps * inner(cross(d.dtE, s.B), phi));
    i2.push_back(s.eps * inner(d.dttB, psi));
  }
  double t1 = 0.0, t2 = 0.0;
  for (size_t i = 0; i + 1 < traj.size(); ++i) {
    const double dt = traj[i + 1].t - traj[i].t;
    t1 += 0.5 * dt * (i1[i] + i1[i + 1]);
    t2 += 0.5 * dt * (i2[i] + i2[i + 1]);
  }
  return {std::abs(t1), std::abs(t2)};
}

// --- convergence metrics ---

template <class StateA, class StateB>
inline std::pair<double, double> h1_distance(const StateA& a, const StateB& b) {
  require_same_grid(a.u.grid(), b.u.grid());
  if (std::abs(a.t - b.t) > 1e-9 * std::max(1.0, std::abs(a.t))) {
    throw std::invalid_argument("h1_distance: time mismatch");
  }
  return {h1_norm(a.u - b.u), h1_norm(a.B - b.B)};
}

inline std::pair<double, double> third_component_norms(const NsmState& s) {
  return {l2_norm(s.u.c3), l2_norm(s.B.c3)};
}

struct ConvergenceRecord {
  double eps;
  double sup_t_h1_u;
  double sup_t_h1_B;
  double l2_final_u;
  double l2_final_B;
  double vanishing_term_1;
  double vanishing_term_2;
};

// Least-squares slope of log(sup-H1 distance) vs log(eps).
inline double fit_convergence_order(const std::vector<ConvergenceRecord>& recs) {
  if (recs.size() < 3) {
    throw std::invalid_argument("fit_convergence_order: need >= 3 records");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(recs.size());
  for (const auto& r : recs) {
    const double x = std::log(r.eps);
    const double y = std::log(r.sup_t_h1_u + r.sup_t_h1_B);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) {
    throw std::invalid_argument("fit_convergence_order: degenerate eps list");
  }
  return (n * sxy - sx * sy) / denom;
}

// Generic log-log slope, used for the vanishing-term magnitudes.
inline double loglog_slope(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& [x0, y0] : pts) {
    const double x = std::log(x0);
    const double y = std::log(y0);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace nsmx

#endif
