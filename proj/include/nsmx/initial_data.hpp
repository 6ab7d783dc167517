// SPDX-License-Identifier: Apache-2.0

#ifndef NSMX_INITIAL_DATA_HPP
#define NSMX_INITIAL_DATA_HPP

#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "nsmx/nsm.hpp"

namespace nsmx {

struct IcParams {
  std::string name = "taylor-green-mhd";
  double amplitude = 1.0;
  unsigned long seed = 0;
  double decay_rate = 4.0;  // random-smooth spectrum |k|^{-decay_rate}
};

namespace detail {

inline Field3 stream_velocity(const ScalarField2D& psi) {
  ScalarField2D zero(psi.grid());
  return {-1.0 * ddx(psi, 2), ddx(psi, 1), zero};
}

inline ScalarField2D random_stream(Grid g, unsigned long seed, double decay) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, two_pi);
  ScalarField2D psi(g);
  const int kc = g.dealias_cutoff();
  // iterate one half-plane; set_mode fills the conjugate partner
  for (int k1 = 0; k1 <= kc; ++k1) {
    for (int k2 = (k1 == 0 ? 1 : -kc); k2 <= kc; ++k2) {
      const double kmag = std::sqrt(double(k1) * k1 + double(k2) * k2);
      // velocity ~ |k| psi, so shape psi as |k|^{-(decay+1)}
      const double a = 0.5 * std::pow(kmag, -(decay + 1.0));
      const double th = phase(rng);
      psi.set_mode(k1, k2, std::polar(a, th));
    }
  }
  return psi;
}

}  // namespace detail

// Named planar, divergence-free, zero-mean test problems.
inline std::pair<Field3, Field3> standard_ic(const IcParams& p, Grid g) {
  if (p.name == "taylor-green-mhd") {
    auto psi_u = ScalarField2D::from_function(
        g, [&](double x1, double x2) { return p.amplitude * std::sin(x1) * std::sin(x2); });
    // same pattern shifted by pi/2 in x1
    auto psi_b = ScalarField2D::from_function(
        g, [&](double x1, double x2) { return p.amplitude * std::cos(x1) * std::sin(x2); });
    return {detail::stream_velocity(psi_u), detail::stream_velocity(psi_b)};
  }
  if (p.name == "orszag-tang-like") {
    ScalarField2D zero(g);
    Field3 u(ScalarField2D::from_function(
                 g, [&](double, double x2) { return -p.amplitude * std::sin(x2); }),
             ScalarField2D::from_function(
                 g, [&](double x1, double) { return p.amplitude * std::sin(x1); }),
             zero);
    Field3 B(ScalarField2D::from_function(
                 g, [&](double, double x2) { return -p.amplitude * std::sin(x2); }),
             ScalarField2D::from_function(
                 g, [&](double x1, double) { return p.amplitude * std::sin(2.0 * x1); }),
             zero);
    return {std::move(u), std::move(B)};
  }
  if (p.name == "random-smooth") {
    Field3 u = detail::stream_velocity(
        p.amplitude * detail::random_stream(g, p.seed, p.decay_rate));
    Field3 B = detail::stream_velocity(
        p.amplitude * detail::random_stream(g, p.seed + 1, p.decay_rate));
    return {std::move(u), std::move(B)};
  }
  throw std::invalid_argument("standard_ic: unknown name '" + p.name + "'");
}

// Sharp spectral truncation at mode radius |k| > cutoff.
inline ScalarField2D mollify(const ScalarField2D& f, int cutoff) {
  const Grid& g = f.grid();
  if (cutoff > g.dealias_cutoff()) {
    throw std::invalid_argument("mollify: cutoff exceeds the band limit");
  }
  ScalarField2D out = f;
  const int n = g.n();
  auto& c = out.coeffs();
  for (int j1 = 0; j1 < n; ++j1) {
    const double k1 = g.wavenumber(j1);
    for (int j2 = 0; j2 < n; ++j2) {
      const double k2 = g.wavenumber(j2);
      if (k1 * k1 + k2 * k2 > double(cutoff) * cutoff) {
        c[static_cast<size_t>(j1) * n + j2] = 0.0;
      }
    }
  }
  return out;
}

inline Field3 mollify(const Field3& v, int cutoff) {
  return {mollify(v.c1, cutoff), mollify(v.c2, cutoff), mollify(v.c3, cutoff)};
}

// Initial dtB from the induction equation: mu lap B0 - (u0.grad)B0 + (B0.grad)u0.
inline Field3 dtB_at_zero(const Field3& u0, const Field3& B0, double mu) {
  detail::check_state_invariants(u0, B0);
  Field3 d = leray_project(mu * laplacian(B0) - advect(u0, B0) + advect(B0, u0));
  pin_zero_mean(d);
  return d;
}

// Solves curl E0 = -dtB0 in the gauge E0 = (0,0,e3), mean(e3) = 0:
//   e3(k) = i (k2 d1(k) - k1 d2(k)) / |k|^2.
inline Field3 solve_E0(const Field3& dtB0) {
  const Grid& g = dtB0.grid();
  const double tol = 1e-8;
  if (std::abs(mean_value(dtB0.c1)) > tol || std::abs(mean_value(dtB0.c2)) > tol) {
    throw std::invalid_argument("solve_E0: dtB0 must have zero mean");
  }
  if (l2_norm(divergence(dtB0)) > tol) {
    throw std::invalid_argument("solve_E0: dtB0 must be divergence-free");
  }
  const int n = g.n();
  ScalarField2D e3(g);
  const std::complex<double> I(0.0, 1.0);
  for (int j1 = 0; j1 < n; ++j1) {
    const int k1 = g.wavenumber(j1);
    for (int j2 = 0; j2 < n; ++j2) {
      const int k2 = g.wavenumber(j2);
      const double ksq = double(k1) * k1 + double(k2) * k2;
      if (ksq == 0.0) continue;
      const size_t i = static_cast<size_t>(j1) * n + j2;
      e3.coeffs()[i] = I *
          (double(k2) * dtB0.c1.coeffs()[i] - double(k1) * dtB0.c2.coeffs()[i]) /
          ksq;
    }
  }
  ScalarField2D zero(g);
  return {zero, zero, std::move(e3)};
}

struct PreparedState {
  NsmState state;
  // margin of the smallness threshold C/sqrt(eps) - (|u0|_inf + |B0|_inf);
  // negative margins are recorded as warnings, never failures
  double smallness_margin;
  bool threshold_ok;
};

// Proof-style pipeline: mollify (u0,B0) once, build the well-prepared E0
// from the induction equation, and instantiate one NSM state per eps.
inline std::vector<PreparedState> prepare_family(const Field3& u0,
                                                 const Field3& B0,
                                                 const std::vector<double>& eps_list,
                                                 int cutoff, double mu = 1.0,
                                                 double threshold_c = 1.0) {
  Field3 u0m = mollify(u0, cutoff);
  Field3 B0m = mollify(B0, cutoff);
  // E0 is not re-mollified: it must invert the induction tendency of the
  // mollified pair exactly, and that tendency carries quadratic products
  // beyond the mollification radius (they are already dealiased).
  Field3 E0 = solve_E0(dtB_at_zero(u0m, B0m, mu));
  const double linf_sum = linf_norm(u0m) + linf_norm(B0m);

  std::vector<PreparedState> out;
  out.reserve(eps_list.size());
  for (double eps : eps_list) {
    const double margin = threshold_c / std::sqrt(eps) - linf_sum;
    out.push_back({NsmState{u0m, B0m, E0, eps, 0.0, 1.0}, margin, margin >= 0.0});
  }
  return out;
}

}  // namespace nsmx

#endif
