// SPDX-License-Identifier: Apache-2.0

#ifndef NSMX_SPECTRAL_HPP
#define NSMX_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>

#include "nsmx/scalar_field.hpp"

namespace nsmx {

// Exact spectral derivative along axis 1 or 2: c_k -> i*k_axis*c_k.
inline ScalarField2D ddx(const ScalarField2D& f, int axis) {
  if (axis != 1 && axis != 2) throw std::invalid_argument("ddx: axis must be 1 or 2");
  const Grid& g = f.grid();
  const int n = g.n();
  ScalarField2D out(g);
  auto& oc = out.coeffs();
  const auto& fc = f.coeffs();
  for (int j1 = 0; j1 < n; ++j1) {
    const int k1 = g.wavenumber(j1);
    for (int j2 = 0; j2 < n; ++j2) {
      const int k2 = g.wavenumber(j2);
      const double k = axis == 1 ? k1 : k2;
      oc[static_cast<size_t>(j1) * n + j2] =
          std::complex<double>(0.0, k) * fc[static_cast<size_t>(j1) * n + j2];
    }
  }
  return out;
}

inline ScalarField2D laplacian(const ScalarField2D& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  ScalarField2D out(g);
  auto& oc = out.coeffs();
  const auto& fc = f.coeffs();
  for (int j1 = 0; j1 < n; ++j1) {
    const double k1 = g.wavenumber(j1);
    for (int j2 = 0; j2 < n; ++j2) {
      const double k2 = g.wavenumber(j2);
      oc[static_cast<size_t>(j1) * n + j2] =
          -(k1 * k1 + k2 * k2) * fc[static_cast<size_t>(j1) * n + j2];
    }
  }
  return out;
}

// 2/3-rule square truncation: zero every mode with max(|k1|,|k2|) > n/3.
inline ScalarField2D dealias(const ScalarField2D& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  const int kc = g.dealias_cutoff();
  ScalarField2D out = f;
  auto& oc = out.coeffs();
  for (int j1 = 0; j1 < n; ++j1) {
    const int k1 = g.wavenumber(j1);
    for (int j2 = 0; j2 < n; ++j2) {
      const int k2 = g.wavenumber(j2);
      if (std::max(std::abs(k1), std::abs(k2)) > kc) {
        oc[static_cast<size_t>(j1) * n + j2] = 0.0;
      }
    }
  }
  return out;
}

inline double mean_value(const ScalarField2D& f) { return f.mode(0, 0).real(); }

// L2 inner product on [0,2pi)^2 via Parseval.
inline double inner(const ScalarField2D& f, const ScalarField2D& g) {
  require_same_grid(f.grid(), g.grid());
  double s = 0.0;
  const auto& fc = f.coeffs();
  const auto& gc = g.coeffs();
  for (size_t i = 0; i < fc.size(); ++i) {
    s += (fc[i] * std::conj(gc[i])).real();
  }
  return two_pi * two_pi * s;
}

// Integral of f^2 over the torus (squared L2 norm).
inline double sq_l2(const ScalarField2D& f) {
  double s = 0.0;
  for (const auto& c : f.coeffs()) s += std::norm(c);
  return two_pi * two_pi * s;
}

// Integral of |grad f|^2.
inline double sq_grad(const ScalarField2D& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  const auto& fc = f.coeffs();
  double s = 0.0;
  for (int j1 = 0; j1 < n; ++j1) {
    const double k1 = g.wavenumber(j1);
    for (int j2 = 0; j2 < n; ++j2) {
      const double k2 = g.wavenumber(j2);
      s += (k1 * k1 + k2 * k2) * std::norm(fc[static_cast<size_t>(j1) * n + j2]);
    }
  }
  return two_pi * two_pi * s;
}

// Integral of (lap f)^2.
inline double sq_lap(const ScalarField2D& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  const auto& fc = f.coeffs();
  double s = 0.0;
  for (int j1 = 0; j1 < n; ++j1) {
    const double k1 = g.wavenumber(j1);
    for (int j2 = 0; j2 < n; ++j2) {
      const double k2 = g.wavenumber(j2);
      const double ksq = k1 * k1 + k2 * k2;
      s += ksq * ksq * std::norm(fc[static_cast<size_t>(j1) * n + j2]);
    }
  }
  return two_pi * two_pi * s;
}

inline double l2_norm(const ScalarField2D& f) { return std::sqrt(sq_l2(f)); }

// Inhomogeneous Sobolev norms (the L2 part is always included).
inline double h1_norm(const ScalarField2D& f) {
  return std::sqrt(sq_l2(f) + sq_grad(f));
}
inline double h2_norm(const ScalarField2D& f) {
  return std::sqrt(sq_l2(f) + sq_lap(f));
}

// Max over collocation points; a lower bound of the true sup norm.
inline double linf_norm(const ScalarField2D& f) {
  double m = 0.0;
  for (double v : f.to_physical()) m = std::max(m, std::abs(v));
  return m;
}

// Pointwise product computed in physical space, dealiased.
inline ScalarField2D multiply(const ScalarField2D& f, const ScalarField2D& g) {
  require_same_grid(f.grid(), g.grid());
  auto fv = f.to_physical();
  const auto gv = g.to_physical();
  for (size_t i = 0; i < fv.size(); ++i) fv[i] *= gv[i];
  return dealias(ScalarField2D::from_physical(f.grid(), fv));
}

}  // namespace nsmx

#endif
