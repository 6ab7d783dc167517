// SPDX-License-Identifier: Apache-2.0

#ifndef NSMX_FIELD3_HPP
#define NSMX_FIELD3_HPP

#include <array>
#include <cmath>

#include "nsmx/spectral.hpp"

namespace nsmx {

// Three-component vector field with no x3 dependence (the planar "2.5D"
// embedding that makes cross products well defined in 2D).
struct Field3 {
  ScalarField2D c1, c2, c3;

  explicit Field3(Grid g) : c1(g), c2(g), c3(g) {}
  Field3(ScalarField2D a, ScalarField2D b, ScalarField2D c)
      : c1(std::move(a)), c2(std::move(b)), c3(std::move(c)) {
    require_same_grid(c1.grid(), c2.grid());
    require_same_grid(c1.grid(), c3.grid());
  }

  const Grid& grid() const { return c1.grid(); }

  Field3& operator+=(const Field3& o) {
    c1 += o.c1;
    c2 += o.c2;
    c3 += o.c3;
    return *this;
  }
  Field3& operator-=(const Field3& o) {
    c1 -= o.c1;
    c2 -= o.c2;
    c3 -= o.c3;
    return *this;
  }
  Field3& operator*=(double s) {
    c1 *= s;
    c2 *= s;
    c3 *= s;
    return *this;
  }
  friend Field3 operator+(Field3 a, const Field3& b) { a += b; return a; }
  friend Field3 operator-(Field3 a, const Field3& b) { a -= b; return a; }
  friend Field3 operator*(double s, Field3 a) { a *= s; return a; }
  friend Field3 operator*(Field3 a, double s) { a *= s; return a; }
};

inline double sq_l2(const Field3& v) {
  return sq_l2(v.c1) + sq_l2(v.c2) + sq_l2(v.c3);
}
inline double sq_grad(const Field3& v) {
  return sq_grad(v.c1) + sq_grad(v.c2) + sq_grad(v.c3);
}
inline double sq_lap(const Field3& v) {
  return sq_lap(v.c1) + sq_lap(v.c2) + sq_lap(v.c3);
}
inline double l2_norm(const Field3& v) { return std::sqrt(sq_l2(v)); }
inline double h1_norm(const Field3& v) {
  return std::sqrt(sq_l2(v) + sq_grad(v));
}

inline double inner(const Field3& a, const Field3& b) {
  return inner(a.c1, b.c1) + inner(a.c2, b.c2) + inner(a.c3, b.c3);
}

// Max over collocation points of the Euclidean magnitude |v(x)|.
inline double linf_norm(const Field3& v) {
  const auto p1 = v.c1.to_physical();
  const auto p2 = v.c2.to_physical();
  const auto p3 = v.c3.to_physical();
  double m = 0.0;
  for (size_t i = 0; i < p1.size(); ++i) {
    m = std::max(m, p1[i] * p1[i] + p2[i] * p2[i] + p3[i] * p3[i]);
  }
  return std::sqrt(m);
}

inline Field3 laplacian(const Field3& v) {
  return {laplacian(v.c1), laplacian(v.c2), laplacian(v.c3)};
}

inline Field3 dealias(const Field3& v) {
  return {dealias(v.c1), dealias(v.c2), dealias(v.c3)};
}

inline ScalarField2D divergence(const Field3& v) {
  return ddx(v.c1, 1) + ddx(v.c2, 2);
}

// Pointwise cross product, dealiased componentwise.
inline Field3 cross(const Field3& a, const Field3& b) {
  require_same_grid(a.grid(), b.grid());
  return {multiply(a.c2, b.c3) - multiply(a.c3, b.c2),
          multiply(a.c3, b.c1) - multiply(a.c1, b.c3),
          multiply(a.c1, b.c2) - multiply(a.c2, b.c1)};
}

// Reduced curl for fields with no x3 dependence:
// curl E = (d2 E3, -d1 E3, d1 E2 - d2 E1).
inline Field3 curl25(const Field3& e) {
  return {ddx(e.c3, 2), -1.0 * ddx(e.c3, 1), ddx(e.c2, 1) - ddx(e.c1, 2)};
}

// (u.grad) f with no d3 term; products dealiased.
inline Field3 advect(const Field3& u, const Field3& f) {
  require_same_grid(u.grid(), f.grid());
  auto comp = [&](const ScalarField2D& fc) {
    return multiply(u.c1, ddx(fc, 1)) + multiply(u.c2, ddx(fc, 2));
  };
  return {comp(f.c1), comp(f.c2), comp(f.c3)};
}

// Ohm's law with unit conductivity: j = E + u x B.
inline Field3 ohm_current(const Field3& u, const Field3& B, const Field3& E) {
  return E + cross(u, B);
}

// Per-mode projection of the in-plane part onto divergence-free fields;
// the third component is already divergence-free and passes through.
// The k=0 mode is unchanged.
inline Field3 leray_project(const Field3& v) {
  const Grid& g = v.grid();
  const int n = g.n();
  Field3 out = v;
  auto& a = out.c1.coeffs();
  auto& b = out.c2.coeffs();
  for (int j1 = 0; j1 < n; ++j1) {
    const double k1 = g.wavenumber(j1);
    for (int j2 = 0; j2 < n; ++j2) {
      const double k2 = g.wavenumber(j2);
      const double ksq = k1 * k1 + k2 * k2;
      if (ksq == 0.0) continue;
      const size_t i = static_cast<size_t>(j1) * n + j2;
      const auto dot = (k1 * a[i] + k2 * b[i]) / ksq;
      a[i] -= k1 * dot;
      b[i] -= k2 * dot;
    }
  }
  return out;
}

// Zeroes the k=0 mode of the in-plane components.
inline void pin_zero_mean(Field3& v) {
  v.c1.set_mode(0, 0, 0.0);
  v.c2.set_mode(0, 0, 0.0);
  v.c3.set_mode(0, 0, 0.0);
}

inline bool is_planar(const Field3& v, double tol = 1e-14) {
  return l2_norm(v.c3) <= tol;
}

inline bool all_finite(const Field3& v) {
  for (const auto* f : {&v.c1, &v.c2, &v.c3}) {
    for (const auto& c : f->coeffs()) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    }
  }
  return true;
}

}  // namespace nsmx

#endif
