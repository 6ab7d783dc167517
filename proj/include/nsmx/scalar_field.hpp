// SPDX-License-Identifier: Apache-2.0

#ifndef NSMX_SCALAR_FIELD_HPP
#define NSMX_SCALAR_FIELD_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "nsmx/fft.hpp"
#include "nsmx/grid.hpp"

namespace nsmx {

// Real scalar function on the torus stored as its full complex Fourier
// spectrum, f(x) = sum_k c_k e^{i k.x}, with conjugate symmetry
// c_{-k} = conj(c_k). Coefficients are row-major with the second index
// fastest, matching the physical layout.
class ScalarField2D {
public:
  explicit ScalarField2D(Grid g)
      : grid_(g), coef_(static_cast<size_t>(g.size()), {0.0, 0.0}) {}

  static ScalarField2D from_physical(Grid g, const std::vector<double>& values) {
    if (static_cast<int>(values.size()) != g.size()) {
      throw std::invalid_argument("from_physical: value count != n^2");
    }
    ScalarField2D f(g);
    for (int i = 0; i < g.size(); ++i) f.coef_[i] = values[i];
    detail::workspace_for(g.n()).forward(f.coef_.data());
    const double scale = 1.0 / g.size();
    for (auto& c : f.coef_) c *= scale;
    f.enforce_conjugate_symmetry();
    return f;
  }

  template <class F>
  static ScalarField2D from_function(Grid g, F&& fn) {
    std::vector<double> v(static_cast<size_t>(g.size()));
    for (int j1 = 0; j1 < g.n(); ++j1)
      for (int j2 = 0; j2 < g.n(); ++j2)
        v[static_cast<size_t>(j1) * g.n() + j2] = fn(g.x(j1), g.x(j2));
    return from_physical(g, v);
  }

  std::vector<double> to_physical() const {
    std::vector<std::complex<double>> tmp = coef_;
    detail::workspace_for(grid_.n()).backward(tmp.data());
    std::vector<double> v(static_cast<size_t>(grid_.size()));
    for (int i = 0; i < grid_.size(); ++i) v[i] = tmp[i].real();
    return v;
  }

  const Grid& grid() const { return grid_; }

  std::complex<double> mode(int k1, int k2) const {
    return coef_[idx(k1, k2)];
  }

  // Sets the coefficient at k and its conjugate partner at -k.
  void set_mode(int k1, int k2, std::complex<double> c) {
    coef_[idx(k1, k2)] = c;
    if (grid_.index_of(-k1) != grid_.index_of(k1) ||
        grid_.index_of(-k2) != grid_.index_of(k2)) {
      coef_[idx(-k1, -k2)] = std::conj(c);
    }
  }

  // Raw single-coefficient write; caller is responsible for symmetry.
  void set_mode_raw(int k1, int k2, std::complex<double> c) {
    coef_[idx(k1, k2)] = c;
  }

  std::vector<std::complex<double>>& coeffs() { return coef_; }
  const std::vector<std::complex<double>>& coeffs() const { return coef_; }

  void enforce_conjugate_symmetry() {
    const int n = grid_.n();
    for (int j1 = 0; j1 < n; ++j1) {
      const int m1 = (n - j1) % n;
      for (int j2 = 0; j2 < n; ++j2) {
        const int m2 = (n - j2) % n;
        const size_t a = static_cast<size_t>(j1) * n + j2;
        const size_t b = static_cast<size_t>(m1) * n + m2;
        if (a > b) continue;
        const auto avg = 0.5 * (coef_[a] + std::conj(coef_[b]));
        coef_[a] = avg;
        coef_[b] = std::conj(avg);
      }
    }
  }

  ScalarField2D& operator+=(const ScalarField2D& o) {
    require_same_grid(grid_, o.grid_);
    for (size_t i = 0; i < coef_.size(); ++i) coef_[i] += o.coef_[i];
    return *this;
  }
  ScalarField2D& operator-=(const ScalarField2D& o) {
    require_same_grid(grid_, o.grid_);
    for (size_t i = 0; i < coef_.size(); ++i) coef_[i] -= o.coef_[i];
    return *this;
  }
  ScalarField2D& operator*=(double s) {
    for (auto& c : coef_) c *= s;
    return *this;
  }

  friend ScalarField2D operator+(ScalarField2D a, const ScalarField2D& b) {
    a += b;
    return a;
  }
  friend ScalarField2D operator-(ScalarField2D a, const ScalarField2D& b) {
    a -= b;
    return a;
  }
  friend ScalarField2D operator*(double s, ScalarField2D a) {
    a *= s;
    return a;
  }
  friend ScalarField2D operator*(ScalarField2D a, double s) {
    a *= s;
    return a;
  }

private:
  size_t idx(int k1, int k2) const {
    return static_cast<size_t>(grid_.index_of(k1)) * grid_.n() +
           grid_.index_of(k2);
  }

  Grid grid_;
  std::vector<std::complex<double>> coef_;
};

}  // namespace nsmx

#endif
