// SPDX-License-Identifier: Apache-2.0

#ifndef NSMX_GRID_HPP
#define NSMX_GRID_HPP

#include <numbers>
#include <stdexcept>

namespace nsmx {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Uniform collocation grid on the periodic square [0,2pi)^2 with n points
// per axis. Wavenumbers per axis run over {-n/2+1, ..., n/2}.
class Grid {
public:
  explicit Grid(int n) : n_(n) {
    if (n < 8 || n % 2 != 0) {
      throw std::invalid_argument("Grid: n must be even and >= 8");
    }
  }

  int n() const { return n_; }
  int size() const { return n_ * n_; }
  double spacing() const { return two_pi / n_; }

  // Largest mode kept after 2/3 dealiasing (square truncation).
  int dealias_cutoff() const { return n_ / 3; }

  // Signed wavenumber of storage index j in 0..n-1.
  int wavenumber(int j) const { return j <= n_ / 2 ? j : j - n_; }
  // Storage index of signed wavenumber k in {-n/2+1, ..., n/2}.
  int index_of(int k) const { return k >= 0 ? k : k + n_; }

  double x(int j) const { return two_pi * j / n_; }

  bool operator==(const Grid& o) const { return n_ == o.n_; }

private:
  int n_;
};

inline void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw std::invalid_argument("grid mismatch");
}

}  // namespace nsmx

#endif
