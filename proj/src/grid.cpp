#include "donaldson/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace donaldson {

Grid4::Grid4(int n_per_axis) : n_(n_per_axis) {
  if (n_ < 4 || n_ % 2 != 0) {
    throw std::invalid_argument("grid size must be even and >= 4, got " +
                                std::to_string(n_));
  }
  size_ = Eigen::Index(n_) * n_ * n_ * n_;

  const double two_pi = 2.0 * std::numbers::pi;
  const int half = n_ / 2;
  basis_.setZero(n_, n_);
  wavenumber_.setZero(n_);
  symbol_.setZero(n_);
  Eigen::MatrixXd generator = Eigen::MatrixXd::Zero(n_, n_);

  basis_.col(0).setConstant(1.0 / std::sqrt(double(n_)));
  for (int k = 1; k < half; ++k) {
    const int c = 2 * k - 1;
    const int s = 2 * k;
    for (int j = 0; j < n_; ++j) {
      const double phase = two_pi * k * j / n_;
      basis_(j, c) = std::sqrt(2.0 / n_) * std::cos(phase);
      basis_(j, s) = std::sqrt(2.0 / n_) * std::sin(phase);
    }
    wavenumber_(c) = wavenumber_(s) = k;
    symbol_(c) = symbol_(s) = (two_pi * k) * (two_pi * k);
    // (a cos + b sin)' = 2 pi k (b cos - a sin)
    generator(c, s) = two_pi * k;
    generator(s, c) = -two_pi * k;
  }
  for (int j = 0; j < n_; ++j) {
    basis_(j, n_ - 1) = (j % 2 == 0 ? 1.0 : -1.0) / std::sqrt(double(n_));
  }
  wavenumber_(n_ - 1) = half;

  symbol4_.resize(size_);
  kmax4_.resize(size_);
  for (Eigen::Index p = 0; p < size_; ++p) {
    Eigen::Index rest = p;
    double total = 0.0;
    int kmax = 0;
    for (int a = 0; a < 4; ++a) {
      const int i = int(rest % n_);
      rest /= n_;
      total += symbol_(i);
      kmax = std::max(kmax, wavenumber_(i));
    }
    symbol4_(p) = total;
    kmax4_(p) = kmax;
  }

  derivative_ = basis_ * generator * basis_.transpose();
  // Exact antisymmetry keeps discrete integration by parts at round-off.
  derivative_ = 0.5 * (derivative_ - derivative_.transpose()).eval();
}

double Grid4::coordinate(Eigen::Index point, int axis) const {
  Eigen::Index stride = 1;
  for (int a = 3; a > axis; --a) stride *= n_;
  return double((point / stride) % n_) / n_;
}

GridPtr make_grid(int n_per_axis) {
  return std::make_shared<const Grid4>(n_per_axis);
}

Eigen::VectorXd apply_along_axis(const Grid4& grid, const Eigen::MatrixXd& op,
                                 int axis, const Eigen::VectorXd& in) {
  const Eigen::Index n = grid.n();
  Eigen::Index inner = 1;
  for (int a = 3; a > axis; --a) inner *= n;
  const Eigen::Index outer = grid.size() / (inner * n);

  Eigen::VectorXd out(in.size());
  if (inner == 1) {
    Eigen::Map<const Eigen::MatrixXd> src(in.data(), n, outer);
    Eigen::Map<Eigen::MatrixXd> dst(out.data(), n, outer);
    dst.noalias() = op * src;
    return out;
  }
  for (Eigen::Index o = 0; o < outer; ++o) {
    Eigen::Map<const Eigen::MatrixXd> src(in.data() + o * n * inner, inner, n);
    Eigen::Map<Eigen::MatrixXd> dst(out.data() + o * n * inner, inner, n);
    dst.noalias() = src * op.transpose();
  }
  return out;
}

Eigen::VectorXd partial(const Grid4& grid, const Eigen::VectorXd& f, int axis) {
  return apply_along_axis(grid, grid.derivative_matrix(), axis, f);
}

Eigen::VectorXd to_spectral(const Grid4& grid, const Eigen::VectorXd& f) {
  const Eigen::MatrixXd qt = grid.fourier_basis().transpose();
  Eigen::VectorXd c = f;
  for (int a = 0; a < 4; ++a) c = apply_along_axis(grid, qt, a, c);
  return c;
}

Eigen::VectorXd from_spectral(const Grid4& grid, const Eigen::VectorXd& c) {
  Eigen::VectorXd f = c;
  for (int a = 0; a < 4; ++a) {
    f = apply_along_axis(grid, grid.fourier_basis(), a, f);
  }
  return f;
}

Eigen::VectorXd grid_harmonic_mode(const Grid4& grid, int which) {
  Eigen::VectorXd mode(grid.size());
  const int n = grid.n();
  for (Eigen::Index p = 0; p < grid.size(); ++p) {
    Eigen::Index rest = p;
    int parity = 0;
    for (int a = 3; a >= 0; --a) {
      const int i = int(rest % n);
      rest /= n;
      if ((which >> (3 - a)) & 1) parity += i;
    }
    mode(p) = (parity % 2 == 0) ? 1.0 : -1.0;
  }
  return mode;
}

}  // namespace donaldson
