#pragma once

#include <memory>

#include <Eigen/Dense>

namespace donaldson {

/// Uniform periodic lattice of n^4 points over the unit torus [0,1)^4.
///
/// Points are stored with x1 slowest and x4 fastest. Spectral operators act
/// along one axis at a time through a real orthonormal Fourier basis
/// (constant, cos/sin pairs, Nyquist), so the whole calculus stays real and
/// deterministic.
class Grid4 {
public:
  explicit Grid4(int n_per_axis);

  int n() const { return n_; }
  double spacing() const { return 1.0 / n_; }
  Eigen::Index size() const { return size_; }

  /// Coordinate x^axis (axis 0..3) of the flat point index.
  double coordinate(Eigen::Index point, int axis) const;

  /// Antisymmetric n x n first-derivative matrix; the Nyquist mode is dropped.
  const Eigen::MatrixXd& derivative_matrix() const { return derivative_; }

  /// Columns are the orthonormal real Fourier modes (in the Euclidean sum).
  const Eigen::MatrixXd& fourier_basis() const { return basis_; }

  /// Integer wavenumber of each basis column (Nyquist column carries n/2).
  const Eigen::VectorXi& wavenumbers() const { return wavenumber_; }

  /// (2 pi k)^2 per basis column, zero for the constant and Nyquist modes.
  const Eigen::VectorXd& laplacian_symbol() const { return symbol_; }

  /// Sum of the per-axis symbols over the tensor-product basis, i.e. the
  /// eigenvalues of the positive Laplacian in to_spectral coordinates.
  const Eigen::VectorXd& laplacian_symbol_4d() const { return symbol4_; }

  /// Largest per-axis wavenumber of each tensor-product basis element.
  const Eigen::VectorXi& max_wavenumber_4d() const { return kmax4_; }

private:
  int n_;
  Eigen::Index size_;
  Eigen::MatrixXd derivative_;
  Eigen::MatrixXd basis_;
  Eigen::VectorXi wavenumber_;
  Eigen::VectorXd symbol_;
  Eigen::VectorXd symbol4_;
  Eigen::VectorXi kmax4_;
};

using GridPtr = std::shared_ptr<const Grid4>;

GridPtr make_grid(int n_per_axis);

/// out[.., i_axis, ..] = sum_j op(i_axis, j) in[.., j, ..]
Eigen::VectorXd apply_along_axis(const Grid4& grid, const Eigen::MatrixXd& op,
                                 int axis, const Eigen::VectorXd& in);

/// Spectral derivative d/dx^axis of a scalar grid function.
Eigen::VectorXd partial(const Grid4& grid, const Eigen::VectorXd& f, int axis);

/// Coefficients in the tensor-product Fourier basis and back.
Eigen::VectorXd to_spectral(const Grid4& grid, const Eigen::VectorXd& f);
Eigen::VectorXd from_spectral(const Grid4& grid, const Eigen::VectorXd& c);

/// Indices (0..15) of the grid-harmonic scalar modes: tensor products of the
/// constant and Nyquist modes. These span the kernel of every spectral
/// derivative; the constant mode is index 0.
Eigen::VectorXd grid_harmonic_mode(const Grid4& grid, int which);
constexpr int kGridHarmonicModes = 16;

}  // namespace donaldson
