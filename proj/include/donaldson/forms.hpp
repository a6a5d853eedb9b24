#pragma once

#include <functional>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

#include "donaldson/grid.hpp"

namespace donaldson {

/// Number of components of a k-form in four dimensions: 1, 4, 6, 4, 1.
int component_count(int degree);

/// Bitmask (bit a <-> dx^{a+1}) of the c-th basis element of degree k.
/// Basis elements are ordered lexicographically: 12, 13, 14, 23, 24, 34.
unsigned basis_mask(int degree, int component);

/// Component index of dx^{i1} ^ ... ^ dx^{ik} with 1-based increasing axes.
int component_index(std::initializer_list<int> axes);

/// Differential form of fixed degree on a Grid4.
///
/// Coefficients are an (n^4 x C(4,k)) matrix: one column per basis element,
/// rows in grid order. This is also the on-disk layout of dump_field.
class KForm {
public:
  KForm(GridPtr grid, int degree);
  KForm(GridPtr grid, int degree, Eigen::MatrixXd coeffs);

  /// Spatially constant form with the given basis coefficients.
  static KForm constant(GridPtr grid, int degree,
                        const Eigen::VectorXd& values);
  static KForm scalar(GridPtr grid, Eigen::VectorXd values);

  int degree() const { return degree_; }
  const GridPtr& grid() const { return grid_; }
  const Grid4& grid_ref() const { return *grid_; }
  Eigen::Index points() const { return coeffs_.rows(); }

  Eigen::MatrixXd& coeffs() { return coeffs_; }
  const Eigen::MatrixXd& coeffs() const { return coeffs_; }
  auto component(int c) { return coeffs_.col(c); }
  auto component(int c) const { return coeffs_.col(c); }

  double max_abs() const;
  bool all_finite() const;

  KForm& operator+=(const KForm& other);
  KForm& operator-=(const KForm& other);
  KForm& operator*=(double s);

private:
  GridPtr grid_;
  int degree_;
  Eigen::MatrixXd coeffs_;
};

KForm operator+(KForm a, const KForm& b);
KForm operator-(KForm a, const KForm& b);
KForm operator-(KForm a);
KForm operator*(double s, KForm a);
KForm operator*(KForm a, double s);

/// Vector field with 4 components per point (columns = d/dx^1 .. d/dx^4).
class VectorField {
public:
  explicit VectorField(GridPtr grid);
  VectorField(GridPtr grid, Eigen::MatrixXd components);

  static VectorField constant(GridPtr grid, const Eigen::Vector4d& v);

  const GridPtr& grid() const { return grid_; }
  Eigen::MatrixXd& components() { return comps_; }
  const Eigen::MatrixXd& components() const { return comps_; }
  Eigen::Vector4d at(Eigen::Index point) const {
    return comps_.row(point).transpose();
  }

  double max_abs() const;

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double s);

private:
  GridPtr grid_;
  Eigen::MatrixXd comps_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator-(VectorField a);
VectorField operator*(double s, VectorField a);

/// Samples f(x) at every grid point.
Eigen::VectorXd sample(const Grid4& grid,
                       const std::function<double(const Eigen::Vector4d&)>& f);

/// Constant forms of the flat background: dvol and w_std = dx12 + dx34.
KForm volume_form(GridPtr grid);
KForm omega_std(GridPtr grid);

/// Pointwise exterior product. Throws std::invalid_argument("degree > 4").
KForm wedge(const KForm& a, const KForm& b);

/// Exterior derivative with spectral partial derivatives.
KForm exterior_d(const KForm& a);

/// Contraction iota(X) a.
KForm interior(const VectorField& x, const KForm& a);

/// Hodge star of the flat metric; ** = (-1)^{k(4-k)}.
KForm star(const KForm& a);

struct SelfDualSplit {
  KForm plus;
  KForm minus;
};
SelfDualSplit sd_split(const KForm& w);

/// Pointwise product f * a with a 0-form f.
KForm multiply(const KForm& f, const KForm& a);

/// |a|^2 in the flat metric, as a 0-form.
KForm pointwise_norm2(const KForm& a);

/// Density of a 4-form as a 0-form.
KForm density(const KForm& top);

/// L_X a = d iota(X) a + iota(X) d a.
KForm lie_derivative(const VectorField& x, const KForm& a);

/// Flat Levi-Civita connection: (X . grad) Y componentwise.
VectorField covariant_derivative(const VectorField& x, const VectorField& y);

/// Standard commutator [X,Y] = XY - YX.
VectorField lie_bracket(const VectorField& x, const VectorField& y);

/// iota(X) g = X^flat for the Euclidean metric.
KForm flat(const VectorField& x);
VectorField sharp(const KForm& one_form);

/// Pointwise g(X,Y) as a 0-form.
KForm dot(const VectorField& x, const VectorField& y);

/// Integral over the unit torus (mean of the density).
double integrate(const KForm& top);

/// Integral of a 0-form times dvol.
double integrate_scalar(const KForm& f);

/// Sum-reduction in fixed order; used for every integral.
double ordered_mean(const Eigen::VectorXd& v);

void require_same_grid(const GridPtr& a, const GridPtr& b);

}  // namespace donaldson
