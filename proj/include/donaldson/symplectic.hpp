#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "donaldson/forms.hpp"

namespace donaldson {

using MatrixField = std::vector<Eigen::Matrix4d>;

inline constexpr double kDefaultUFloor = 1e-6;

/// 4x4 antisymmetric matrix w(d_a, d_b) of a constant 2-form coefficient row.
Eigen::Matrix4d two_form_matrix(const Eigen::Matrix<double, 1, 6>& row);

/// u with 2 u dvol = rho ^ rho.
KForm u_of(const KForm& rho);

/// A nondegenerate, positively oriented 2-form with its pointwise geometry.
///
/// Immutable after construction. The constructor rejects min(u) <= u_floor
/// with DegenerateStateError and a non-SPD g^rho with NumericalError.
class SymplecticState {
public:
  explicit SymplecticState(KForm rho, double u_floor = kDefaultUFloor);

  const GridPtr& grid() const { return rho_.grid(); }
  const KForm& rho() const { return rho_; }
  const KForm& u() const { return u_; }
  double min_u() const { return min_u_; }
  double u_floor() const { return u_floor_; }

  /// Identifies the state a tangent vector was solved on; copies share it.
  std::uint64_t id() const { return id_; }

  /// rho(d_a, d_b) and its inverse.
  const MatrixField& rho_matrix() const { return rho_mat_; }
  const MatrixField& rho_inverse() const { return rho_inv_; }
  /// *^rho on 1-forms (columns: dx^i -> 3-form components) and on 3-forms.
  const MatrixField& star1() const { return star1_; }
  const MatrixField& star3() const { return star3_; }
  /// g^rho and J^rho built from w_std, J_std.
  const MatrixField& metric() const { return metric_; }
  const MatrixField& j_rho() const { return j_rho_; }

private:
  KForm rho_;
  KForm u_;
  double min_u_ = 0.0;
  double u_floor_;
  std::uint64_t id_;
  MatrixField rho_mat_, rho_inv_, star1_, star3_, metric_, j_rho_;
};

/// g^rho, symmetric positive definite with unit determinant.
inline const MatrixField& metric_g_rho(const SymplecticState& state) {
  return state.metric();
}

/// dvol_rho = rho^2 / 2 = u dvol, as a 4-form.
KForm volume_form_rho(const SymplecticState& state);

/// R^rho w = w - (w ^ rho / dvol_rho) rho.
KForm R_rho(const SymplecticState& state, const KForm& w);

/// *^rho on 2-forms: R^rho * R^rho.
KForm star_rho_2(const SymplecticState& state, const KForm& w);

/// *^rho lambda = rho ^ *(rho ^ lambda) / u on 1-forms.
KForm star_rho_1(const SymplecticState& state, const KForm& lam);

/// *^rho on 3-forms; star_rho_3(star_rho_1(l)) = -l as for any Hodge star
/// on odd degree in four dimensions.
KForm star_rho_3(const SymplecticState& state, const KForm& t);

/// Dispatches on degree 1, 2, 3.
KForm star_rho(const SymplecticState& state, const KForm& a);

/// Hodge star on 1-forms of an arbitrary unimodular metric field:
/// *_G lambda = iota(G^{-1} lambda) dvol.
KForm metric_star_1(const MatrixField& metric, const KForm& lam);

/// w^rho = R^rho w_std.
KForm omega_rho(const SymplecticState& state);

/// J^rho defined by rho(J^rho ., .) = rho(., J .) for a constant J.
MatrixField j_rho_of(const SymplecticState& state, const Eigen::Matrix4d& j);

/// Solves iota(X) rho = lam pointwise.
VectorField rho_contract(const SymplecticState& state, const KForm& lam);

/// Pointwise M v (vector fields) and M^T alpha (1-forms, alpha o M).
VectorField apply(const MatrixField& m, const VectorField& v);
KForm compose(const KForm& alpha, const MatrixField& m);

}  // namespace donaldson
