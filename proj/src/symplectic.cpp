#include "donaldson/symplectic.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

#include "donaldson/errors.hpp"

namespace donaldson {

namespace {

std::atomic<std::uint64_t> next_state_id{1};

KForm star1_formula(const KForm& rho, const KForm& u, const KForm& lam) {
  KForm out = wedge(rho, star(wedge(rho, lam)));
  out.coeffs().array().colwise() /= u.component(0).array();
  return out;
}

Eigen::Matrix4d j_std() {
  Eigen::Matrix<double, 1, 6> w = Eigen::Matrix<double, 1, 6>::Zero();
  w(component_index({1, 2})) = 1.0;
  w(component_index({3, 4})) = 1.0;
  // g = w(., J .)  <=>  W J = I
  return two_form_matrix(w).inverse();
}

void require_state_grid(const SymplecticState& s, const KForm& a) {
  require_same_grid(s.grid(), a.grid());
}

}  // namespace

Eigen::Matrix4d two_form_matrix(const Eigen::Matrix<double, 1, 6>& row) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  for (int c = 0; c < 6; ++c) {
    const unsigned mask = basis_mask(2, c);
    int a = -1, b = -1;
    for (int i = 0; i < 4; ++i) {
      if ((mask >> i) & 1u) (a < 0 ? a : b) = i;
    }
    m(a, b) = row(c);
    m(b, a) = -row(c);
  }
  return m;
}

KForm u_of(const KForm& rho) {
  if (rho.degree() != 2) throw std::invalid_argument("u_of: degree 2 only");
  return 0.5 * density(wedge(rho, rho));
}

SymplecticState::SymplecticState(KForm rho, double u_floor)
    : rho_(std::move(rho)), u_(u_of(rho_)), u_floor_(u_floor),
      id_(next_state_id.fetch_add(1)) {
  if (!rho_.all_finite()) throw NumericalError("rho has non-finite entries");
  min_u_ = u_.component(0).minCoeff();
  if (!(min_u_ > u_floor_)) {
    throw DegenerateStateError(
        "degenerate or wrongly oriented 2-form: min u = " +
            std::to_string(min_u_) + " <= floor " + std::to_string(u_floor_),
        min_u_);
  }

  const GridPtr& grid = rho_.grid();
  std::array<KForm, 4> star_cols{KForm(grid, 3), KForm(grid, 3), KForm(grid, 3),
                                 KForm(grid, 3)};
  for (int i = 0; i < 4; ++i) {
    star_cols[i] = star1_formula(
        rho_, u_, KForm::constant(grid, 1, Eigen::Vector4d::Unit(i)));
  }
  const KForm w = omega_std(grid);
  KForm coeff = density(wedge(w, rho_));
  coeff.coeffs().array() /= u_.coeffs().array();
  const KForm w_rho = w - multiply(coeff, rho_);
  const Eigen::Matrix4d jt = j_std().transpose();

  const Eigen::Index n = grid->size();
  rho_mat_.resize(n);
  rho_inv_.resize(n);
  star1_.resize(n);
  star3_.resize(n);
  metric_.resize(n);
  j_rho_.resize(n);
  for (Eigen::Index p = 0; p < n; ++p) {
    const Eigen::Matrix4d pm = two_form_matrix(rho_.coeffs().row(p));
    const Eigen::Matrix4d pinv = pm.inverse();
    rho_mat_[p] = pm;
    rho_inv_[p] = pinv;
    for (int i = 0; i < 4; ++i) {
      star1_[p].col(i) = star_cols[i].coeffs().row(p).transpose();
    }
    star3_[p] = -star1_[p].inverse();
    j_rho_[p] = pinv * jt * pm;
    metric_[p] = two_form_matrix(w_rho.coeffs().row(p)) * j_rho_[p];

    const Eigen::Matrix4d& g = metric_[p];
    const double asym = (g - g.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-8 * g.cwiseAbs().maxCoeff() ||
        Eigen::LLT<Eigen::Matrix4d>(g).info() != Eigen::Success) {
      throw NumericalError(
          "Prop-1 consistency failure: g^rho not symmetric positive definite");
    }
  }
}

KForm volume_form_rho(const SymplecticState& state) {
  return KForm(state.grid(), 4, state.u().coeffs());
}

KForm R_rho(const SymplecticState& state, const KForm& w) {
  require_state_grid(state, w);
  KForm coeff = density(wedge(w, state.rho()));
  coeff.coeffs().array() /= state.u().coeffs().array();
  return w - multiply(coeff, state.rho());
}

KForm star_rho_2(const SymplecticState& state, const KForm& w) {
  if (w.degree() != 2) throw std::invalid_argument("star_rho_2: degree 2 only");
  return R_rho(state, star(R_rho(state, w)));
}

KForm star_rho_1(const SymplecticState& state, const KForm& lam) {
  if (lam.degree() != 1) throw std::invalid_argument("star_rho_1: degree 1 only");
  require_state_grid(state, lam);
  return star1_formula(state.rho(), state.u(), lam);
}

KForm star_rho_3(const SymplecticState& state, const KForm& t) {
  if (t.degree() != 3) throw std::invalid_argument("star_rho_3: degree 3 only");
  require_state_grid(state, t);
  KForm out(t.grid(), 1);
  const MatrixField& s3 = state.star3();
  for (Eigen::Index p = 0; p < t.points(); ++p) {
    out.coeffs().row(p) = (s3[p] * t.coeffs().row(p).transpose()).transpose();
  }
  return out;
}

KForm star_rho(const SymplecticState& state, const KForm& a) {
  switch (a.degree()) {
    case 1: return star_rho_1(state, a);
    case 2: return star_rho_2(state, a);
    case 3: return star_rho_3(state, a);
    default: throw std::invalid_argument("star_rho: degree must be 1, 2 or 3");
  }
}

KForm metric_star_1(const MatrixField& metric, const KForm& lam) {
  VectorField v(lam.grid());
  for (Eigen::Index p = 0; p < lam.points(); ++p) {
    v.components().row(p) =
        metric[p].llt().solve(lam.coeffs().row(p).transpose()).transpose();
  }
  return interior(v, volume_form(lam.grid()));
}

KForm omega_rho(const SymplecticState& state) {
  return R_rho(state, omega_std(state.grid()));
}

MatrixField j_rho_of(const SymplecticState& state, const Eigen::Matrix4d& j) {
  const Eigen::Matrix4d jt = j.transpose();
  MatrixField out(state.rho_matrix().size());
  for (std::size_t p = 0; p < out.size(); ++p) {
    out[p] = state.rho_inverse()[p] * jt * state.rho_matrix()[p];
  }
  return out;
}

VectorField rho_contract(const SymplecticState& state, const KForm& lam) {
  if (lam.degree() != 1) throw std::invalid_argument("rho_contract: 1-form only");
  require_state_grid(state, lam);
  VectorField x(lam.grid());
  const MatrixField& inv = state.rho_inverse();
  for (Eigen::Index p = 0; p < lam.points(); ++p) {
    // (iota(X) rho)_b = X^a rho_ab  =>  X = rho^{-T} lam
    x.components().row(p) = lam.coeffs().row(p) * inv[p];
  }
  return x;
}

VectorField apply(const MatrixField& m, const VectorField& v) {
  VectorField out(v.grid());
  for (Eigen::Index p = 0; p < v.components().rows(); ++p) {
    out.components().row(p) =
        (m[p] * v.components().row(p).transpose()).transpose();
  }
  return out;
}

KForm compose(const KForm& alpha, const MatrixField& m) {
  if (alpha.degree() != 1) throw std::invalid_argument("compose: 1-form only");
  KForm out(alpha.grid(), 1);
  for (Eigen::Index p = 0; p < alpha.points(); ++p) {
    out.coeffs().row(p) = alpha.coeffs().row(p) * m[p];
  }
  return out;
}

}  // namespace donaldson
