#include "donaldson/hyperkahler.hpp"

namespace donaldson {

namespace {

KForm over_u(const SymplecticState& state, KForm f) {
  f.coeffs().array() /= state.u().coeffs().array();
  return f;
}

VectorField apply_constant(const Eigen::Matrix4d& m, const VectorField& v) {
  return VectorField(v.grid(), v.components() * m.transpose());
}

std::array<KForm, 3> h_hat_functions(const SymplecticState& state,
                                     const VectorField& x) {
  const HKStructure hk = hk_structure(state.grid());
  std::array<KForm, 3> out{KForm(state.grid(), 0), KForm(state.grid(), 0),
                           KForm(state.grid(), 0)};
  for (int i = 0; i < 3; ++i) {
    out[i] = over_u(state, density(wedge(exterior_d(interior(x, hk.omega[i])),
                                         state.rho())));
  }
  return out;
}

}  // namespace

std::array<Eigen::Matrix<double, 1, 6>, 3> hk_forms() {
  std::array<Eigen::Matrix<double, 1, 6>, 3> w;
  for (auto& row : w) row.setZero();
  w[0](component_index({1, 2})) = 1.0;
  w[0](component_index({3, 4})) = 1.0;
  w[1](component_index({1, 3})) = 1.0;
  w[1](component_index({2, 4})) = -1.0;  // dx4 ^ dx2
  w[2](component_index({1, 4})) = 1.0;
  w[2](component_index({2, 3})) = 1.0;
  return w;
}

HKStructure hk_structure(GridPtr grid) {
  const auto rows = hk_forms();
  HKStructure hk{{KForm(grid, 2), KForm(grid, 2), KForm(grid, 2)}, {}};
  for (int i = 0; i < 3; ++i) {
    hk.omega[i] = KForm::constant(grid, 2, rows[i].transpose());
    hk.j[i] = two_form_matrix(rows[i]).inverse();
  }
  return hk;
}

std::array<KForm, 3> k_functions(const SymplecticState& state) {
  const HKStructure hk = hk_structure(state.grid());
  std::array<KForm, 3> k{KForm(state.grid(), 0), KForm(state.grid(), 0),
                         KForm(state.grid(), 0)};
  for (int i = 0; i < 3; ++i) {
    k[i] = over_u(state, density(wedge(hk.omega[i], state.rho())));
  }
  return k;
}

VectorField hamiltonian_vector_field(const SymplecticState& state, const KForm& k) {
  return rho_contract(state, exterior_d(k));
}

VectorField x_grad_energy_hk(const SymplecticState& state) {
  const HKStructure hk = hk_structure(state.grid());
  const auto k = k_functions(state);
  VectorField out(state.grid());
  for (int i = 0; i < 3; ++i) {
    out -= apply_constant(hk.j[i], hamiltonian_vector_field(state, k[i]));
  }
  return out;
}

KForm grad_energy_hk(const SymplecticState& state) {
  const HKStructure hk = hk_structure(state.grid());
  const auto k = k_functions(state);
  KForm potential(state.grid(), 1);
  for (int i = 0; i < 3; ++i) {
    potential += compose(exterior_d(k[i]), j_rho_of(state, hk.j[i]));
  }
  return exterior_d(potential);
}

double hessian_form_hk(const SymplecticState& state, const TangentVector& a) {
  require_solved_on(state, a);
  const HKStructure hk = hk_structure(state.grid());
  const auto k = k_functions(state);
  const auto h_hat = h_hat_functions(state, a.x);
  KForm integrand(state.grid(), 0);
  for (int i = 0; i < 3; ++i) {
    const VectorField xk = hamiltonian_vector_field(state, k[i]);
    const VectorField transport = covariant_derivative(xk, a.x);
    // w_i(X, V) = iota(V) iota(X) w_i
    const KForm pairing = interior(transport, interior(a.x, hk.omega[i]));
    integrand.coeffs().array() +=
        h_hat[i].coeffs().array().square() + pairing.coeffs().array();
  }
  integrand.coeffs().array() *= state.u().coeffs().array();
  return integrate_scalar(integrand);
}

std::array<KForm, 3> k_hat_functions(const SymplecticState& state,
                                     const KForm& rhohat) {
  const HKStructure hk = hk_structure(state.grid());
  const auto k = k_functions(state);
  std::array<KForm, 3> out{KForm(state.grid(), 0), KForm(state.grid(), 0),
                           KForm(state.grid(), 0)};
  for (int i = 0; i < 3; ++i) {
    const KForm w_rho = hk.omega[i] - multiply(k[i], state.rho());
    out[i] = over_u(state, density(wedge(w_rho, rhohat)));
  }
  return out;
}

double theta_hat_pairing_hk(const SymplecticState& state, const KForm& rhohat) {
  const auto k = k_functions(state);
  const auto k_hat = k_hat_functions(state, rhohat);
  const KForm rr = density(wedge(rhohat, rhohat));
  KForm integrand(state.grid(), 0);
  for (int i = 0; i < 3; ++i) {
    integrand.coeffs().array() +=
        k_hat[i].coeffs().array().square() * state.u().coeffs().array() -
        0.5 * k[i].coeffs().array().square() * rr.coeffs().array();
  }
  return integrate_scalar(integrand);
}

HKReport hk_report(const SymplecticState& state, const TangentVector& a) {
  const auto k = k_functions(state);
  std::array<VectorField, 3> xk{VectorField(state.grid()), VectorField(state.grid()),
                                VectorField(state.grid())};
  for (int i = 0; i < 3; ++i) xk[i] = hamiltonian_vector_field(state, k[i]);
  return {k, xk, h_hat_functions(state, a.x), k_hat_functions(state, a.rhohat)};
}

}  // namespace donaldson
