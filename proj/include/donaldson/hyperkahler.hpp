#pragma once

#include <array>

#include <Eigen/Dense>

#include "donaldson/forms.hpp"
#include "donaldson/metric.hpp"
#include "donaldson/symplectic.hpp"

namespace donaldson {

/// Flat hyperKaehler triple on T^4:
///   w1 = dx12 + dx34, w2 = dx13 + dx42, w3 = dx14 + dx23,
/// with g = w_i(., J_i .) and J1 J2 = J3.
struct HKStructure {
  std::array<KForm, 3> omega;
  std::array<Eigen::Matrix4d, 3> j;
};

HKStructure hk_structure(GridPtr grid);

/// Coefficient rows of w1, w2, w3 in the lexicographic 2-form basis.
std::array<Eigen::Matrix<double, 1, 6>, 3> hk_forms();

/// K_i = (w_i ^ rho) / dvol_rho.
std::array<KForm, 3> k_functions(const SymplecticState& state);

/// X_K with iota(X_K) rho = dK.
VectorField hamiltonian_vector_field(const SymplecticState& state, const KForm& k);

/// -sum_i J_i X_{K_i}.
VectorField x_grad_energy_hk(const SymplecticState& state);

/// d sum_i dK_i o J_i^rho.
KForm grad_energy_hk(const SymplecticState& state);

/// integral sum_i (Hhat_i^2 + w_i(X, nabla_{X_{K_i}} X)) dvol_rho with
/// Hhat_i = (d iota(X) w_i) ^ rho / dvol_rho.
double hessian_form_hk(const SymplecticState& state, const TangentVector& a);

/// K-hat_i = w_i^rho ^ rhohat / dvol_rho with w_i^rho = w_i - K_i rho.
std::array<KForm, 3> k_hat_functions(const SymplecticState& state,
                                     const KForm& rhohat);

/// integral sum_i (Khat_i^2 dvol_rho - 1/2 K_i^2 rhohat ^ rhohat).
double theta_hat_pairing_hk(const SymplecticState& state, const KForm& rhohat);

struct HKReport {
  std::array<KForm, 3> k;
  std::array<VectorField, 3> x_k;
  std::array<KForm, 3> h_hat;
  std::array<KForm, 3> k_hat;
};

HKReport hk_report(const SymplecticState& state, const TangentVector& a);

}  // namespace donaldson
