#pragma once

#include "donaldson/forms.hpp"
#include "donaldson/metric.hpp"
#include "donaldson/symplectic.hpp"

namespace donaldson {

/// E(rho) = integral of |rho+|^2 / u dvol, which equals
/// integral 2|rho+|^2 / (|rho+|^2 - |rho-|^2) dvol since the denominator is 2u.
double energy(const SymplecticState& state);

/// Theta = *(rho/u) - 1/2 |rho/u|^2 rho, flat star and flat norm.
KForm theta(const SymplecticState& state);

/// The field X with *^rho dTheta = iota(X) rho.
VectorField x_grad_energy(const SymplecticState& state);

/// Residuals of both characterisations of x_grad_energy:
/// |*^rho dTheta - iota(X) rho| and |dTheta - rho ^ X^flat|.
struct GradientFieldResiduals {
  double contraction = 0.0;
  double wedge = 0.0;
};
GradientFieldResiduals gradient_field_residuals(const SymplecticState& state,
                                                const VectorField& x);

/// grad E = -d *^rho dTheta with lambda = -*^rho dTheta and x = x_grad_energy;
/// no elliptic solve is needed since *^rho lambda = dTheta.
TangentVector grad_energy(const SymplecticState& state);

struct EnergyReport {
  double value;
  KForm theta;
  TangentVector grad;
  double grad_norm;
};

EnergyReport energy_report(const SymplecticState& state);

/// Theta-hat = (rhohat + *^rho rhohat)/u - |rho+/u|^2 rhohat.
KForm theta_hat(const SymplecticState& state, const KForm& rhohat);

/// -d*^rho dThetahat + d*^rho(rhohat ^ Xg^flat) - d iota(nabla_X Xg) rho.
KForm hessian_operator(const SymplecticState& state, const TangentVector& a,
                       const VectorField& x_grad);
KForm hessian_operator(const SymplecticState& state, const TangentVector& a);

/// integral Thetahat ^ rhohat
///   + integral (iota(X) rhohat - iota(nabla_X X) rho) ^ *^rho iota(Xg) rho.
double hessian_form(const SymplecticState& state, const TangentVector& a,
                    const VectorField& x_grad);
double hessian_form(const SymplecticState& state, const TangentVector& a);

struct HessianReport {
  KForm operator_value;
  double form_value;
  double operator_pairing;  // <H rhohat, rhohat>_rho via a second solve
  KForm theta_hat;
};

HessianReport hessian_report(const SymplecticState& state, const TangentVector& a,
                             const SolverOptions& opts = {});

/// The three pieces of -d*^rho dThetahat:
///   -2 d (*^rho/u) d rhohat^{+rho},
///   d*^rho(du/u^2 ^ (rhohat + *^rho rhohat)),
///   d*^rho(d|rho+/u|^2 ^ rhohat),
/// where rhohat^{+rho} = (rhohat + *^rho rhohat)/2.
struct LeadingTerm {
  KForm principal;
  KForm volume_variation;
  KForm norm_variation;
  KForm total;  // -d*^rho dThetahat computed directly
};

LeadingTerm leading_term(const SymplecticState& state, const KForm& rhohat);

}  // namespace donaldson
