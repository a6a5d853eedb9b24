#include "donaldson/energy.hpp"

#include <cmath>

namespace donaldson {

namespace {

KForm reciprocal(const KForm& f) {
  KForm out = f;
  out.coeffs() = f.coeffs().cwiseInverse();
  return out;
}

// |rho+|^2 / u^2
KForm plus_norm_ratio(const SymplecticState& state) {
  KForm n = pointwise_norm2(sd_split(state.rho()).plus);
  n.coeffs().array() /= state.u().coeffs().array().square();
  return n;
}

}  // namespace

double energy(const SymplecticState& state) {
  KForm integrand = pointwise_norm2(sd_split(state.rho()).plus);
  integrand.coeffs().array() /= state.u().coeffs().array();
  return integrate_scalar(integrand);
}

KForm theta(const SymplecticState& state) {
  const KForm& rho = state.rho();
  const KForm inv_u = reciprocal(state.u());
  KForm half_norm = pointwise_norm2(rho);
  half_norm.coeffs().array() *= 0.5 * inv_u.coeffs().array().square();
  return multiply(inv_u, star(rho)) - multiply(half_norm, rho);
}

VectorField x_grad_energy(const SymplecticState& state) {
  return rho_contract(state, star_rho_3(state, exterior_d(theta(state))));
}

GradientFieldResiduals gradient_field_residuals(const SymplecticState& state,
                                                const VectorField& x) {
  const KForm dtheta = exterior_d(theta(state));
  GradientFieldResiduals r;
  r.contraction =
      (star_rho_3(state, dtheta) - interior(x, state.rho())).max_abs();
  r.wedge = (dtheta - wedge(state.rho(), flat(x))).max_abs();
  return r;
}

TangentVector grad_energy(const SymplecticState& state) {
  const VectorField x = x_grad_energy(state);
  return tangent_from_field(state, x);
}

EnergyReport energy_report(const SymplecticState& state) {
  TangentVector g = grad_energy(state);
  const double gn = norm(state, g);
  return {energy(state), theta(state), std::move(g), gn};
}

KForm theta_hat(const SymplecticState& state, const KForm& rhohat) {
  const KForm inv_u = reciprocal(state.u());
  return multiply(inv_u, rhohat + star_rho_2(state, rhohat)) -
         multiply(plus_norm_ratio(state), rhohat);
}

KForm hessian_operator(const SymplecticState& state, const TangentVector& a,
                       const VectorField& x_grad) {
  require_solved_on(state, a);
  const KForm dth = exterior_d(theta_hat(state, a.rhohat));
  const KForm twist = wedge(a.rhohat, flat(x_grad));
  const VectorField transport = covariant_derivative(a.x, x_grad);
  return -exterior_d(star_rho_3(state, dth)) +
         exterior_d(star_rho_3(state, twist)) -
         exterior_d(interior(transport, state.rho()));
}

KForm hessian_operator(const SymplecticState& state, const TangentVector& a) {
  return hessian_operator(state, a, x_grad_energy(state));
}

double hessian_form(const SymplecticState& state, const TangentVector& a,
                    const VectorField& x_grad) {
  require_solved_on(state, a);
  const double local = integrate(wedge(theta_hat(state, a.rhohat), a.rhohat));
  const KForm left = interior(a.x, a.rhohat) -
                     interior(covariant_derivative(a.x, a.x), state.rho());
  const KForm right = star_rho_1(state, interior(x_grad, state.rho()));
  return local + integrate(wedge(left, right));
}

double hessian_form(const SymplecticState& state, const TangentVector& a) {
  return hessian_form(state, a, x_grad_energy(state));
}

HessianReport hessian_report(const SymplecticState& state, const TangentVector& a,
                             const SolverOptions& opts) {
  const VectorField xg = x_grad_energy(state);
  KForm op = hessian_operator(state, a, xg);
  const double form = hessian_form(state, a, xg);
  const TangentVector h = associated_vector_field(state, op, opts);
  const double pairing = inner(state, h, a);
  return {std::move(op), form, pairing, theta_hat(state, a.rhohat)};
}

LeadingTerm leading_term(const SymplecticState& state, const KForm& rhohat) {
  const KForm inv_u = reciprocal(state.u());
  const KForm sum = rhohat + star_rho_2(state, rhohat);  // 2 rhohat^{+rho}

  KForm du_over_u2 = exterior_d(state.u());
  du_over_u2.coeffs().array().colwise() /= state.u().component(0).array().square();

  const KForm principal =
      -exterior_d(star_rho_3(state, multiply(inv_u, exterior_d(sum))));
  const KForm volume_variation =
      exterior_d(star_rho_3(state, wedge(du_over_u2, sum)));
  const KForm norm_variation = exterior_d(
      star_rho_3(state, wedge(exterior_d(plus_norm_ratio(state)), rhohat)));
  const KForm total =
      -exterior_d(star_rho_3(state, exterior_d(theta_hat(state, rhohat))));
  return {principal, volume_variation, norm_variation, total};
}

}  // namespace donaldson
