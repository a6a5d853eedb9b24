#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "donaldson/forms.hpp"
#include "donaldson/symplectic.hpp"

namespace donaldson {

enum class Preconditioner { none, background_laplacian };

struct SolverOptions {
  double rel_tol = 1e-10;
  int max_iter = 2000;
  Preconditioner preconditioner = Preconditioner::background_laplacian;
};

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  std::vector<double> history;
  double closed_residual = 0.0;    // max |d *^rho lambda|
  double harmonic_residual = 0.0;  // max |harmonic_part(*^rho lambda)|
};

/// An exact 2-form together with its gauge-fixed primitive and associated
/// vector field on a particular state.
struct TangentVector {
  KForm rhohat;
  KForm lambda;  // d lambda = rhohat, *^rho lambda exact
  VectorField x;  // -iota(x) rho = lambda
  Eigen::VectorXd gauge;  // solver unknowns, reusable as a warm start
  SolveReport report;
  std::uint64_t state_id = 0;
};

/// Size of the gauge unknown vector: one potential value per grid point and
/// one coefficient per (grid-harmonic mode, 1-form component).
Eigen::Index gauge_size(const Grid4& grid);

/// Solves -d iota(X) rho = rhohat with *^rho iota(X) rho exact.
///
/// The primitive is lambda = lambda0 + df + h, where lambda0 is the flat
/// coexact primitive, f a potential and h a grid-harmonic 1-form. (f, h)
/// minimise the g^rho norm of lambda, which is exactly the condition that
/// *^rho lambda is closed with no harmonic part. The resulting symmetric
/// positive system is solved by conjugate gradients, preconditioned by the
/// flat Laplacian.
TangentVector associated_vector_field(const SymplecticState& state,
                                      const KForm& rhohat,
                                      const SolverOptions& opts = {});
TangentVector associated_vector_field(const SymplecticState& state,
                                      const KForm& rhohat,
                                      const SolverOptions& opts,
                                      const Eigen::VectorXd& initial_gauge);

/// Packages a field Y whose *^rho iota(Y) rho is already exact (no solve):
/// rhohat = -d iota(Y) rho, lambda = -iota(Y) rho.
TangentVector tangent_from_field(const SymplecticState& state,
                                 const VectorField& y);

/// <a, b>_rho = integral of lambda_a ^ *^rho lambda_b.
double inner(const SymplecticState& state, const TangentVector& a,
             const TangentVector& b);

/// Sqrt of inner(a, a).
double norm(const SymplecticState& state, const TangentVector& a);

/// 1/2 d iota(Y) rhohat + 1/2 d iota(X) sigmahat
///   - 1/2 d iota(nabla_Y X + nabla_X Y) rho,  X = a.x, Y = b.x.
KForm christoffel(const SymplecticState& state, const TangentVector& a,
                  const TangentVector& b);

/// Samples of a path rho_t and of a tangent field sigmahat_t along it at
/// t = -delta, 0, +delta.
struct SampledPath {
  double delta;
  std::array<KForm, 3> rho;
  std::array<KForm, 3> sigmahat;
};

enum class ConnectionFormula {
  christoffel,  // d/dt sigmahat + Gamma(rhohat, sigmahat)
  lemma,        // -d iota(Ydot + nabla_X Y) rho
};

/// Covariant derivative of sigmahat_t along rho_t at t = 0, with time
/// derivatives taken by central differences.
KForm covariant_derivative_along_path(const SampledPath& path,
                                      ConnectionFormula formula,
                                      const SolverOptions& opts = {},
                                      double u_floor = kDefaultUFloor);

void require_solved_on(const SymplecticState& state, const TangentVector& t);

}  // namespace donaldson
