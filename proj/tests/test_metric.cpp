#include <doctest.h>

#include <random>

#include "donaldson/errors.hpp"
#include "donaldson/hodge.hpp"
#include "donaldson/metric.hpp"
#include "donaldson/sampling.hpp"
#include "test_util.hpp"

using namespace donaldson;
using namespace testing_util;

namespace {

KForm sinusoidal_rhohat(const GridPtr& g) {
  return monomial(g, {1, 2}, [](double x) { return kTwoPi * cos1(x); });
}

}  // namespace

TEST_CASE("associated field in closed form at w_std") {
  GridPtr g = make_grid(8);
  const SymplecticState st(omega_std(g));
  const TangentVector a = associated_vector_field(st, sinusoidal_rhohat(g));
  VectorField expect(g);
  expect.components().col(0) = -of_x1(g, sin1);
  CHECK((a.x - expect).max_abs() < 1e-10);
  CHECK((a.lambda - monomial(g, {2}, sin1)).max_abs() < 1e-10);
  CHECK(a.report.closed_residual < 1e-10);
  CHECK(a.report.harmonic_residual < 1e-10);
}

TEST_CASE("associated field of zero") {
  GridPtr g = make_grid(8);
  std::mt19937_64 rng(3);
  const SymplecticState st(random_symplectic_form(g, 1, 0.3, rng));
  const TangentVector a = associated_vector_field(st, KForm(g, 2));
  CHECK(a.x.max_abs() == 0.0);
  CHECK(a.lambda.max_abs() == 0.0);
}

TEST_CASE("associated field is independent of the initial guess") {
  GridPtr g = make_grid(8);
  std::mt19937_64 rng(5);
  const SymplecticState st(random_symplectic_form(g, 1, 0.3, rng));
  const KForm rh = random_exact_two_form(g, 1, 0.5, rng);
  SolverOptions so;
  so.rel_tol = 1e-12;
  const TangentVector a = associated_vector_field(st, rh, so);
  Eigen::VectorXd guess(gauge_size(*g));
  std::normal_distribution<double> normal;
  for (Eigen::Index i = 0; i < guess.size(); ++i) guess(i) = normal(rng);
  const TangentVector b = associated_vector_field(st, rh, so, guess);
  CHECK((a.x - b.x).max_abs() < 10 * so.rel_tol * std::max(1.0, a.x.max_abs()));

  // Both defining conditions.
  CHECK((-1.0 * exterior_d(interior(a.x, st.rho())) - rh).max_abs() < 1e-10);
  const KForm t = star_rho_1(st, a.lambda);
  CHECK(is_exact(t, 1e-9).exact);
}

TEST_CASE("associated field errors") {
  GridPtr g = make_grid(8);
  std::mt19937_64 rng(7);
  const SymplecticState st(random_symplectic_form(g, 1, 0.3, rng));
  CHECK_THROWS_AS(associated_vector_field(st, monomial(g, {1, 2}, [](double) { return 1.0; })),
                  NotExactError);
  CHECK_THROWS_AS(associated_vector_field(st, KForm(g, 1)), std::invalid_argument);

  SolverOptions starved;
  starved.max_iter = 1;
  starved.rel_tol = 1e-14;
  try {
    associated_vector_field(st, random_exact_two_form(g, 1, 0.5, rng), starved);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK_FALSE(e.residual_history().empty());
  }
}

TEST_CASE("inner product") {
  GridPtr g = make_grid(8);
  std::mt19937_64 rng(11);
  const SymplecticState st(random_symplectic_form(g, 1, 0.3, rng));
  SolverOptions so;
  so.rel_tol = 1e-12;
  const TangentVector a = associated_vector_field(st, random_exact_two_form(g, 1, 0.5, rng), so);
  const TangentVector b = associated_vector_field(st, random_exact_two_form(g, 1, 0.5, rng), so);
  const double ab = inner(st, a, b), ba = inner(st, b, a);
  CHECK(std::abs(ab - ba) <= 1e-10 * std::abs(ab));
  CHECK(inner(st, a, a) > 0.0);
  CHECK(norm(st, a) == doctest::Approx(std::sqrt(inner(st, a, a))));

  // <a, b> = integral of g(X, Y) dvol_rho with the background g.
  KForm density_g = dot(a.x, b.x);
  density_g.coeffs().array() *= st.u().coeffs().array();
  CHECK(ab == doctest::Approx(integrate_scalar(density_g)).epsilon(1e-8));

  const SymplecticState flat_state(omega_std(g));
  const TangentVector s = associated_vector_field(flat_state, sinusoidal_rhohat(g));
  // |sin(2 pi x1) dx2|^2 integrates to 1/2.
  CHECK(inner(flat_state, s, s) == doctest::Approx(0.5).epsilon(1e-10));

  CHECK_THROWS_AS(inner(flat_state, s, a), std::invalid_argument);
}

TEST_CASE("Christoffel symbol") {
  GridPtr g = make_grid(8);
  const SymplecticState st(omega_std(g));
  const TangentVector a = associated_vector_field(st, sinusoidal_rhohat(g));
  // X = -sin(2 pi x1) d1: iota(X) rhohat = -pi sin(4 pi x1) dx2 and
  // nabla_X X = pi sin(4 pi x1) d1; the two terms sum to -8 pi^2 cos(4 pi x1) dx12.
  const KForm expect = monomial(g, {1, 2}, [](double x) { return -2 * kTwoPi * kTwoPi * std::cos(2 * kTwoPi * x); });
  CHECK((christoffel(st, a, a) - expect).max_abs() < 1e-10);

  std::mt19937_64 rng(13);
  const SymplecticState r(random_symplectic_form(g, 1, 0.3, rng));
  const TangentVector p = associated_vector_field(r, random_exact_two_form(g, 1, 0.5, rng));
  const TangentVector q = associated_vector_field(r, random_exact_two_form(g, 1, 0.5, rng));
  CHECK((christoffel(r, p, q) - christoffel(r, q, p)).max_abs() < 1e-10);
  CHECK(is_exact(christoffel(r, p, q), 1e-9).exact);
  const TangentVector zero = associated_vector_field(r, KForm(g, 2));
  CHECK(christoffel(r, zero, q).max_abs() < 1e-12);
}

TEST_CASE("covariant derivative along a path") {
  GridPtr g = make_grid(8);
  std::mt19937_64 rng(17);
  const KForm rho = random_symplectic_form(g, 1, 0.1, rng);
  const KForm rh = random_exact_two_form(g, 1, 0.3, rng);
  const KForm sig = random_exact_two_form(g, 1, 0.3, rng);
  SolverOptions so;
  so.rel_tol = 1e-12;
  const double d = 1e-3;

  // Straight line with constant sigma: only the Christoffel term survives.
  const SampledPath line{d, {rho - d * rh, rho, rho + d * rh}, {sig, sig, sig}};
  const SymplecticState st(rho);
  const KForm gamma =
      christoffel(st, associated_vector_field(st, rh, so), associated_vector_field(st, sig, so));
  CHECK((covariant_derivative_along_path(line, ConnectionFormula::christoffel, so) - gamma).max_abs() < 1e-9);
  // The lemma form differs by O(d^2) plus an aliasing offset of a few 1e-5 on this grid.
  CHECK((covariant_derivative_along_path(line, ConnectionFormula::lemma, so) - gamma).max_abs() < 1e-4);

  const KForm zero(g, 2);
  const SampledPath still{d, {rho - d * rh, rho, rho + d * rh}, {zero, zero, zero}};
  CHECK(covariant_derivative_along_path(still, ConnectionFormula::christoffel, so).max_abs() < 1e-12);
  CHECK(covariant_derivative_along_path(still, ConnectionFormula::lemma, so).max_abs() < 1e-12);

  const SampledPath bad{0.0, {rho, rho, rho}, {sig, sig, sig}};
  CHECK_THROWS_AS(covariant_derivative_along_path(bad, ConnectionFormula::christoffel, so),
                  std::invalid_argument);
}
