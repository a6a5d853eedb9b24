#include <doctest.h>

#include <random>

#include "donaldson/errors.hpp"
#include "donaldson/sampling.hpp"
#include "donaldson/symplectic.hpp"
#include "test_util.hpp"

using namespace donaldson;
using namespace testing_util;

namespace {

double max_matrix_diff(const MatrixField& a, const Eigen::Matrix4d& b) {
  double m = 0.0;
  for (const Eigen::Matrix4d& x : a) m = std::max(m, (x - b).cwiseAbs().maxCoeff());
  return m;
}

}  // namespace

TEST_CASE("u of rho") {
  GridPtr g = make_grid(4);
  CHECK((u_of(omega_std(g)).coeffs().array() - 1.0).abs().maxCoeff() < 1e-15);
  CHECK((u_of(3.0 * omega_std(g)).coeffs().array() - 9.0).abs().maxCoeff() < 1e-14);

  // w_std + e d(sin(2 pi x1) dx2) = (1 + 2 pi e cos) dx12 + dx34, so u = 1 + 2 pi e cos.
  GridPtr h = make_grid(8);
  const double e = 0.1;
  const KForm rho = omega_std(h) + e * exterior_d(monomial(h, {2}, sin1));
  const Eigen::VectorXd expect = of_x1(h, [&](double x) { return 1.0 + kTwoPi * e * cos1(x); });
  CHECK((u_of(rho).component(0) - expect).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("degenerate states are rejected") {
  GridPtr g = make_grid(4);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(6);
  v(component_index({1, 2})) = 1.0;
  v(component_index({3, 4})) = -1.0;  // wrongly oriented: u = -1
  try {
    SymplecticState st(KForm::constant(g, 2, v));
    FAIL("expected DegenerateStateError");
  } catch (const DegenerateStateError& e) {
    CHECK(e.min_u() == doctest::Approx(-1.0));
  }
  CHECK_THROWS_AS(SymplecticState(KForm(g, 2)), DegenerateStateError);
}

TEST_CASE("R^rho") {
  GridPtr g = make_grid(8);
  std::mt19937_64 rng(3);
  const SymplecticState st(random_symplectic_form(g, 1, 0.3, rng));
  CHECK((R_rho(st, st.rho()) + st.rho()).max_abs() < 1e-13);

  // A 2-form orthogonal to rho in the wedge pairing.
  const KForm w = random_band_limited(g, 2, 1, rng);
  KForm coef = density(wedge(w, st.rho()));
  coef.coeffs().array() /= density(wedge(st.rho(), st.rho())).coeffs().array();
  const KForm w_perp = w - multiply(coef, st.rho());
  CHECK(density(wedge(w_perp, st.rho())).max_abs() < 1e-13);
  CHECK((R_rho(st, w_perp) - w_perp).max_abs() < 1e-13);

  CHECK((R_rho(st, R_rho(st, w)) - w).max_abs() < 1e-12);
}

TEST_CASE("star_rho on 2-forms") {
  GridPtr g = make_grid(4);
  std::mt19937_64 rng(5);
  const SymplecticState flat_state(omega_std(g));
  const KForm w = random_band_limited(g, 2, 1, rng);
  CHECK((star_rho_2(flat_state, w) - star(w)).max_abs() < 1e-14);

  const SymplecticState st(random_symplectic_form(g, 1, 0.3, rng));
  CHECK((star_rho_2(st, star_rho_2(st, w)) - w).max_abs() < 1e-12);
  const KForm wr = omega_rho(st);
  CHECK((star_rho_2(st, wr) - wr).max_abs() < 1e-12);
}

TEST_CASE("star_rho on 1-forms and 3-forms") {
  GridPtr g = make_grid(8);
  std::mt19937_64 rng(7);
  const SymplecticState flat_state(omega_std(g));
  const KForm lam = random_band_limited(g, 1, 2, rng);
  CHECK((star_rho_1(flat_state, lam) - star(lam)).max_abs() < 1e-14);
  const KForm t = random_band_limited(g, 3, 2, rng);
  CHECK((star_rho_3(flat_state, t) - star(t)).max_abs() < 1e-14);

  const SymplecticState st(random_symplectic_form(g, 1, 0.3, rng));
  CHECK(star_rho_1(st, KForm(g, 1)).max_abs() == 0.0);
  CHECK(star_rho_3(st, KForm(g, 3)).max_abs() == 0.0);
  // Same sign rule as the background star on odd degrees: ** = -1.
  CHECK((star_rho_3(st, star_rho_1(st, lam)) + lam).max_abs() < 1e-11);

  // Vector-field form uses the background metric: *^rho iota(X) rho = -rho ^ X^flat.
  const VectorField x = random_vector_field(g, 1, rng);
  CHECK((star_rho_1(st, interior(x, st.rho())) + wedge(st.rho(), flat(x))).max_abs() < 1e-12);

  CHECK((star_rho_1(st, lam) - metric_star_1(st.metric(), lam)).max_abs() < 1e-10);
}

TEST_CASE("g^rho") {
  GridPtr g = make_grid(4);
  CHECK(max_matrix_diff(metric_g_rho(SymplecticState(omega_std(g))), Eigen::Matrix4d::Identity()) < 1e-15);

  std::mt19937_64 rng(11);
  const SymplecticState st(random_symplectic_form(g, 1, 0.4, rng));
  std::normal_distribution<double> normal;
  for (const Eigen::Matrix4d& m : st.metric()) {
    CHECK(std::abs(m.determinant() - 1.0) < 1e-12);
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() < 1e-13);
    const Eigen::Vector4d v(normal(rng), normal(rng), normal(rng), normal(rng));
    CHECK(v.dot(m * v) > 0.0);
  }
}

TEST_CASE("rho_contract") {
  GridPtr g = make_grid(8);
  const SymplecticState flat_state(omega_std(g));
  const KForm lam = -1.0 * monomial(g, {2}, sin1);
  const VectorField x = rho_contract(flat_state, lam);
  VectorField expect(g);
  expect.components().col(0) = -of_x1(g, sin1);
  CHECK((x - expect).max_abs() < 1e-15);
  CHECK(rho_contract(flat_state, KForm(g, 1)).max_abs() == 0.0);

  std::mt19937_64 rng(13);
  const SymplecticState st(random_symplectic_form(g, 1, 0.3, rng));
  const KForm mu = random_band_limited(g, 1, 2, rng);
  CHECK((interior(rho_contract(st, mu), st.rho()) - mu).max_abs() < 1e-12);
}
