#include <doctest.h>

#include <random>

#include "donaldson/sampling.hpp"
#include "test_util.hpp"

using namespace donaldson;
using namespace testing_util;

namespace {

double sgn(int k) { return k % 2 ? -1.0 : 1.0; }

// Pointwise wedge of two constant 2-forms by brute force over index pairs:
// coefficient of dx1234 in sum a_ij b_kl dx^i dx^j dx^k dx^l.
double wedge22_oracle(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  double total = 0.0;
  for (int p = 0; p < 6; ++p) {
    for (int q = 0; q < 6; ++q) {
      int idx[4] = {pairs[p][0], pairs[p][1], pairs[q][0], pairs[q][1]};
      bool distinct = true;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) distinct = distinct && idx[i] != idx[j];
      if (!distinct) continue;
      int inversions = 0;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) inversions += idx[i] > idx[j];
      total += sgn(inversions) * a(p) * b(q);
    }
  }
  return total;
}

}  // namespace

TEST_CASE("wedge of basis and symplectic forms") {
  GridPtr g = make_grid(4);
  const KForm dx1 = KForm::constant(g, 1, Eigen::Vector4d(1, 0, 0, 0));
  const KForm dx2 = KForm::constant(g, 1, Eigen::Vector4d(0, 1, 0, 0));
  const KForm w = wedge(dx1, dx2);
  CHECK(w.degree() == 2);
  Eigen::VectorXd expect = Eigen::VectorXd::Zero(6);
  expect(component_index({1, 2})) = 1.0;
  CHECK((w.coeffs().rowwise() - expect.transpose()).cwiseAbs().maxCoeff() == 0.0);

  const KForm w1 = omega_std(g);
  CHECK((wedge(w1, w1) - 2.0 * volume_form(g)).max_abs() < 1e-15);

  Eigen::VectorXd v1(6), v2(6);
  v1 << 1, 0, 0, 0, 0, 1;   // dx12 + dx34
  v2 << 0, 1, 0, 0, -1, 0;  // dx13 + dx42
  CHECK(wedge22_oracle(v1, v2) == 0.0);
  const KForm w2 = KForm::constant(g, 2, v2);
  CHECK(wedge(w1, w2).max_abs() == 0.0);

  std::mt19937_64 rng(5);
  const KForm a = random_band_limited(g, 2, 1, rng);
  const KForm b = random_band_limited(g, 2, 1, rng);
  const KForm ab = wedge(a, b);
  double err = 0.0;
  for (Eigen::Index p = 0; p < a.points(); ++p) {
    err = std::max(err, std::abs(ab.coeffs()(p, 0) - wedge22_oracle(a.coeffs().row(p).transpose(),
                                                                     b.coeffs().row(p).transpose())));
  }
  CHECK(err < 1e-13);

  CHECK_THROWS_WITH_AS(wedge(w1, wedge(w1, dx1)), "degree > 4", std::invalid_argument);
}

TEST_CASE("exterior derivative") {
  GridPtr g = make_grid(8);
  const KForm a = monomial(g, {2}, sin1);
  const KForm expect = monomial(g, {1, 2}, [](double x) { return kTwoPi * cos1(x); });
  CHECK((exterior_d(a) - expect).max_abs() < 1e-12);

  CHECK(exterior_d(omega_std(g)).max_abs() < 1e-13);

  std::mt19937_64 rng(7);
  const KForm f = random_band_limited(g, 0, 3, rng);
  CHECK(exterior_d(exterior_d(f)).max_abs() < 1e-12);
  CHECK_THROWS_AS(exterior_d(volume_form(g)), std::invalid_argument);
}

TEST_CASE("interior product") {
  GridPtr g = make_grid(4);
  const VectorField d1 = VectorField::constant(g, Eigen::Vector4d(1, 0, 0, 0));
  const KForm dx2 = KForm::constant(g, 1, Eigen::Vector4d(0, 1, 0, 0));
  const KForm dx12 = monomial(g, {1, 2}, [](double) { return 1.0; });
  CHECK((interior(d1, dx12) - dx2).max_abs() == 0.0);
  CHECK((interior(d1, omega_std(g)) - dx2).max_abs() == 0.0);

  std::mt19937_64 rng(11);
  const VectorField x = random_vector_field(g, 1, rng);
  for (int k = 2; k <= 4; ++k) {
    const KForm a = random_band_limited(g, k, 1, rng);
    CHECK(interior(x, interior(x, a)).max_abs() < 1e-14);
  }
  CHECK_THROWS_AS(interior(x, KForm(g, 0)), std::invalid_argument);
}

TEST_CASE("background Hodge star") {
  GridPtr g = make_grid(4);
  const KForm one = star(volume_form(g));
  CHECK(one.degree() == 0);
  CHECK((one.coeffs().array() - 1.0).abs().maxCoeff() == 0.0);
  CHECK((star(omega_std(g)) - omega_std(g)).max_abs() == 0.0);

  std::mt19937_64 rng(13);
  for (int k = 0; k <= 4; ++k) {
    const KForm a = random_band_limited(g, k, 1, rng);
    // ** = (-1)^{k(4-k)}: minus on odd degrees in dimension 4.
    CHECK((star(star(a)) - sgn(k * (4 - k)) * a).max_abs() < 1e-14);
    const KForm lhs = density(wedge(a, star(a)));
    CHECK((lhs.coeffs() - pointwise_norm2(a).coeffs()).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("self-dual split") {
  GridPtr g = make_grid(4);
  const SelfDualSplit s = sd_split(omega_std(g));
  CHECK((s.plus - omega_std(g)).max_abs() == 0.0);
  CHECK(s.minus.max_abs() == 0.0);

  Eigen::VectorXd v = Eigen::VectorXd::Zero(6);
  v(component_index({1, 2})) = 1.0;
  v(component_index({3, 4})) = -1.0;
  const KForm asd = KForm::constant(g, 2, v);
  const SelfDualSplit t = sd_split(asd);
  CHECK(t.plus.max_abs() == 0.0);
  CHECK((t.minus - asd).max_abs() == 0.0);

  std::mt19937_64 rng(17);
  const KForm w = random_band_limited(g, 2, 1, rng);
  const SelfDualSplit r = sd_split(w);
  CHECK((w - r.plus - r.minus).max_abs() < 1e-14);
  CHECK((star(r.plus) - r.plus).max_abs() < 1e-14);
  CHECK((star(r.minus) + r.minus).max_abs() < 1e-14);
  const Eigen::VectorXd n = pointwise_norm2(w).component(0);
  const Eigen::VectorXd np = pointwise_norm2(r.plus).component(0);
  const Eigen::VectorXd nm = pointwise_norm2(r.minus).component(0);
  CHECK((n - np - nm).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("Lie derivative") {
  GridPtr g = make_grid(8);
  std::mt19937_64 rng(19);
  const VectorField x = random_vector_field(g, 1, rng);
  const KForm rho = random_symplectic_form(g, 1, 0.3, rng);
  CHECK((lie_derivative(x, rho) - exterior_d(interior(x, rho))).max_abs() < 1e-12);

  const VectorField d1 = VectorField::constant(g, Eigen::Vector4d(1, 0, 0, 0));
  const KForm expect = monomial(g, {2}, [](double x1) { return kTwoPi * cos1(x1); });
  CHECK((lie_derivative(d1, monomial(g, {2}, sin1)) - expect).max_abs() < 1e-12);

  const KForm f = random_band_limited(g, 0, 2, rng);
  CHECK((lie_derivative(x, f) - interior(x, exterior_d(f))).max_abs() < 1e-12);
}

TEST_CASE("Lie bracket acts as commutator of Lie derivatives") {
  GridPtr g = make_grid(8);
  std::mt19937_64 rng(23);
  const VectorField x = random_vector_field(g, 1, rng);
  const VectorField y = random_vector_field(g, 1, rng);
  const KForm a = random_band_limited(g, 1, 1, rng);
  const KForm lhs = lie_derivative(lie_bracket(x, y), a);
  const KForm rhs = lie_derivative(x, lie_derivative(y, a)) - lie_derivative(y, lie_derivative(x, a));
  CHECK((lhs - rhs).max_abs() < 1e-10);
}

TEST_CASE("flat covariant derivative") {
  GridPtr g = make_grid(8);
  std::mt19937_64 rng(29);
  const VectorField x = random_vector_field(g, 1, rng);
  const VectorField c = VectorField::constant(g, Eigen::Vector4d(0.3, -1, 2, 0.5));
  CHECK(covariant_derivative(x, c).max_abs() < 1e-12);

  const VectorField d1 = VectorField::constant(g, Eigen::Vector4d(1, 0, 0, 0));
  VectorField y(g);
  y.components().col(1) = of_x1(g, sin1);
  VectorField expect(g);
  expect.components().col(1) = of_x1(g, [](double x1) { return kTwoPi * cos1(x1); });
  CHECK((covariant_derivative(d1, y) - expect).max_abs() < 1e-12);

  const VectorField z = random_vector_field(g, 1, rng);
  const VectorField torsion = covariant_derivative(x, z) - covariant_derivative(z, x) - lie_bracket(x, z);
  CHECK(torsion.max_abs() < 1e-12);
}

TEST_CASE("integration") {
  GridPtr g = make_grid(8);
  CHECK(integrate(volume_form(g)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(integrate(monomial(g, {1, 2, 3, 4}, sin1))) < 1e-15);
  CHECK(integrate(wedge(omega_std(g), omega_std(g))) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("API misuse") {
  CHECK_THROWS_AS(make_grid(5), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(2), std::invalid_argument);
  GridPtr g = make_grid(4), h = make_grid(6);
  CHECK_THROWS_AS(wedge(omega_std(g), omega_std(h)), std::invalid_argument);
  CHECK_THROWS_AS(KForm(g, 5), std::invalid_argument);
}
