#include <doctest.h>

#include <random>

#include "donaldson/dynamics.hpp"
#include "donaldson/energy.hpp"
#include "donaldson/hodge.hpp"
#include "donaldson/sampling.hpp"
#include "test_util.hpp"

using namespace donaldson;
using namespace testing_util;

TEST_CASE("geodesic acceleration") {
  GridPtr g = make_grid(8);
  std::mt19937_64 rng(3);
  const KForm rho = random_symplectic_form(g, 1, 0.2, rng);
  CHECK(geodesic_rhs({rho, KForm(g, 2), 0.0}).max_abs() == 0.0);

  // rho = w_std, X = -sin(2 pi x1) d1: both terms equal 4 pi^2 cos(4 pi x1) dx12.
  const KForm rh = monomial(g, {1, 2}, [](double x) { return kTwoPi * cos1(x); });
  const KForm expect = monomial(g, {1, 2}, [](double x) { return 2 * kTwoPi * kTwoPi * std::cos(2 * kTwoPi * x); });
  CHECK((geodesic_rhs({omega_std(g), rh, 0.0}) - expect).max_abs() < 1e-10);

  // A geodesic has zero covariant acceleration: rhoddot = -Gamma(rhodot, rhodot).
  SolverOptions so;
  so.rel_tol = 1e-12;
  const KForm v = random_exact_two_form(g, 1, 0.3, rng);
  const SymplecticState st(rho);
  const TangentVector a = associated_vector_field(st, v, so);
  CHECK((geodesic_rhs({rho, v, 0.0}, so) + christoffel(st, a, a)).max_abs() < 1e-9);
}

TEST_CASE("geodesic at rest") {
  GridPtr g = make_grid(8);
  std::mt19937_64 rng(5);
  const KForm rho = random_symplectic_form(g, 1, 0.2, rng);
  const GeodesicRun run = integrate_geodesic({rho, KForm(g, 2), 0.0}, 0.1, 3);
  CHECK(run.termination == Termination::completed);
  CHECK(run.records.size() == 4);
  CHECK((run.final_state.rho - rho).max_abs() == 0.0);
  for (const FlowRecord& r : run.records) CHECK(*r.speed == 0.0);
  CHECK(run.records.back().t == doctest::Approx(0.3));
}

TEST_CASE("geodesic reversal, speed and class") {
  GridPtr g = make_grid(8);
  std::mt19937_64 rng(7);
  const KForm rho = random_symplectic_form(g, 1, 0.05, rng);
  const KForm v = random_exact_two_form(g, 1, 0.3, rng);
  DynamicsOptions o;
  o.solver.rel_tol = 1e-13;
  const GeodesicRun fwd = integrate_geodesic({rho, v, 0.0}, 1e-2, 10, o);
  REQUIRE(fwd.termination == Termination::completed);
  const GeodesicRun back =
      integrate_geodesic({fwd.final_state.rho, -1.0 * fwd.final_state.rhodot, 0.0}, 1e-2, 10, o);
  CHECK((back.final_state.rho - rho).max_abs() < 1e-9);
  CHECK((back.final_state.rhodot + v).max_abs() < 1e-9);
  // Negative dt runs the same equation backwards.
  const GeodesicRun neg = integrate_geodesic(fwd.final_state, -1e-2, 10, o);
  CHECK((neg.final_state.rho - rho).max_abs() < 1e-9);

  for (const FlowRecord& r : fwd.records) {
    CHECK(std::abs(*r.speed - *fwd.records.front().speed) < 1e-8);
  }
  CHECK(harmonic_part(fwd.final_state.rho - omega_std(g)).max_abs() < 1e-11);
  CHECK(is_exact(fwd.final_state.rhodot, 1e-10).exact);
}

TEST_CASE("geodesic leaving the space stops with the last valid state") {
  GridPtr g = make_grid(8);
  const KForm v = monomial(g, {1, 2}, [](double x) { return -4.0 * cos1(x); });
  const GeodesicRun run = integrate_geodesic({omega_std(g), v, 0.0}, 0.05, 40);
  CHECK(run.termination == Termination::left_space);
  CHECK(run.records.size() < 41);
  CHECK(SymplecticState(run.final_state.rho).min_u() > kDefaultUFloor);
  CHECK(run.final_state.t == doctest::Approx(run.records.back().t));
  CHECK_FALSE(run.message.empty());
}

TEST_CASE("gradient flow") {
  GridPtr g = make_grid(8);
  SUBCASE("stationary at the standard form") {
    const GradientFlowRun run = gradient_flow(SymplecticState(omega_std(g)), 1e-2, 5);
    CHECK(run.termination == Termination::completed);
    for (const FlowRecord& r : run.records) {
      CHECK(r.grad_norm <= 1e-10);
      CHECK(r.energy == doctest::Approx(2.0));
    }
  }
  SUBCASE("energy decreases toward 2") {
    KForm lam = monomial(g, {2}, sin1);
    const SymplecticState start(omega_std(g) + 0.05 * exterior_d(lam));
    DynamicsOptions o;
    o.dealias = true;
    const GradientFlowRun run = gradient_flow(start, 1e-3, 20, o);
    CHECK(run.termination == Termination::completed);
    CHECK(run.rejections == 0);
    for (std::size_t i = 1; i < run.records.size(); ++i) {
      CHECK(run.records[i].energy < run.records[i - 1].energy);
      CHECK(run.records[i].max_residual < 1e-11);
    }
    CHECK(run.records.back().energy > 2.0);
    CHECK(energy(SymplecticState(run.final_rho)) == doctest::Approx(run.records.back().energy));
  }
  SUBCASE("oversized steps are rejected and then progress") {
    std::mt19937_64 rng(11);
    const SymplecticState start(random_symplectic_form(g, 1, 0.2, rng));
    const GradientFlowRun run = gradient_flow(start, 10.0, 3);
    CHECK(run.rejections > 0);
    CHECK(run.termination == Termination::completed);
    CHECK(run.final_dt < 10.0);
    CHECK(run.records.back().energy < run.records.front().energy);
  }
  SUBCASE("retry exhaustion") {
    std::mt19937_64 rng(13);
    const SymplecticState start(random_symplectic_form(g, 1, 0.2, rng));
    DynamicsOptions o;
    o.max_retries = 1;
    const GradientFlowRun run = gradient_flow(start, 10.0, 3, o);
    CHECK(run.termination == Termination::step_size_collapse);
    CHECK(run.message.find("step-size collapse") != std::string::npos);
  }
  CHECK_THROWS_AS(gradient_flow(SymplecticState(omega_std(g)), 0.0, 1), std::invalid_argument);
}
