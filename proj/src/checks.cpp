#include "donaldson/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "donaldson/dynamics.hpp"
#include "donaldson/energy.hpp"
#include "donaldson/hodge.hpp"
#include "donaldson/hyperkahler.hpp"
#include "donaldson/sampling.hpp"
#include "donaldson/symplectic.hpp"

namespace donaldson {

namespace {

class Suite {
public:
  void record(const std::string& name, double residual, double tolerance) {
    auto it = std::find_if(results_.begin(), results_.end(),
                           [&](const CheckResult& r) { return r.name == name; });
    if (it == results_.end()) {
      results_.push_back({name, residual, tolerance, false});
    } else {
      // NaN must stick.
      if (!(residual <= it->residual)) it->residual = residual;
    }
  }

  std::vector<CheckResult> finish() {
    for (CheckResult& r : results_) r.pass = r.residual <= r.tolerance;
    return std::move(results_);
  }

private:
  std::vector<CheckResult> results_;
};

double relative(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

double l2_inner(const KForm& a, const KForm& b) {
  return ordered_mean((a.coeffs().array() * b.coeffs().array()).rowwise().sum());
}

void fields_checks(Suite& s, GridPtr g, int kmax, std::mt19937_64& rng, int samples) {
  for (int trial = 0; trial < samples; ++trial) {
    std::array<KForm, 5> f{
        random_band_limited(g, 0, kmax, rng), random_band_limited(g, 1, kmax, rng),
        random_band_limited(g, 2, kmax, rng), random_band_limited(g, 3, kmax, rng),
        random_band_limited(g, 4, kmax, rng)};
    const VectorField x = random_vector_field(g, kmax, rng);
    const VectorField y = random_vector_field(g, kmax, rng);

    for (int k = 0; k <= 2; ++k) {
      s.record("fields.d_squared", exterior_d(exterior_d(f[k])).max_abs(), 1e-11);
    }
    for (int k = 0; k <= 4; ++k) {
      s.record("fields.double_star",
               (star(star(f[k])) - double(k % 2 ? -1 : 1) * f[k]).max_abs(), 1e-14);
      for (int l = 0; k + l <= 4; ++l) {
        const double sign = (k * l) % 2 ? -1.0 : 1.0;
        s.record("fields.graded_commutativity",
                 (wedge(f[k], f[l]) - sign * wedge(f[l], f[k])).max_abs(), 1e-13);
        if (k + l <= 3) {
          const double sk = k % 2 ? -1.0 : 1.0;
          const KForm lhs = exterior_d(wedge(f[k], f[l]));
          const KForm rhs = wedge(exterior_d(f[k]), f[l]) + sk * wedge(f[k], exterior_d(f[l]));
          s.record("fields.leibniz_d", (lhs - rhs).max_abs(), 1e-11);
        }
        if (k >= 1 && l >= 1) {
          const double sk = k % 2 ? -1.0 : 1.0;
          const KForm lhs = interior(x, wedge(f[k], f[l]));
          const KForm rhs =
              wedge(interior(x, f[k]), f[l]) + sk * wedge(f[k], interior(x, f[l]));
          s.record("fields.leibniz_interior", (lhs - rhs).max_abs(), 1e-12);
        }
      }
      if (k <= 3) {
        const double sk = k % 2 ? -1.0 : 1.0;
        const KForm& b = f[3 - k];
        const double lhs = integrate(wedge(exterior_d(f[k]), b));
        const double rhs = -sk * integrate(wedge(f[k], exterior_d(b)));
        s.record("fields.integration_by_parts", std::abs(lhs - rhs), 1e-11);
      }
    }
    // Triple products: resolved only for 3 kmax below Nyquist.
    const int k3 = std::max(1, (g->n() / 2 - 1) / 3);
    const VectorField x3 = random_vector_field(g, k3, rng);
    const VectorField y3 = random_vector_field(g, k3, rng);
    for (int k = 1; k <= 2; ++k) {
      const KForm a = random_band_limited(g, k, k3, rng);
      const KForm lhs = lie_derivative(lie_bracket(x3, y3), a);
      const KForm rhs = lie_derivative(x3, lie_derivative(y3, a)) -
                        lie_derivative(y3, lie_derivative(x3, a));
      s.record("fields.lie_bracket", (lhs - rhs).max_abs() / std::max(1.0, lhs.max_abs()),
               1e-10);
    }
    const SelfDualSplit sd = sd_split(f[2]);
    s.record("fields.sd_split",
             std::max({(f[2] - sd.plus - sd.minus).max_abs(),
                       (star(sd.plus) - sd.plus).max_abs(),
                       (star(sd.minus) + sd.minus).max_abs()}),
             1e-14);
  }
}

void hodge_checks(Suite& s, GridPtr g, int kmax, std::mt19937_64& rng, int samples) {
  for (int trial = 0; trial < samples; ++trial) {
    Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(6, 0.5, 3.0);
    const KForm w = random_band_limited(g, 2, kmax, rng) + KForm::constant(g, 2, c);
    const HodgeDecomposition h = hodge_decompose(w);
    s.record("hodge.reconstruct",
             (h.exact_part + h.coexact_part + h.harmonic_part - w).max_abs(), 1e-11);
    s.record("hodge.orthogonality",
             std::max({std::abs(l2_inner(h.exact_part, h.coexact_part)),
                       std::abs(l2_inner(h.exact_part, h.harmonic_part)),
                       std::abs(l2_inner(h.coexact_part, h.harmonic_part))}),
             1e-11);

    const KForm lam = codifferential(random_band_limited(g, 2, kmax, rng));
    s.record("hodge.primitive_roundtrip",
             (primitive_of_exact(exterior_d(lam)) - lam).max_abs(), 1e-10);

    KForm f = random_band_limited(g, 0, kmax, rng);
    f.coeffs().array() -= ordered_mean(f.component(0));
    s.record("hodge.solve_laplace", (laplacian(solve_laplace(f)) + f).max_abs(), 1e-10);
  }
}

void geometry_checks(Suite& s, GridPtr g, int kmax, std::mt19937_64& rng, int samples) {
  for (int trial = 0; trial < samples; ++trial) {
    const SymplecticState st(random_symplectic_form(g, kmax, 0.3, rng));
    const KForm a = random_band_limited(g, 2, kmax, rng);
    const KForm b = random_band_limited(g, 2, kmax, rng);
    const KForm lam = random_band_limited(g, 1, kmax, rng);
    const VectorField x = random_vector_field(g, kmax, rng);

    s.record("rho.R_involution", (R_rho(st, R_rho(st, a)) - a).max_abs(), 1e-12);
    s.record("rho.R_preserves_wedge",
             (wedge(R_rho(st, a), R_rho(st, b)) - wedge(a, b)).max_abs(), 1e-12);
    s.record("rho.R_rho_is_minus_rho", (R_rho(st, st.rho()) + st.rho()).max_abs(), 1e-12);

    double det_err = 0.0;
    for (const Eigen::Matrix4d& m : st.metric()) {
      det_err = std::max(det_err, std::abs(m.determinant() - 1.0));
    }
    s.record("rho.det_g_rho", det_err, 1e-10);
    s.record("rho.star1_vs_metric_star",
             (star_rho_1(st, lam) - metric_star_1(st.metric(), lam)).max_abs(), 1e-10);

    s.record("rho.star_contraction",
             (star_rho_1(st, interior(x, st.rho())) + wedge(st.rho(), flat(x))).max_abs(),
             1e-10);
    const KForm wr = omega_rho(st);
    s.record("rho.omega_rho_self_dual", (star_rho_2(st, wr) - wr).max_abs(), 1e-10);
    s.record("rho.star3_star1", (star_rho_3(st, star_rho_1(st, lam)) + lam).max_abs(), 1e-11);
    s.record("rho.contract_roundtrip",
             (interior(rho_contract(st, lam), st.rho()) - lam).max_abs(), 1e-12);
  }
}

void metric_checks(Suite& s, GridPtr g, int kmax, double amp, std::mt19937_64& rng,
                   int samples, const SolverOptions& so) {
  for (int trial = 0; trial < samples; ++trial) {
    const KForm r0 = random_symplectic_form(g, kmax, amp, rng);
    const KForm r1 = random_exact_two_form(g, kmax, 0.3, rng);
    const KForm r2 = random_exact_two_form(g, kmax, 0.3, rng);
    const KForm s0 = random_exact_two_form(g, kmax, 0.3, rng);
    const KForm s1 = random_exact_two_form(g, kmax, 0.3, rng);
    const KForm t0 = random_exact_two_form(g, kmax, 0.3, rng);
    const KForm t1 = random_exact_two_form(g, kmax, 0.3, rng);
    const SymplecticState st(r0);

    const TangentVector a = associated_vector_field(st, s0, so);
    const TangentVector b = associated_vector_field(st, t0, so);
    for (const TangentVector* v : {&a, &b}) {
      s.record("metric.closed_residual", v->report.closed_residual, 1e-9);
      s.record("metric.harmonic_residual", v->report.harmonic_residual, 1e-9);
      s.record("metric.primitive", (exterior_d(v->lambda) - v->rhohat).max_abs(), 1e-9);
      s.record("metric.contraction", (interior(v->x, st.rho()) + v->lambda).max_abs(), 1e-11);
    }
    s.record("metric.inner_symmetry", relative(inner(st, a, b), inner(st, b, a)), 1e-10);
    s.record("metric.christoffel_symmetry",
             (christoffel(st, a, b) - christoffel(st, b, a)).max_abs(), 1e-10);

    const double d = 1e-3;
    auto rho = [&](double t) { return r0 + t * r1 + (0.5 * t * t) * r2; };
    auto sig = [&](double t) { return s0 + t * s1; };
    auto tau = [&](double t) { return t0 + t * t1; };
    const SampledPath ps{d, {rho(-d), rho(0), rho(d)}, {sig(-d), sig(0), sig(d)}};
    const SampledPath pt{d, {rho(-d), rho(0), rho(d)}, {tau(-d), tau(0), tau(d)}};
    const KForm ds_a = covariant_derivative_along_path(ps, ConnectionFormula::christoffel, so);
    const KForm ds_b = covariant_derivative_along_path(ps, ConnectionFormula::lemma, so);
    const KForm dt_a = covariant_derivative_along_path(pt, ConnectionFormula::christoffel, so);
    s.record("metric.connection_A_vs_B", (ds_a - ds_b).max_abs(), 1e-6);

    auto ip = [&](const SymplecticState& at, const KForm& x, const KForm& y) {
      return inner(at, associated_vector_field(at, x, so), associated_vector_field(at, y, so));
    };
    const SymplecticState sm(rho(-d)), sp(rho(d));
    const double lhs = (ip(sp, sig(d), tau(d)) - ip(sm, sig(-d), tau(-d))) / (2 * d);
    const double rhs = ip(st, ds_a, tau(0)) + ip(st, sig(0), dt_a);
    s.record("metric.compatibility", std::abs(lhs - rhs), 1e-6);
  }
}

void energy_checks(Suite& s, GridPtr g, int kmax, double amp, std::mt19937_64& rng,
                   int samples, const SolverOptions& so) {
  const SymplecticState flat_state(omega_std(g));
  s.record("energy.value_at_std", std::abs(energy(flat_state) - 2.0), 1e-13);
  s.record("energy.grad_at_std", grad_energy(flat_state).rhohat.max_abs(), 1e-10);

  for (int trial = 0; trial < samples; ++trial) {
    const KForm rho = random_symplectic_form(g, kmax, amp, rng);
    const KForm rh = random_exact_two_form(g, kmax, 0.3, rng);
    const KForm rh2 = random_exact_two_form(g, kmax, 0.3, rng);
    const SymplecticState st(rho);
    const VectorField xg = x_grad_energy(st);
    const GradientFieldResiduals gr = gradient_field_residuals(st, xg);
    s.record("energy.gradient_field", std::max(gr.contraction, gr.wedge), 1e-10);

    const TangentVector grad = grad_energy(st);
    s.record("energy.grad_exact", is_exact(grad.rhohat).closed_residual, 1e-11);
    const TangentVector a = associated_vector_field(st, rh, so);
    const TangentVector b = associated_vector_field(st, rh2, so);

    // The difference quotient loses digits near w_std, so this one runs on
    // a visibly non-critical state.
    const KForm far = random_symplectic_form(g, kmax, 0.1, rng);
    const SymplecticState st_far(far);
    const double h = 1e-4;
    const double fd = (energy(SymplecticState(far + h * rh)) -
                       energy(SymplecticState(far - h * rh))) / (2 * h);
    const double exact = inner(st_far, grad_energy(st_far), associated_vector_field(st_far, rh, so));
    s.record("energy.gradient_fd", relative(fd, exact), 1e-6);

    const HessianReport hr = hessian_report(st, a, so);
    s.record("energy.hessian_operator_vs_form", relative(hr.operator_pairing, hr.form_value),
             1e-8);
    const TangentVector ha = associated_vector_field(st, hr.operator_value, so);
    const TangentVector hb = associated_vector_field(st, hessian_operator(st, b, xg), so);
    s.record("energy.hessian_symmetry", relative(inner(st, ha, b), inner(st, hb, a)), 1e-7);

    const TangentVector at_std = associated_vector_field(flat_state, rh, so);
    const KForm minus = sd_split(rh).minus;
    s.record("energy.hessian_at_std",
             relative(hessian_form(flat_state, at_std), 2.0 * l2_inner(minus, minus)), 1e-8);

    // Hyperkaehler specialisations on the same state.
    s.record("hk.x_grad", (x_grad_energy_hk(st) - xg).max_abs(), 1e-9);
    s.record("hk.grad", (grad_energy_hk(st) - grad.rhohat).max_abs(), 1e-9);
    s.record("hk.hessian_form", relative(hessian_form_hk(st, a), hr.form_value), 1e-6);
    s.record("hk.theta_hat_pairing",
             std::abs(integrate(wedge(theta_hat(st, rh), rh)) - theta_hat_pairing_hk(st, rh)),
             1e-9);
    for (const KForm& k : k_functions(st)) {
      s.record("hk.hamiltonian_field",
               (interior(hamiltonian_vector_field(st, k), st.rho()) - exterior_d(k)).max_abs(),
               1e-11);
    }
  }
}

void dynamics_checks(Suite& s, GridPtr g, int kmax, double amp, std::mt19937_64& rng,
                     const SolverOptions& so) {
  DynamicsOptions o;
  o.solver = so;
  const KForm r0 = random_symplectic_form(g, kmax, std::max(amp, 0.02), rng);
  const GradientFlowRun flow = gradient_flow(SymplecticState(r0), 1e-3, 5, o);
  double increase = flow.termination == Termination::completed ? 0.0 : 1.0;
  double class_drift = 0.0;
  for (std::size_t i = 1; i < flow.records.size(); ++i) {
    increase = std::max(increase, flow.records[i].energy - flow.records[i - 1].energy);
  }
  for (const FlowRecord& r : flow.records) class_drift = std::max(class_drift, r.max_residual);
  s.record("dynamics.flow_monotone", increase, 0.0);
  s.record("dynamics.flow_class", class_drift, 1e-11);

  const KForm v0 = random_exact_two_form(g, kmax, 0.1, rng);
  const GeodesicRun fwd = integrate_geodesic({r0, v0, 0.0}, 1e-2, 3, o);
  const GeodesicRun back = integrate_geodesic(
      {fwd.final_state.rho, -fwd.final_state.rhodot, 0.0}, 1e-2, 3, o);
  s.record("dynamics.geodesic_reversal", (back.final_state.rho - r0).max_abs(), 1e-6);
  double drift = 0.0;
  for (const FlowRecord& r : fwd.records) {
    drift = std::max(drift, std::abs(*r.speed - *fwd.records.front().speed));
  }
  s.record("dynamics.geodesic_speed", drift, 1e-6);
}

}  // namespace

std::vector<CheckResult> run_checks(const CheckOptions& opts) {
  if (opts.samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (!(opts.amplitude > 0.0)) throw std::invalid_argument("amplitude must be > 0");
  GridPtr g = make_grid(opts.grid_n);
  // Products of two fields stay below the Nyquist wavenumber.
  const int kmax = std::max(1, (opts.grid_n / 2 - 1) / 2);
  std::mt19937_64 rng(opts.seed);
  Suite s;
  fields_checks(s, g, kmax, rng, opts.samples);
  hodge_checks(s, g, kmax, rng, opts.samples);
  geometry_checks(s, g, kmax, rng, opts.samples);
  metric_checks(s, g, 1, opts.amplitude, rng, opts.samples, opts.solver);
  energy_checks(s, g, 1, opts.amplitude, rng, opts.samples, opts.solver);
  dynamics_checks(s, g, 1, opts.amplitude, rng, opts.solver);
  return s.finish();
}

void write_check_report(std::span<const CheckResult> results, std::ostream& out) {
  char line[160];
  for (const CheckResult& r : results) {
    std::snprintf(line, sizeof line, "%-36s %12.4e %10.1e  %s\n", r.name.c_str(), r.residual,
                  r.tolerance, r.pass ? "PASS" : "FAIL");
    out << line;
  }
}

bool all_passed(std::span<const CheckResult> results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.pass; });
}

}  // namespace donaldson
