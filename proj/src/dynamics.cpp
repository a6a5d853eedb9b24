#include "donaldson/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "donaldson/energy.hpp"
#include "donaldson/errors.hpp"
#include "donaldson/hodge.hpp"

namespace donaldson {

namespace {

struct GeodesicEval {
  SymplecticState state;
  TangentVector velocity;
  KForm accel;
};

GeodesicEval evaluate(const KForm& rho, const KForm& rhodot,
                      const DynamicsOptions& opts, const Eigen::VectorXd* warm) {
  SymplecticState state(rho, opts.u_floor);
  TangentVector v = warm ? associated_vector_field(state, rhodot, opts.solver, *warm)
                         : associated_vector_field(state, rhodot, opts.solver);
  const VectorField& x = v.x;
  KForm accel = exterior_d(interior(x, exterior_d(interior(x, rho)))) +
                exterior_d(interior(covariant_derivative(x, x), rho));
  return {std::move(state), std::move(v), std::move(accel)};
}

double solve_residual(const TangentVector& t) {
  return std::max(t.report.closed_residual, t.report.harmonic_residual);
}

FlowRecord base_record(int step, double t, const SymplecticState& state) {
  FlowRecord r;
  r.step = step;
  r.t = t;
  r.energy = energy(state);
  r.grad_norm = norm(state, grad_energy(state));
  r.min_u = state.min_u();
  return r;
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::left_space: return "left the space of symplectic forms";
    case Termination::step_size_collapse: return "step-size collapse";
  }
  return "unknown";
}

KForm geodesic_rhs(const GeodesicState& state, const SolverOptions& opts,
                   double u_floor) {
  DynamicsOptions o;
  o.solver = opts;
  o.u_floor = u_floor;
  return evaluate(state.rho, state.rhodot, o, nullptr).accel;
}

GeodesicRun integrate_geodesic(const GeodesicState& initial, double dt, int steps,
                               const DynamicsOptions& opts) {
  if (dt == 0.0 || steps < 0) {
    throw std::invalid_argument("integrate_geodesic: dt must be nonzero, steps >= 0");
  }
  GeodesicRun run{{}, initial, Termination::completed, {}};

  GeodesicEval current = evaluate(initial.rho, initial.rhodot, opts, nullptr);
  FlowRecord rec0 = base_record(0, initial.t, current.state);
  rec0.speed = norm(current.state, current.velocity);
  rec0.solver_iters = current.velocity.report.iterations;
  rec0.max_residual = solve_residual(current.velocity);
  run.records.push_back(rec0);

  GeodesicState s = initial;
  for (int step = 1; step <= steps; ++step) {
    try {
      const KForm& k1v = s.rhodot;
      const KForm& k1a = current.accel;
      const GeodesicEval e2 = evaluate(s.rho + (0.5 * dt) * k1v,
                                       s.rhodot + (0.5 * dt) * k1a, opts,
                                       &current.velocity.gauge);
      const KForm k2v = s.rhodot + (0.5 * dt) * k1a;
      const GeodesicEval e3 = evaluate(s.rho + (0.5 * dt) * k2v,
                                       s.rhodot + (0.5 * dt) * e2.accel, opts,
                                       &e2.velocity.gauge);
      const KForm k3v = s.rhodot + (0.5 * dt) * e2.accel;
      const GeodesicEval e4 = evaluate(s.rho + dt * k3v, s.rhodot + dt * e3.accel,
                                       opts, &e3.velocity.gauge);
      const KForm k4v = s.rhodot + dt * e3.accel;

      GeodesicState next{
          s.rho + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
          s.rhodot + (dt / 6.0) * (k1a + 2.0 * e2.accel + 2.0 * e3.accel + e4.accel),
          s.t + dt};
      if (opts.dealias) {
        next.rho = dealias(next.rho);
        next.rhodot = dealias(next.rhodot);
      }
      GeodesicEval after = evaluate(next.rho, next.rhodot, opts, &e4.velocity.gauge);

      FlowRecord rec = base_record(step, next.t, after.state);
      rec.speed = norm(after.state, after.velocity);
      rec.solver_iters = e2.velocity.report.iterations + e3.velocity.report.iterations +
                         e4.velocity.report.iterations +
                         after.velocity.report.iterations;
      rec.max_residual = std::max({solve_residual(e2.velocity), solve_residual(e3.velocity),
                                   solve_residual(e4.velocity),
                                   solve_residual(after.velocity)});
      run.records.push_back(rec);
      s = std::move(next);
      current = std::move(after);
    } catch (const DegenerateStateError& e) {
      run.termination = Termination::left_space;
      run.message = e.what();
      break;
    }
  }
  run.final_state = s;
  return run;
}

GradientFlowRun gradient_flow(const SymplecticState& initial, double dt, int steps,
                              const DynamicsOptions& opts) {
  if (!(dt > 0.0) || steps < 0) {
    throw std::invalid_argument("gradient_flow: dt must be > 0, steps >= 0");
  }
  GradientFlowRun run{{}, initial.rho(), 0, dt, Termination::completed, {}};

  auto velocity = [&](const KForm& rho) {
    const SymplecticState st(rho, opts.u_floor);
    return -grad_energy(st).rhohat;
  };
  auto closure_residual = [](const KForm& rho) {
    const KForm shift = rho - omega_std(rho.grid());
    return std::max(exterior_d(rho).max_abs(), harmonic_part(shift).max_abs());
  };

  SymplecticState state = initial;
  double e_now = energy(state);
  FlowRecord rec0 = base_record(0, 0.0, state);
  rec0.max_residual = closure_residual(state.rho());
  run.records.push_back(rec0);

  double t = 0.0;
  double h = dt;
  for (int step = 1; step <= steps; ++step) {
    bool accepted = false;
    for (int attempt = 0; attempt <= opts.max_retries; ++attempt) {
      try {
        const KForm& rho = state.rho();
        const KForm k1 = -grad_energy(state).rhohat;
        const KForm k2 = velocity(rho + (0.5 * h) * k1);
        const KForm k3 = velocity(rho + (0.5 * h) * k2);
        const KForm k4 = velocity(rho + h * k3);
        KForm next = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (opts.dealias) next = dealias(next);
        SymplecticState trial(next, opts.u_floor);
        const double e_next = energy(trial);
        if (std::isfinite(e_next) && e_next <= e_now) {
          state = std::move(trial);
          e_now = e_next;
          t += h;
          accepted = true;
          break;
        }
        // At a critical point the update is pure round-off: stay put.
        const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(e_now);
        if (std::isfinite(e_next) && e_next <= e_now + slack) {
          t += h;
          accepted = true;
          break;
        }
      } catch (const DegenerateStateError&) {
        // Retried at a smaller step below.
      }
      ++run.rejections;
      h *= 0.5;
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "step-size collapse at step " << step << " (dt = " << h << ")";
      run.termination = Termination::step_size_collapse;
      run.message = msg.str();
      break;
    }
    FlowRecord rec = base_record(step, t, state);
    rec.max_residual = closure_residual(state.rho());
    run.records.push_back(rec);
  }
  run.final_rho = state.rho();
  run.final_dt = h;
  return run;
}

}  // namespace donaldson
