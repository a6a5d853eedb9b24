#pragma once

#include <optional>
#include <string>
#include <vector>

#include "donaldson/forms.hpp"
#include "donaldson/metric.hpp"
#include "donaldson/symplectic.hpp"

namespace donaldson {

struct GeodesicState {
  KForm rho;
  KForm rhodot;
  double t = 0.0;
};

struct FlowRecord {
  int step = 0;
  double t = 0.0;
  double energy = 0.0;
  double grad_norm = 0.0;
  double min_u = 0.0;
  std::optional<double> speed;  // geodesics only
  int solver_iters = 0;
  double max_residual = 0.0;
};

struct DynamicsOptions {
  SolverOptions solver{};
  double u_floor = kDefaultUFloor;
  /// 2/3-rule truncation of rho (and rhodot) after every accepted step.
  bool dealias = false;
  /// Gradient flow only: halvings of dt allowed for one step.
  int max_retries = 20;
};

enum class Termination { completed, left_space, step_size_collapse };

/// d iota(X) d iota(X) rho + d iota(nabla_X X) rho with X associated to rhodot.
KForm geodesic_rhs(const GeodesicState& state, const SolverOptions& opts = {},
                   double u_floor = kDefaultUFloor);

struct GeodesicRun {
  std::vector<FlowRecord> records;  // records[0] is the initial state
  GeodesicState final_state;
  Termination termination = Termination::completed;
  std::string message;
};

/// Classical RK4 on (rho, rhodot). Negative dt integrates backwards.
/// Stops early with Termination::left_space if min u drops to the floor;
/// final_state is then the last valid state.
GeodesicRun integrate_geodesic(const GeodesicState& initial, double dt, int steps,
                               const DynamicsOptions& opts = {});

struct GradientFlowRun {
  std::vector<FlowRecord> records;  // records[0] is the initial state
  KForm final_rho;
  int rejections = 0;
  double final_dt = 0.0;
  Termination termination = Termination::completed;
  std::string message;
};

/// RK4 on d rho/dt = -grad E(rho) = d *^rho dTheta. A step that raises the
/// energy or leaves the space is rejected and retried at half the step.
GradientFlowRun gradient_flow(const SymplecticState& initial, double dt, int steps,
                              const DynamicsOptions& opts = {});

const char* to_string(Termination t);

}  // namespace donaldson
