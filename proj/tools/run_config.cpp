#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <set>

#include "donaldson/checks.hpp"
#include "donaldson/dynamics.hpp"
#include "donaldson/energy.hpp"
#include "donaldson/errors.hpp"
#include "donaldson/field_io.hpp"
#include "donaldson/hyperkahler.hpp"

namespace donaldson::cli {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

int get_int(const json& v, const std::string& what) {
  if (!v.is_number_integer()) throw ConfigError(what + " must be an integer");
  return v.get<int>();
}

double get_number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  return v.get<double>();
}

bool get_bool(const json& v, const std::string& what) {
  if (!v.is_boolean()) throw ConfigError(what + " must be true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& what) {
  if (!v.is_string()) throw ConfigError(what + " must be a string");
  return v.get<std::string>();
}

std::vector<FourierMode> parse_modes(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + " must be a list");
  std::vector<FourierMode> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    const json& m = v[i];
    reject_unknown(m, {"component", "wavevector", "amplitude", "phase"}, at);
    FourierMode mode;
    for (const char* key : {"component", "wavevector", "amplitude"}) {
      if (!find(m, key)) throw ConfigError(at + " is missing '" + key + "'");
    }
    mode.axis = get_int(m["component"], at + ".component");
    if (mode.axis < 1 || mode.axis > 4) {
      throw ConfigError(at + ".component must be 1, 2, 3 or 4");
    }
    const json& k = m["wavevector"];
    if (!k.is_array() || k.size() != 4) {
      throw ConfigError(at + ".wavevector must be a list of 4 integers");
    }
    for (int a = 0; a < 4; ++a) mode.wavevector[a] = get_int(k[a], at + ".wavevector");
    mode.amplitude = get_number(m["amplitude"], at + ".amplitude");
    if (const json* p = find(m, "phase")) mode.phase = get_number(*p, at + ".phase");
    out.push_back(mode);
  }
  return out;
}

SolverOptions parse_solver(const json& v) {
  reject_unknown(v, {"rel_tol", "max_iter", "preconditioner"}, "solver");
  SolverOptions s;
  if (const json* p = find(v, "rel_tol")) s.rel_tol = get_number(*p, "solver.rel_tol");
  if (const json* p = find(v, "max_iter")) s.max_iter = get_int(*p, "solver.max_iter");
  if (const json* p = find(v, "preconditioner")) {
    const std::string name = get_string(*p, "solver.preconditioner");
    if (name == "none") {
      s.preconditioner = Preconditioner::none;
    } else if (name == "background_laplacian") {
      s.preconditioner = Preconditioner::background_laplacian;
    } else {
      throw ConfigError("solver.preconditioner must be 'none' or 'background_laplacian'");
    }
  }
  return s;
}

KForm initial_form(const RunConfig& c, const GridPtr& g) {
  return form_from_modes(g, c.initial_modes);
}

std::vector<KForm> perturbations(const RunConfig& c, const GridPtr& g) {
  std::vector<KForm> out;
  for (const FourierMode& m : c.perturbation_modes) {
    out.push_back(exterior_d(potential_from_modes(g, std::span(&m, 1))));
  }
  return out;
}

void write_json(const std::filesystem::path& path, const ordered_json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

void write_csv(const std::filesystem::path& path, const std::vector<FlowRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_flow_csv(records, out);
}

DynamicsOptions dynamics_options(const RunConfig& c, bool dealias_default) {
  DynamicsOptions o;
  o.solver = c.solver;
  o.u_floor = c.u_floor;
  o.dealias = c.dealias.value_or(dealias_default);
  return o;
}

int run_check(const RunConfig& c, std::ostream& log) {
  CheckOptions o;
  o.grid_n = c.grid_n;
  o.seed = c.seed;
  o.samples = c.check_samples;
  o.amplitude = c.check_amplitude;
  o.solver = c.solver;
  const std::vector<CheckResult> results = run_checks(o);
  std::ofstream out(c.output_dir / "check_report.txt");
  if (!out) throw std::runtime_error("cannot write check_report.txt");
  out << "# grid_n " << c.grid_n << " seed " << c.seed << '\n';
  out << "# identity                           max_residual  tolerance  status\n";
  write_check_report(results, out);
  write_check_report(results, log);
  const bool ok = all_passed(results);
  log << (ok ? "all identities within tolerance\n" : "some identities FAILED\n");
  return ok ? kExitOk : kExitNumerical;
}

int run_energy(const RunConfig& c, const GridPtr& g, std::ostream& log) {
  const SymplecticState state(initial_form(c, g), c.u_floor);
  const EnergyReport r = energy_report(state);
  const GradientFieldResiduals res = gradient_field_residuals(state, r.grad.x);
  ordered_json doc;
  doc["grid_n"] = c.grid_n;
  doc["energy"] = r.value;
  doc["grad_norm"] = r.grad_norm;
  doc["min_u"] = state.min_u();
  doc["gradient_field_residual"] = std::max(res.contraction, res.wedge);
  write_json(c.output_dir / "energy_summary.json", doc);
  if (c.dump_fields) {
    dump_field(state.rho(), c.output_dir / "rho.dgf");
    dump_field(r.theta, c.output_dir / "theta.dgf");
    dump_field(r.grad.rhohat, c.output_dir / "grad.dgf");
  }
  log << "energy " << r.value << "  grad_norm " << r.grad_norm << '\n';
  return kExitOk;
}

int run_flow(const RunConfig& c, const GridPtr& g, std::ostream& log) {
  const SymplecticState state(initial_form(c, g), c.u_floor);
  const GradientFlowRun r = gradient_flow(state, c.dt, c.steps, dynamics_options(c, true));
  write_csv(c.output_dir / "flow.csv", r.records);
  ordered_json doc;
  doc["termination"] = to_string(r.termination);
  doc["message"] = r.message;
  doc["steps_completed"] = r.records.empty() ? 0 : r.records.back().step;
  doc["rejections"] = r.rejections;
  doc["final_dt"] = r.final_dt;
  doc["initial_energy"] = r.records.front().energy;
  doc["final_energy"] = r.records.back().energy;
  doc["final_grad_norm"] = r.records.back().grad_norm;
  write_json(c.output_dir / "flow_summary.json", doc);
  if (c.dump_fields) dump_field(r.final_rho, c.output_dir / "final_rho.dgf");
  log << "flow: " << to_string(r.termination) << ", energy " << r.records.front().energy
      << " -> " << r.records.back().energy << '\n';
  if (r.termination != Termination::completed) {
    log << r.message << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

int run_geodesic(const RunConfig& c, const GridPtr& g, std::ostream& log) {
  KForm rhodot(g, 2);
  for (const KForm& p : perturbations(c, g)) rhodot += p;
  const GeodesicState initial{initial_form(c, g), rhodot, 0.0};
  const GeodesicRun r = integrate_geodesic(initial, c.dt, c.steps, dynamics_options(c, false));
  write_csv(c.output_dir / "geodesic.csv", r.records);
  double drift = 0.0;
  for (const FlowRecord& rec : r.records) {
    drift = std::max(drift, std::abs(*rec.speed - *r.records.front().speed));
  }
  ordered_json doc;
  doc["termination"] = to_string(r.termination);
  doc["message"] = r.message;
  doc["steps_completed"] = r.records.back().step;
  doc["final_t"] = r.final_state.t;
  doc["initial_speed"] = *r.records.front().speed;
  doc["max_speed_drift"] = drift;
  doc["initial_energy"] = r.records.front().energy;
  doc["final_energy"] = r.records.back().energy;
  write_json(c.output_dir / "geodesic_summary.json", doc);
  if (c.dump_fields) {
    dump_field(r.final_state.rho, c.output_dir / "final_rho.dgf");
    dump_field(r.final_state.rhodot, c.output_dir / "final_rhodot.dgf");
  }
  log << "geodesic: " << to_string(r.termination) << ", speed drift " << drift << '\n';
  if (r.termination != Termination::completed) {
    log << r.message << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

int run_hessian(const RunConfig& c, const GridPtr& g, std::ostream& log) {
  if (c.perturbation_modes.empty()) {
    throw ConfigError("hessian needs at least one entry in perturbation_modes");
  }
  const SymplecticState state(initial_form(c, g), c.u_floor);
  ordered_json list = ordered_json::array();
  int index = 0;
  for (const KForm& rh : perturbations(c, g)) {
    const TangentVector a = associated_vector_field(state, rh, c.solver);
    const HessianReport r = hessian_report(state, a, c.solver);
    const double hk = hessian_form_hk(state, a);
    auto rel = [](double x, double y) {
      const double s = std::max(std::abs(x), std::abs(y));
      return s > 0.0 ? std::abs(x - y) / s : 0.0;
    };
    ordered_json entry;
    entry["perturbation"] = index;
    entry["norm"] = norm(state, a);
    entry["form_value"] = r.form_value;
    entry["operator_pairing"] = r.operator_pairing;
    entry["hyperkahler_form_value"] = hk;
    entry["operator_vs_form"] = rel(r.operator_pairing, r.form_value);
    entry["hyperkahler_vs_generic"] = rel(hk, r.form_value);
    list.push_back(entry);
    if (c.dump_fields) {
      dump_field(r.operator_value,
                 c.output_dir / ("hessian_operator_" + std::to_string(index) + ".dgf"));
    }
    log << "perturbation " << index << ": H = " << r.form_value << " (operator "
        << r.operator_pairing << ", hyperkahler " << hk << ")\n";
    ++index;
  }
  ordered_json doc;
  doc["grid_n"] = c.grid_n;
  doc["energy"] = energy(state);
  doc["hessian"] = list;
  write_json(c.output_dir / "hessian_report.json", doc);
  return kExitOk;
}

}  // namespace

Experiment parse_experiment(const std::string& name) {
  if (name == "check") return Experiment::check;
  if (name == "energy") return Experiment::energy;
  if (name == "flow") return Experiment::flow;
  if (name == "geodesic") return Experiment::geodesic;
  if (name == "hessian") return Experiment::hessian;
  throw ConfigError("unknown experiment '" + name + "'");
}

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::check: return "check";
    case Experiment::energy: return "energy";
    case Experiment::flow: return "flow";
    case Experiment::geodesic: return "geodesic";
    case Experiment::hessian: return "hessian";
  }
  return "unknown";
}

RunConfig parse_config(const json& doc) {
  reject_unknown(doc,
                 {"grid_n", "experiment", "initial_modes", "perturbation_modes", "dt", "steps",
                  "solver", "seed", "output_dir", "dump_fields", "u_floor", "dealias",
                  "check_samples", "check_amplitude"},
                 "config");
  RunConfig c;
  if (const json* p = find(doc, "grid_n")) c.grid_n = get_int(*p, "grid_n");
  if (const json* p = find(doc, "experiment")) {
    c.experiment = parse_experiment(get_string(*p, "experiment"));
  }
  if (const json* p = find(doc, "initial_modes")) c.initial_modes = parse_modes(*p, "initial_modes");
  if (const json* p = find(doc, "perturbation_modes")) {
    c.perturbation_modes = parse_modes(*p, "perturbation_modes");
  }
  if (const json* p = find(doc, "dt")) c.dt = get_number(*p, "dt");
  if (const json* p = find(doc, "steps")) c.steps = get_int(*p, "steps");
  if (const json* p = find(doc, "solver")) c.solver = parse_solver(*p);
  if (const json* p = find(doc, "seed")) {
    const bool ok = p->is_number_unsigned() || (p->is_number_integer() && p->get<std::int64_t>() >= 0);
    if (!ok) throw ConfigError("seed must be a non-negative integer");
    c.seed = p->get<std::uint64_t>();
  }
  if (const json* p = find(doc, "output_dir")) c.output_dir = get_string(*p, "output_dir");
  if (const json* p = find(doc, "dump_fields")) c.dump_fields = get_bool(*p, "dump_fields");
  if (const json* p = find(doc, "u_floor")) c.u_floor = get_number(*p, "u_floor");
  if (const json* p = find(doc, "dealias")) c.dealias = get_bool(*p, "dealias");
  if (const json* p = find(doc, "check_samples")) c.check_samples = get_int(*p, "check_samples");
  if (const json* p = find(doc, "check_amplitude")) {
    c.check_amplitude = get_number(*p, "check_amplitude");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

void validate(const RunConfig& c) {
  if (c.grid_n < 4 || c.grid_n % 2 != 0) throw ConfigError("grid_n must be even and >= 4");
  if (c.steps < 0) throw ConfigError("steps must be >= 0");
  if (!(c.solver.rel_tol > 0.0)) throw ConfigError("solver.rel_tol must be > 0");
  if (c.solver.max_iter < 1) throw ConfigError("solver.max_iter must be >= 1");
  if (!(c.u_floor > 0.0)) throw ConfigError("u_floor must be > 0");
  if (c.check_samples < 1) throw ConfigError("check_samples must be >= 1");
  if (!(c.check_amplitude > 0.0)) throw ConfigError("check_amplitude must be > 0");
  if (!std::isfinite(c.dt)) throw ConfigError("dt must be finite");
  for (const auto* list : {&c.initial_modes, &c.perturbation_modes}) {
    for (const FourierMode& m : *list) {
      for (int k : m.wavevector) {
        if (2 * std::abs(k) >= c.grid_n) {
          throw ConfigError("mode wavevector component " + std::to_string(k) +
                            " is not resolved at grid_n " + std::to_string(c.grid_n));
        }
      }
      if (!std::isfinite(m.amplitude) || !std::isfinite(m.phase)) {
        throw ConfigError("mode amplitude and phase must be finite");
      }
    }
  }
  const GridPtr g = make_grid(c.grid_n);
  const KForm rho0 = form_from_modes(g, c.initial_modes);
  const double min_u = u_of(rho0).coeffs().minCoeff();
  if (!(min_u > c.u_floor)) {
    throw ConfigError("initial form is degenerate: min u = " + std::to_string(min_u) +
                      " <= u_floor");
  }
}

int run(Experiment experiment, const RunConfig& c, std::ostream& log) {
  try {
    validate(c);
    if (experiment == Experiment::flow && !(c.dt > 0.0)) throw ConfigError("flow needs dt > 0");
    if (experiment == Experiment::geodesic && c.dt == 0.0) {
      throw ConfigError("geodesic needs dt != 0");
    }
    std::error_code ec;
    std::filesystem::create_directories(c.output_dir, ec);
    if (ec) throw ConfigError("cannot create output_dir " + c.output_dir.string());
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  const GridPtr g = make_grid(c.grid_n);
  try {
    switch (experiment) {
      case Experiment::check: return run_check(c, log);
      case Experiment::energy: return run_energy(c, g, log);
      case Experiment::flow: return run_flow(c, g, log);
      case Experiment::geodesic: return run_geodesic(c, g, log);
      case Experiment::hessian: return run_hessian(c, g, log);
    }
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    log << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::runtime_error& e) {
    log << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitNumerical;
}

}  // namespace donaldson::cli
