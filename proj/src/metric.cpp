#include "donaldson/metric.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "donaldson/errors.hpp"
#include "donaldson/hodge.hpp"

namespace donaldson {

namespace {

// Component of the 3-form basis complementary to dx^i, and the sign s_i with
// dx^i ^ e_{J(i)} = s_i dvol.
struct Complement {
  int component;
  double sign;
};

Complement complement_of(int axis) {
  const unsigned rest = 0xFu & ~(1u << axis);
  for (int c = 0; c < 4; ++c) {
    if (basis_mask(3, c) == rest) {
      const KForm probe = wedge(
          KForm::constant(make_grid(4), 1, Eigen::Vector4d::Unit(axis)),
          KForm::constant(make_grid(4), 3, Eigen::Vector4d::Unit(c)));
      return {c, probe.coeffs()(0, 0)};
    }
  }
  throw std::logic_error("complement_of: unreachable");
}

const std::array<Complement, 4>& complements() {
  static const std::array<Complement, 4> table{
      complement_of(0), complement_of(1), complement_of(2), complement_of(3)};
  return table;
}

/// Linear algebra of the gauge system on one state.
class GaugeSystem {
public:
  GaugeSystem(const SymplecticState& state, Preconditioner pre)
      : state_(state), grid_(*state.grid()), pre_(pre) {
    modes_.reserve(kGridHarmonicModes);
    for (int m = 0; m < kGridHarmonicModes; ++m) {
      modes_.push_back(grid_harmonic_mode(grid_, m));
    }
  }

  Eigen::Index points() const { return grid_.size(); }
  Eigen::Index size() const { return gauge_size(grid_); }

  /// df + h for z = (f, h).
  KForm primitive_correction(const Eigen::VectorXd& z) const {
    KForm mu = exterior_d(KForm::scalar(state_.grid(), z.head(points())));
    for (int m = 0; m < kGridHarmonicModes; ++m) {
      for (int i = 0; i < 4; ++i) {
        const double c = z(points() + 4 * m + i);
        if (c != 0.0) mu.component(i) += c * modes_[m];
      }
    }
    return mu;
  }

  /// The functional (phi, eta) -> integral (d phi + eta) ^ tau as a vector
  /// in the (mean, Euclidean) product inner product.
  Eigen::VectorXd pair_with(const KForm& tau) const {
    Eigen::VectorXd out(size());
    out.head(points()) = -density(exterior_d(tau)).component(0);
    for (int m = 0; m < kGridHarmonicModes; ++m) {
      for (int i = 0; i < 4; ++i) {
        const Complement& cc = complements()[i];
        out(points() + 4 * m + i) =
            cc.sign * ordered_mean(Eigen::VectorXd(
                          modes_[m].cwiseProduct(tau.component(cc.component))));
      }
    }
    return out;
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& z) const {
    return pair_with(star_rho_1(state_, primitive_correction(z)));
  }

  Eigen::VectorXd precondition(const Eigen::VectorXd& r) const {
    Eigen::VectorXd out = r;
    if (pre_ == Preconditioner::background_laplacian) {
      out.head(points()) =
          laplacian_pinv(KForm::scalar(state_.grid(), r.head(points())))
              .component(0);
    } else {
      out.head(points()) = project_out_kernel(r.head(points()));
    }
    return out;
  }

  double dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    const Eigen::VectorXd prod = a.head(points()).cwiseProduct(b.head(points()));
    return ordered_mean(prod) + a.tail(size() - points()).dot(b.tail(size() - points()));
  }

  Eigen::VectorXd project_out_kernel(const Eigen::VectorXd& f) const {
    Eigen::VectorXd out = f;
    for (const Eigen::VectorXd& mode : modes_) {
      out -= ordered_mean(Eigen::VectorXd(mode.cwiseProduct(f))) * mode;
    }
    return out;
  }

private:
  const SymplecticState& state_;
  const Grid4& grid_;
  Preconditioner pre_;
  std::vector<Eigen::VectorXd> modes_;
};

TangentVector solve(const SymplecticState& state, const KForm& rhohat,
                    const SolverOptions& opts, const Eigen::VectorXd* guess) {
  if (rhohat.degree() != 2) {
    throw std::invalid_argument("associated_vector_field: rhohat must be a 2-form");
  }
  require_same_grid(state.grid(), rhohat.grid());
  if (!(opts.rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be > 0");

  const KForm lambda0 = primitive_of_exact(rhohat);
  const GaugeSystem sys(state, opts.preconditioner);

  // Minimise |lambda0 + mu(z)|^2_rho: A z = -pair(*^rho lambda0).
  const Eigen::VectorXd b = -sys.pair_with(star_rho_1(state, lambda0));
  Eigen::VectorXd z = Eigen::VectorXd::Zero(sys.size());
  if (guess) {
    if (guess->size() != sys.size()) {
      throw std::invalid_argument("initial gauge has the wrong size");
    }
    z = *guess;
    z.head(sys.points()) = sys.project_out_kernel(z.head(sys.points()));
  }

  SolveReport report;
  const double bnorm = std::sqrt(std::max(0.0, sys.dot(b, sys.precondition(b))));
  if (bnorm > 0.0) {
    Eigen::VectorXd r = b - sys.apply(z);
    Eigen::VectorXd s = sys.precondition(r);
    Eigen::VectorXd p = s;
    double rs = sys.dot(r, s);
    double res = std::sqrt(std::max(0.0, rs)) / bnorm;
    report.history.push_back(res);
    while (res > opts.rel_tol) {
      if (report.iterations >= opts.max_iter) {
        std::ostringstream msg;
        msg << "associated-field solve did not converge in " << opts.max_iter
            << " iterations (relative residual " << res << ")";
        throw SolverError(msg.str(), report.history);
      }
      const Eigen::VectorXd ap = sys.apply(p);
      const double pap = sys.dot(p, ap);
      if (!(pap > 0.0)) {
        throw SolverError("gauge operator lost positivity", report.history);
      }
      const double alpha = rs / pap;
      z += alpha * p;
      r -= alpha * ap;
      s = sys.precondition(r);
      const double rs_next = sys.dot(r, s);
      res = std::sqrt(std::max(0.0, rs_next)) / bnorm;
      report.history.push_back(res);
      ++report.iterations;
      p = s + (rs_next / rs) * p;
      rs = rs_next;
    }
    report.relative_residual = res;
  } else {
    z.setZero();
    report.history.push_back(0.0);
  }

  KForm lambda = lambda0 + sys.primitive_correction(z);
  const KForm star_lambda = star_rho_1(state, lambda);
  report.closed_residual = exterior_d(star_lambda).max_abs();
  report.harmonic_residual = harmonic_part(star_lambda).max_abs();

  VectorField x = rho_contract(state, -lambda);
  return TangentVector{rhohat, std::move(lambda), std::move(x), std::move(z),
                       std::move(report), state.id()};
}

}  // namespace

Eigen::Index gauge_size(const Grid4& grid) {
  return grid.size() + 4 * kGridHarmonicModes;
}

TangentVector associated_vector_field(const SymplecticState& state,
                                      const KForm& rhohat,
                                      const SolverOptions& opts) {
  return solve(state, rhohat, opts, nullptr);
}

TangentVector associated_vector_field(const SymplecticState& state,
                                      const KForm& rhohat,
                                      const SolverOptions& opts,
                                      const Eigen::VectorXd& initial_gauge) {
  return solve(state, rhohat, opts, &initial_gauge);
}

TangentVector tangent_from_field(const SymplecticState& state,
                                 const VectorField& y) {
  require_same_grid(state.grid(), y.grid());
  KForm lambda = -interior(y, state.rho());
  KForm rhohat = exterior_d(lambda);
  TangentVector t{std::move(rhohat), std::move(lambda), y,
                  Eigen::VectorXd::Zero(gauge_size(*state.grid())),
                  SolveReport{}, state.id()};
  const KForm star_lambda = star_rho_1(state, t.lambda);
  t.report.closed_residual = exterior_d(star_lambda).max_abs();
  t.report.harmonic_residual = harmonic_part(star_lambda).max_abs();
  return t;
}

void require_solved_on(const SymplecticState& state, const TangentVector& t) {
  if (t.state_id != state.id()) {
    throw std::invalid_argument("tangent vector was solved on a different state");
  }
}

double inner(const SymplecticState& state, const TangentVector& a,
             const TangentVector& b) {
  require_solved_on(state, a);
  require_solved_on(state, b);
  return integrate(wedge(a.lambda, star_rho_1(state, b.lambda)));
}

double norm(const SymplecticState& state, const TangentVector& a) {
  return std::sqrt(std::max(0.0, inner(state, a, a)));
}

KForm christoffel(const SymplecticState& state, const TangentVector& a,
                  const TangentVector& b) {
  require_solved_on(state, a);
  require_solved_on(state, b);
  const VectorField& x = a.x;
  const VectorField& y = b.x;
  const VectorField sym = covariant_derivative(y, x) + covariant_derivative(x, y);
  KForm out = exterior_d(interior(y, a.rhohat)) + exterior_d(interior(x, b.rhohat)) -
              exterior_d(interior(sym, state.rho()));
  return 0.5 * out;
}

KForm covariant_derivative_along_path(const SampledPath& path,
                                      ConnectionFormula formula,
                                      const SolverOptions& opts,
                                      double u_floor) {
  for (int i = 0; i < 3; ++i) {
    require_same_grid(path.rho[0].grid(), path.rho[i].grid());
    require_same_grid(path.rho[0].grid(), path.sigmahat[i].grid());
  }
  if (!(path.delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  const double inv2d = 1.0 / (2.0 * path.delta);

  const SymplecticState center(path.rho[1], u_floor);
  const KForm rhohat = inv2d * (path.rho[2] - path.rho[0]);
  const TangentVector a = associated_vector_field(center, rhohat, opts);
  const TangentVector b = associated_vector_field(center, path.sigmahat[1], opts);

  if (formula == ConnectionFormula::christoffel) {
    return inv2d * (path.sigmahat[2] - path.sigmahat[0]) + christoffel(center, a, b);
  }

  const SymplecticState minus(path.rho[0], u_floor);
  const SymplecticState plus(path.rho[2], u_floor);
  const VectorField y_minus =
      associated_vector_field(minus, path.sigmahat[0], opts, b.gauge).x;
  const VectorField y_plus =
      associated_vector_field(plus, path.sigmahat[2], opts, b.gauge).x;
  const VectorField ydot = inv2d * (y_plus - y_minus);
  return -exterior_d(interior(ydot + covariant_derivative(a.x, b.x), center.rho()));
}

}  // namespace donaldson
