#include "donaldson/hodge.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "donaldson/errors.hpp"

namespace donaldson {

namespace {

// Symbols below this are the grid-harmonic kernel; the smallest nonzero
// symbol is 4 pi^2.
constexpr double kKernelSymbol = 1e-6;

template <typename Fn>
KForm map_components(const KForm& a, Fn&& fn) {
  KForm out(a.grid(), a.degree());
  for (int c = 0; c < component_count(a.degree()); ++c) {
    out.component(c) = fn(Eigen::VectorXd(a.component(c)));
  }
  return out;
}

}  // namespace

KForm laplacian(const KForm& a) {
  const Grid4& grid = a.grid_ref();
  return map_components(a, [&](const Eigen::VectorXd& f) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(f.size());
    for (int axis = 0; axis < 4; ++axis) {
      out -= partial(grid, partial(grid, f, axis), axis);
    }
    return out;
  });
}

KForm laplacian_pinv(const KForm& a) {
  const Grid4& grid = a.grid_ref();
  const Eigen::VectorXd& symbol = grid.laplacian_symbol_4d();
  return map_components(a, [&](const Eigen::VectorXd& f) {
    Eigen::VectorXd c = to_spectral(grid, f);
    for (Eigen::Index p = 0; p < c.size(); ++p) {
      c(p) = symbol(p) > kKernelSymbol ? c(p) / symbol(p) : 0.0;
    }
    return from_spectral(grid, c);
  });
}

KForm codifferential(const KForm& a) {
  if (a.degree() == 0) throw std::invalid_argument("codifferential: degree 0");
  return -star(exterior_d(star(a)));
}

KForm harmonic_part(const KForm& a) {
  const Grid4& grid = a.grid_ref();
  KForm out(a.grid(), a.degree());
  for (int m = 0; m < kGridHarmonicModes; ++m) {
    const Eigen::VectorXd mode = grid_harmonic_mode(grid, m);
    for (int c = 0; c < component_count(a.degree()); ++c) {
      const double coeff =
          ordered_mean(Eigen::VectorXd(mode.cwiseProduct(a.component(c))));
      if (coeff != 0.0) out.component(c) += coeff * mode;
    }
  }
  return out;
}

KForm solve_laplace(const KForm& f, double tol) {
  if (f.degree() != 0) throw std::invalid_argument("solve_laplace: degree 0 only");
  const double harmonic = harmonic_part(f).max_abs();
  if (harmonic > tol * std::max(1.0, f.max_abs())) {
    throw NotExactError("not in range of Laplacian (harmonic content " +
                        std::to_string(harmonic) + ")");
  }
  return -laplacian_pinv(f);
}

ExactnessReport is_exact(const KForm& a, double tol) {
  if (a.degree() == 0) throw std::invalid_argument("is_exact: degree >= 1");
  ExactnessReport r;
  r.closed_residual = a.degree() < 4 ? exterior_d(a).max_abs() : 0.0;
  r.harmonic_residual = harmonic_part(a).max_abs();
  r.exact = r.closed_residual <= tol && r.harmonic_residual <= tol;
  return r;
}

KForm primitive_of_exact(const KForm& rh, double tol) {
  const ExactnessReport r = is_exact(rh, tol);
  if (r.closed_residual > tol) {
    throw NotExactError("form is not closed: max |d rh| = " +
                        std::to_string(r.closed_residual));
  }
  if (r.harmonic_residual > tol) {
    throw NotExactError("form has a nonzero harmonic part: max = " +
                        std::to_string(r.harmonic_residual));
  }
  return codifferential(laplacian_pinv(rh));
}

HodgeDecomposition hodge_decompose(const KForm& a) {
  const KForm potential = laplacian_pinv(a);
  KForm exact(a.grid(), a.degree());
  KForm coexact(a.grid(), a.degree());
  if (a.degree() > 0) exact = exterior_d(codifferential(potential));
  if (a.degree() < 4) coexact = codifferential(exterior_d(potential));
  return {std::move(exact), std::move(coexact), harmonic_part(a)};
}

KForm dealias(const KForm& a) {
  const Grid4& grid = a.grid_ref();
  const Eigen::VectorXi& kmax = grid.max_wavenumber_4d();
  const int cutoff = grid.n() / 3;
  return map_components(a, [&](const Eigen::VectorXd& f) {
    Eigen::VectorXd c = to_spectral(grid, f);
    for (Eigen::Index p = 0; p < c.size(); ++p) {
      if (kmax(p) > cutoff) c(p) = 0.0;
    }
    return from_spectral(grid, c);
  });
}

}  // namespace donaldson
