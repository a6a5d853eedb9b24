#include "donaldson/sampling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "donaldson/grid.hpp"

namespace donaldson {

KForm potential_from_modes(GridPtr grid, std::span<const FourierMode> modes) {
  KForm out(grid, 1);
  for (const FourierMode& m : modes) {
    if (m.axis < 1 || m.axis > 4) {
      throw std::invalid_argument("mode axis must be in 1..4");
    }
    for (int k : m.wavevector) {
      if (2 * std::abs(k) >= grid->n()) {
        throw std::invalid_argument("mode wavevector is not resolved by the grid");
      }
    }
    out.component(m.axis - 1) += sample(*grid, [&](const Eigen::Vector4d& x) {
      double phase = m.phase;
      for (int a = 0; a < 4; ++a) {
        phase += 2.0 * std::numbers::pi * m.wavevector[a] * x(a);
      }
      return m.amplitude * std::cos(phase);
    });
  }
  return out;
}

KForm form_from_modes(GridPtr grid, std::span<const FourierMode> modes) {
  return omega_std(grid) + exterior_d(potential_from_modes(grid, modes));
}

KForm random_band_limited(GridPtr grid, int degree, int kmax, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::VectorXi& kmax4 = grid->max_wavenumber_4d();
  const int limit = std::min(kmax, grid->n() / 2 - 1);
  KForm out(grid, degree);
  const double scale = std::sqrt(double(grid->size()));
  for (int c = 0; c < component_count(degree); ++c) {
    Eigen::VectorXd spec = Eigen::VectorXd::Zero(grid->size());
    for (Eigen::Index p = 0; p < spec.size(); ++p) {
      if (kmax4(p) <= limit) spec(p) = normal(rng);
    }
    // Keep point values O(1) independent of the number of modes.
    out.component(c) = from_spectral(*grid, spec) * (scale / std::sqrt(double(
                                                         (spec.array() != 0.0).count())));
  }
  return out;
}

VectorField random_vector_field(GridPtr grid, int kmax, std::mt19937_64& rng) {
  return sharp(random_band_limited(grid, 1, kmax, rng));
}

KForm random_exact_two_form(GridPtr grid, int kmax, double amplitude,
                            std::mt19937_64& rng) {
  KForm w = exterior_d(random_band_limited(grid, 1, kmax, rng));
  const double m = w.max_abs();
  return m > 0.0 ? (amplitude / m) * w : w;
}

KForm random_symplectic_form(GridPtr grid, int kmax, double amplitude,
                             std::mt19937_64& rng) {
  return omega_std(grid) + random_exact_two_form(grid, kmax, amplitude, rng);
}

}  // namespace donaldson
