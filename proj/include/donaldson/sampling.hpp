#pragma once

#include <array>
#include <random>
#include <span>

#include "donaldson/forms.hpp"

namespace donaldson {

/// amplitude * cos(2 pi k.x + phase) dx^axis, one term of a 1-form potential.
struct FourierMode {
  int axis = 1;  // 1..4
  std::array<int, 4> wavevector{0, 0, 0, 0};
  double amplitude = 0.0;
  double phase = 0.0;
};

KForm potential_from_modes(GridPtr grid, std::span<const FourierMode> modes);

/// w_std + d(potential of the modes); in the class of w_std by construction.
KForm form_from_modes(GridPtr grid, std::span<const FourierMode> modes);

/// k-form whose components are random combinations of the Fourier modes
/// with per-axis wavenumber <= kmax (no Nyquist content).
KForm random_band_limited(GridPtr grid, int degree, int kmax, std::mt19937_64& rng);

VectorField random_vector_field(GridPtr grid, int kmax, std::mt19937_64& rng);

/// d of a random band-limited 1-form, rescaled to max |.| = amplitude.
KForm random_exact_two_form(GridPtr grid, int kmax, double amplitude,
                            std::mt19937_64& rng);

/// w_std + random_exact_two_form: a random point of the symplectic class.
KForm random_symplectic_form(GridPtr grid, int kmax, double amplitude,
                             std::mt19937_64& rng);

}  // namespace donaldson
