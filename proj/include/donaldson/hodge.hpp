#pragma once

#include "donaldson/forms.hpp"

namespace donaldson {

/// Positive Hodge Laplacian dδ + δd of the flat metric (componentwise
/// minus the sum of second derivatives).
KForm laplacian(const KForm& a);

/// Pseudo-inverse of laplacian(); kills the grid-harmonic modes.
KForm laplacian_pinv(const KForm& a);

/// Codifferential δ = -*d* on the flat 4-torus.
KForm codifferential(const KForm& a);

/// Solves sum_j d^2 p / dx_j^2 = f for a mean-zero p.
/// Throws NotExactError("not in range of Laplacian") when f has a nonzero
/// mean or other grid-harmonic content above tol.
KForm solve_laplace(const KForm& f, double tol = 1e-12);

/// Projection onto harmonic forms. On the flat torus these are the constant
/// forms; on the grid the projection also captures the checkerboard
/// (Nyquist) modes that every spectral derivative annihilates. For fields
/// without Nyquist content this is the componentwise mean.
KForm harmonic_part(const KForm& a);

struct ExactnessReport {
  bool exact = false;
  double closed_residual = 0.0;    // max |da|
  double harmonic_residual = 0.0;  // max |harmonic_part(a)|
};

inline constexpr double kDefaultExactTol = 1e-10;

ExactnessReport is_exact(const KForm& a, double tol = kDefaultExactTol);

/// Coexact, harmonic-free primitive δΔ⁺ rh of an exact form.
/// Throws NotExactError naming the failed condition.
KForm primitive_of_exact(const KForm& rh, double tol = kDefaultExactTol);

struct HodgeDecomposition {
  KForm exact_part;
  KForm coexact_part;
  KForm harmonic_part;
};

HodgeDecomposition hodge_decompose(const KForm& a);

/// 2/3-rule truncation: zeroes every tensor mode whose largest per-axis
/// wavenumber exceeds n/3.
KForm dealias(const KForm& a);

}  // namespace donaldson
