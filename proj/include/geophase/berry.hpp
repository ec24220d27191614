#pragma once

// Geometric-phase extraction: gauge-invariant Wilson loop over the sampled
// eigenstates, and total-minus-dynamical phase from an integrated trajectory.

#include <cstddef>
#include <span>

#include "geophase/bloch.hpp"
#include "geophase/evolution.hpp"

namespace geophase {

enum class Band { minus, plus };

/// -1 for the lower band (eigenvalue -kappa), +1 for the upper band.
constexpr int band_sign(Band b) { return b == Band::minus ? -1 : +1; }

/// gamma = -arg prod_k <n_k|n_{k+1}> over a closed chain (the last state links
/// back to the first).  Throws LoopTooCoarseError if an overlap falls below 1e-6.
double wilson_phase_of_chain(std::span<const Amplitudes<2>> states);

/// Wilson-loop phase of the band eigenstates sampled along the loop, in (-pi, pi].
double wilson_loop_phase(const FieldLoop& loop, Band band);

/// -int_0^L <psi|H|psi> ds by the trapezoid rule on the trajectory grid.
double dynamic_phase(const Trajectory& trajectory, const HamiltonianSchedule& schedule);

/// arg <psi(0)|psi(L)> - dynamic_phase, in (-pi, pi].  Throws
/// NotAdiabaticError when |<psi(0)|psi(L)>| < 0.99.
double geometric_phase_from_dynamics(const Trajectory& trajectory, const HamiltonianSchedule& schedule);

/// -band_sign * omega / 2 in (-pi, pi].
double analytic_gamma(double omega, Band band);

struct BerryPhaseResult {
  double gamma_wilson = 0.0;
  double gamma_dynamics = 0.0;
  double gamma_analytic = 0.0;
  SolidAngle omega{};
  Band band = Band::minus;
  double method_residual = 0.0;  // |gamma_wilson - gamma_dynamics| mod 2pi
  double dynamical_phase = 0.0;  // unreduced
  double return_overlap = 0.0;   // |<psi(0)|psi(L)>|
  double norm_drift = 0.0;
  bool accepted = false;         // method_residual <= 1e-3
};

/// Runs every estimate for one band on one schedule.  n_steps = 0 selects
/// default_steps(loop).  Errors from the sub-operations propagate.
BerryPhaseResult analyze_loop(const HamiltonianSchedule& schedule, Band band, std::size_t n_steps = 0);

}  // namespace geophase
