#pragma once

// Driven two-level dynamics  i d|psi>/ds = kappa (beta(s) . sigma) |psi>
// along a field loop traversed once over path length L (hbar = 1).

#include <cstddef>
#include <vector>

#include "geophase/bloch.hpp"
#include "geophase/linalg.hpp"

namespace geophase {

/// A field loop, a coupling kappa and the medium length L.  The loop is
/// traversed uniformly in its sample parameter: beta(s) = loop.at(s / L).
class HamiltonianSchedule {
 public:
  /// Throws InputDomainError unless kappa > 0 and length > 0 (both finite).
  HamiltonianSchedule(FieldLoop loop, double kappa, double length);

  const FieldLoop& loop() const noexcept { return loop_; }
  double kappa() const noexcept { return kappa_; }
  double length() const noexcept { return length_; }

  Vec3 field_direction(double s) const { return loop_.at(s / length_); }
  Matrix<2> hamiltonian(double s) const;

 private:
  FieldLoop loop_;
  double kappa_;
  double length_;
};

/// max(1e5, 20 * segments).
std::size_t default_steps(const FieldLoop& loop);

struct Trajectory {
  std::vector<double> s_grid;             // n_steps + 1 positions, 0 .. L
  std::vector<Amplitudes<2>> states;      // state at each position
  double norm_drift = 0.0;                // max | ||psi|| - 1 |
};

/// Propagators U(s_k) on the step grid, U(s_0) = I.
struct PropagatorHistory {
  std::vector<double> s_grid;
  std::vector<Matrix<2>> steps;
  double norm_drift = 0.0;  // max column-norm deviation from 1
};

/// Classic RK4 on the state, no renormalization.  Requires n_steps >=
/// 10 * loop segments.  Throws NumericalFailure when the norm drifts by more
/// than 1e-6.
Trajectory evolve_state(const HamiltonianSchedule& schedule, const StateVector<2>& psi0, std::size_t n_steps);

/// Full evolution operator over [0, L] (columns evolve the basis states).
UnitaryOperator<2> propagator(const HamiltonianSchedule& schedule, std::size_t n_steps);

/// Evolution operator over [s_begin, s_end] using n_steps equal steps.
UnitaryOperator<2> propagator(const HamiltonianSchedule& schedule, std::size_t n_steps, double s_begin,
                              double s_end);

/// Propagator at every step over [0, L]; same preconditions and errors.
PropagatorHistory propagate_with_history(const HamiltonianSchedule& schedule, std::size_t n_steps);

struct EigenPair {
  StateVector<2> minus;  // eigenvalue -1 of beta . sigma
  StateVector<2> plus;   // eigenvalue +1
};

/// Gauge-fixed eigenstates of beta . sigma.
EigenPair instantaneous_eigenstates(const PauliVector& beta);

/// Closed-form propagator for the cone loop, from the frame co-rotating about
/// Z' where the field is static:
///   U = exp(-i (omega/2) L Z'.sigma) exp(-i L h.sigma),
///   h = kappa z - (omega/2) Z',  omega = 2 pi orientation / L.
UnitaryOperator<2> exact_cone_propagator(double theta, double kappa, double length, int orientation = +1);

struct AdiabaticInfidelity {
  double max = 0.0;    // max over the trajectory of 1 - |<n(s)|psi(s)>|^2
  double final = 0.0;  // same quantity at s = L
};

/// Population lost from the tracked instantaneous eigenstate (band sign -1 for
/// minus, +1 for plus).
AdiabaticInfidelity adiabatic_infidelity(const Trajectory& trajectory, const HamiltonianSchedule& schedule,
                                         int band_sign);

}  // namespace geophase
