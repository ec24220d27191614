#pragma once

// Entangled-pair protocol: photon A crosses a fixed-axis medium (or a
// counter-rotating one), photon B a medium whose axis winds once around Z'.
// The degenerate pair states |01>, |10> pick up opposite geometric phases,
// which in the Bell basis act as the non-diagonal but abelian factor
//
//   Sigma(Gamma) = cos(Gamma) I - i sin(Gamma) X.

#include <cstddef>
#include <numbers>
#include <span>
#include <variant>
#include <vector>

#include "geophase/berry.hpp"
#include "geophase/evolution.hpp"
#include "geophase/linalg.hpp"

namespace geophase {

enum class BellSign { plus, minus };

/// (|01> +- |10>) / sqrt 2.
struct BellBasis {
  StateVector<4> phi_plus;
  StateVector<4> phi_minus;
};
BellBasis make_bell_basis();

/// phi_plus  = cos(beta_mix) e^{-i alpha} |01> + sin(beta_mix) e^{i alpha} |10>
/// phi_minus = sin(beta_mix) e^{-i alpha} |01> - cos(beta_mix) e^{i alpha}  |10>
/// (orthogonal to phi_plus for every alpha, beta_mix).
struct GeneralizedBasis {
  double alpha;
  double beta_mix;
  StateVector<4> phi_plus;
  StateVector<4> phi_minus;
};
GeneralizedBasis make_generalized_basis(double alpha, double beta_mix);

using ProtocolBasis = std::variant<BellBasis, GeneralizedBasis>;

enum class BasisKind { psi, bell, generalized };

struct BasisTag {
  BasisKind kind = BasisKind::bell;
  double alpha = 0.0;
  double beta_mix = 0.0;
};

/// A 2x2 evolution factor on coordinates in a basis of span{|01>, |10>}.
class PhaseFactor {
 public:
  /// Throws InputDomainError if sigma is not unitary within tol, or if the
  /// basis is psi and sigma is not diagonal.
  PhaseFactor(const Matrix<2>& sigma, BasisTag tag, double tol = tol::kNorm);

  const UnitaryOperator<2>& sigma() const noexcept { return sigma_; }
  const Matrix<2>& matrix() const noexcept { return sigma_.matrix(); }
  const BasisTag& tag() const noexcept { return tag_; }

 private:
  UnitaryOperator<2> sigma_;
  BasisTag tag_;
};

/// Sigma(Gamma) in Bell coordinates (phi_plus, phi_minus).
PhaseFactor sigma_of_gamma(double gamma);

/// (e^{-i Gamma} |01> +- e^{i Gamma} |10>) / sqrt 2.
StateVector<4> predicted_final_state(double gamma, BellSign sign);

/// e^{-i Gamma} on |01>, e^{+i Gamma} on |10>.  Throws InputDomainError if the
/// input has weight outside span{|01>, |10>}.
StateVector<4> phase_degenerate_pair(double gamma, const StateVector<4>& input);

/// diag(a, b) in the psi basis -> the same factor in Bell coordinates.
PhaseFactor basis_change_bell(const PhaseFactor& u_psi);

/// Largest max-entry commutator norm over all pairs Sigma(g_i), Sigma(g_j).
double abelian_check(std::span<const double> gammas);
/// max |[a, b]_ij|
double commutator_norm(const Matrix<2>& a, const Matrix<2>& b);
/// max |(Sigma(g1) Sigma(g2) - Sigma(g1 + g2))_ij|
double composition_check(double g1, double g2);

/// Pair states on the common step grid of the two media.
struct PairTrajectory {
  std::vector<double> s_grid;
  std::vector<Amplitudes<4>> states;
  double norm_drift = 0.0;
};

/// max_k || (H_A(s_k) x I + I x H_B(s_k)) psi(s_k) ||.  Throws
/// ConfigurationError when the two couplings differ by more than 1e-12.
double energy_zero_check(const PairTrajectory& trajectory, const HamiltonianSchedule& medium_a,
                         const HamiltonianSchedule& medium_b);

/// -int <psi|H_A x I + I x H_B|psi> ds (trapezoid).
double pair_dynamic_phase(const PairTrajectory& trajectory, const HamiltonianSchedule& medium_a,
                          const HamiltonianSchedule& medium_b);

struct ProtocolConfig {
  double theta = std::numbers::pi / 3;
  double kappa = 1.0;
  double length = 400.0 * std::numbers::pi;
  std::size_t n_samples = 10000;
  std::size_t n_steps = 0;  // 0: default_steps of the loop
  BellSign bell_sign = BellSign::plus;
  bool counter_rotate_a = false;
  ProtocolBasis basis = make_bell_basis();
};

struct ProtocolResult {
  StateVector<4> input_state;
  Amplitudes<4> final_state{};
  PhaseFactor sigma_estimated;  // <b_i| U_A x U_B |b_j> in the chosen basis
  double gamma_used = 0.0;      // pi (1 - cos theta), doubled with counter-rotation
  double fidelity_eq4 = 0.0;    // |<predicted|final>|^2
  double overlap_initial = 0.0; // |<input|final>|
  double overlap_partner = 0.0; // |<other basis state|final>|
  double energy_residual_max = 0.0;
  double leakage_max = 0.0;     // max population outside the instantaneous zero-energy subspace
  double leakage_final = 0.0;   // population outside span{|01>, |10>} at s = L
  double dynamic_phase = 0.0;
  double norm_drift = 0.0;
};

/// Runs the protocol end to end.  Throws NumericalFailure from the
/// integrator and ProtocolViolation when leakage exceeds 1e-4.
ProtocolResult run_pair_protocol(const ProtocolConfig& config);

/// The pair trajectory of run_pair_protocol together with both media, for
/// diagnostics that need every step.
struct PairRun {
  HamiltonianSchedule medium_a;
  HamiltonianSchedule medium_b;
  PairTrajectory trajectory;
  Matrix<4> total;  // U_A(L) x U_B(L)
};
PairRun evolve_pair(const ProtocolConfig& config, const StateVector<4>& input);

}  // namespace geophase
