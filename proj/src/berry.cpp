#include "geophase/berry.hpp"

#include <vector>

namespace geophase {

double wilson_phase_of_chain(std::span<const Amplitudes<2>> states) {
  if (states.size() < 2) throw InputDomainError("Wilson loop needs at least two states");
  cplx product = 1.0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const cplx o = inner(states[k], states[(k + 1) % states.size()]);
    const double m = std::abs(o);
    if (m < tol::kOverlapFloor)
      throw LoopTooCoarseError("eigenstate overlap " + std::to_string(m) + " at sample " + std::to_string(k) +
                               " is below 1e-6; refine the loop");
    product *= o / m;
  }
  return wrap_phase(-std::arg(product));
}

double wilson_loop_phase(const FieldLoop& loop, Band band) {
  const auto pts = loop.samples();
  std::vector<Amplitudes<2>> chain;
  chain.reserve(loop.segments());
  for (std::size_t k = 0; k < loop.segments(); ++k) {
    const EigenPair e = instantaneous_eigenstates(pts[k]);
    chain.push_back((band == Band::minus ? e.minus : e.plus).amplitudes());
  }
  return wilson_phase_of_chain(chain);
}

double dynamic_phase(const Trajectory& trajectory, const HamiltonianSchedule& schedule) {
  const auto& s = trajectory.s_grid;
  const auto& psi = trajectory.states;
  auto energy = [&](std::size_t k) { return std::real(inner(psi[k], schedule.hamiltonian(s[k]) * psi[k])); };
  double integral = 0.0;
  double prev = energy(0);
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double cur = energy(k);
    integral += 0.5 * (prev + cur) * (s[k] - s[k - 1]);
    prev = cur;
  }
  return -integral;
}

double geometric_phase_from_dynamics(const Trajectory& trajectory, const HamiltonianSchedule& schedule) {
  const cplx ret = inner(trajectory.states.front(), trajectory.states.back());
  if (std::abs(ret) < tol::kAdiabaticOverlap)
    throw NotAdiabaticError("final state overlap " + std::to_string(std::abs(ret)) +
                                " with the initial state is below 0.99; the run is not adiabatic",
                            std::abs(ret));
  return wrap_phase(std::arg(ret) - dynamic_phase(trajectory, schedule));
}

double analytic_gamma(double omega, Band band) { return wrap_phase(-band_sign(band) * 0.5 * omega); }

BerryPhaseResult analyze_loop(const HamiltonianSchedule& schedule, Band band, std::size_t n_steps) {
  BerryPhaseResult r;
  r.band = band;
  r.omega = solid_angle(schedule.loop());
  r.gamma_analytic = analytic_gamma(r.omega.omega, band);
  r.gamma_wilson = wilson_loop_phase(schedule.loop(), band);

  const EigenPair e = instantaneous_eigenstates(schedule.loop().samples().front());
  const StateVector<2>& psi0 = band == Band::minus ? e.minus : e.plus;
  const Trajectory t = evolve_state(schedule, psi0, n_steps == 0 ? default_steps(schedule.loop()) : n_steps);
  r.norm_drift = t.norm_drift;
  r.return_overlap = std::abs(inner(t.states.front(), t.states.back()));
  r.dynamical_phase = dynamic_phase(t, schedule);
  r.gamma_dynamics = geometric_phase_from_dynamics(t, schedule);
  r.method_residual = phase_distance(r.gamma_wilson, r.gamma_dynamics);
  r.accepted = r.method_residual <= tol::kMethodResidual;
  return r;
}

}  // namespace geophase
