#include "geophase/evolution.hpp"

#include <algorithm>

#include "geophase/kernels.hpp"

namespace geophase {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kBlockSteps = 4096;

void check_steps(const HamiltonianSchedule& schedule, std::size_t n_steps) {
  const std::size_t minimum = tol::kStepsPerSample * schedule.loop().segments();
  if (n_steps < minimum)
    throw InputDomainError("n_steps = " + std::to_string(n_steps) + " is below the minimum of " +
                           std::to_string(minimum) + " (10 per loop sample)");
}

double drift_of(const kernels::NormRange& r) {
  return std::max(std::sqrt(r.max_sq) - 1.0, 1.0 - std::sqrt(r.min_sq));
}

// Integrates over [s_begin, s_end]; fills history (n_steps entries) if asked.
Matrix<2> integrate(const HamiltonianSchedule& schedule, std::size_t n_steps, double s_begin, double s_end,
                    std::vector<Matrix<2>>* history, double& drift) {
  const kernels::Rk4BlockFn block = kernels::rk4_block(kernels::active_isa());
  const double h = (s_end - s_begin) / static_cast<double>(n_steps);
  kernels::Columns2x2 u = kernels::Columns2x2::from(Matrix<2>::identity());
  kernels::NormRange norms;
  std::vector<Vec3> fields;
  std::vector<kernels::Columns2x2> block_history;
  fields.reserve(2 * kBlockSteps + 1);

  for (std::size_t first = 0; first < n_steps; first += kBlockSteps) {
    const std::size_t m = std::min(kBlockSteps, n_steps - first);
    fields.clear();
    for (std::size_t j = 0; j <= 2 * m; ++j) {
      const double s = s_begin + (static_cast<double>(2 * first + j) * 0.5) * h;
      fields.push_back(schedule.field_direction(s));
    }
    if (history) block_history.resize(m);
    block(fields, schedule.kappa(), h, u, history ? std::span(block_history) : std::span<kernels::Columns2x2>{},
          norms);
    if (history)
      for (const auto& c : block_history) history->push_back(c.to_matrix());
  }
  drift = drift_of(norms);
  if (!(drift <= tol::kNormDrift))
    throw NumericalFailure("RK4 norm drift " + std::to_string(drift) + " exceeds 1e-6; increase n_steps", drift);
  return u.to_matrix();
}

UnitaryOperator<2> checked_propagator(const Matrix<2>& u) {
  const double dev = unitarity_deviation(u);
  if (!(dev <= tol::kPropagatorUnitarity))
    throw NumericalFailure("propagator unitarity deviation " + std::to_string(dev) + " exceeds 1e-8", dev);
  return UnitaryOperator<2>(u, tol::kPropagatorUnitarity);
}

}  // namespace

HamiltonianSchedule::HamiltonianSchedule(FieldLoop loop, double kappa, double length)
    : loop_(std::move(loop)), kappa_(kappa), length_(length) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InputDomainError("kappa must be positive and finite");
  if (!(length > 0.0) || !std::isfinite(length)) throw InputDomainError("length must be positive and finite");
}

Matrix<2> HamiltonianSchedule::hamiltonian(double s) const {
  return cplx(kappa_) * pauli_dot(field_direction(s));
}

std::size_t default_steps(const FieldLoop& loop) {
  return std::max(tol::kDefaultMinSteps, tol::kDefaultStepsPerSample * loop.segments());
}

PropagatorHistory propagate_with_history(const HamiltonianSchedule& schedule, std::size_t n_steps) {
  check_steps(schedule, n_steps);
  PropagatorHistory out;
  out.steps.reserve(n_steps + 1);
  out.steps.push_back(Matrix<2>::identity());
  integrate(schedule, n_steps, 0.0, schedule.length(), &out.steps, out.norm_drift);
  out.s_grid.resize(n_steps + 1);
  const double h = schedule.length() / static_cast<double>(n_steps);
  for (std::size_t k = 0; k <= n_steps; ++k) out.s_grid[k] = static_cast<double>(k) * h;
  out.s_grid.back() = schedule.length();
  return out;
}

Trajectory evolve_state(const HamiltonianSchedule& schedule, const StateVector<2>& psi0, std::size_t n_steps) {
  const PropagatorHistory hist = propagate_with_history(schedule, n_steps);
  Trajectory t;
  t.s_grid = hist.s_grid;
  t.states.reserve(hist.steps.size());
  for (const Matrix<2>& u : hist.steps) {
    t.states.push_back(u * psi0.amplitudes());
    t.norm_drift = std::max(t.norm_drift, std::abs(norm(t.states.back()) - 1.0));
  }
  return t;
}

UnitaryOperator<2> propagator(const HamiltonianSchedule& schedule, std::size_t n_steps) {
  return propagator(schedule, n_steps, 0.0, schedule.length());
}

UnitaryOperator<2> propagator(const HamiltonianSchedule& schedule, std::size_t n_steps, double s_begin,
                              double s_end) {
  check_steps(schedule, n_steps);
  if (!(s_begin >= 0.0 && s_end <= schedule.length() && s_begin < s_end))
    throw InputDomainError("propagator segment must satisfy 0 <= s_begin < s_end <= L");
  double drift = 0.0;
  return checked_propagator(integrate(schedule, n_steps, s_begin, s_end, nullptr, drift));
}

EigenPair instantaneous_eigenstates(const PauliVector& beta) {
  const Matrix<2> m = pauli_dot(beta);
  auto eigvec = [&](double lambda) {
    const Amplitudes<2> a{m(0, 1), lambda - m(0, 0)};
    const Amplitudes<2> b{lambda - m(1, 1), m(1, 0)};
    const Amplitudes<2>& v = norm(a) >= norm(b) ? a : b;
    const double n = norm(v);
    return StateVector<2>(gauge_fix({v[0] / n, v[1] / n}));
  };
  return {eigvec(-1.0), eigvec(+1.0)};
}

UnitaryOperator<2> exact_cone_propagator(double theta, double kappa, double length, int orientation) {
  if (!(theta >= 0.0 && theta <= kPi / 2)) throw InputDomainError("theta must lie in [0, pi/2]");
  if (!(kappa > 0.0) || !(length > 0.0)) throw InputDomainError("kappa and length must be positive");
  if (orientation != 1 && orientation != -1) throw InputDomainError("orientation must be +1 or -1");

  const Vec3 axis{std::sin(theta), 0.0, std::cos(theta)};
  const double omega = 2.0 * kPi * orientation / length;
  const Vec3 h = Vec3{0.0, 0.0, kappa} - (0.5 * omega) * axis;
  const double h_norm = norm(h);
  const UnitaryOperator<2> frame = su2_exp(axis, 0.5 * omega * length);
  const UnitaryOperator<2> rotating = su2_exp((1.0 / h_norm) * h, h_norm * length);
  return frame * rotating;
}

AdiabaticInfidelity adiabatic_infidelity(const Trajectory& trajectory, const HamiltonianSchedule& schedule,
                                         int band_sign) {
  AdiabaticInfidelity r;
  for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
    const PauliVector beta = PauliVector::normalized(schedule.field_direction(trajectory.s_grid[k]));
    const EigenPair e = instantaneous_eigenstates(beta);
    const StateVector<2>& n = band_sign < 0 ? e.minus : e.plus;
    const double p = 1.0 - std::norm(inner(n.amplitudes(), trajectory.states[k]));
    r.max = std::max(r.max, p);
    r.final = p;
  }
  return r;
}

}  // namespace geophase
