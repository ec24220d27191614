#include <random>

#include "doctest.h"
#include "geophase/berry.hpp"
#include "oracles.hpp"

using namespace geophase;
using oracle::kPi;

namespace {

HamiltonianSchedule constant_z(double length) {
  return HamiltonianSchedule(FieldLoop::custom(std::vector<Vec3>(9, Vec3{0, 0, 1})), 1.0, length);
}

double mod2pi_distance(double a, double b) {
  const double d = std::remainder(a - b, 2 * kPi);
  return std::abs(d);
}

// Geometric phase of the exact rotating-field solution started at |0>:
// arg <psi0|psi(L)> + int <H> ds, the energy integrated by Simpson's rule.
double exact_dynamics_gamma(double theta, double length, int orientation = +1) {
  const Vec3 axis{std::sin(theta), 0, std::cos(theta)};
  const oracle::RotatingFieldSolution sol{axis, 1.0, 2 * kPi * orientation / length};
  const Amplitudes<2> psi0{1.0, 0.0};
  const int n = 200000;
  auto energy = [&](double s) {
    const Amplitudes<2> p = sol.state(s, psi0);
    const Amplitudes<2> hp = oracle::pauli(sol.field(s)) * p;
    return std::real(std::conj(p[0]) * hp[0] + std::conj(p[1]) * hp[1]);
  };
  const double h = length / n;
  double sum = energy(0) + energy(length);
  for (int k = 1; k < n; ++k) sum += (k % 2 ? 4.0 : 2.0) * energy(k * h);
  const double integral = sum * h / 3.0;
  return std::remainder(std::arg(sol.state(length, psi0)[0]) + integral, 2 * kPi);
}

}  // namespace

TEST_SUITE("berry") {
  TEST_CASE("wilson loop closed cases") {
    CHECK(wilson_loop_phase(make_cone_loop(0.0, 100), Band::minus) == 0.0);
    const double g = wilson_loop_phase(make_cone_loop(kPi / 3, 10000), Band::minus);
    CHECK(std::abs(g - kPi / 2) < 1e-4);
    CHECK(std::abs(g - oracle::cap_area(kPi / 3) / 2) < 1e-4);
    const double eq = wilson_loop_phase(make_cone_loop(kPi / 2, 10000), Band::minus);
    CHECK(std::abs(eq - kPi) < 1e-4);
    CHECK(eq <= kPi);
  }

  TEST_CASE("wilson loop rejects coarse chains") {
    const std::vector<Amplitudes<2>> chain{{1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}};
    CHECK_THROWS_AS(wilson_phase_of_chain(chain), LoopTooCoarseError);
  }

  TEST_CASE("gauge invariance under random unimodular factors") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> ph(-kPi, kPi);
    const FieldLoop loop = make_cone_loop(1.0, 512);
    std::vector<Amplitudes<2>> chain, scrambled;
    for (std::size_t k = 0; k < loop.segments(); ++k) {
      const Amplitudes<2> v = instantaneous_eigenstates(loop.samples()[k]).minus.amplitudes();
      chain.push_back(v);
      const cplx g = std::polar(1.0, ph(rng));
      scrambled.push_back({g * v[0], g * v[1]});
    }
    CHECK(phase_distance(wilson_phase_of_chain(chain), wilson_phase_of_chain(scrambled)) < 1e-12);
    CHECK(phase_distance(wilson_phase_of_chain(chain), wilson_loop_phase(loop, Band::minus)) < 1e-12);
  }

  TEST_CASE("band and orientation antisymmetry") {
    for (double theta : {0.2, 0.7, 1.2}) {
      const FieldLoop l = make_cone_loop(theta, 2000);
      const double m = wilson_loop_phase(l, Band::minus);
      CHECK(mod2pi_distance(wilson_loop_phase(l, Band::plus), -m) < 1e-9);
      CHECK(mod2pi_distance(wilson_loop_phase(l.reversed(), Band::minus), -m) < 1e-9);
    }
  }

  TEST_CASE("solid-angle law") {
    for (int k = 1; k <= 5; ++k) {
      const double theta = k * kPi / 12;
      const double g = wilson_loop_phase(make_cone_loop(theta, 10000), Band::minus);
      CHECK(mod2pi_distance(g, kPi * (1 - std::cos(theta))) <= 1e-3);
      CHECK(mod2pi_distance(analytic_gamma(oracle::cap_area(theta), Band::minus), kPi * (1 - std::cos(theta))) < 1e-12);
    }
  }

  TEST_CASE("shape independence of the phase") {
    const double target = oracle::cap_area(kPi / 3);
    const auto wobble = [](double t0) { return [t0](double p) { return t0 + 0.2 * std::cos(4 * p); }; };
    double lo = 0.5, hi = 1.5;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (oracle::polar_loop_area(wobble(mid)) < target ? lo : hi) = mid;
    }
    std::vector<Vec3> v;
    const std::size_t n = 10000;
    const auto r = wobble(0.5 * (lo + hi));
    for (std::size_t k = 0; k <= n; ++k) {
      const double phi = 2 * kPi * static_cast<double>(k % n) / n;
      v.push_back({std::sin(r(phi)) * std::cos(phi), std::sin(r(phi)) * std::sin(phi), std::cos(r(phi))});
    }
    const double shaped = wilson_loop_phase(FieldLoop::custom(v), Band::minus);
    const double cone = wilson_loop_phase(make_cone_loop(kPi / 3, n), Band::minus);
    CHECK(phase_distance(shaped, cone) < 2e-3);
  }

  TEST_CASE("dynamic phase for stationary bands") {
    const HamiltonianSchedule s = constant_z(kPi);
    const Trajectory minus = evolve_state(s, StateVector<2>::basis(0), 10000);
    const Trajectory plus = evolve_state(s, StateVector<2>::basis(1), 10000);
    CHECK(dynamic_phase(minus, s) == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(dynamic_phase(plus, s) == doctest::Approx(-kPi).epsilon(1e-12));
    CHECK(std::abs(geometric_phase_from_dynamics(minus, s)) < 1e-9);
  }

  TEST_CASE("return overlap below 0.99 is not adiabatic") {
    const HamiltonianSchedule s = constant_z(kPi / 2);
    const double r = 1.0 / std::sqrt(2.0);
    const Trajectory t = evolve_state(s, StateVector<2>(Amplitudes<2>{r, r}), 10000);
    try {
      geometric_phase_from_dynamics(t, s);
      FAIL("expected NotAdiabaticError");
    } catch (const NotAdiabaticError& e) {
      CHECK(e.overlap() < 1e-6);
    }
  }

  TEST_CASE("dynamics estimate matches the exact rotating-field value") {
    // At L = 400 pi the cyclic state is tilted by O(1/(kappa L)) from the
    // field, so the total-minus-dynamical phase departs from the adiabatic
    // pi/2 by that order.  The integrator must reproduce the exact value.
    const double length = 400 * kPi;
    const HamiltonianSchedule s(make_cone_loop(kPi / 3, 10000), 1.0, length);
    const Trajectory t = evolve_state(s, StateVector<2>::basis(0), 2000000);
    const double got = geometric_phase_from_dynamics(t, s);
    const double exact = exact_dynamics_gamma(kPi / 3, length);
    CHECK(phase_distance(got, exact) < 1e-5);
    MESSAGE("gamma_dynamics(400 pi) = " << got << ", exact " << exact << ", adiabatic " << kPi / 2);
  }

  TEST_CASE("dynamics estimate converges to the solid-angle law") {
    double prev = 1.0;
    for (double m : {400.0, 1600.0, 6400.0}) {
      const double exact = exact_dynamics_gamma(kPi / 3, m * kPi);
      const double gap = phase_distance(exact, kPi / 2);
      CHECK(gap < prev);
      prev = gap;
    }
    CHECK(prev < 1e-3);
  }

  TEST_CASE("analyze_loop in the adiabatic regime") {
    const double length = 6400 * kPi;
    const BerryPhaseResult r =
        analyze_loop(HamiltonianSchedule(make_cone_loop(kPi / 3, 10000), 1.0, length), Band::minus, 4000000);
    CHECK(std::abs(r.omega.omega - kPi) < 1e-6);
    CHECK(phase_distance(r.gamma_wilson, kPi / 2) < 1e-3);
    CHECK(phase_distance(r.gamma_dynamics, kPi / 2) < 1e-3);
    CHECK(phase_distance(r.gamma_analytic, kPi / 2) < 1e-3);
    CHECK(r.accepted);
    CHECK(r.return_overlap > 0.999);

    const BerryPhaseResult rev =
        analyze_loop(HamiltonianSchedule(make_cone_loop(kPi / 3, 10000, -1), 1.0, length), Band::minus, 4000000);
    CHECK(phase_distance(rev.gamma_wilson, -kPi / 2) < 1e-3);
    CHECK(phase_distance(rev.gamma_dynamics, -kPi / 2) < 1e-3);
    CHECK(phase_distance(rev.gamma_analytic, -kPi / 2) < 1e-3);
  }

  TEST_CASE("analyze_loop on the flat loop and the equator") {
    const BerryPhaseResult flat = analyze_loop(HamiltonianSchedule(make_cone_loop(0.0, 10000), 1.0, 400 * kPi), Band::minus);
    CHECK(std::abs(flat.gamma_wilson) < 1e-12);
    CHECK(std::abs(flat.gamma_dynamics) < 1e-6);
    CHECK(std::abs(flat.gamma_analytic) < 1e-12);

    const BerryPhaseResult eq =
        analyze_loop(HamiltonianSchedule(make_cone_loop(kPi / 2, 10000), 1.0, 6400 * kPi), Band::minus, 4000000);
    CHECK(phase_distance(eq.gamma_dynamics, kPi) < 1e-3);
    CHECK(phase_distance(eq.gamma_wilson, kPi) < 1e-4);
  }

  TEST_CASE("analytic law reduction") {
    CHECK(analytic_gamma(kPi, Band::minus) == doctest::Approx(kPi / 2));
    CHECK(analytic_gamma(kPi, Band::plus) == doctest::Approx(-kPi / 2));
    CHECK(analytic_gamma(2 * kPi, Band::minus) == doctest::Approx(kPi));
    CHECK(analytic_gamma(2 * kPi, Band::plus) == doctest::Approx(kPi));
  }
}
