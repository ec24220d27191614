#include "geophase/linalg.hpp"

#include <utility>

namespace geophase {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};
}  // namespace

Vec3 rotate(Vec3 v, Vec3 k, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return c * v + s * cross(k, v) + (dot(k, v) * (1.0 - c)) * k;
}

PauliVector PauliVector::from_unit(Vec3 v) {
  const double n2 = dot(v, v);
  if (!(std::abs(n2 - 1.0) <= tol::kUnitVector))
    throw InputDomainError("Pauli vector is not unit-norm (|v|^2 = " + std::to_string(n2) + ")");
  return PauliVector(v);
}

PauliVector PauliVector::normalized(Vec3 v) {
  const double n = norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) throw InputDomainError("cannot normalize a zero or non-finite vector");
  return PauliVector((1.0 / n) * v);
}

Matrix<2> sigma_x() { return Matrix<2>({0.0, 1.0, 1.0, 0.0}); }
Matrix<2> sigma_y() { return Matrix<2>({0.0, kI, -kI, 0.0}); }
Matrix<2> sigma_z() { return Matrix<2>({-1.0, 0.0, 0.0, 1.0}); }

Matrix<2> pauli_dot(Vec3 n) {
  return Matrix<2>({cplx(-n.z, 0.0), cplx(n.x, n.y), cplx(n.x, -n.y), cplx(n.z, 0.0)});
}

UnitaryOperator<2> su2_exp(Vec3 axis, double angle) {
  const double n = norm(axis);
  if (!(std::abs(n - 1.0) <= tol::kAxisNorm))
    throw InputDomainError("su2_exp axis is not unit-norm (|axis| = " + std::to_string(n) + ")");
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Matrix<2> m = cplx(c) * Matrix<2>::identity() - cplx(0.0, s) * pauli_dot(axis);
  return UnitaryOperator<2>(m);
}

Matrix<4> tensor(const Matrix<2>& a, const Matrix<2>& b) {
  Matrix<4> r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return r;
}

UnitaryOperator<4> tensor(const UnitaryOperator<2>& a, const UnitaryOperator<2>& b) {
  return UnitaryOperator<4>(tensor(a.matrix(), b.matrix()));
}

Amplitudes<4> tensor(const Amplitudes<2>& a, const Amplitudes<2>& b) {
  return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}

double wrap_phase(double angle) {
  double r = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi + tol::kBoundarySnap) r += 2.0 * kPi;
  return r;
}

double phase_distance(double a, double b) { return std::abs(std::remainder(a - b, 2.0 * kPi)); }

Amplitudes<2> gauge_fix(const Amplitudes<2>& v) {
  const double m0 = std::abs(v[0]);
  const double m1 = std::abs(v[1]);
  const std::size_t lead = (std::abs(m0 - m1) <= tol::kGaugeTie || m0 > m1) ? 0 : 1;
  const double m = std::abs(v[lead]);
  if (m == 0.0) return v;
  const cplx phase = std::conj(v[lead]) / m;
  return {v[0] * phase, v[1] * phase};
}

namespace {

Amplitudes<2> normalized(const Amplitudes<2>& v) {
  const double n = norm(v);
  return {v[0] / n, v[1] / n};
}

// Eigenvector of a normal 2x2 matrix for eigenvalue lambda.
Amplitudes<2> eigenvector(const Matrix<2>& u, cplx lambda) {
  const Amplitudes<2> a{u(0, 1), lambda - u(0, 0)};
  const Amplitudes<2> b{lambda - u(1, 1), u(1, 0)};
  return normalized(norm(a) >= norm(b) ? a : b);
}

double phase_of(cplx z) {
  double p = std::arg(z);
  if (p <= -kPi) p = kPi;
  return p;
}

}  // namespace

Diagonalization diagonalize_unitary_2x2(const Matrix<2>& u) {
  const double dev = unitarity_deviation(u);
  if (!(dev <= tol::kNorm))
    throw InputDomainError("diagonalize_unitary_2x2: input is not unitary (deviation " + std::to_string(dev) + ")");

  const cplx tr = u(0, 0) + u(1, 1);
  const cplx det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  const cplx disc = std::sqrt(tr * tr - 4.0 * det);
  cplx l1 = 0.5 * (tr + disc);
  cplx l2 = 0.5 * (tr - disc);
  l1 /= std::abs(l1);
  l2 /= std::abs(l2);
  if (phase_of(l2) < phase_of(l1)) std::swap(l1, l2);

  Matrix<2> s = Matrix<2>::identity();
  const double off = std::max(std::abs(u(0, 1)), std::abs(u(1, 0)));
  if (off <= tol::kAlgebra * 1e-3) {
    // Already diagonal: eigenvectors are basis vectors, possibly swapped.
    if (phase_of(u(1, 1)) < phase_of(u(0, 0))) s = sigma_x();
    l1 = u(0, 0) / std::abs(u(0, 0));
    l2 = u(1, 1) / std::abs(u(1, 1));
    if (phase_of(l2) < phase_of(l1)) std::swap(l1, l2);
  } else if (std::abs(l1 - l2) > tol::kAlgebra) {
    const Amplitudes<2> v1 = gauge_fix(eigenvector(u, l1));
    const Amplitudes<2> v2 = gauge_fix({-std::conj(v1[1]), std::conj(v1[0])});
    s = Matrix<2>({v1[0], v2[0], v1[1], v2[1]});
  }
  return {UnitaryOperator<2>(s), UnitaryOperator<2>(Matrix<2>::diagonal({l1, l2}))};
}

}  // namespace geophase
