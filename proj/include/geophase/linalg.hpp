#pragma once

// Dense complex linear algebra for single spins (2x2) and spin pairs (4x4).
//
// Basis convention: index 0 is spin down (vertical polarization), index 1 is
// spin up (horizontal), so sigma_z |0> = -|0> and sigma_z |1> = +|1>.  Pair
// states use A-major ordering |00>, |01>, |10>, |11>.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>

#include "geophase/errors.hpp"
#include "geophase/tolerances.hpp"

namespace geophase {

using cplx = std::complex<double>;

template <std::size_t N>
concept SupportedDim = (N == 2 || N == 4);

/// Raw amplitudes with no norm guarantee (integrator output).
template <std::size_t N>
  requires SupportedDim<N>
using Amplitudes = std::array<cplx, N>;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline double max_component_diff(Vec3 a, Vec3 b) {
  return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}
/// Angle between two (not necessarily unit) vectors, accurate at 0 and pi.
inline double angle_between(Vec3 a, Vec3 b) { return std::atan2(norm(cross(a, b)), dot(a, b)); }

/// Rotation of v about the unit axis by angle (right-handed).
Vec3 rotate(Vec3 v, Vec3 unit_axis, double angle);

/// A unit 3-vector: a field direction on the Bloch sphere.
class PauliVector {
 public:
  /// Requires x^2+y^2+z^2 = 1 within 1e-12.
  static PauliVector from_unit(Vec3 v);
  /// Normalizes any non-zero vector.
  static PauliVector normalized(Vec3 v);

  static PauliVector ex() { return PauliVector(Vec3{1, 0, 0}); }
  static PauliVector ey() { return PauliVector(Vec3{0, 1, 0}); }
  static PauliVector ez() { return PauliVector(Vec3{0, 0, 1}); }

  const Vec3& vec() const noexcept { return v_; }
  double x() const noexcept { return v_.x; }
  double y() const noexcept { return v_.y; }
  double z() const noexcept { return v_.z; }
  operator Vec3() const noexcept { return v_; }  // NOLINT(google-explicit-constructor)

 private:
  explicit PauliVector(Vec3 v) : v_(v) {}
  Vec3 v_;
};

/// Dense row-major complex matrix, N = 2 or 4.
template <std::size_t N>
  requires SupportedDim<N>
class Matrix {
 public:
  static constexpr std::size_t dim = N;

  Matrix() = default;
  explicit Matrix(const std::array<cplx, N * N>& row_major) : a_(row_major) {}

  static Matrix identity() {
    Matrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }
  static Matrix diagonal(const std::array<cplx, N>& d) {
    Matrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
    return m;
  }

  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * N + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * N + j]; }

  Matrix adjoint() const {
    Matrix r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
  }

  Amplitudes<N> column(std::size_t j) const {
    Amplitudes<N> c{};
    for (std::size_t i = 0; i < N; ++i) c[i] = (*this)(i, j);
    return c;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const cplx aik = a(i, k);
        for (std::size_t j = 0; j < N; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    for (std::size_t i = 0; i < N * N; ++i) a.a_[i] += b.a_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    for (std::size_t i = 0; i < N * N; ++i) a.a_[i] -= b.a_[i];
    return a;
  }
  friend Matrix operator*(cplx s, Matrix a) {
    for (auto& v : a.a_) v *= s;
    return a;
  }
  friend Amplitudes<N> operator*(const Matrix& m, const Amplitudes<N>& v) {
    Amplitudes<N> r{};
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) r[i] += m(i, j) * v[j];
    return r;
  }

 private:
  std::array<cplx, N * N> a_{};
};

template <std::size_t N>
double max_entry_diff(const Matrix<N>& a, const Matrix<N>& b) {
  return (a - b).max_abs();
}

/// max |(M^dagger M - I)_ij|
template <std::size_t N>
double unitarity_deviation(const Matrix<N>& m) {
  return (m.adjoint() * m - Matrix<N>::identity()).max_abs();
}

template <std::size_t N>
bool is_diagonal(const Matrix<N>& m, double tol) {
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      if (i != j && std::abs(m(i, j)) > tol) return false;
  return true;
}

/// A matrix known to be unitary (U^dagger U = I within the construction tolerance).
template <std::size_t N>
  requires SupportedDim<N>
class UnitaryOperator {
 public:
  explicit UnitaryOperator(const Matrix<N>& m, double tol = tol::kNorm) : m_(m) {
    const double dev = unitarity_deviation(m);
    if (!(dev <= tol))
      throw InputDomainError("matrix is not unitary (deviation " + std::to_string(dev) + ")");
  }

  static UnitaryOperator identity() { return UnitaryOperator(Matrix<N>::identity()); }

  const Matrix<N>& matrix() const noexcept { return m_; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  UnitaryOperator adjoint() const { return UnitaryOperator(m_.adjoint(), Trusted{}); }

  friend UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b) {
    return UnitaryOperator(a.m_ * b.m_, Trusted{});
  }

 private:
  struct Trusted {};
  UnitaryOperator(const Matrix<N>& m, Trusted) : m_(m) {}
  Matrix<N> m_;
};

template <std::size_t N>
cplx inner(const Amplitudes<N>& bra, const Amplitudes<N>& ket) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += std::conj(bra[i]) * ket[i];
  return s;
}

template <std::size_t N>
double norm(const Amplitudes<N>& v) {
  return std::sqrt(std::real(inner(v, v)));
}

/// Unit-norm state of a single spin (N = 2) or a pair (N = 4).
template <std::size_t N>
  requires SupportedDim<N>
class StateVector {
 public:
  explicit StateVector(const Amplitudes<N>& amp, double tol = tol::kNorm) : amp_(amp) {
    const double dev = std::abs(norm(amp) - 1.0);
    if (!(dev <= tol))
      throw InputDomainError("state vector is not normalized (deviation " + std::to_string(dev) + ")");
  }

  static StateVector basis(std::size_t k) {
    if (k >= N) throw InputDomainError("basis index out of range");
    Amplitudes<N> a{};
    a[k] = 1.0;
    return StateVector(a);
  }

  const Amplitudes<N>& amplitudes() const noexcept { return amp_; }
  const cplx& operator[](std::size_t k) const { return amp_[k]; }

  friend StateVector operator*(const UnitaryOperator<N>& u, const StateVector& v) {
    return StateVector(u.matrix() * v.amp_);
  }

 private:
  Amplitudes<N> amp_;
};

template <std::size_t N>
cplx inner(const StateVector<N>& bra, const StateVector<N>& ket) {
  return inner(bra.amplitudes(), ket.amplitudes());
}

// --- Pauli algebra -----------------------------------------------------------

Matrix<2> sigma_x();
Matrix<2> sigma_y();
Matrix<2> sigma_z();
/// n . sigma for any real 3-vector.
Matrix<2> pauli_dot(Vec3 n);

/// exp(-i angle (axis . sigma)) = cos(angle) I - i sin(angle) (axis . sigma).
/// Throws InputDomainError when |axis| deviates from 1 by more than 1e-9.
UnitaryOperator<2> su2_exp(Vec3 axis, double angle);

// --- Composite systems ---------------------------------------------------------

/// Kronecker product, A index major.  Dimensions are fixed by the types.
Matrix<4> tensor(const Matrix<2>& a, const Matrix<2>& b);
UnitaryOperator<4> tensor(const UnitaryOperator<2>& a, const UnitaryOperator<2>& b);
Amplitudes<4> tensor(const Amplitudes<2>& a, const Amplitudes<2>& b);

// --- Phases and gauges -------------------------------------------------------

/// Reduces an angle into (-pi, pi]; values within 1e-9 above -pi snap to +pi.
double wrap_phase(double angle);
/// |a - b| reduced mod 2pi, in [0, pi].
double phase_distance(double a, double b);

/// Multiplies v by a unimodular factor so that its largest-magnitude component
/// is real positive (first component when magnitudes tie within 1e-12).
Amplitudes<2> gauge_fix(const Amplitudes<2>& v);

struct Diagonalization {
  UnitaryOperator<2> basis;     // columns are eigenvectors
  UnitaryOperator<2> diagonal;  // unimodular eigenvalues, ascending phase in (-pi, pi]
};

/// Eigendecomposition u = basis * diagonal * basis^dagger of a 2x2 unitary.
/// Throws InputDomainError when u is not unitary within 1e-9.
Diagonalization diagonalize_unitary_2x2(const Matrix<2>& u);
inline Diagonalization diagonalize_unitary_2x2(const UnitaryOperator<2>& u) {
  return diagonalize_unitary_2x2(u.matrix());
}

}  // namespace geophase
