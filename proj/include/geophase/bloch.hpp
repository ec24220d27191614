#pragma once

// Closed field loops on the Bloch sphere and their signed solid angle.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geophase/linalg.hpp"

namespace geophase {

enum class LoopKind { cone, custom };

struct ConeParameters {
  PauliVector axis;   // Z'
  double half_angle;  // angle between z and Z'
  int orientation;    // +1 right-handed about Z', -1 reversed
};

/// Closed sampled path of field directions: N + 1 samples, last == first.
class FieldLoop {
 public:
  /// Validates closure, unit norm (1e-12) and N >= 8; throws GeometryError.
  static FieldLoop custom(std::vector<Vec3> samples);

  std::span<const PauliVector> samples() const noexcept { return samples_; }
  /// Number of segments N (samples().size() - 1).
  std::size_t segments() const noexcept { return samples_.size() - 1; }
  LoopKind kind() const noexcept { return cone_ ? LoopKind::cone : LoopKind::custom; }
  const std::optional<ConeParameters>& cone() const noexcept { return cone_; }

  /// Field direction at loop parameter u in [0, 1], by normalized linear
  /// interpolation between neighbouring samples.
  Vec3 at(double u) const;

  /// Same path traversed backwards.
  FieldLoop reversed() const;
  /// Every sample rigidly rotated about unit_axis.
  FieldLoop rotated(Vec3 unit_axis, double angle) const;

 private:
  friend FieldLoop make_cone_loop(double, std::size_t, int);
  FieldLoop(std::vector<PauliVector> samples, std::optional<ConeParameters> cone)
      : samples_(std::move(samples)), cone_(std::move(cone)) {}

  std::vector<PauliVector> samples_;
  std::optional<ConeParameters> cone_;
};

/// Circle of angular radius theta about Z' = (sin theta, 0, cos theta),
/// starting and ending at z: beta(u) = R_{Z'}(2 pi u orientation) z.
/// Requires 0 <= theta <= pi/2, n_samples >= 8, orientation = +-1.
FieldLoop make_cone_loop(double theta, std::size_t n_samples, int orientation = +1);

enum class ReferencePoint { centroid, cone_axis, orthogonal_to_first };

struct SolidAngle {
  double omega;  // steradians in (-2pi, 2pi], positive for counter-clockwise loops
  ReferencePoint reference;
  Vec3 reference_direction;
};

/// Signed enclosed area: sum of signed spherical-triangle excesses (L'Huilier)
/// fanned from a reference point.  Throws GeometryError when a triangle is
/// undefined (consecutive or reference-antipodal samples).
SolidAngle solid_angle(const FieldLoop& loop);

struct LoopDiagnostics {
  std::size_t segments = 0;
  double closure_residual = 0.0;    // max component |first - last|
  double max_norm_deviation = 0.0;  // max | |p|^2 - 1 |
  double min_step = 0.0;            // smallest angular step (rad)
  double max_step = 0.0;            // largest angular step (rad)
  bool closed = false;
  bool unit_norm = false;
  bool enough_samples = false;

  bool ok() const noexcept { return closed && unit_norm && enough_samples; }
};

LoopDiagnostics validate_loop(std::span<const Vec3> samples);
LoopDiagnostics validate_loop(const FieldLoop& loop);

/// Reads "x y z" triples, one per line (blank lines ignored).  Throws
/// InputDomainError naming the offending line.
std::vector<Vec3> read_loop_table(std::istream& in);
FieldLoop load_loop_file(const std::string& path);

}  // namespace geophase
