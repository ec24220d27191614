#include "geophase/bloch.hpp"

#include <fstream>
#include <istream>
#include <limits>
#include <locale>
#include <sstream>

namespace geophase {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Vec3> as_vectors(std::span<const PauliVector> s) {
  return {s.begin(), s.end()};
}

// Spherical excess of the triangle (a, b, c) by L'Huilier's formula.
double lhuilier_excess(Vec3 a, Vec3 b, Vec3 c) {
  const double ab = angle_between(a, b);
  const double bc = angle_between(b, c);
  const double ca = angle_between(c, a);
  const double s = 0.5 * (ab + bc + ca);
  const double t = std::tan(0.5 * s) * std::tan(0.5 * (s - ab)) * std::tan(0.5 * (s - bc)) *
                   std::tan(0.5 * (s - ca));
  return 4.0 * std::atan(std::sqrt(std::max(t, 0.0)));
}

double reduce_solid_angle(double omega) {
  double r = std::remainder(omega, 4.0 * kPi);  // [-2pi, 2pi]
  if (r <= -2.0 * kPi + tol::kBoundarySnap) r += 4.0 * kPi;
  return r;
}

}  // namespace

FieldLoop FieldLoop::custom(std::vector<Vec3> samples) {
  const LoopDiagnostics d = validate_loop(samples);
  if (!d.enough_samples)
    throw GeometryError("loop needs at least " + std::to_string(tol::kMinLoopSegments) +
                        " segments, got " + std::to_string(d.segments));
  if (!d.closed)
    throw GeometryError("loop is not closed (closure residual " + std::to_string(d.closure_residual) + ")");
  if (!d.unit_norm)
    throw GeometryError("loop sample is not unit-norm (deviation " + std::to_string(d.max_norm_deviation) + ")");
  std::vector<PauliVector> unit;
  unit.reserve(samples.size());
  for (const Vec3& v : samples) unit.push_back(PauliVector::from_unit(v));
  unit.back() = unit.front();
  return FieldLoop(std::move(unit), std::nullopt);
}

Vec3 FieldLoop::at(double u) const {
  const std::size_t n = segments();
  const double x = std::clamp(u, 0.0, 1.0) * static_cast<double>(n);
  const std::size_t k = std::min(static_cast<std::size_t>(x), n - 1);
  const double t = x - static_cast<double>(k);
  const Vec3 p = (1.0 - t) * samples_[k].vec() + t * samples_[k + 1].vec();
  return (1.0 / norm(p)) * p;
}

FieldLoop FieldLoop::reversed() const {
  std::vector<PauliVector> r(samples_.rbegin(), samples_.rend());
  std::optional<ConeParameters> c = cone_;
  if (c) c->orientation = -c->orientation;
  return FieldLoop(std::move(r), c);
}

FieldLoop FieldLoop::rotated(Vec3 unit_axis, double angle) const {
  const PauliVector axis = PauliVector::from_unit(unit_axis);
  std::vector<PauliVector> r;
  r.reserve(samples_.size());
  for (const PauliVector& p : samples_) r.push_back(PauliVector::normalized(rotate(p, axis, angle)));
  r.back() = r.front();
  std::optional<ConeParameters> c = cone_;
  if (c) c->axis = PauliVector::normalized(rotate(c->axis, axis, angle));
  return FieldLoop(std::move(r), c);
}

FieldLoop make_cone_loop(double theta, std::size_t n_samples, int orientation) {
  if (!(theta >= 0.0 && theta <= kPi / 2))
    throw InputDomainError("cone half-angle must lie in [0, pi/2], got " + std::to_string(theta));
  if (n_samples < tol::kMinLoopSegments)
    throw InputDomainError("cone loop needs at least 8 samples, got " + std::to_string(n_samples));
  if (orientation != 1 && orientation != -1) throw InputDomainError("orientation must be +1 or -1");

  const Vec3 axis{std::sin(theta), 0.0, std::cos(theta)};
  const Vec3 z{0.0, 0.0, 1.0};
  std::vector<PauliVector> samples;
  samples.reserve(n_samples + 1);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double phi = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n_samples) * orientation;
    samples.push_back(PauliVector::normalized(rotate(z, axis, phi)));
  }
  samples.push_back(samples.front());
  return FieldLoop(std::move(samples), ConeParameters{PauliVector::normalized(axis), theta, orientation});
}

SolidAngle solid_angle(const FieldLoop& loop) {
  const auto pts = loop.samples();
  const std::size_t n = loop.segments();

  Vec3 centroid{};
  for (std::size_t k = 0; k < n; ++k) centroid = centroid + pts[k].vec();
  centroid = (1.0 / static_cast<double>(n)) * centroid;

  SolidAngle result{0.0, ReferencePoint::centroid, {}};
  if (norm(centroid) >= tol::kCentroidMin) {
    result.reference_direction = (1.0 / norm(centroid)) * centroid;
  } else if (loop.cone()) {
    result.reference = ReferencePoint::cone_axis;
    result.reference_direction = loop.cone()->axis.vec();
  } else {
    // Normal of the plane through the first sample and the sample most
    // nearly orthogonal to it; for a great circle this is its pole.
    result.reference = ReferencePoint::orthogonal_to_first;
    Vec3 best{};
    for (std::size_t k = 1; k < n; ++k) {
      const Vec3 c = cross(pts[0].vec(), pts[k].vec());
      if (norm(c) > norm(best)) best = c;
    }
    if (norm(best) == 0.0) throw GeometryError("cannot choose a triangulation reference point");
    result.reference_direction = (1.0 / norm(best)) * best;
  }

  const Vec3 r = result.reference_direction;
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec3 a = pts[k].vec();
    const Vec3 b = pts[k + 1].vec();
    if (norm(a + b) < tol::kAntipodal)
      throw GeometryError("consecutive loop samples " + std::to_string(k) + " and " + std::to_string(k + 1) +
                          " are antipodal");
    if (norm(a + r) < tol::kAntipodal)
      throw GeometryError("loop sample " + std::to_string(k) + " is antipodal to the reference point");
    const double orient = dot(r, cross(a, b));
    if (orient == 0.0) continue;
    const double e = lhuilier_excess(r, a, b);
    total += orient > 0.0 ? e : -e;
  }
  result.omega = reduce_solid_angle(total);
  return result;
}

LoopDiagnostics validate_loop(std::span<const Vec3> samples) {
  LoopDiagnostics d;
  d.segments = samples.empty() ? 0 : samples.size() - 1;
  d.enough_samples = d.segments >= tol::kMinLoopSegments;
  if (samples.empty()) return d;
  d.closure_residual = max_component_diff(samples.front(), samples.back());
  d.min_step = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    d.max_norm_deviation = std::max(d.max_norm_deviation, std::abs(dot(samples[k], samples[k]) - 1.0));
    if (k + 1 < samples.size()) {
      const double step = angle_between(samples[k], samples[k + 1]);
      d.min_step = std::min(d.min_step, step);
      d.max_step = std::max(d.max_step, step);
    }
  }
  if (samples.size() < 2) d.min_step = 0.0;
  d.closed = d.closure_residual <= tol::kClosure;
  d.unit_norm = d.max_norm_deviation <= tol::kUnitVector;
  return d;
}

LoopDiagnostics validate_loop(const FieldLoop& loop) {
  const std::vector<Vec3> v = as_vectors(loop.samples());
  return validate_loop(v);
}

std::vector<Vec3> read_loop_table(std::istream& in) {
  std::vector<Vec3> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    ss.imbue(std::locale::classic());
    Vec3 v;
    std::string extra;
    if (!(ss >> v.x >> v.y >> v.z) || (ss >> extra))
      throw InputDomainError("loop table line " + std::to_string(lineno) + ": expected three numbers \"x y z\"");
    out.push_back(v);
  }
  return out;
}

FieldLoop load_loop_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputDomainError("cannot open loop table '" + path + "'");
  return FieldLoop::custom(read_loop_table(in));
}

}  // namespace geophase
