#pragma once

#include <cstddef>

// Every numeric threshold used by the library lives here.
namespace geophase::tol {

inline constexpr double kNorm = 1e-9;           // state norm, unitarity
inline constexpr double kAlgebra = 1e-12;       // exact algebraic identities
inline constexpr double kAxisNorm = 1e-9;       // su2_exp axis
inline constexpr double kUnitVector = 1e-12;    // PauliVector, loop samples
inline constexpr double kClosure = 1e-12;       // loop first == last
inline constexpr double kGaugeTie = 1e-12;      // eigenvector gauge rule
inline constexpr double kAntipodal = 1e-9;      // triangle degeneracy
inline constexpr double kCentroidMin = 1e-6;    // reference-point fallback
inline constexpr double kBoundarySnap = 1e-9;   // phase window upper edge

inline constexpr double kNormDrift = 1e-6;            // accepted trajectories
inline constexpr double kPropagatorUnitarity = 1e-8;  // RK4 propagators
inline constexpr double kOverlapFloor = 1e-6;         // Wilson-loop chain
inline constexpr double kAdiabaticOverlap = 0.99;     // dynamics extraction
inline constexpr double kMethodResidual = 1e-3;       // wilson vs dynamics

inline constexpr double kLeakage = 1e-4;        // degenerate-subspace population
inline constexpr double kKappaMatch = 1e-12;    // media A, B coupling
inline constexpr double kFidelityOrthogonal = 0.995;
inline constexpr double kFidelityGeneral = 0.99;

inline constexpr std::size_t kMinLoopSegments = 8;
inline constexpr std::size_t kStepsPerSample = 10;
inline constexpr std::size_t kDefaultMinSteps = 100000;
inline constexpr std::size_t kDefaultStepsPerSample = 20;

}  // namespace geophase::tol
