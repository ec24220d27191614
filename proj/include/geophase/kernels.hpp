#pragma once

// Fixed-step RK4 kernels for the 2x2 propagator ODE
//
//   dU/ds = -i kappa (beta(s) . sigma) U,
//
// with a scalar reference implementation and an AVX2/FMA variant chosen at
// runtime.  Both consume field directions on the half-step grid and must agree
// to rounding.

#include <array>
#include <cstddef>
#include <optional>
#include <span>

#include "geophase/linalg.hpp"

namespace geophase::kernels {

/// Column-major 2x2 complex matrix as interleaved doubles:
/// [re u00, im u00, re u10, im u10, re u01, im u01, re u11, im u11].
struct alignas(32) Columns2x2 {
  std::array<double, 8> v{};

  static Columns2x2 from(const Matrix<2>& m);
  Matrix<2> to_matrix() const;
};

/// Smallest and largest squared column norm seen across the steps of a block.
struct NormRange {
  double min_sq = 1.0;
  double max_sq = 1.0;
};

/// Advances u by (fields.size() - 1) / 2 RK4 steps of length h.  fields[j] is
/// the unit field direction at s0 + j h / 2.  When history is non-empty it must
/// hold one slot per step and receives u after each step.
using Rk4BlockFn = void (*)(std::span<const Vec3> fields, double kappa, double h, Columns2x2& u,
                            std::span<Columns2x2> history, NormRange& norms);

void rk4_block_scalar(std::span<const Vec3> fields, double kappa, double h, Columns2x2& u,
                      std::span<Columns2x2> history, NormRange& norms);
#if defined(GEOPHASE_HAVE_AVX2)
void rk4_block_avx2(std::span<const Vec3> fields, double kappa, double h, Columns2x2& u,
                    std::span<Columns2x2> history, NormRange& norms);
#endif

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);
/// Best variant this binary and CPU support.
Isa detected_isa();
/// Variant used by the evolution module: the override if set, otherwise the
/// GEOPHASE_ISA environment variable ("scalar" / "avx2"), otherwise detected.
Isa active_isa();
/// Forces a variant (nullopt restores automatic selection).  Throws
/// InputDomainError when the requested variant is unavailable.
void set_isa_override(std::optional<Isa> isa);
Rk4BlockFn rk4_block(Isa isa);

}  // namespace geophase::kernels
