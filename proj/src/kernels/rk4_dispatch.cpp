#include <atomic>
#include <cstdlib>
#include <string_view>

#include "geophase/kernels.hpp"

namespace geophase::kernels {

namespace {

// -1: automatic, otherwise static_cast<int>(Isa).
std::atomic<int> g_override{-1};

bool cpu_has_avx2() {
#if defined(GEOPHASE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool available(Isa isa) { return isa == Isa::scalar || (isa == Isa::avx2 && cpu_has_avx2()); }

}  // namespace

Columns2x2 Columns2x2::from(const Matrix<2>& m) {
  Columns2x2 c;
  const cplx e[4] = {m(0, 0), m(1, 0), m(0, 1), m(1, 1)};
  for (int i = 0; i < 4; ++i) {
    c.v[2 * i] = e[i].real();
    c.v[2 * i + 1] = e[i].imag();
  }
  return c;
}

Matrix<2> Columns2x2::to_matrix() const {
  return Matrix<2>({cplx(v[0], v[1]), cplx(v[4], v[5]), cplx(v[2], v[3]), cplx(v[6], v[7])});
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

Isa detected_isa() {
  static const Isa best = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
  return best;
}

Isa active_isa() {
  const int forced = g_override.load(std::memory_order_relaxed);
  if (forced >= 0) return static_cast<Isa>(forced);
  if (const char* env = std::getenv("GEOPHASE_ISA")) {
    const std::string_view e(env);
    if (e == "scalar") return Isa::scalar;
    if (e == "avx2" && available(Isa::avx2)) return Isa::avx2;
  }
  return detected_isa();
}

void set_isa_override(std::optional<Isa> isa) {
  if (isa && !available(*isa))
    throw InputDomainError(std::string("kernel variant '") + isa_name(*isa) + "' is not available");
  g_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

Rk4BlockFn rk4_block(Isa isa) {
#if defined(GEOPHASE_HAVE_AVX2)
  if (isa == Isa::avx2 && available(Isa::avx2)) return &rk4_block_avx2;
#endif
  (void)isa;
  return &rk4_block_scalar;
}

}  // namespace geophase::kernels
