#include <immintrin.h>

#include "geophase/kernels.hpp"

namespace geophase::kernels {

namespace {

// One generator column pair in the layout used by cmul below:
// ga = [g00, g10], gb = [g01, g11], each split into duplicated real and
// imaginary parts.
struct Generator {
  __m256d a_re, a_im, b_re, b_im;

  Generator(Vec3 b, double kappa) {
    const __m256d ga = _mm256_setr_pd(0.0, kappa * b.z, -kappa * b.y, -kappa * b.x);
    const __m256d gb = _mm256_setr_pd(kappa * b.y, -kappa * b.x, 0.0, -kappa * b.z);
    a_re = _mm256_movedup_pd(ga);
    a_im = _mm256_permute_pd(ga, 0xF);
    b_re = _mm256_movedup_pd(gb);
    b_im = _mm256_permute_pd(gb, 0xF);
  }
};

// Lane-wise complex product of duplicated (re, im) parts with v.
inline __m256d cmul(__m256d g_re, __m256d g_im, __m256d v) {
  return _mm256_fmaddsub_pd(g_re, v, _mm256_mul_pd(g_im, _mm256_permute_pd(v, 0x5)));
}

// G applied to one column [x, y] (x, y complex).
inline __m256d apply(const Generator& g, __m256d col) {
  const __m256d xx = _mm256_permute4x64_pd(col, 0x44);
  const __m256d yy = _mm256_permute4x64_pd(col, 0xEE);
  return _mm256_add_pd(cmul(g.a_re, g.a_im, xx), cmul(g.b_re, g.b_im, yy));
}

}  // namespace

void rk4_block_avx2(std::span<const Vec3> fields, double kappa, double h, Columns2x2& out,
                    std::span<Columns2x2> history, NormRange& norms) {
  const std::size_t steps = fields.empty() ? 0 : (fields.size() - 1) / 2;
  __m256d c0 = _mm256_load_pd(out.v.data());
  __m256d c1 = _mm256_load_pd(out.v.data() + 4);
  const __m256d half_h = _mm256_set1_pd(0.5 * h);
  const __m256d full_h = _mm256_set1_pd(h);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d sixth_h = _mm256_set1_pd(h / 6.0);
  __m256d nmin = _mm256_set1_pd(norms.min_sq);
  __m256d nmax = _mm256_set1_pd(norms.max_sq);

  Generator g0(fields[0], kappa);
  for (std::size_t i = 0; i < steps; ++i) {
    const Generator gm(fields[2 * i + 1], kappa);
    const Generator g1(fields[2 * i + 2], kappa);

    const __m256d k1a = apply(g0, c0);
    const __m256d k1b = apply(g0, c1);
    const __m256d k2a = apply(gm, _mm256_fmadd_pd(half_h, k1a, c0));
    const __m256d k2b = apply(gm, _mm256_fmadd_pd(half_h, k1b, c1));
    const __m256d k3a = apply(gm, _mm256_fmadd_pd(half_h, k2a, c0));
    const __m256d k3b = apply(gm, _mm256_fmadd_pd(half_h, k2b, c1));
    const __m256d k4a = apply(g1, _mm256_fmadd_pd(full_h, k3a, c0));
    const __m256d k4b = apply(g1, _mm256_fmadd_pd(full_h, k3b, c1));

    __m256d sa = _mm256_fmadd_pd(two, k2a, k1a);
    __m256d sb = _mm256_fmadd_pd(two, k2b, k1b);
    sa = _mm256_add_pd(_mm256_fmadd_pd(two, k3a, sa), k4a);
    sb = _mm256_add_pd(_mm256_fmadd_pd(two, k3b, sb), k4b);
    c0 = _mm256_fmadd_pd(sixth_h, sa, c0);
    c1 = _mm256_fmadd_pd(sixth_h, sb, c1);
    g0 = g1;

    // [|c0|^2, |c1|^2] in both 128-bit halves after the horizontal adds.
    const __m256d h01 = _mm256_hadd_pd(_mm256_mul_pd(c0, c0), _mm256_mul_pd(c1, c1));
    const __m256d n = _mm256_add_pd(h01, _mm256_permute2f128_pd(h01, h01, 0x01));
    nmin = _mm256_min_pd(nmin, n);
    nmax = _mm256_max_pd(nmax, n);

    if (!history.empty()) {
      _mm256_store_pd(history[i].v.data(), c0);
      _mm256_store_pd(history[i].v.data() + 4, c1);
    }
  }
  _mm256_store_pd(out.v.data(), c0);
  _mm256_store_pd(out.v.data() + 4, c1);

  alignas(32) double lo[4];
  alignas(32) double hi[4];
  _mm256_store_pd(lo, nmin);
  _mm256_store_pd(hi, nmax);
  norms.min_sq = std::min(lo[0], lo[1]);
  norms.max_sq = std::max(hi[0], hi[1]);
}

}  // namespace geophase::kernels
