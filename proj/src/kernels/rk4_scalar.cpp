#include "geophase/kernels.hpp"

namespace geophase::kernels {

namespace {

struct C {
  double re;
  double im;
};

inline C mul(C a, C b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
inline C add(C a, C b) { return {a.re + b.re, a.im + b.im}; }
inline C axpy(double s, C x, C y) { return {y.re + s * x.re, y.im + s * x.im}; }

// G = -i kappa (b . sigma) with sigma_z = diag(-1, 1).
struct Generator {
  C g00, g01, g10, g11;

  Generator(Vec3 b, double kappa)
      : g00{0.0, kappa * b.z},
        g01{kappa * b.y, -kappa * b.x},
        g10{-kappa * b.y, -kappa * b.x},
        g11{0.0, -kappa * b.z} {}
};

struct M {
  C a[4];  // column-major: u00, u10, u01, u11
};

inline M apply(const Generator& g, const M& u) {
  M r;
  for (int c = 0; c < 2; ++c) {
    const C x = u.a[2 * c];
    const C y = u.a[2 * c + 1];
    r.a[2 * c] = add(mul(g.g00, x), mul(g.g01, y));
    r.a[2 * c + 1] = add(mul(g.g10, x), mul(g.g11, y));
  }
  return r;
}

inline M axpy(double s, const M& x, const M& y) {
  M r;
  for (int i = 0; i < 4; ++i) r.a[i] = axpy(s, x.a[i], y.a[i]);
  return r;
}

inline M load(const Columns2x2& c) {
  M m;
  for (int i = 0; i < 4; ++i) m.a[i] = {c.v[2 * i], c.v[2 * i + 1]};
  return m;
}

inline void store(const M& m, Columns2x2& c) {
  for (int i = 0; i < 4; ++i) {
    c.v[2 * i] = m.a[i].re;
    c.v[2 * i + 1] = m.a[i].im;
  }
}

inline double sq(C a) { return a.re * a.re + a.im * a.im; }

}  // namespace

void rk4_block_scalar(std::span<const Vec3> fields, double kappa, double h, Columns2x2& out,
                      std::span<Columns2x2> history, NormRange& norms) {
  const std::size_t steps = fields.empty() ? 0 : (fields.size() - 1) / 2;
  M u = load(out);
  Generator g0(fields[0], kappa);
  for (std::size_t i = 0; i < steps; ++i) {
    const Generator gm(fields[2 * i + 1], kappa);
    const Generator g1(fields[2 * i + 2], kappa);
    const M k1 = apply(g0, u);
    const M k2 = apply(gm, axpy(0.5 * h, k1, u));
    const M k3 = apply(gm, axpy(0.5 * h, k2, u));
    const M k4 = apply(g1, axpy(h, k3, u));
    M sum = axpy(2.0, k2, k1);
    sum = axpy(2.0, k3, sum);
    sum = axpy(1.0, k4, sum);
    u = axpy(h / 6.0, sum, u);
    g0 = g1;

    const double n0 = sq(u.a[0]) + sq(u.a[1]);
    const double n1 = sq(u.a[2]) + sq(u.a[3]);
    norms.min_sq = std::min({norms.min_sq, n0, n1});
    norms.max_sq = std::max({norms.max_sq, n0, n1});
    if (!history.empty()) store(u, history[i]);
  }
  store(u, out);
}

}  // namespace geophase::kernels
