// AVX2 variants of the batched 3x3 kernels. Each routine mirrors the scalar
// reference in anosov/detail/small3.hpp operation for operation (no fused
// multiply-add), so results are bit-identical to the scalar path and the
// equivalence suite can assert on them directly. Lanes needing libm
// (acos/cos/cbrt/log) drop to scalar calls.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

#include "anosov/kernels.hpp"

namespace anosov::kernels {

namespace {

constexpr double kTwoThirdPi = 2.0943951023931953;

inline __m256d gather_entry(const double* base, int e) {
  return _mm256_set_pd(base[27 + e], base[18 + e], base[9 + e], base[e]);
}

inline void scatter_entry(double* base, int e, __m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  base[e] = t[0];
  base[9 + e] = t[1];
  base[18 + e] = t[2];
  base[27 + e] = t[3];
}

inline __m256d apply1(__m256d x, double (*f)(double)) {
  alignas(32) double t[4];
  _mm256_store_pd(t, x);
  for (int i = 0; i < 4; ++i) t[i] = f(t[i]);
  return _mm256_load_pd(t);
}

inline __m256d acos4(__m256d x) { return apply1(x, [](double v) { return std::acos(v); }); }
inline __m256d cos4(__m256d x) { return apply1(x, [](double v) { return std::cos(v); }); }
inline __m256d cbrt4(__m256d x) { return apply1(x, [](double v) { return std::cbrt(v); }); }
inline __m256d log4(__m256d x) { return apply1(x, [](double v) { return std::log(v); }); }

inline __m256d mul(__m256d a, __m256d b) { return _mm256_mul_pd(a, b); }
inline __m256d add(__m256d a, __m256d b) { return _mm256_add_pd(a, b); }
inline __m256d sub(__m256d a, __m256d b) { return _mm256_sub_pd(a, b); }
inline __m256d div(__m256d a, __m256d b) { return _mm256_div_pd(a, b); }
inline __m256d set1(double v) { return _mm256_set1_pd(v); }
inline __m256d neg(__m256d a) { return sub(_mm256_setzero_pd(), a); }
inline __m256d max0(__m256d x) { return _mm256_max_pd(x, _mm256_setzero_pd()); }
inline __m256d abs4(__m256d x) { return _mm256_andnot_pd(set1(-0.0), x); }

struct Poly3 {
  __m256d c2, c1, c0;
};

inline __m256d det3_v(const __m256d m[9]) {
  __m256d d0 = sub(mul(m[4], m[8]), mul(m[5], m[7]));
  __m256d d1 = sub(mul(m[3], m[8]), mul(m[5], m[6]));
  __m256d d2 = sub(mul(m[3], m[7]), mul(m[4], m[6]));
  return add(sub(mul(m[0], d0), mul(m[1], d1)), mul(m[2], d2));
}

inline Poly3 charpoly3_v(const __m256d m[9]) {
  Poly3 p;
  p.c2 = add(add(m[0], m[4]), m[8]);
  __m256d t0 = sub(mul(m[0], m[4]), mul(m[1], m[3]));
  __m256d t1 = sub(mul(m[0], m[8]), mul(m[2], m[6]));
  __m256d t2 = sub(mul(m[4], m[8]), mul(m[5], m[7]));
  p.c1 = add(add(t0, t1), t2);
  p.c0 = det3_v(m);
  return p;
}

inline void adj3_v(const __m256d m[9], __m256d out[9]) {
  out[0] = sub(mul(m[4], m[8]), mul(m[5], m[7]));
  out[1] = sub(mul(m[2], m[7]), mul(m[1], m[8]));
  out[2] = sub(mul(m[1], m[5]), mul(m[2], m[4]));
  out[3] = sub(mul(m[5], m[6]), mul(m[3], m[8]));
  out[4] = sub(mul(m[0], m[8]), mul(m[2], m[6]));
  out[5] = sub(mul(m[2], m[3]), mul(m[0], m[5]));
  out[6] = sub(mul(m[3], m[7]), mul(m[4], m[6]));
  out[7] = sub(mul(m[1], m[6]), mul(m[0], m[7]));
  out[8] = sub(mul(m[0], m[4]), mul(m[1], m[3]));
}

struct Depressed {
  __m256d q, p, rr, disc;
};

inline Depressed depress(const Poly3& c) {
  Depressed d;
  d.q = div(c.c2, set1(3.0));
  d.p = sub(c.c1, mul(c.c2, d.q));
  // rr = -(2 q^3 - c1 q + c0), with 2q^3 evaluated as ((2*q)*q)*q
  __m256d two_q3 = mul(mul(mul(set1(2.0), d.q), d.q), d.q);
  d.rr = neg(add(sub(two_q3, mul(c.c1, d.q)), c.c0));
  // disc = -4 p^3 - 27 rr^2
  __m256d m4p3 = mul(mul(mul(set1(-4.0), d.p), d.p), d.p);
  d.disc = sub(m4p3, mul(mul(set1(27.0), d.rr), d.rr));
  return d;
}

// phi = acos(clamp(1.5 rr / (p m), -1, 1)) / 3 on lanes where m != 0.
inline __m256d trig_phi(const Depressed& d, __m256d m, __m256d m_zero) {
  __m256d arg = div(mul(set1(1.5), d.rr), mul(d.p, m));
  arg = _mm256_blendv_pd(arg, _mm256_setzero_pd(), m_zero);
  arg = _mm256_max_pd(set1(-1.0), _mm256_min_pd(arg, set1(1.0)));
  return div(acos4(arg), set1(3.0));
}

inline __m256d sqrt_m(const Depressed& d) {
  return _mm256_sqrt_pd(max0(div(neg(d.p), set1(3.0))));
}

// Sorted non-increasing real roots, valid where disc >= 0.
inline void trig_roots(const Depressed& d, __m256d out[3]) {
  __m256d m = sqrt_m(d);
  __m256d m_zero = _mm256_cmp_pd(m, _mm256_setzero_pd(), _CMP_EQ_OQ);
  __m256d phi = trig_phi(d, m, m_zero);
  __m256d two_m = mul(set1(2.0), m);
  __m256d r0 = add(d.q, mul(two_m, cos4(phi)));
  __m256d r1 = add(d.q, mul(two_m, cos4(sub(phi, set1(2.0 * kTwoThirdPi)))));
  __m256d r2 = add(d.q, mul(two_m, cos4(sub(phi, set1(kTwoThirdPi)))));
  // Same bubble as the scalar path.
  __m256d hi12 = _mm256_max_pd(r1, r2), lo12 = _mm256_min_pd(r1, r2);
  __m256d s0 = _mm256_max_pd(r0, hi12), m01 = _mm256_min_pd(r0, hi12);
  __m256d s1 = _mm256_max_pd(m01, lo12), s2 = _mm256_min_pd(m01, lo12);
  out[0] = _mm256_blendv_pd(s0, d.q, m_zero);
  out[1] = _mm256_blendv_pd(s1, d.q, m_zero);
  out[2] = _mm256_blendv_pd(s2, d.q, m_zero);
}

struct Cardano {
  __m256d u, v;
};

inline Cardano cardano_parts(const Depressed& d) {
  __m256d shalf = _mm256_sqrt_pd(max0(div(neg(d.disc), set1(108.0))));
  __m256d mrr2 = div(neg(d.rr), set1(2.0));
  Cardano c;
  c.u = cbrt4(add(mrr2, shalf));
  c.v = cbrt4(sub(mrr2, shalf));
  return c;
}

// Largest real root assuming an SPD-style spectrum (trig branch) with the
// near-double-aware Cardano fallback blended in where disc < 0.
inline __m256d top_root(const Poly3& c) {
  Depressed d = depress(c);
  __m256d m = sqrt_m(d);
  __m256d m_zero = _mm256_cmp_pd(m, _mm256_setzero_pd(), _CMP_EQ_OQ);
  __m256d phi = trig_phi(d, m, m_zero);
  __m256d trig = add(d.q, mul(mul(set1(2.0), m), cos4(phi)));
  trig = _mm256_blendv_pd(trig, d.q, m_zero);

  Cardano cd = cardano_parts(d);
  __m256d simple = add(add(d.q, cd.u), cd.v);  // (q + u) + v, as in the scalar path
  __m256d upv = add(cd.u, cd.v);
  __m256d near_double = sub(d.q, div(upv, set1(2.0)));
  __m256d card = _mm256_max_pd(simple, near_double);

  __m256d trig_mask = _mm256_cmp_pd(d.disc, _mm256_setzero_pd(), _CMP_GE_OQ);
  return _mm256_blendv_pd(card, trig, trig_mask);
}

// Largest eigenvalue modulus of a general real 3x3 via its char poly.
inline __m256d top_modulus(const Poly3& c) {
  Depressed d = depress(c);
  __m256d m = sqrt_m(d);
  __m256d m_zero = _mm256_cmp_pd(m, _mm256_setzero_pd(), _CMP_EQ_OQ);
  __m256d phi = trig_phi(d, m, m_zero);
  __m256d two_m = mul(set1(2.0), m);
  __m256d hi = add(d.q, mul(two_m, cos4(phi)));
  __m256d lo = add(d.q, mul(two_m, cos4(sub(phi, set1(2.0 * kTwoThirdPi)))));
  __m256d trig = _mm256_max_pd(abs4(hi), abs4(lo));
  trig = _mm256_blendv_pd(trig, abs4(d.q), m_zero);

  Cardano cd = cardano_parts(d);
  __m256d real_root = add(add(d.q, cd.u), cd.v);
  __m256d nonzero = _mm256_cmp_pd(abs4(real_root), _mm256_setzero_pd(), _CMP_GT_OQ);
  __m256d ratio = div(c.c0, real_root);
  __m256d pair2 = abs4(_mm256_blendv_pd(c.c0, ratio, nonzero));
  __m256d card = _mm256_max_pd(abs4(real_root), _mm256_sqrt_pd(pair2));

  __m256d trig_mask = _mm256_cmp_pd(d.disc, _mm256_setzero_pd(), _CMP_GE_OQ);
  return _mm256_blendv_pd(card, trig, trig_mask);
}

// Shared two-sided log-spectrum assembly: l1 from the top root, l3 from the
// adjugate top root, the middle pinned by the unit determinant.
inline void assemble_logs(__m256d lam_top, __m256d mu_top, double half,
                          double* out, size_t lanes) {
  const __m256d floor = set1(1e-300);
  __m256d l1 = mul(set1(half), log4(_mm256_max_pd(lam_top, floor)));
  __m256d l3 = mul(set1(-half), log4(_mm256_max_pd(mu_top, floor)));
  __m256d l2 = sub(neg(l1), l3);
  l2 = _mm256_min_pd(l2, l1);
  l2 = _mm256_max_pd(l2, l3);
  __m256d mean = div(add(add(l1, l2), l3), set1(3.0));
  l1 = sub(l1, mean);
  l2 = sub(l2, mean);
  l3 = sub(l3, mean);
  alignas(32) double t1[4], t2[4], t3[4];
  _mm256_store_pd(t1, l1);
  _mm256_store_pd(t2, l2);
  _mm256_store_pd(t3, l3);
  for (size_t k = 0; k < lanes; ++k) {
    out[3 * k + 0] = t1[k];
    out[3 * k + 1] = t2[k];
    out[3 * k + 2] = t3[k];
  }
}

void mul3_rhs_avx2(const double* a, const double* rhs, double* out, size_t n) {
  size_t i = 0;
  __m256d r[9];
  for (int e = 0; e < 9; ++e) r[e] = set1(rhs[e]);
  for (; i + 4 <= n; i += 4) {
    const double* base = a + 9 * i;
    double* obase = out + 9 * i;
    for (int row = 0; row < 3; ++row) {
      __m256d g0 = gather_entry(base, 3 * row + 0);
      __m256d g1 = gather_entry(base, 3 * row + 1);
      __m256d g2 = gather_entry(base, 3 * row + 2);
      for (int col = 0; col < 3; ++col) {
        __m256d acc = mul(g0, r[col]);
        acc = add(acc, mul(g1, r[3 + col]));
        acc = add(acc, mul(g2, r[6 + col]));
        scatter_entry(obase, 3 * row + col, acc);
      }
    }
  }
  if (i < n) scalar_ops().mul3_rhs(a + 9 * i, rhs, out + 9 * i, n - i);
}

void det3_avx2(const double* m, double* out, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const double* base = m + 9 * i;
    __m256d e[9];
    for (int k = 0; k < 9; ++k) e[k] = gather_entry(base, k);
    _mm256_storeu_pd(out + i, det3_v(e));
  }
  if (i < n) scalar_ops().det3(m + 9 * i, out + i, n - i);
}

void sym3_eigvals_avx2(const double* s, double* ev, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const double* base = s + 9 * i;
    __m256d e[9];
    for (int k = 0; k < 9; ++k) e[k] = gather_entry(base, k);
    Poly3 c = charpoly3_v(e);
    Depressed d = depress(c);
    __m256d roots[3];
    trig_roots(d, roots);
    alignas(32) double t0[4], t1[4], t2[4];
    _mm256_store_pd(t0, roots[0]);
    _mm256_store_pd(t1, roots[1]);
    _mm256_store_pd(t2, roots[2]);
    for (int k = 0; k < 4; ++k) {
      ev[3 * (i + k) + 0] = t0[k];
      ev[3 * (i + k) + 1] = t1[k];
      ev[3 * (i + k) + 2] = t2[k];
    }
  }
  if (i < n) scalar_ops().sym3_eigvals(s + 9 * i, ev + 3 * i, n - i);
}

void cartan3_avx2(const double* m, double* a, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const double* base = m + 9 * i;
    __m256d e[9];
    for (int k = 0; k < 9; ++k) e[k] = gather_entry(base, k);
    // k = m m^t, stored with duplicates like the scalar path
    __m256d k9[9];
    for (int r0 = 0; r0 < 3; ++r0)
      for (int r1 = 0; r1 < 3; ++r1) {
        __m256d acc = mul(e[3 * r0 + 0], e[3 * r1 + 0]);
        acc = add(acc, mul(e[3 * r0 + 1], e[3 * r1 + 1]));
        acc = add(acc, mul(e[3 * r0 + 2], e[3 * r1 + 2]));
        k9[3 * r0 + r1] = acc;
      }
    Poly3 c = charpoly3_v(k9);
    __m256d lam_top = top_root(c);
    __m256d adj[9];
    adj3_v(k9, adj);
    Poly3 ca = charpoly3_v(adj);
    __m256d mu_top = top_root(ca);
    assemble_logs(lam_top, mu_top, 0.5, a + 3 * i, 4);
  }
  if (i < n) scalar_ops().cartan3(m + 9 * i, a + 3 * i, n - i);
}

void jordan3_avx2(const double* m, double* a, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const double* base = m + 9 * i;
    __m256d e[9];
    for (int k = 0; k < 9; ++k) e[k] = gather_entry(base, k);
    Poly3 c = charpoly3_v(e);
    __m256d lam_top = top_modulus(c);
    __m256d adj[9];
    adj3_v(e, adj);
    Poly3 ca = charpoly3_v(adj);
    __m256d mu_top = top_modulus(ca);
    assemble_logs(lam_top, mu_top, 1.0, a + 3 * i, 4);
  }
  if (i < n) scalar_ops().jordan3(m + 9 * i, a + 3 * i, n - i);
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops ops = {mul3_rhs_avx2, det3_avx2, sym3_eigvals_avx2,
                          cartan3_avx2, jordan3_avx2};
  return ops;
}

}  // namespace anosov::kernels

#endif  // x86-64
