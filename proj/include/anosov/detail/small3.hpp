#pragma once

// Scalar closed-form kernels for 3x3 real matrices. These are the reference
// implementations behind anosov::kernels; the SIMD variants mirror each
// algorithm step for step so the two stay equivalence-testable.

#include <algorithm>
#include <cmath>

namespace anosov::detail {

inline void mul3(const double* x, const double* y, double* out) {
  for (int i = 0; i < 3; ++i) {
    const double a0 = x[3 * i + 0], a1 = x[3 * i + 1], a2 = x[3 * i + 2];
    out[3 * i + 0] = a0 * y[0] + a1 * y[3] + a2 * y[6];
    out[3 * i + 1] = a0 * y[1] + a1 * y[4] + a2 * y[7];
    out[3 * i + 2] = a0 * y[2] + a1 * y[5] + a2 * y[8];
  }
}

inline double det3(const double* m) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) -
         m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

inline void adj3(const double* m, double* out) {
  out[0] = m[4] * m[8] - m[5] * m[7];
  out[1] = m[2] * m[7] - m[1] * m[8];
  out[2] = m[1] * m[5] - m[2] * m[4];
  out[3] = m[5] * m[6] - m[3] * m[8];
  out[4] = m[0] * m[8] - m[2] * m[6];
  out[5] = m[2] * m[3] - m[0] * m[5];
  out[6] = m[3] * m[7] - m[4] * m[6];
  out[7] = m[1] * m[6] - m[0] * m[7];
  out[8] = m[0] * m[4] - m[1] * m[3];
}

// Characteristic polynomial  t^3 - c2 t^2 + c1 t - c0.
inline void charpoly3(const double* m, double* c2, double* c1, double* c0) {
  *c2 = m[0] + m[4] + m[8];
  *c1 = (m[0] * m[4] - m[1] * m[3]) + (m[0] * m[8] - m[2] * m[6]) +
        (m[4] * m[8] - m[5] * m[7]);
  *c0 = det3(m);
}

// Largest real root of t^3 - c2 t^2 + c1 t - c0, assuming either three real
// roots or one real root plus a conjugate pair. The top root of the trig
// branch is well conditioned even for widely spread spectra.
inline double cubic_top_root(double c2, double c1, double c0) {
  const double q = c2 / 3.0;
  const double p = c1 - c2 * q;  // depressed cubic: t^3 + p t + rr
  const double rr = -(2.0 * q * q * q - c1 * q + c0);
  const double disc = -4.0 * p * p * p - 27.0 * rr * rr;
  if (disc >= 0.0) {
    const double m = std::sqrt(std::max(0.0, -p / 3.0));
    if (m == 0.0) return q;  // triple root
    double arg = 1.5 * rr / (p * m);
    arg = std::clamp(arg, -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    return q + 2.0 * m * std::cos(phi);
  }
  // disc < 0: either a genuine conjugate pair or a double root pushed across
  // zero by roundoff. Cardano's u+v is the simple real root; for SPD-style
  // inputs the near-double value q - (u+v)/2 may be the larger one.
  const double shalf = std::sqrt(std::max(0.0, -disc / 108.0));
  const double u = std::cbrt(-rr / 2.0 + shalf);
  const double v = std::cbrt(-rr / 2.0 - shalf);
  return std::max(q + u + v, q - (u + v) / 2.0);
}

// All roots when the spectrum is real (trig branch); callers must know the
// discriminant is nonnegative up to roundoff. Sorted non-increasing.
inline void cubic_real_roots(double c2, double c1, double c0, double* out) {
  const double q = c2 / 3.0;
  const double p = c1 - c2 * q;
  const double rr = -(2.0 * q * q * q - c1 * q + c0);
  const double m = std::sqrt(std::max(0.0, -p / 3.0));
  if (m == 0.0) {
    out[0] = out[1] = out[2] = q;
    return;
  }
  double arg = 1.5 * rr / (p * m);
  arg = std::clamp(arg, -1.0, 1.0);
  const double phi = std::acos(arg) / 3.0;
  const double two_third_pi = 2.0943951023931953;
  out[0] = q + 2.0 * m * std::cos(phi);
  out[1] = q + 2.0 * m * std::cos(phi - 2.0 * two_third_pi);
  out[2] = q + 2.0 * m * std::cos(phi - two_third_pi);
  if (out[1] < out[2]) std::swap(out[1], out[2]);
  if (out[0] < out[1]) std::swap(out[0], out[1]);
  if (out[1] < out[2]) std::swap(out[1], out[2]);
}

// Eigenvalues of a symmetric 3x3, sorted non-increasing.
inline void sym3_eigvals(const double* s, double* ev) {
  double c2, c1, c0;
  charpoly3(s, &c2, &c1, &c0);
  cubic_real_roots(c2, c1, c0, ev);
}

// Sorted log-moduli of the eigenvalues of a 3x3 matrix with determinant one.
// Uses the top root of the characteristic cubic on both m and its adjugate
// (the inverse, since det = 1), so the extreme moduli stay accurate for
// widely spread spectra; the middle one follows from det = 1.
inline void jordan3_logmoduli(const double* m, double* out) {
  double c2, c1, c0;
  charpoly3(m, &c2, &c1, &c0);

  auto top_modulus = [](double c2_, double c1_, double c0_) {
    const double q = c2_ / 3.0;
    const double p = c1_ - c2_ * q;
    const double rr = -(2.0 * q * q * q - c1_ * q + c0_);
    const double disc = -4.0 * p * p * p - 27.0 * rr * rr;
    double real_root;
    if (disc >= 0.0) {
      const double mm = std::sqrt(std::max(0.0, -p / 3.0));
      if (mm == 0.0) return std::fabs(q);
      double arg = std::clamp(1.5 * rr / (p * mm), -1.0, 1.0);
      const double phi = std::acos(arg) / 3.0;
      const double hi = q + 2.0 * mm * std::cos(phi);
      const double lo = q + 2.0 * mm * std::cos(phi - 2.0 * 2.0943951023931953);
      return std::max(std::fabs(hi), std::fabs(lo));
    }
    const double shalf = std::sqrt(std::max(0.0, -disc / 108.0));
    const double u = std::cbrt(-rr / 2.0 + shalf);
    const double v = std::cbrt(-rr / 2.0 - shalf);
    real_root = q + u + v;
    // conjugate pair modulus^2 = |c0 / real_root|
    const double pair2 = std::fabs(real_root) > 0.0
                             ? std::fabs(c0_ / real_root)
                             : std::fabs(c0_);
    return std::max(std::fabs(real_root), std::sqrt(pair2));
  };

  const double lam_top = top_modulus(c2, c1, c0);
  double adj[9];
  adj3(m, adj);
  double a2, a1, a0;
  charpoly3(adj, &a2, &a1, &a0);
  const double mu_top = top_modulus(a2, a1, a0);  // = 1 / smallest modulus of m

  double l1 = std::log(std::max(lam_top, 1e-300));
  double l3 = -std::log(std::max(mu_top, 1e-300));
  double l2 = -l1 - l3;
  // Guard against tiny ordering violations from roundoff.
  if (l2 > l1) l2 = l1;
  if (l2 < l3) l2 = l3;
  out[0] = l1;
  out[1] = l2;
  out[2] = l3;
  const double mean = (out[0] + out[1] + out[2]) / 3.0;
  out[0] -= mean;
  out[1] -= mean;
  out[2] -= mean;
}

// Sorted logs of the singular values of a 3x3 matrix with determinant +-1,
// via the same two-sided trick applied to m m^t.
inline void cartan3_logsv(const double* m, double* out) {
  double k[9];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      k[3 * i + j] = m[3 * i + 0] * m[3 * j + 0] + m[3 * i + 1] * m[3 * j + 1] +
                     m[3 * i + 2] * m[3 * j + 2];
  double c2, c1, c0;
  charpoly3(k, &c2, &c1, &c0);
  const double lam_top = cubic_top_root(c2, c1, c0);
  double adj[9];
  adj3(k, adj);
  double a2, a1, a0;
  charpoly3(adj, &a2, &a1, &a0);
  const double mu_top = cubic_top_root(a2, a1, a0);

  double l1 = 0.5 * std::log(std::max(lam_top, 1e-300));
  double l3 = -0.5 * std::log(std::max(mu_top, 1e-300));
  double l2 = -l1 - l3;
  if (l2 > l1) l2 = l1;
  if (l2 < l3) l2 = l3;
  out[0] = l1;
  out[1] = l2;
  out[2] = l3;
  const double mean = (out[0] + out[1] + out[2]) / 3.0;
  out[0] -= mean;
  out[1] -= mean;
  out[2] -= mean;
}

}  // namespace anosov::detail
