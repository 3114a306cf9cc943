#pragma once

// Shared test utilities: deterministic random samplers and the independent
// numerical oracles the unit suites compare against.

#include <cmath>
#include <random>
#include <vector>

#include "anosov/mat.hpp"

namespace testutil {

using anosov::Mat;
using anosov::Vec;

inline std::mt19937_64 rng(uint64_t seed) { return std::mt19937_64(seed); }

inline double gauss(std::mt19937_64& g) {
  static thread_local std::normal_distribution<double> n(0.0, 1.0);
  return n(g);
}

inline Mat random_matrix(std::mt19937_64& g, int n) {
  Mat m(n);
  for (double& v : m.a) v = gauss(g);
  return m;
}

// Random special orthogonal matrix as a product of Givens rotations;
// independent of the library's QR path.
inline Mat random_orthogonal(std::mt19937_64& g, int n) {
  Mat q = Mat::identity(n);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  for (int rep = 0; rep < 3; ++rep)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double t = ang(g);
        const double c = std::cos(t), s = std::sin(t);
        for (int k = 0; k < n; ++k) {
          const double a = q(i, k), b = q(j, k);
          q(i, k) = c * a - s * b;
          q(j, k) = s * a + c * b;
        }
      }
  return q;
}

inline Mat random_unimodular(std::mt19937_64& g, int n, double max_cond = 1e4) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Mat m = random_matrix(g, n);
    const double d = anosov::det(m);
    if (std::fabs(d) < 1e-3) continue;
    m = anosov::unimodularize(m);
    // crude condition estimate via norms of m and its inverse
    const double c = m.frob() * anosov::inverse(m).frob();
    if (c < max_cond) return m;
  }
  return Mat::identity(n);
}

inline anosov::SpdPoint random_spd(std::mt19937_64& g, int n, double log_radius) {
  Mat y(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) y(i, j) = y(j, i) = gauss(g);
  double tr = anosov::trace(y);
  for (int i = 0; i < n; ++i) y(i, i) -= tr / n;
  const double f = log_radius / std::max(y.frob(), 1e-12);
  y = f * y;
  return anosov::spd_exp(y);
}

// One-sided Jacobi (Hestenes) singular values: the brute-force oracle used to
// cross-check the production decomposition.
inline Vec jacobi_singular_values(Mat m) {
  const int n = m.n;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double aa = 0, bb = 0, ab = 0;
        for (int k = 0; k < n; ++k) {
          aa += m(k, i) * m(k, i);
          bb += m(k, j) * m(k, j);
          ab += m(k, i) * m(k, j);
        }
        const double denom = std::sqrt(aa * bb);
        if (denom == 0) continue;
        worst = std::max(worst, std::fabs(ab) / denom);
        if (std::fabs(ab) <= 1e-30 * denom) continue;
        const double zeta = (bb - aa) / (2.0 * ab);
        const double t = std::copysign(1.0, zeta) /
                         (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int k = 0; k < n; ++k) {
          const double x = m(k, i), y = m(k, j);
          m(k, i) = c * x - s * y;
          m(k, j) = s * x + c * y;
        }
      }
    if (worst < 1e-15) break;
  }
  Vec sv(n);
  for (int j = 0; j < n; ++j) {
    double s = 0;
    for (int k = 0; k < n; ++k) s += m(k, j) * m(k, j);
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

// Pade scaling-and-squaring matrix exponential; independent of the
// eigendecomposition stack.
inline Mat expm(const Mat& a) {
  const int n = a.n;
  double nrm = 0;
  for (int i = 0; i < n; ++i) {
    double row = 0;
    for (int j = 0; j < n; ++j) row += std::fabs(a(i, j));
    nrm = std::max(nrm, row);
  }
  int squarings = 0;
  Mat x = a;
  while (nrm > 0.5) {
    nrm /= 2;
    ++squarings;
    x = 0.5 * x;
  }
  // Pade(6,6)
  const double c[7] = {1.0,         0.5,           5.0 / 44.0,    1.0 / 66.0,
                       1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0};
  Mat x2 = x * x;
  Mat even = c[0] * Mat::identity(n) + c[2] * x2;
  Mat odd = c[1] * Mat::identity(n) + c[3] * x2;
  Mat x4 = x2 * x2;
  even = even + c[4] * x4;
  odd = odd + c[5] * x4;
  Mat x6 = x4 * x2;
  even = even + c[6] * x6;
  odd = x * odd;
  Mat num = even + odd;
  Mat den = even - odd;
  Mat r = anosov::inverse(den) * num;
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

}  // namespace testutil
