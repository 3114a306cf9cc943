#include "anosov/mat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "anosov/detail/small3.hpp"

namespace anosov {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonRealSpectrum: return "NonRealSpectrum";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::NotSpd: return "NotSpd";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotUnit: return "NotUnit";
    case ErrorCode::NotProximal: return "NotProximal";
    case ErrorCode::NotRegular: return "NotRegular";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NotCollinear: return "NotCollinear";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::DegenerateHull: return "DegenerateHull";
    case ErrorCode::NotOnBoundary: return "NotOnBoundary";
    case ErrorCode::NotPreserving: return "NotPreserving";
    case ErrorCode::ToleranceCollision: return "ToleranceCollision";
    case ErrorCode::EmptyCone: return "EmptyCone";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::NotHyperbolicType: return "NotHyperbolicType";
    case ErrorCode::OutsideWindow: return "OutsideWindow";
    case ErrorCode::NonDiscreteSuspected: return "NonDiscreteSuspected";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotInChamber: return "NotInChamber";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

Mat Mat::identity(int dim) {
  Mat m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::diag(const Vec& d) {
  Mat m(static_cast<int>(d.size()));
  for (int i = 0; i < m.n; ++i) m(i, i) = d[i];
  return m;
}

Mat Mat::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Mat m(static_cast<int>(rows.size()));
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

Mat Mat::transpose() const {
  Mat t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vec Mat::col(int j) const {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = (*this)(i, j);
  return v;
}

void Mat::set_col(int j, const Vec& v) {
  for (int i = 0; i < n; ++i) (*this)(i, j) = v[i];
}

double Mat::frob() const {
  double s = 0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

double Mat::max_abs() const {
  double s = 0;
  for (double v : a) s = std::max(s, std::fabs(v));
  return s;
}

bool Mat::finite() const {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

Mat operator*(const Mat& x, const Mat& y) {
  if (x.n != y.n) fail(ErrorCode::DimMismatch, "matrix product");
  Mat out(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      const double v = x(i, k);
      if (v == 0.0) continue;
      for (int j = 0; j < x.n; ++j) out(i, j) += v * y(k, j);
    }
  return out;
}

Mat operator+(const Mat& x, const Mat& y) {
  Mat out = x;
  for (size_t i = 0; i < out.a.size(); ++i) out.a[i] += y.a[i];
  return out;
}

Mat operator-(const Mat& x, const Mat& y) {
  Mat out = x;
  for (size_t i = 0; i < out.a.size(); ++i) out.a[i] -= y.a[i];
  return out;
}

Mat operator*(double s, const Mat& x) {
  Mat out = x;
  for (double& v : out.a) v *= s;
  return out;
}

Vec operator*(const Mat& x, const Vec& v) {
  Vec out(x.n, 0.0);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) out[i] += x(i, j) * v[j];
  return out;
}

double trace(const Mat& m) {
  double s = 0;
  for (int i = 0; i < m.n; ++i) s += m(i, i);
  return s;
}

bool is_symmetric(const Mat& m, double tol) {
  double dev = 0;
  for (int i = 0; i < m.n; ++i)
    for (int j = i + 1; j < m.n; ++j)
      dev = std::max(dev, std::fabs(m(i, j) - m(j, i)));
  return dev <= tol;
}

namespace {

// LU with partial pivoting; returns false on (near-)singularity.
bool lu_factor(Mat& m, std::vector<int>& piv, double& det_sign) {
  const int n = m.n;
  piv.resize(n);
  std::iota(piv.begin(), piv.end(), 0);
  det_sign = 1.0;
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::fabs(m(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::fabs(m(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) return false;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(m.a[p * n + j], m.a[k * n + j]);
      std::swap(piv[p], piv[k]);
      det_sign = -det_sign;
    }
    for (int i = k + 1; i < n; ++i) {
      m(i, k) /= m(k, k);
      const double f = m(i, k);
      for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return true;
}

}  // namespace

double det(const Mat& m) {
  if (m.n == 1) return m(0, 0);
  if (m.n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  if (m.n == 3) return detail::det3(m.a.data());
  Mat lu = m;
  std::vector<int> piv;
  double sign;
  if (!lu_factor(lu, piv, sign)) return 0.0;
  double d = sign;
  for (int i = 0; i < m.n; ++i) d *= lu(i, i);
  return d;
}

Vec solve(const Mat& m, const Vec& b) {
  Mat lu = m;
  std::vector<int> piv;
  double sign;
  if (!lu_factor(lu, piv, sign)) fail(ErrorCode::Singular, "solve");
  const int n = m.n;
  Vec x(n);
  for (int i = 0; i < n; ++i) x[i] = b[piv[i]];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
    x[i] /= lu(i, i);
  }
  return x;
}

Mat inverse(const Mat& m) {
  const int n = m.n;
  Mat lu = m;
  std::vector<int> piv;
  double sign;
  if (!lu_factor(lu, piv, sign)) fail(ErrorCode::Singular, "inverse");
  Mat inv(n);
  for (int c = 0; c < n; ++c) {
    Vec x(n, 0.0);
    for (int i = 0; i < n; ++i) x[i] = (piv[i] == c) ? 1.0 : 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
      x[i] /= lu(i, i);
    }
    inv.set_col(c, x);
  }
  return inv;
}

Mat adjugate3(const Mat& m) {
  Mat out(3);
  detail::adj3(m.a.data(), out.a.data());
  return out;
}

// ---- symmetric eigendecomposition ------------------------------------------

namespace {

// Householder tridiagonalization with accumulation (classic tred2 layout).
void tridiagonalize(Mat& z, Vec& d, Vec& e) {
  const int n = z.n;
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (int k = 0; k <= l; ++k) scale += std::fabs(z(i, k));
      if (scale == 0.0) {
        e[i] = z(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          z(i, k) /= scale;
          h += z(i, k) * z(i, k);
        }
        double f = z(i, l);
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        z(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          z(j, i) = z(i, j) / h;
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
          for (int k = j + 1; k <= l; ++k) g += z(k, j) * z(i, k);
          e[j] = g / h;
          f += e[j] * z(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = z(i, j);
          e[j] = g = e[j] - hh * f;
          for (int k = 0; k <= j; ++k) z(j, k) -= f * e[k] + g * z(i, k);
        }
      }
    } else {
      e[i] = z(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    const int l = i - 1;
    if (d[i] != 0.0) {
      for (int j = 0; j <= l; ++j) {
        double g = 0.0;
        for (int k = 0; k <= l; ++k) g += z(i, k) * z(k, j);
        for (int k = 0; k <= l; ++k) z(k, j) -= g * z(k, i);
      }
    }
    d[i] = z(i, i);
    z(i, i) = 1.0;
    for (int j = 0; j <= l; ++j) z(j, i) = z(i, j) = 0.0;
  }
}

// Implicit-shift QL on the tridiagonal, accumulating rotations into z.
void ql_implicit(Vec& d, Vec& e, Mat& z) {
  const int n = static_cast<int>(d.size());
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= 1e-300 || std::fabs(e[m]) <= 2.3e-16 * dd) break;
      }
      if (m != l) {
        if (iter++ == 60)
          fail(ErrorCode::NumericalBreakdown, "symmetric QL did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = (i >= l);
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int k = 0; k < n; ++k) {
            f = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * f;
            z(k, i) = c * z(k, i) - s * f;
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

void fix_column_sign(Mat& v, int j) {
  const int n = v.n;
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::fabs(v(i, j)));
  for (int i = 0; i < n; ++i) {
    if (std::fabs(v(i, j)) > 1e-10 * scale) {
      if (v(i, j) < 0.0)
        for (int k = 0; k < n; ++k) v(k, j) = -v(k, j);
      return;
    }
  }
}

}  // namespace

SymEig sym_eig(const Mat& s) {
  if (s.n <= 0 || !s.finite()) fail(ErrorCode::Singular, "sym_eig input");
  Mat z = s;
  // Symmetrize to protect against caller drift.
  for (int i = 0; i < z.n; ++i)
    for (int j = i + 1; j < z.n; ++j)
      z(i, j) = z(j, i) = 0.5 * (z(i, j) + z(j, i));
  Vec d, e;
  if (z.n == 1) {
    SymEig out;
    out.val = {z(0, 0)};
    out.vec = Mat::identity(1);
    return out;
  }
  tridiagonalize(z, d, e);
  ql_implicit(d, e, z);

  std::vector<int> idx(d.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) { return d[i] > d[j]; });
  SymEig out;
  out.val.resize(d.size());
  out.vec = Mat(s.n);
  for (size_t k = 0; k < idx.size(); ++k) {
    out.val[k] = d[idx[k]];
    for (int i = 0; i < s.n; ++i) out.vec(i, static_cast<int>(k)) = z(i, idx[k]);
    fix_column_sign(out.vec, static_cast<int>(k));
  }
  return out;
}

// ---- general spectrum --------------------------------------------------------

namespace {

// Householder reduction to upper Hessenberg form (no accumulation).
void hessenberg(Mat& h) {
  const int n = h.n;
  for (int j = 0; j < n - 2; ++j) {
    double scale = 0.0;
    for (int i = j + 1; i < n; ++i) scale = std::max(scale, std::fabs(h(i, j)));
    if (scale == 0.0) continue;
    Vec v(n, 0.0);
    double sigma = 0.0;
    for (int i = j + 1; i < n; ++i) {
      v[i] = h(i, j) / scale;
      sigma += v[i] * v[i];
    }
    double alpha = std::sqrt(sigma);
    if (v[j + 1] > 0.0) alpha = -alpha;
    v[j + 1] -= alpha;
    const double beta = -alpha * v[j + 1];
    if (beta == 0.0) continue;
    // H = I - v v^T / beta applied on both sides.
    for (int c = 0; c < n; ++c) {
      double s = 0.0;
      for (int i = j + 1; i < n; ++i) s += v[i] * h(i, c);
      s /= beta;
      for (int i = j + 1; i < n; ++i) h(i, c) -= s * v[i];
    }
    for (int r = 0; r < n; ++r) {
      double s = 0.0;
      for (int i = j + 1; i < n; ++i) s += h(r, i) * v[i];
      s /= beta;
      for (int i = j + 1; i < n; ++i) h(r, i) -= s * v[i];
    }
    h(j + 1, j) = alpha * scale;
    for (int i = j + 2; i < n; ++i) h(i, j) = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix, eigenvalues only.
void hqr_eigenvalues(Mat h, Vec& wr, Vec& wi) {
  const int n = h.n;
  wr.assign(n, 0.0);
  wi.assign(n, 0.0);
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::fabs(h(i, j));
  int nn = n - 1;
  double t = 0.0;
  const double eps = 2.3e-16;
  while (nn >= 0) {
    int its = 0;
    int l;
    do {
      for (l = nn; l >= 1; --l) {
        double s = std::fabs(h(l - 1, l - 1)) + std::fabs(h(l, l));
        if (s == 0.0) s = anorm;
        if (std::fabs(h(l, l - 1)) <= eps * s) {
          h(l, l - 1) = 0.0;
          break;
        }
      }
      double x = h(nn, nn);
      if (l == nn) {
        wr[nn] = x + t;
        wi[nn] = 0.0;
        --nn;
      } else {
        double y = h(nn - 1, nn - 1);
        double w = h(nn, nn - 1) * h(nn - 1, nn);
        if (l == nn - 1) {
          double p = 0.5 * (y - x);
          double q = p * p + w;
          double z = std::sqrt(std::fabs(q));
          x += t;
          if (q >= 0.0) {
            z = p + std::copysign(z, p);
            wr[nn - 1] = wr[nn] = x + z;
            if (z != 0.0) wr[nn] = x - w / z;
            wi[nn - 1] = wi[nn] = 0.0;
          } else {
            wr[nn - 1] = wr[nn] = x + p;
            wi[nn - 1] = -z;
            wi[nn] = z;
          }
          nn -= 2;
        } else {
          if (its == 60)
            fail(ErrorCode::NumericalBreakdown, "QR iteration did not converge");
          double p = 0, q = 0, r = 0, z = 0;
          if (its == 10 || its == 20 || its == 30 || its == 40 || its == 50) {
            t += x;
            for (int i = 0; i <= nn; ++i) h(i, i) -= x;
            double s = std::fabs(h(nn, nn - 1)) + std::fabs(h(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m;
          for (m = nn - 2; m >= l; --m) {
            z = h(m, m);
            r = x - z;
            double s = y - z;
            p = (r * s - w) / h(m + 1, m) + h(m, m + 1);
            q = h(m + 1, m + 1) - z - r - s;
            r = h(m + 2, m + 1);
            s = std::fabs(p) + std::fabs(q) + std::fabs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::fabs(h(m, m - 1)) * (std::fabs(q) + std::fabs(r));
            const double v =
                std::fabs(p) *
                (std::fabs(h(m - 1, m - 1)) + std::fabs(z) + std::fabs(h(m + 1, m + 1)));
            if (u <= eps * v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            h(i, i - 2) = 0.0;
            if (i > m + 2) h(i, i - 3) = 0.0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = h(k, k - 1);
              q = h(k + 1, k - 1);
              r = (k != nn - 1) ? h(k + 2, k - 1) : 0.0;
              x = std::fabs(p) + std::fabs(q) + std::fabs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            double s = std::copysign(std::sqrt(p * p + q * q + r * r), p);
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) h(k, k - 1) = -h(k, k - 1);
            } else {
              h(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for (int j = k; j <= nn; ++j) {
              p = h(k, j) + q * h(k + 1, j);
              if (k != nn - 1) {
                p += r * h(k + 2, j);
                h(k + 2, j) -= p * z;
              }
              h(k + 1, j) -= p * y;
              h(k, j) -= p * x;
            }
            const int mmin = (nn < k + 3) ? nn : k + 3;
            for (int i = l; i <= mmin; ++i) {
              p = x * h(i, k) + y * h(i, k + 1);
              if (k != nn - 1) {
                p += z * h(i, k + 2);
                h(i, k + 2) -= p * r;
              }
              h(i, k + 1) -= p * q;
              h(i, k) -= p;
            }
          }
        }
      }
    } while (l < nn - 1 && nn >= 0);
  }
}

struct ComplexSpectrum {
  Vec re;
  Vec im;
};

ComplexSpectrum spectrum(const Mat& m) {
  ComplexSpectrum out;
  const int n = m.n;
  if (n == 1) {
    out.re = {m(0, 0)};
    out.im = {0.0};
    return out;
  }
  if (n == 2) {
    const double tr = trace(m);
    const double dt = det(m);
    const double disc = tr * tr - 4.0 * dt;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      out.re = {(tr + s) / 2.0, (tr - s) / 2.0};
      out.im = {0.0, 0.0};
    } else {
      const double s = std::sqrt(-disc);
      out.re = {tr / 2.0, tr / 2.0};
      out.im = {s / 2.0, -s / 2.0};
    }
    return out;
  }
  if (n == 3) {
    double c2, c1, c0;
    detail::charpoly3(m.a.data(), &c2, &c1, &c0);
    const double q = c2 / 3.0;
    const double p = c1 - c2 * q;
    const double rr = -(2.0 * q * q * q - c1 * q + c0);
    const double disc = -4.0 * p * p * p - 27.0 * rr * rr;
    if (disc >= 0.0) {
      double roots[3];
      detail::cubic_real_roots(c2, c1, c0, roots);
      out.re = {roots[0], roots[1], roots[2]};
      out.im = {0.0, 0.0, 0.0};
    } else {
      const double shalf = std::sqrt(-disc / 108.0);
      const double u = std::cbrt(-rr / 2.0 + shalf);
      const double v = std::cbrt(-rr / 2.0 - shalf);
      const double real_root = q + u + v;
      const double alpha = q - (u + v) / 2.0;
      const double beta = std::sqrt(3.0) / 2.0 * (u - v);
      out.re = {real_root, alpha, alpha};
      out.im = {0.0, beta, -beta};
    }
    return out;
  }
  Mat h = m;
  hessenberg(h);
  hqr_eigenvalues(h, out.re, out.im);
  return out;
}

}  // namespace

Vec eig_moduli(const Mat& m) {
  ComplexSpectrum sp = spectrum(m);
  Vec mod(sp.re.size());
  for (size_t i = 0; i < mod.size(); ++i) mod[i] = std::hypot(sp.re[i], sp.im[i]);
  std::sort(mod.begin(), mod.end(), std::greater<double>());
  return mod;
}

RealSpectrum eig_real(const Mat& m, double tol, bool require_all) {
  if (m.n <= 0 || !m.finite()) fail(ErrorCode::Singular, "eig_real input");
  if (tol <= 0) fail(ErrorCode::Singular, "eig_real requires tol > 0");
  const double scale = std::max(m.frob(), 1e-300);
  ComplexSpectrum sp = spectrum(m);

  struct Entry {
    double re, im;
  };
  std::vector<Entry> real_vals;
  int n_complex = 0;
  for (size_t i = 0; i < sp.re.size(); ++i) {
    if (std::fabs(sp.im[i]) <= tol * scale)
      real_vals.push_back({sp.re[i], 0.0});
    else
      ++n_complex;
  }
  if (require_all && n_complex > 0)
    fail(ErrorCode::NonRealSpectrum, "complex eigenvalues present");

  std::sort(real_vals.begin(), real_vals.end(), [](const Entry& a, const Entry& b) {
    const double ma = std::fabs(a.re), mb = std::fabs(b.re);
    if (ma != mb) return ma > mb;
    return a.re > b.re;
  });

  // Cluster nearly equal eigenvalues so multiple roots get a joint eigenspace.
  RealSpectrum out;
  out.n_complex = n_complex;
  out.vectors = Mat(m.n);
  const double cluster_gap = std::max(1e-9 * scale, 1e-12);
  size_t i = 0;
  int col = 0;
  while (i < real_vals.size()) {
    size_t j = i + 1;
    while (j < real_vals.size() &&
           std::fabs(real_vals[j].re - real_vals[j - 1].re) <= cluster_gap)
      ++j;
    const int mult = static_cast<int>(j - i);
    double lambda = 0.0;
    for (size_t k = i; k < j; ++k) lambda += real_vals[k].re;
    lambda /= mult;

    // Eigenspace as the bottom eigenvectors of B^T B, B = m - lambda I.
    Mat b = m;
    for (int d0 = 0; d0 < m.n; ++d0) b(d0, d0) -= lambda;
    SymEig se = sym_eig(b.transpose() * b);
    for (int k = 0; k < mult; ++k) {
      const int src = m.n - 1 - k;
      for (int r = 0; r < m.n; ++r) out.vectors(r, col) = se.vec(r, src);
      fix_column_sign(out.vectors, col);
      out.values.push_back(lambda);
      ++col;
    }
    i = j;
  }
  // Trim vector matrix columns to the real count by zeroing the rest.
  for (; col < m.n; ++col)
    for (int r = 0; r < m.n; ++r) out.vectors(r, col) = 0.0;
  return out;
}

// ---- Cartan vectors ----------------------------------------------------------

CartanVector CartanVector::from_unsorted(Vec v, double sum_tol) {
  double s = 0;
  double scale = 0;
  for (double x : v) {
    s += x;
    scale = std::max(scale, std::fabs(x));
  }
  if (std::fabs(s) > sum_tol * std::max(1.0, scale))
    fail(ErrorCode::NotUnimodular, "Cartan coordinates do not sum to zero");
  std::sort(v.begin(), v.end(), std::greater<double>());
  const double mean = s / static_cast<double>(v.size());
  for (double& x : v) x -= mean;
  return CartanVector{std::move(v)};
}

namespace {
const double kChamberU[3] = {0.7071067811865475, 0.0, -0.7071067811865475};
const double kChamberW[3] = {0.4082482904638630, -0.8164965809277260,
                             0.4082482904638630};
}  // namespace

double chamber_angle(const Vec& direction) {
  if (direction.size() != 3) fail(ErrorCode::DimMismatch, "chamber_angle needs d=3");
  double cu = 0, cw = 0;
  for (int i = 0; i < 3; ++i) {
    cu += direction[i] * kChamberU[i];
    cw += direction[i] * kChamberW[i];
  }
  return std::atan2(cw, cu);
}

Vec direction_from_angle(double theta) {
  Vec v(3);
  for (int i = 0; i < 3; ++i)
    v[i] = std::cos(theta) * kChamberU[i] + std::sin(theta) * kChamberW[i];
  return v;
}

// ---- SPD points ---------------------------------------------------------------

SpdPoint SpdPoint::from(Mat m, double tol) {
  const double scale = std::max(m.frob(), 1e-300);
  if (!m.finite()) fail(ErrorCode::NotSpd, "non-finite entries");
  if (!is_symmetric(m, 1e-12 * scale * 10 + tol * scale))
    fail(ErrorCode::NotSpd, "not symmetric");
  for (int i = 0; i < m.n; ++i)
    for (int j = i + 1; j < m.n; ++j)
      m(i, j) = m(j, i) = 0.5 * (m(i, j) + m(j, i));
  SymEig se = sym_eig(m);
  if (se.val.back() <= 0.0) fail(ErrorCode::NotSpd, "not positive definite");
  const double d = det(m);
  if (std::fabs(d - 1.0) > std::max(tol, 1e-9) * std::max(1.0, scale))
    fail(ErrorCode::NotSpd, "determinant differs from one");
  return SpdPoint{std::move(m)};
}

SpdPoint SpdPoint::basepoint(int dim) { return SpdPoint{Mat::identity(dim)}; }

SpdPoint act(const Mat& g, const SpdPoint& x) {
  Mat y = g * x.m * g.transpose();
  for (int i = 0; i < y.n; ++i)
    for (int j = i + 1; j < y.n; ++j)
      y(i, j) = y(j, i) = 0.5 * (y(i, j) + y(j, i));
  // Renormalize the determinant drift accumulated along long words.
  const double d = det(y);
  if (d <= 0.0) fail(ErrorCode::NotSpd, "action destroyed positivity");
  const double f = std::pow(d, -1.0 / y.n);
  for (double& v : y.a) v *= f;
  return SpdPoint{std::move(y)};
}

Mat spd_log(const SpdPoint& p) {
  SymEig se = sym_eig(p.m);
  if (se.val.back() <= 0.0) fail(ErrorCode::NotSpd, "spd_log of non-positive matrix");
  Mat out(p.m.n);
  for (int i = 0; i < out.n; ++i)
    for (int j = 0; j < out.n; ++j) {
      double s = 0;
      for (int k = 0; k < out.n; ++k)
        s += se.vec(i, k) * std::log(se.val[k]) * se.vec(j, k);
      out(i, j) = s;
    }
  // Exact symmetry and tracelessness up to representation.
  for (int i = 0; i < out.n; ++i)
    for (int j = i + 1; j < out.n; ++j)
      out(i, j) = out(j, i) = 0.5 * (out(i, j) + out(j, i));
  return out;
}

SpdPoint spd_exp(const Mat& y) {
  const double scale = std::max(y.frob(), 1e-300);
  if (!is_symmetric(y, 1e-9 * scale)) fail(ErrorCode::NotSpd, "spd_exp of non-symmetric input");
  if (std::fabs(trace(y)) > 1e-7 * std::max(1.0, scale))
    fail(ErrorCode::NotSpd, "spd_exp input has nonzero trace");
  SymEig se = sym_eig(y);
  Mat out(y.n);
  for (int i = 0; i < out.n; ++i)
    for (int j = 0; j < out.n; ++j) {
      double s = 0;
      for (int k = 0; k < out.n; ++k)
        s += se.vec(i, k) * std::exp(se.val[k]) * se.vec(j, k);
      out(i, j) = s;
    }
  for (int i = 0; i < out.n; ++i)
    for (int j = i + 1; j < out.n; ++j)
      out(i, j) = out(j, i) = 0.5 * (out(i, j) + out(j, i));
  const double d = det(out);
  const double f = std::pow(d, -1.0 / out.n);
  for (double& v : out.a) v *= f;
  return SpdPoint{std::move(out)};
}

namespace {
Mat spd_power(const SpdPoint& p, double expo) {
  SymEig se = sym_eig(p.m);
  if (se.val.back() <= 0.0) fail(ErrorCode::NotSpd, "matrix power of non-positive matrix");
  Mat out(p.m.n);
  for (int i = 0; i < out.n; ++i)
    for (int j = 0; j < out.n; ++j) {
      double s = 0;
      for (int k = 0; k < out.n; ++k)
        s += se.vec(i, k) * std::pow(se.val[k], expo) * se.vec(j, k);
      out(i, j) = s;
    }
  for (int i = 0; i < out.n; ++i)
    for (int j = i + 1; j < out.n; ++j)
      out(i, j) = out(j, i) = 0.5 * (out(i, j) + out(j, i));
  return out;
}
}  // namespace

Mat spd_sqrt(const SpdPoint& p) { return spd_power(p, 0.5); }
Mat spd_inv_sqrt(const SpdPoint& p) { return spd_power(p, -0.5); }

// ---- decompositions -----------------------------------------------------------

SvdKAK svd_cartan(const Mat& m) {
  if (!m.finite() || m.n <= 0) fail(ErrorCode::Singular, "svd_cartan input");
  const int n = m.n;
  SymEig se = sym_eig(m.transpose() * m);
  Vec sigma(n);
  for (int i = 0; i < n; ++i) sigma[i] = std::sqrt(std::max(se.val[i], 0.0));
  if (sigma[n - 1] <= 1e-150 * std::max(1.0, sigma[0]))
    fail(ErrorCode::NumericalBreakdown, "singular values underflow");

  Mat v = se.vec;
  Mat u(n);
  for (int j = 0; j < n; ++j) {
    Vec uj = m * v.col(j);
    for (double& x : uj) x /= sigma[j];
    // Modified Gram-Schmidt against earlier columns keeps u orthogonal when
    // singular values nearly coincide.
    for (int k = 0; k < j; ++k) {
      double proj = 0;
      for (int i = 0; i < n; ++i) proj += u(i, k) * uj[i];
      for (int i = 0; i < n; ++i) uj[i] -= proj * u(i, k);
    }
    const double nn = norm2(uj);
    if (nn <= 0) fail(ErrorCode::NumericalBreakdown, "svd basis collapse");
    for (double& x : uj) x /= nn;
    u.set_col(j, uj);
  }

  if (det(u) < 0.0) {
    // Flip the last singular pair jointly; the product is unchanged.
    for (int i = 0; i < n; ++i) {
      u(i, n - 1) = -u(i, n - 1);
      v(i, n - 1) = -v(i, n - 1);
    }
  }

  Vec a(n);
  for (int i = 0; i < n; ++i) a[i] = std::log(sigma[i]);
  SvdKAK out;
  out.k1 = u;
  out.a = CartanVector::from_unsorted(a, 1e-7);
  out.k2 = v.transpose();
  return out;
}

KanFactors gram_schmidt_kan(const Mat& m) {
  const int n = m.n;
  if (!m.finite() || n <= 0) fail(ErrorCode::Singular, "kan input");
  const double scale = std::max(m.frob(), 1e-300);

  // Householder QR: m = q r.
  Mat r = m;
  Mat q = Mat::identity(n);
  for (int j = 0; j < n; ++j) {
    double colscale = 0.0;
    for (int i = j; i < n; ++i) colscale = std::max(colscale, std::fabs(r(i, j)));
    if (colscale == 0.0) fail(ErrorCode::Singular, "rank-deficient input");
    Vec v(n, 0.0);
    double sigma = 0.0;
    for (int i = j; i < n; ++i) {
      v[i] = r(i, j) / colscale;
      sigma += v[i] * v[i];
    }
    double alpha = std::sqrt(sigma);
    if (v[j] > 0.0) alpha = -alpha;
    v[j] -= alpha;
    const double beta = -alpha * v[j];
    if (beta <= 0.0) continue;
    for (int c = j; c < n; ++c) {
      double s = 0.0;
      for (int i = j; i < n; ++i) s += v[i] * r(i, c);
      s /= beta;
      for (int i = j; i < n; ++i) r(i, c) -= s * v[i];
    }
    for (int c = 0; c < n; ++c) {
      double s = 0.0;
      for (int i = j; i < n; ++i) s += v[i] * q(c, i);
      s /= beta;
      for (int i = j; i < n; ++i) q(c, i) -= s * v[i];
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) r(i, j) = 0.0;

  // Force positive diagonal on r.
  for (int i = 0; i < n; ++i) {
    if (std::fabs(r(i, i)) <= 1e-13 * scale)
      fail(ErrorCode::Singular, "rank-deficient input");
    if (r(i, i) < 0.0) {
      for (int j = i; j < n; ++j) r(i, j) = -r(i, j);
      for (int k = 0; k < n; ++k) q(k, i) = -q(k, i);
    }
  }

  KanFactors out;
  out.k = q;
  out.a = Mat(n);
  out.n = Mat::identity(n);
  for (int i = 0; i < n; ++i) out.a(i, i) = r(i, i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.n(i, j) = r(i, j) / r(i, i);
  return out;
}

bool is_unimodular(const Mat& m, double tol) {
  const double scale = std::max(1.0, m.max_abs());
  return std::fabs(det(m) - 1.0) <= tol * scale;
}

Mat unimodularize(Mat m) {
  const double d = det(m);
  if (d == 0.0 || !std::isfinite(d)) fail(ErrorCode::Singular, "unimodularize");
  if (m.n % 2 == 0 && d < 0.0)
    fail(ErrorCode::NotUnimodular, "negative determinant in even dimension");
  const double f = (d > 0.0) ? std::pow(d, -1.0 / m.n) : -std::pow(-d, -1.0 / m.n);
  for (double& v : m.a) v *= f;
  return m;
}

}  // namespace anosov
