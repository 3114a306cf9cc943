#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "anosov/errors.hpp"

namespace anosov {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);

// Small dense square matrix, row-major. Sizes here are tiny (d <= ~8), so
// everything is a plain value type and operations allocate freely.
struct Mat {
  int n = 0;
  std::vector<double> a;

  Mat() = default;
  explicit Mat(int dim) : n(dim), a(static_cast<size_t>(dim) * dim, 0.0) {}
  Mat(int dim, std::vector<double> entries) : n(dim), a(std::move(entries)) {}

  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

  static Mat identity(int dim);
  static Mat diag(const Vec& d);
  static Mat from_rows(std::initializer_list<std::initializer_list<double>> rows);

  Mat transpose() const;
  Vec col(int j) const;
  void set_col(int j, const Vec& v);
  double frob() const;
  double max_abs() const;
  bool finite() const;
};

Mat operator*(const Mat& x, const Mat& y);
Mat operator+(const Mat& x, const Mat& y);
Mat operator-(const Mat& x, const Mat& y);
Mat operator*(double s, const Mat& x);
Vec operator*(const Mat& x, const Vec& v);

double det(const Mat& m);
Mat inverse(const Mat& m);          // LU with partial pivoting
Mat adjugate3(const Mat& m);        // exact inverse for det-1 3x3 inputs
double trace(const Mat& m);
bool is_symmetric(const Mat& m, double tol);

// Solve m x = b by LU with partial pivoting. Throws Singular.
Vec solve(const Mat& m, const Vec& b);

// ---- symmetric eigendecomposition -----------------------------------------

// Eigenvalues sorted non-increasing; vec columns are the matching orthonormal
// eigenvectors with first-nonzero-positive sign.
struct SymEig {
  Vec val;
  Mat vec;
};

SymEig sym_eig(const Mat& s);

// ---- general real spectrum --------------------------------------------------

// Real part of the spectrum of a general matrix. `values` / column i of
// `vectors` hold the eigenvalues that are real to within tol * |m|, sorted by
// decreasing modulus (ties: real part descending). `n_complex` counts the
// eigenvalues that were dropped as genuinely complex.
struct RealSpectrum {
  Vec values;
  Mat vectors;
  int n_complex = 0;
};

// Closed-form characteristic polynomial for d = 3 (and d <= 2), iterative
// Hessenberg-QR fallback for larger d. With require_all set, a complex
// eigenvalue raises NonRealSpectrum.
RealSpectrum eig_real(const Mat& m, double tol, bool require_all = false);

// Moduli of all eigenvalues (complex included), sorted non-increasing.
Vec eig_moduli(const Mat& m);

// ---- Cartan vectors ---------------------------------------------------------

// A point of the closed positive chamber: coordinates sorted non-increasing
// and summing to zero.
struct CartanVector {
  Vec c;

  int dim() const { return static_cast<int>(c.size()); }
  double norm() const { return norm2(c); }

  // Sorts non-increasing and recenters the sum to exactly zero. The input sum
  // must already vanish to within `sum_tol` times the coordinate scale.
  static CartanVector from_unsorted(Vec v, double sum_tol = 1e-9);
};

// Angular coordinate on unit directions of the d = 3 chamber plane, measured
// from (1,0,-1)/sqrt2 toward (1,-2,1)/sqrt6. The closed chamber maps onto
// [-pi/6, pi/6].
double chamber_angle(const Vec& direction);
Vec direction_from_angle(double theta);

// ---- SPD points -------------------------------------------------------------

// Point of the symmetric space: positive definite symmetric with det 1.
struct SpdPoint {
  Mat m;

  int dim() const { return m.n; }
  static SpdPoint from(Mat m, double tol = 1e-9);  // validates, throws NotSpd
  static SpdPoint basepoint(int dim);              // identity matrix
};

// Group action x -> g x g^t (preserves SpdPoint invariants for unimodular g).
SpdPoint act(const Mat& g, const SpdPoint& x);

Mat spd_log(const SpdPoint& p);                   // symmetric traceless
SpdPoint spd_exp(const Mat& y_sym_traceless);
Mat spd_sqrt(const SpdPoint& p);
Mat spd_inv_sqrt(const SpdPoint& p);

// ---- decompositions ---------------------------------------------------------

// g = k1 exp(a) k2 with k1, k2 special orthogonal and a the Cartan vector of
// the singular value logarithms.
struct SvdKAK {
  Mat k1;
  CartanVector a;
  Mat k2;
};

SvdKAK svd_cartan(const Mat& m);

// m = k a n: k orthogonal, a positive diagonal, n unit upper triangular.
struct KanFactors {
  Mat k;
  Mat a;
  Mat n;
};

KanFactors gram_schmidt_kan(const Mat& m);

// ---- misc -------------------------------------------------------------------

bool is_unimodular(const Mat& m, double tol = 1e-9);

// Random-style helpers used across the library (deterministic given the
// caller's RNG output fed through `gauss`).
Mat unimodularize(Mat m);  // scales so det = 1 exactly (throws Singular)

}  // namespace anosov
