#pragma once

#include <cstddef>

namespace anosov::kernels {

// Batched kernels over arrays of row-major 3x3 matrices (9 doubles each,
// packed contiguously). These carry the data-parallel inner loops: word-ball
// expansion, bulk spectral projections, and transversality determinant scans.
//
// The scalar table is the reference; the AVX2 table mirrors it step for step
// and the test suite checks the two agree on random batches. Selection
// happens once at runtime from CPU features and can be overridden with
// ANOSOV_LIMITS_KERNELS=scalar|avx2|auto.

enum class Isa { Scalar, Avx2 };

struct Ops {
  // out[i] = a[i] * rhs (fixed right factor, used per generator per frontier)
  void (*mul3_rhs)(const double* a, const double* rhs, double* out, size_t n);
  // out[i] = det(m[i])
  void (*det3)(const double* m, double* out, size_t n);
  // ev[3i..3i+2] = eigenvalues of symmetric m[i], sorted non-increasing
  void (*sym3_eigvals)(const double* s, double* ev, size_t n);
  // a[3i..] = sorted logs of singular values of m[i] (det +-1), recentered
  void (*cartan3)(const double* m, double* a, size_t n);
  // a[3i..] = sorted logs of eigenvalue moduli of m[i] (det 1), recentered
  void (*jordan3)(const double* m, double* a, size_t n);
};

const Ops& scalar_ops();

#if defined(__x86_64__) || defined(_M_X64)
const Ops& avx2_ops();
#endif

const Ops& active();
Isa active_isa();
const char* isa_name(Isa isa);

}  // namespace anosov::kernels
