#include "anosov/detail/small3.hpp"
#include "anosov/kernels.hpp"

namespace anosov::kernels {

namespace {

void mul3_rhs_scalar(const double* a, const double* rhs, double* out, size_t n) {
  for (size_t i = 0; i < n; ++i) detail::mul3(a + 9 * i, rhs, out + 9 * i);
}

void det3_scalar(const double* m, double* out, size_t n) {
  for (size_t i = 0; i < n; ++i) out[i] = detail::det3(m + 9 * i);
}

void sym3_eigvals_scalar(const double* s, double* ev, size_t n) {
  for (size_t i = 0; i < n; ++i) detail::sym3_eigvals(s + 9 * i, ev + 3 * i);
}

void cartan3_scalar(const double* m, double* a, size_t n) {
  for (size_t i = 0; i < n; ++i) detail::cartan3_logsv(m + 9 * i, a + 3 * i);
}

void jordan3_scalar(const double* m, double* a, size_t n) {
  for (size_t i = 0; i < n; ++i) detail::jordan3_logmoduli(m + 9 * i, a + 3 * i);
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {mul3_rhs_scalar, det3_scalar, sym3_eigvals_scalar,
                          cartan3_scalar, jordan3_scalar};
  return ops;
}

}  // namespace anosov::kernels
