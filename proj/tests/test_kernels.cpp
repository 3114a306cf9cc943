#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "anosov/detail/small3.hpp"
#include "anosov/kernels.hpp"
#include "helpers.hpp"

using namespace anosov;

namespace {

// Random batch of 3x3 matrices, a mix of well-conditioned unimodular ones and
// wide-spectrum diagonal-like cases.
std::vector<double> random_batch(size_t n, uint64_t seed) {
  auto g = testutil::rng(seed);
  std::vector<double> out(9 * n);
  for (size_t i = 0; i < n; ++i) {
    Mat m = (i % 3 == 0)
                ? testutil::random_orthogonal(g, 3) *
                      Mat::diag({std::exp(3.0 * testutil::gauss(g)), 1.0, 1.0}) *
                      testutil::random_orthogonal(g, 3)
                : testutil::random_unimodular(g, 3);
    m = unimodularize(m);
    for (int k = 0; k < 9; ++k) out[9 * i + k] = m.a[k];
  }
  return out;
}

std::vector<double> random_sym_batch(size_t n, uint64_t seed) {
  auto g = testutil::rng(seed);
  std::vector<double> out(9 * n);
  for (size_t i = 0; i < n; ++i) {
    Mat s(3);
    for (int r = 0; r < 3; ++r)
      for (int c = r; c < 3; ++c) s(r, c) = s(c, r) = testutil::gauss(g);
    for (int k = 0; k < 9; ++k) out[9 * i + k] = s.a[k];
  }
  return out;
}

void check_close(const std::vector<double>& a, const std::vector<double>& b,
                 double tol) {
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({1.0, std::fabs(a[i]), std::fabs(b[i])});
    CHECK(std::fabs(a[i] - b[i]) <= tol * scale);
  }
}

bool have_avx2() { return kernels::active_isa() == kernels::Isa::Avx2; }

}  // namespace

TEST_CASE("kernel dispatch reports a valid ISA") {
  const kernels::Ops& ops = kernels::active();
  CHECK(ops.mul3_rhs != nullptr);
  CHECK(ops.det3 != nullptr);
  CHECK(ops.sym3_eigvals != nullptr);
  CHECK(ops.cartan3 != nullptr);
  CHECK(ops.jordan3 != nullptr);
  INFO("active isa: ", kernels::isa_name(kernels::active_isa()));
  CHECK((kernels::active_isa() == kernels::Isa::Scalar ||
         kernels::active_isa() == kernels::Isa::Avx2));
}

TEST_CASE("scalar mul3 batch matches Mat product") {
  auto batch = random_batch(37, 101);
  auto g = testutil::rng(5);
  Mat rhs = testutil::random_unimodular(g, 3);
  std::vector<double> out(batch.size());
  kernels::scalar_ops().mul3_rhs(batch.data(), rhs.a.data(), out.data(), 37);
  for (size_t i = 0; i < 37; ++i) {
    Mat a(3, std::vector<double>(batch.begin() + 9 * i, batch.begin() + 9 * i + 9));
    Mat prod = a * rhs;
    for (int k = 0; k < 9; ++k)
      CHECK(std::fabs(prod.a[k] - out[9 * i + k]) < 1e-13 * std::max(1.0, prod.max_abs()));
  }
}

TEST_CASE("scalar spectral kernels agree with the dense routines") {
  auto batch = random_batch(64, 202);
  std::vector<double> cart(3 * 64), jord(3 * 64), dets(64);
  kernels::scalar_ops().cartan3(batch.data(), cart.data(), 64);
  kernels::scalar_ops().jordan3(batch.data(), jord.data(), 64);
  kernels::scalar_ops().det3(batch.data(), dets.data(), 64);
  for (size_t i = 0; i < 64; ++i) {
    Mat m(3, std::vector<double>(batch.begin() + 9 * i, batch.begin() + 9 * i + 9));
    CHECK(std::fabs(dets[i] - det(m)) < 1e-12 * std::max(1.0, m.max_abs()));

    Vec sv = testutil::jacobi_singular_values(m);
    for (int k = 0; k < 3; ++k)
      CHECK(std::fabs(cart[3 * i + k] - std::log(sv[k])) < 5e-8);

    Vec mod = eig_moduli(m);
    for (int k = 0; k < 3; ++k)
      CHECK(std::fabs(jord[3 * i + k] - std::log(mod[k])) < 1e-8);
  }
}

TEST_CASE("scalar sym3 eigenvalues match sym_eig") {
  auto batch = random_sym_batch(64, 303);
  std::vector<double> ev(3 * 64);
  kernels::scalar_ops().sym3_eigvals(batch.data(), ev.data(), 64);
  for (size_t i = 0; i < 64; ++i) {
    Mat s(3, std::vector<double>(batch.begin() + 9 * i, batch.begin() + 9 * i + 9));
    SymEig se = sym_eig(s);
    for (int k = 0; k < 3; ++k)
      CHECK(std::fabs(ev[3 * i + k] - se.val[k]) < 1e-10 * std::max(1.0, s.frob()));
  }
}

TEST_CASE("AVX2 kernels are bit-equivalent to the scalar reference") {
  if (!have_avx2()) {
    MESSAGE("AVX2 not active on this host; dispatch falls back to scalar");
    return;
  }
#if defined(__x86_64__) || defined(_M_X64)
  const size_t n = 257;  // deliberately not a multiple of the lane width
  auto batch = random_batch(n, 404);
  auto sym = random_sym_batch(n, 505);
  auto g = testutil::rng(7);
  Mat rhs = testutil::random_unimodular(g, 3);

  const kernels::Ops& s = kernels::scalar_ops();
  const kernels::Ops& v = kernels::avx2_ops();

  std::vector<double> mul_s(9 * n), mul_v(9 * n);
  s.mul3_rhs(batch.data(), rhs.a.data(), mul_s.data(), n);
  v.mul3_rhs(batch.data(), rhs.a.data(), mul_v.data(), n);
  check_close(mul_s, mul_v, 0.0);

  std::vector<double> det_s(n), det_v(n);
  s.det3(batch.data(), det_s.data(), n);
  v.det3(batch.data(), det_v.data(), n);
  check_close(det_s, det_v, 0.0);

  std::vector<double> ev_s(3 * n), ev_v(3 * n);
  s.sym3_eigvals(sym.data(), ev_s.data(), n);
  v.sym3_eigvals(sym.data(), ev_v.data(), n);
  check_close(ev_s, ev_v, 0.0);

  std::vector<double> ca_s(3 * n), ca_v(3 * n);
  s.cartan3(batch.data(), ca_s.data(), n);
  v.cartan3(batch.data(), ca_v.data(), n);
  check_close(ca_s, ca_v, 0.0);

  std::vector<double> jo_s(3 * n), jo_v(3 * n);
  s.jordan3(batch.data(), jo_s.data(), n);
  v.jordan3(batch.data(), jo_v.data(), n);
  check_close(jo_s, jo_v, 0.0);
#endif
}

TEST_CASE("kernels handle wide spectra without losing the small exponent") {
  // diag(e^9, 1, e^-9) conjugated: condition ~ 6e7
  auto g = testutil::rng(606);
  std::vector<double> batch;
  const size_t n = 16;
  for (size_t i = 0; i < n; ++i) {
    Mat q = testutil::random_orthogonal(g, 3);
    Mat m = q * Mat::diag({std::exp(9.0), 1.0, std::exp(-9.0)}) *
            testutil::random_orthogonal(g, 3);
    for (int k = 0; k < 9; ++k) batch.push_back(m.a[k]);
  }
  std::vector<double> cart(3 * n);
  kernels::active().cartan3(batch.data(), cart.data(), n);
  for (size_t i = 0; i < n; ++i) {
    CHECK(cart[3 * i + 0] == doctest::Approx(9.0).epsilon(1e-9));
    CHECK(std::fabs(cart[3 * i + 1]) < 1e-8);
    CHECK(cart[3 * i + 2] == doctest::Approx(-9.0).epsilon(1e-9));
  }
}
