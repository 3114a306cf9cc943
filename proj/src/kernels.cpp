#include "anosov/kernels.hpp"

#include <cstdlib>
#include <string>

namespace anosov::kernels {

namespace {

Isa choose_isa() {
  const char* env = std::getenv("ANOSOV_LIMITS_KERNELS");
  const std::string pref = env ? env : "auto";
#if defined(__x86_64__) || defined(_M_X64)
  if (pref == "scalar") return Isa::Scalar;
  if (pref == "avx2") return Isa::Avx2;
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return Isa::Avx2;
#else
  (void)pref;
#endif
  return Isa::Scalar;
}

}  // namespace

Isa active_isa() {
  static const Isa isa = choose_isa();
  return isa;
}

const Ops& active() {
#if defined(__x86_64__) || defined(_M_X64)
  if (active_isa() == Isa::Avx2) return avx2_ops();
#endif
  return scalar_ops();
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

}  // namespace anosov::kernels
