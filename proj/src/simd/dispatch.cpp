#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "biot/simd/kernels.hpp"

namespace biot::simd {

#if !defined(BIOT_BUILD_AVX2)
// Placeholder so the symbol exists; never selected because isa_supported() is false.
namespace avx2 {
const KernelTable table = scalar::table;
}
#endif

namespace {

bool cpu_has_avx2() {
#if defined(BIOT_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* env = std::getenv("BIOT_SIMD")) {
    if (std::string(env) == "scalar") return Isa::scalar;
  }
  return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) {
  static const bool avx2_ok = cpu_has_avx2();
  return isa == Isa::scalar || avx2_ok;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (!isa_supported(isa))
    throw std::invalid_argument("SIMD variant not supported on this CPU: " + std::string(isa_name(isa)));
  current().store(isa, std::memory_order_relaxed);
}

const KernelTable& kernels(Isa isa) {
  if (isa == Isa::scalar) return scalar::table;
  if (!isa_supported(isa))
    throw std::invalid_argument("SIMD variant not supported on this CPU: " + std::string(isa_name(isa)));
  return avx2::table;
}

double dot(std::span<const double> x, std::span<const double> y) {
  return kernels(active_isa()).dot(x.data(), y.data(), x.size());
}

double weighted_dot(std::span<const double> w, std::span<const double> x, std::span<const double> y) {
  return kernels(active_isa()).weighted_dot(w.data(), x.data(), y.data(), w.size());
}

double sum_squares(std::span<const double> x) {
  return kernels(active_isa()).sum_squares(x.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  kernels(active_isa()).axpy(a, x.data(), y.data(), x.size());
}

void csr_matvec(const CsrView& a, std::span<const double> x, std::span<double> y) {
  kernels(active_isa()).csr_matvec(a, x.data(), y.data());
}

}  // namespace biot::simd
