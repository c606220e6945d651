#pragma once

// Data-parallel inner loops used by the sparse solver, the eigensolvers and
// the norm integrals. Every kernel has a portable scalar reference version
// and (on x86-64) an AVX2/FMA version; the active table is chosen once at
// runtime from the CPU features. Setting BIOT_SIMD=scalar in the environment
// pins the scalar path.

#include <cstddef>
#include <span>
#include <string_view>

namespace biot::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// True when the kernels for `isa` were compiled in and the CPU runs them.
bool isa_supported(Isa isa);

/// ISA used by the free functions below.
Isa active_isa();

/// Override the runtime choice (tests use this to compare variants).
/// Throws std::invalid_argument for an unsupported ISA.
void force_isa(Isa isa);

/// Read-only view of a CSR matrix.
struct CsrView {
  std::size_t rows = 0;
  const int* row_ptr = nullptr;
  const int* col = nullptr;
  const double* val = nullptr;
};

struct KernelTable {
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*weighted_dot)(const double* w, const double* x, const double* y, std::size_t n);
  double (*sum_squares)(const double* x, std::size_t n);
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  void (*csr_matvec)(const CsrView& a, const double* x, double* y);
};

/// Kernel table for a given ISA (must be supported).
const KernelTable& kernels(Isa isa);

double dot(std::span<const double> x, std::span<const double> y);
double weighted_dot(std::span<const double> w, std::span<const double> x, std::span<const double> y);
double sum_squares(std::span<const double> x);
void axpy(double a, std::span<const double> x, std::span<double> y);
/// y = A x
void csr_matvec(const CsrView& a, std::span<const double> x, std::span<double> y);

namespace scalar {
extern const KernelTable table;
}
namespace avx2 {
extern const KernelTable table;
}

}  // namespace biot::simd
