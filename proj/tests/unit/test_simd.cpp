#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "biot/assemble.hpp"
#include "biot/simd/kernels.hpp"

using namespace biot;
using namespace biot::simd;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

// plain loops, independent of both kernel tables
double ref_dot(const std::vector<double>& x, const std::vector<double>& y) {
  long double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<long double>(x[i]) * y[i];
  return static_cast<double>(s);
}

}  // namespace

TEST_CASE("scalar kernels match long-double reference loops") {
  std::mt19937_64 rng(7);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1000u}) {
    const auto x = random_vector(n, rng), y = random_vector(n, rng), w = random_vector(n, rng);
    const KernelTable& k = kernels(Isa::scalar);
    CHECK(k.dot(x.data(), y.data(), n) == doctest::Approx(ref_dot(x, y)).epsilon(1e-13));
    CHECK(k.sum_squares(x.data(), n) == doctest::Approx(ref_dot(x, x)).epsilon(1e-13));
    std::vector<double> wx(n);
    for (std::size_t i = 0; i < n; ++i) wx[i] = w[i] * x[i];
    CHECK(k.weighted_dot(w.data(), x.data(), y.data(), n) == doctest::Approx(ref_dot(wx, y)).epsilon(1e-12));
    std::vector<double> z = y;
    k.axpy(0.5, x.data(), z.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(z[i] == y[i] + 0.5 * x[i]);
  }
}

TEST_CASE("AVX2 kernels are equivalent to the scalar kernels") {
  if (!isa_supported(Isa::avx2)) {
    MESSAGE("AVX2 not available on this CPU; equivalence test skipped");
    return;
  }
  const KernelTable& s = kernels(Isa::scalar);
  const KernelTable& v = kernels(Isa::avx2);
  std::mt19937_64 rng(11);
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 7u, 8u, 9u, 15u, 16u, 33u, 1001u, 65536u}) {
    const auto x = random_vector(n, rng), y = random_vector(n, rng), w = random_vector(n, rng);
    const double scale = std::max(1.0, ref_dot(x, x));
    CHECK(std::abs(s.dot(x.data(), y.data(), n) - v.dot(x.data(), y.data(), n)) <= 1e-13 * scale);
    CHECK(std::abs(s.sum_squares(x.data(), n) - v.sum_squares(x.data(), n)) <= 1e-13 * scale);
    CHECK(std::abs(s.weighted_dot(w.data(), x.data(), y.data(), n) - v.weighted_dot(w.data(), x.data(), y.data(), n)) <=
          1e-13 * scale);
    std::vector<double> a = y, b = y;
    s.axpy(-1.25, x.data(), a.data(), n);
    v.axpy(-1.25, x.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-15);
  }
}

TEST_CASE("AVX2 and scalar CSR products agree on an assembled operator") {
  auto mesh = std::make_shared<const Mesh>(Mesh::unit_square(6));
  BiotParams p;
  p.kappa = 1e-8;
  const BiotSystem sys = assemble_biot_step(Pairing::P2_RT0_DG0, mesh, p);
  std::mt19937_64 rng(3);
  const auto x = random_vector(sys.K.rows(), rng);
  std::vector<double> ys(x.size()), yv(x.size());
  kernels(Isa::scalar).csr_matvec(sys.K.view(), x.data(), ys.data());
  // reference product straight from the CSR arrays
  const auto rp = sys.K.row_ptr();
  const auto ci = sys.K.col_idx();
  const auto val = sys.K.values();
  for (std::size_t r = 0; r < x.size(); ++r) {
    long double acc = 0;
    for (int k = rp[r]; k < rp[r + 1]; ++k) acc += static_cast<long double>(val[k]) * x[ci[k]];
    CHECK(ys[r] == doctest::Approx(static_cast<double>(acc)).epsilon(1e-12).scale(1e8));
  }
  if (isa_supported(Isa::avx2)) {
    kernels(Isa::avx2).csr_matvec(sys.K.view(), x.data(), yv.data());
    for (std::size_t r = 0; r < x.size(); ++r) CHECK(yv[r] == doctest::Approx(ys[r]).epsilon(1e-12).scale(1e8));
  }
}

TEST_CASE("dispatch can be pinned to any supported variant") {
  const Isa before = active_isa();
  force_isa(Isa::scalar);
  CHECK(active_isa() == Isa::scalar);
  CHECK(isa_name(Isa::scalar) == "scalar");
  if (isa_supported(Isa::avx2)) {
    force_isa(Isa::avx2);
    CHECK(active_isa() == Isa::avx2);
  } else {
    CHECK_THROWS_AS(force_isa(Isa::avx2), std::invalid_argument);
  }
  force_isa(before);
}

TEST_CASE("free functions use the active variant") {
  std::vector<double> x{1, 2, 3}, y{4, 5, 6};
  CHECK(dot(x, y) == 32.0);
  CHECK(sum_squares(x) == 14.0);
  axpy(2.0, x, y);
  CHECK(y == std::vector<double>{6, 9, 12});
}
