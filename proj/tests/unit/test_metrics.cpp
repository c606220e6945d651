#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "biot/driver.hpp"
#include "biot/metrics.hpp"

using namespace biot;

namespace {

std::shared_ptr<const Mesh> mesh_of(int n) { return std::make_shared<const Mesh>(Mesh::unit_square(n)); }

}  // namespace

TEST_CASE("weighted flux norm of a constant field") {
  auto w = build_space(SpaceKind::RT0, mesh_of(4), FluxBoundary::full);
  // unconstrained interpolation reproduces constants exactly
  const DiscreteField z = interpolate([](Vec2) { return Vec2{1.0, 0.0}; }, w);
  NormParams np;
  CHECK(norm(z, NormKind::W, np) == doctest::Approx(1.0).epsilon(1e-12));
  np.kappa = 1e-4;
  CHECK(norm(z, NormKind::W, np) == doctest::Approx(100.0).epsilon(1e-12));
  np.tau = 0.25;
  CHECK(norm(z, NormKind::W, np) == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(norm(z, NormKind::Hdiv) == doctest::Approx(1.0).epsilon(1e-12));
  np.kappa = 0.0;
  CHECK_THROWS_AS(norm(z, NormKind::W, np), std::invalid_argument);
}

TEST_CASE("H1 and L2 norms of linear fields") {
  auto u = build_space(SpaceKind::P2v, mesh_of(3));
  const DiscreteField f = interpolate([](Vec2 x) { return Vec2{x.x, 0.0}; }, u);
  // int x^2 = 1/3, int |grad|^2 = 1
  CHECK(norm(f, NormKind::L2) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-12));
  CHECK(norm(f, NormKind::H1) == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-12));
  auto q = build_space(SpaceKind::DG0, mesh_of(3));
  const DiscreteField c = interpolate([](Vec2) { return 2.0; }, q);
  CHECK(norm(c, NormKind::L2) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("difference norms across spaces") {
  auto mesh = mesh_of(4);
  auto p2 = build_space(SpaceKind::P2v, mesh);
  auto p3 = build_space(SpaceKind::P3v, mesh);
  const VectorFunction g = [](Vec2 x) { return Vec2{x.x * x.y, x.y * x.y - x.x}; };
  const DiscreteField a = interpolate(g, p2), b = interpolate(g, p3);
  CHECK(difference_norm(a, b, NormKind::H1) < 1e-12);
  CHECK(difference_norm(a, a, NormKind::L2) == 0.0);
  const DiscreteField z = interpolate([](Vec2) { return Vec2{0.0, 0.0}; }, p2);
  CHECK(difference_norm(a, z, NormKind::H1) == doctest::Approx(norm(a, NormKind::H1)).epsilon(1e-12));
}

TEST_CASE("norms are homogeneous and satisfy the triangle inequality") {
  auto w = build_space(SpaceKind::RT0, mesh_of(4));
  const DiscreteField a = interpolate([](Vec2 x) { return Vec2{std::sin(3 * x.y), x.x * x.x}; }, w);
  const DiscreteField b = interpolate([](Vec2 x) { return Vec2{x.y, std::cos(x.x)}; }, w);
  std::vector<double> s(a.coefficients().begin(), a.coefficients().end());
  for (double& v : s) v *= -3.0;
  std::vector<double> sum(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) sum[i] = a.coefficients()[i] + b.coefficients()[i];
  const DiscreteField as(w, s), ab(w, sum);
  NormParams np;
  np.kappa = 1e-3;
  np.tau = 0.5;
  for (NormKind k : {NormKind::L2, NormKind::Hdiv, NormKind::W}) {
    CHECK(norm(as, k, np) == doctest::Approx(3.0 * norm(a, k, np)).epsilon(1e-12));
    CHECK(norm(ab, k, np) <= norm(a, k, np) + norm(b, k, np) + 1e-14);
  }
}

TEST_CASE("rates") {
  CHECK(rate(2.84e-3, 7.11e-4) == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(rate(0.5, 0.5) == 0.0);
  CHECK(rate(2.43, 0.28) == doctest::Approx(std::log2(2.43 / 0.28)));
  CHECK(rate(2.43, 0.28) == doctest::Approx(3.12).epsilon(1e-3));
  CHECK_THROWS_AS(rate(0.0, 1.0), std::invalid_argument);

  ErrorTable t;
  t.levels = {8, 16, 32};
  ErrorRow r;
  r.values = {1.0, 0.25, 0.0625};
  t.rows.push_back(r);
  r.values = {1.0};
  t.rows.push_back(r);
  r.values = {1.0, std::numeric_limits<double>::quiet_NaN(), 0.1};
  t.rows.push_back(r);
  t.compute_rates();
  REQUIRE(t.rows[0].rate);
  CHECK(*t.rows[0].rate == doctest::Approx(2.0));
  CHECK_FALSE(t.rows[1].rate);
  CHECK_FALSE(t.rows[2].rate);

  // non-dyadic refinement uses the actual h ratio
  t.levels = {8, 24};
  t.rows = {r};
  t.rows[0].values = {0.9, 0.1};
  t.compute_rates();
  CHECK(*t.rows[0].rate == doctest::Approx(2.0));
  CHECK(t.find(Quantity::displacement, Pairing::P2_RT0_DG0, 1.0, 0.0) != nullptr);
  CHECK(t.find(Quantity::pressure, Pairing::P2_RT0_DG0, 1.0, 0.0) == nullptr);
}

TEST_CASE("relative errors vanish for the reference itself") {
  ProblemParams pp;
  const ManufacturedProblem mp(pp);
  auto mesh = mesh_of(4);
  const DiscreteField u = interpolate([&](Vec2 x) { return mp.u(1.0, x); }, build_space(SpaceKind::P3v, mesh));
  const DiscreteField z = interpolate([&](Vec2 x) { return mp.z(1.0, x); }, build_space(SpaceKind::P3v, mesh));
  const DiscreteField p = interpolate([&](Vec2 x) { return mp.p(1.0, x); }, build_space(SpaceKind::P3s, mesh));
  const RelativeErrors e = relative_error(u, z, p, mp, 1.0);
  CHECK(e.displacement < 1e-10);
  CHECK(e.pressure < 1e-10);
  CHECK(e.flux_w < 1e-10);
  CHECK(e.flux_hdiv < 1e-10);
}

TEST_CASE("weighted flux error on the coarse mesh") {
  const CellResult c = run_cell(Pairing::P2_RT0_DG0, ProblemParams{}, 8);
  REQUIRE(c.ok);
  CHECK(c.errors.flux_w == doctest::Approx(6.88e-1).epsilon(0.15));
  // with kappa = tau = 1 the weighted norm is the H(div) norm
  CHECK(c.errors.flux_hdiv == doctest::Approx(c.errors.flux_w).epsilon(1e-12));
}

TEST_CASE("H(div) flux error on the coarse mesh") {
  const CellResult c = run_cell(Pairing::P2_RT0_DG0, ProblemParams{}, 8);
  REQUIRE(c.ok);
  CHECK(c.errors.flux_hdiv == doctest::Approx(1.30).epsilon(0.15));
}

TEST_CASE("names") {
  CHECK(quantity_name(Quantity::flux_hdiv) != quantity_name(Quantity::flux_w));
  CHECK(norm_name(NormKind::W) == "W");
}
