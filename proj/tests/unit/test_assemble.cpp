#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "biot/assemble.hpp"
#include "biot/linsolve.hpp"
#include "biot/problem.hpp"

using namespace biot;

namespace {

std::shared_ptr<const Mesh> mesh_of(int n) { return std::make_shared<const Mesh>(Mesh::unit_square(n)); }

double quad(const CsrMatrix& a, std::span<const double> v) {
  const auto av = a.multiply(v);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * av[i];
  return s;
}

Eigen::MatrixXd dense(const CsrMatrix& a) {
  const auto d = to_dense(a);
  return Eigen::Map<const Eigen::Matrix<double, -1, -1, Eigen::RowMajor>>(d.data(), static_cast<long>(a.rows()),
                                                                         static_cast<long>(a.cols()));
}

Eigen::MatrixXd free_block(const CsrMatrix& a, const FunctionSpace& s) {
  std::vector<int> keep;
  for (std::size_t i = 0; i < s.dof_count(); ++i)
    if (!s.is_constrained(static_cast<int>(i))) keep.push_back(static_cast<int>(i));
  const Eigen::MatrixXd full = dense(a);
  Eigen::MatrixXd out(keep.size(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j) out(i, j) = full(keep[i], keep[j]);
  return out;
}

}  // namespace

TEST_CASE("storage form vanishes without storage") {
  auto q = build_space(SpaceKind::DG0, mesh_of(4));
  FormParams fp;
  fp.c0 = 0.0;
  const CsrMatrix d = assemble_form(FormKind::d, *q, *q, fp);
  CHECK(d.max_abs() == 0.0);
  fp.c0 = 2.0;
  const CsrMatrix d2 = assemble_form(FormKind::d, *q, *q, fp);
  const auto& m = q->mesh();
  for (std::size_t c = 0; c < m.num_cells(); ++c)
    CHECK(d2.at(c, c) == doctest::Approx(2.0 * std::abs(m.signed_area(static_cast<int>(c)))).epsilon(1e-14));
}

TEST_CASE("RT0 divergence columns sum to the boundary flux") {
  auto mesh = mesh_of(4);
  auto w = build_space(SpaceKind::RT0, mesh);
  auto q = build_space(SpaceKind::DG0, mesh);
  const CsrMatrix b = assemble_form(FormKind::b_wq, *w, *q);
  REQUIRE(b.rows() == q->dof_count());
  REQUIRE(b.cols() == w->dof_count());
  const std::vector<double> ones(q->dof_count(), 1.0);
  const auto col = b.transpose().multiply(ones);
  for (std::size_t e = 0; e < mesh->num_edges(); ++e) {
    if (mesh->is_boundary_edge(static_cast<int>(e)))
      CHECK(std::abs(col[e]) == doctest::Approx(1.0).epsilon(1e-12));
    else
      CHECK(std::abs(col[e]) < 1e-12);
  }
}

TEST_CASE("elastic form annihilates rigid translations") {
  auto mesh = mesh_of(4);
  const FunctionSpace u(SpaceKind::P2v, mesh);
  const CsrMatrix a = assemble_form(FormKind::a, u, u);
  const DiscreteField t = interpolate([](Vec2) { return Vec2{0.3, -1.7}; }, std::make_shared<const FunctionSpace>(u));
  CHECK(std::abs(quad(a, t.coefficients())) < 1e-12);
  const DiscreteField r = interpolate([](Vec2 x) { return Vec2{-x.y, x.x}; }, std::make_shared<const FunctionSpace>(u));
  CHECK(std::abs(quad(a, r.coefficients())) < 1e-12);
}

TEST_CASE("elastic energy of a quadratic field") {
  // eps = diag(2x, 0), so the energy density is 2*4x^2 + 4x^2 and its integral is 4.
  auto mesh = mesh_of(3);
  auto u = build_space(SpaceKind::P2v, mesh);
  const CsrMatrix a = assemble_form(FormKind::a, *u, *u);
  const DiscreteField f = interpolate([](Vec2 x) { return Vec2{x.x * x.x, 0.0}; }, u);
  CHECK(quad(a, f.coefficients()) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("displacement divergence against pressure") {
  auto mesh = mesh_of(4);
  auto u = build_space(SpaceKind::P2v, mesh);
  auto q = build_space(SpaceKind::DG0, mesh);
  const CsrMatrix b = assemble_form(FormKind::b_uq, *u, *q);
  const DiscreteField f = interpolate([](Vec2 x) { return Vec2{x.x * x.y, 0.0}; }, u);
  const auto bu = b.multiply(f.coefficients());
  // div u = y; the cell integral of y is area * centroid_y
  for (std::size_t c = 0; c < mesh->num_cells(); ++c) {
    const double cy = mesh->centroid(static_cast<int>(c)).y;
    CHECK(std::abs(std::abs(bu[c]) - std::abs(mesh->signed_area(static_cast<int>(c))) * cy) < 1e-14);
  }
}

TEST_CASE("system dimensions at h = 1/8") {
  BiotParams bp;
  const BiotSystem s = assemble_biot_step(Pairing::P2_RT0_DG0, mesh_of(8), bp);
  CHECK(s.dimension == 578 + 208 + 128 + 1);
  CHECK(s.dimension == 915);
  CHECK(s.free_unknowns() == 755);
  CHECK(s.K.symmetry_defect() < 1e-12);
  CHECK(s.offset_w == 578);
  CHECK(s.offset_p == 786);
  CHECK(s.offset_lambda == 914);
  double msum = 0.0;
  for (double v : s.m) msum += v;
  CHECK(msum == doctest::Approx(1.0).epsilon(1e-14));
  const auto signs = s.block_signs();
  CHECK(signs[0] == 1);
  CHECK(signs[s.offset_p] == -1);
  CHECK(signs.back() == -1);
}

TEST_CASE("composed system is symmetric for both pairings and all parameters") {
  for (Pairing p : {Pairing::P2_RT0_DG0, Pairing::P2_P1_DG0})
    for (double k : {1.0, 1e-8})
      for (double c0 : {0.0, 1.0}) {
        BiotParams bp;
        bp.kappa = k;
        bp.c0 = c0;
        bp.tau = 0.25;
        const BiotSystem s = assemble_biot_step(p, mesh_of(4), bp);
        CHECK(s.K.symmetry_defect() < 1e-12);
      }
}

TEST_CASE("homogeneous step gives a zero solution") {
  BiotParams bp;
  const BiotSystem s = assemble_biot_step(Pairing::P2_RT0_DG0, mesh_of(4), bp);
  const BodyLoads none{};
  const auto rhs = assemble_load(s, none, {}, {});
  for (double v : rhs) CHECK(v == 0.0);
  const auto x = factor_solve(s.K, rhs);
  double mx = 0.0;
  for (double v : x) mx = std::max(mx, std::abs(v));
  CHECK(mx == 0.0);
}

TEST_CASE("load vector blocks") {
  BiotParams bp;
  bp.tau = 0.5;
  const BiotSystem s = assemble_biot_step(Pairing::P2_RT0_DG0, mesh_of(4), bp);
  BodyLoads l;
  l.s = [](Vec2 x) { return 1.0 + x.x * x.y; };
  const auto rhs = assemble_load(s, l, {}, {});
  double ps = 0.0;
  for (std::size_t i = s.offset_p; i < s.offset_lambda; ++i) ps += rhs[i];
  // tau * int (1 + xy) = 0.5 * (1 + 1/4)
  CHECK(ps == doctest::Approx(0.625).epsilon(1e-13));
  for (std::size_t i = 0; i < s.offset_p; ++i) CHECK(rhs[i] == 0.0);

  BodyLoads g;
  g.g = [](Vec2) { return Vec2{1.0, 0.0}; };
  const auto rg = assemble_load(s, g, {}, {});
  for (std::size_t i = 0; i < s.offset_w; ++i) CHECK(rg[i] == 0.0);
  double gw = 0.0;
  for (std::size_t i = s.offset_w; i < s.offset_p; ++i) gw += std::abs(rg[i]);
  CHECK(gw > 0.0);

  const std::vector<double> bad(3, 0.0);
  CHECK_THROWS_AS(assemble_load(s, l, bad, {}), std::invalid_argument);
}

TEST_CASE("manufactured pressure load integrates to zero") {
  ProblemParams pp;
  pp.c0 = 1.0;
  const ManufacturedProblem mp(pp);
  const BiotSystem s = assemble_biot_step(Pairing::P2_RT0_DG0, mesh_of(8), pp.biot());
  const auto rhs = assemble_load(s, mp.loads(1.0), {}, {});
  double ps = 0.0, pa = 0.0;
  for (std::size_t i = s.offset_p; i < s.offset_lambda; ++i) {
    ps += rhs[i];
    pa += std::abs(rhs[i]);
  }
  CHECK(pa > 0.0);
  CHECK(std::abs(ps) < 1e-10 * pa);
}

TEST_CASE("constant pressure is the only kernel without the mean constraint") {
  for (Pairing p : {Pairing::P2_RT0_DG0, Pairing::P2_P1_DG0}) {
    BiotParams bp;
    const BiotSystem s = assemble_biot_step(p, mesh_of(3), bp, false);
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(dense(s.K)).singularValues();
    int zero = 0;
    for (long i = 0; i < sv.size(); ++i)
      if (sv(i) < 1e-10 * sv(0)) ++zero;
    CHECK(zero == 1);
    const BiotSystem c = assemble_biot_step(p, mesh_of(3), bp, true);
    const Eigen::VectorXd sc = Eigen::JacobiSVD<Eigen::MatrixXd>(dense(c.K)).singularValues();
    CHECK(sc(sc.size() - 1) > 1e-10 * sc(0));
  }
}

TEST_CASE("elastic form is coercive in H1 uniformly in h") {
  std::vector<double> lo;
  for (int n : {2, 4, 8}) {
    auto u = build_space(SpaceKind::P2v, mesh_of(n));
    const Eigen::MatrixXd a = free_block(assemble_form(FormKind::a, *u, *u), *u);
    const Eigen::MatrixXd g =
        free_block(assemble_form(FormKind::mass, *u, *u), *u) + free_block(assemble_form(FormKind::grad_grad, *u, *u), *u);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, g, Eigen::EigenvaluesOnly);
    lo.push_back(es.eigenvalues()(0));
  }
  for (double v : lo) CHECK(v > 0.1);
  CHECK(lo.back() > 0.5 * lo.front());
}

TEST_CASE("flux mass scales with inverse conductivity") {
  auto w = build_space(SpaceKind::RT0, mesh_of(4));
  FormParams a, b;
  a.kappa = 1.0;
  b.kappa = 1e-4;
  const CsrMatrix ca = assemble_form(FormKind::c, *w, *w, a);
  const CsrMatrix cb = assemble_form(FormKind::c, *w, *w, b);
  REQUIRE(ca.nnz() == cb.nnz());
  for (std::size_t i = 0; i < ca.nnz(); ++i)
    CHECK(std::abs(cb.values()[i] - 1e4 * ca.values()[i]) <= 1e-14 * cb.max_abs());
  const CsrMatrix m = assemble_form(FormKind::mass, *w, *w);
  for (std::size_t i = 0; i < m.nnz(); ++i) CHECK(std::abs(m.values()[i] - ca.values()[i]) <= 1e-14 * ca.max_abs());
}

TEST_CASE("invalid parameters are rejected") {
  BiotParams bp;
  bp.kappa = 0.0;
  CHECK_THROWS_AS(assemble_biot_step(Pairing::P2_RT0_DG0, mesh_of(2), bp), std::invalid_argument);
  bp = {};
  bp.tau = -1.0;
  CHECK_THROWS_AS(assemble_biot_step(Pairing::P2_RT0_DG0, mesh_of(2), bp), std::invalid_argument);
  bp = {};
  bp.c0 = -1.0;
  CHECK_THROWS_AS(assemble_biot_step(Pairing::P2_RT0_DG0, mesh_of(2), bp), std::invalid_argument);
  CHECK(parse_pairing(pairing_name(Pairing::P2_P1_DG0)) == Pairing::P2_P1_DG0);
  CHECK_FALSE(parse_pairing("p3-bdm"));
}
