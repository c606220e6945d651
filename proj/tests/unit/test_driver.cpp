#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "biot/driver.hpp"

using namespace biot;

namespace {

std::shared_ptr<const Mesh> mesh_of(int n) { return std::make_shared<const Mesh>(Mesh::unit_square(n)); }

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("zero data stays zero") {
  ProblemParams pp;
  const ManufacturedProblem mp(pp);
  const BiotSystem sys = assemble_biot_step(Pairing::P2_RT0_DG0, mesh_of(4), pp.biot());
  TimeLoopState s{0, 0.0, DiscreteField(sys.U), DiscreteField(sys.W), DiscreteField(sys.Q), 0.0};
  const LdltFactorization f(sys.K, {.signs = sys.block_signs()});
  // a step with zero history and zero loads: solve against an empty right-hand side
  std::vector<double> x(sys.dimension, 1.0);
  const std::vector<double> rhs = assemble_load(sys, BodyLoads{}, s.u.coefficients(), s.p.coefficients());
  f.solve(rhs, x);
  for (double v : x) CHECK(v == 0.0);
}

TEST_CASE("initial state and one step") {
  ProblemParams pp;
  const ManufacturedProblem mp(pp);
  const BiotSystem sys = assemble_biot_step(Pairing::P2_RT0_DG0, mesh_of(4), pp.biot());
  const TimeLoopState s0 = initial_state(sys, mp);
  CHECK(s0.m == 0);
  CHECK(s0.t == 0.0);
  for (double v : s0.u.coefficients()) CHECK(v == 0.0);
  double mean = 0.0;
  for (std::size_t c = 0; c < sys.m.size(); ++c) mean += sys.m[c] * s0.p.coefficients()[c];
  CHECK(std::abs(mean) < 1e-12);
  SolveReport rep;
  const TimeLoopState s1 = step(sys, s0, mp, &rep);
  CHECK(s1.m == 1);
  CHECK(s1.t == doctest::Approx(1.0));
  CHECK(rep.relative_residual <= 1e-9);
  mean = 0.0;
  for (std::size_t c = 0; c < sys.m.size(); ++c) mean += sys.m[c] * s1.p.coefficients()[c];
  CHECK(std::abs(mean) < 1e-10);
}

TEST_CASE("implicit Euler is exact for fields linear in time") {
  for (Pairing p : {Pairing::P2_RT0_DG0, Pairing::P2_P1_DG0})
    for (double c0 : {0.0, 1.0}) {
      ProblemParams one;
      one.c0 = c0;
      ProblemParams four = one;
      four.tau = 0.25;
      const CellResult a = run_cell(p, one, 8);
      const CellResult b = run_cell(p, four, 8);
      REQUIRE(a.ok);
      REQUIRE(b.ok);
      CHECK(rel_diff(a.errors.displacement, b.errors.displacement) < 1e-8);
      CHECK(rel_diff(a.errors.pressure, b.errors.pressure) < 1e-8);
      CHECK(rel_diff(a.errors.flux_hdiv, b.errors.flux_hdiv) < 1e-8);
    }
}

TEST_CASE("displacement row on the coarse meshes") {
  StudySpec spec;
  spec.levels = {8, 16};
  const StudyResult r = run_study(spec);
  REQUIRE(r.all_ok());
  const ErrorRow* row = r.table.find(Quantity::displacement, Pairing::P2_RT0_DG0, 1.0, 0.0);
  REQUIRE(row);
  CHECK(row->values[0] == doctest::Approx(1.64e-1).epsilon(0.1));
  CHECK(row->values[1] == doctest::Approx(4.45e-2).epsilon(0.1));
  REQUIRE(row->rate);
  CHECK(*row->rate == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("single level leaves the rate empty") {
  StudySpec spec;
  spec.levels = {8};
  const StudyResult r = run_study(spec);
  CHECK(r.table.levels.size() == 1);
  for (const auto& row : r.table.rows) {
    CHECK(row.values.size() == 1);
    CHECK_FALSE(row.rate);
  }
  CHECK(r.table.rows.size() == spec.quantities.size());
}

TEST_CASE("repeated and concurrent runs are bit-identical") {
  StudySpec spec;
  spec.pairings = {Pairing::P2_RT0_DG0, Pairing::P2_P1_DG0};
  spec.kappas = {1.0, 1e-8};
  spec.levels = {4, 8};
  const StudyResult a = run_study(spec);
  spec.jobs = 4;
  const StudyResult b = run_study(spec);
  REQUIRE(a.table.rows.size() == b.table.rows.size());
  for (std::size_t i = 0; i < a.table.rows.size(); ++i) {
    CHECK(a.table.rows[i].quantity == b.table.rows[i].quantity);
    CHECK(a.table.rows[i].kappa == b.table.rows[i].kappa);
    CHECK(a.table.rows[i].values == b.table.rows[i].values);
  }
}

TEST_CASE("displacement errors do not depend on conductivity") {
  StudySpec spec;
  spec.pairings = {Pairing::P2_RT0_DG0, Pairing::P2_P1_DG0};
  spec.kappas = {1.0, 1e-4, 1e-8, 1e-12};
  spec.levels = {8, 16};
  spec.jobs = 4;
  const StudyResult r = run_study(spec);
  REQUIRE(r.all_ok());
  for (Pairing p : spec.pairings) {
    const ErrorRow* ref = r.table.find(Quantity::displacement, p, 1.0, 0.0);
    for (double k : spec.kappas) {
      const ErrorRow* row = r.table.find(Quantity::displacement, p, k, 0.0);
      for (std::size_t i = 0; i < row->values.size(); ++i) CHECK(rel_diff(row->values[i], ref->values[i]) <= 5e-3);
    }
  }
}

TEST_CASE("vanishing conductivity limit") {
  StudySpec spec;
  spec.kappas = {1e-8, 1e-12};
  spec.levels = {32, 64};
  spec.quantities = {Quantity::pressure, Quantity::flux_hdiv};
  spec.jobs = 4;
  const StudyResult r = run_study(spec);
  REQUIRE(r.all_ok());
  const ErrorRow* a = r.table.find(Quantity::pressure, Pairing::P2_RT0_DG0, 1e-8, 0.0);
  const ErrorRow* b = r.table.find(Quantity::pressure, Pairing::P2_RT0_DG0, 1e-12, 0.0);
  for (std::size_t i = 0; i < a->values.size(); ++i) {
    // three significant figures
    CHECK(rel_diff(a->values[i], b->values[i]) < 5e-3);
    CHECK(rel_diff(a->values[i], b->values[i]) <= 1e-2);
  }
}

TEST_CASE("failed cells are recorded and the study continues") {
  ProblemParams bad;
  bad.kappa = -1.0;
  const CellResult c = run_cell(Pairing::P2_RT0_DG0, bad, 4);
  CHECK_FALSE(c.ok);
  CHECK_FALSE(c.error.empty());
}

TEST_CASE("study validation") {
  StudySpec s;
  CHECK_NOTHROW(s.validate());
  s.tau = 0.3;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = {};
  s.levels = {};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = {};
  s.kappas = {};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
