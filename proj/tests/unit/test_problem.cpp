#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "biot/problem.hpp"

using namespace biot;

namespace {

constexpr double pi = std::numbers::pi;

Vec2 u_ref(double t, Vec2 x) {
  return {t * std::sin(pi * x.x) * std::sin(pi * x.y), 2.0 * t * std::sin(3 * pi * x.x) * std::sin(4 * pi * x.y)};
}

double p_ref(double t, Vec2 x) {
  const double b = (x.x - 1) * x.x * (x.y - 1) * x.y;
  return (t + 1) * (b * b - 1.0 / 900.0);
}

constexpr double kStep = 1e-5;

// stress from central differences of the reference displacement
Mat2 stress_fd(double t, Vec2 x, double mu, double lambda) {
  const Vec2 ex{kStep, 0}, ey{0, kStep};
  const Vec2 ux = (u_ref(t, x + ex) - u_ref(t, x - ex)) * (0.5 / kStep);
  const Vec2 uy = (u_ref(t, x + ey) - u_ref(t, x - ey)) * (0.5 / kStep);
  const double e11 = ux.x, e22 = uy.y, e12 = 0.5 * (uy.x + ux.y);
  const double tr = e11 + e22;
  Mat2 s;
  s(0, 0) = 2 * mu * e11 + lambda * tr;
  s(1, 1) = 2 * mu * e22 + lambda * tr;
  s(0, 1) = s(1, 0) = 2 * mu * e12;
  return s;
}

Vec2 grad_p_fd(double t, Vec2 x) {
  return {(p_ref(t, {x.x + kStep, x.y}) - p_ref(t, {x.x - kStep, x.y})) / (2 * kStep),
          (p_ref(t, {x.x, x.y + kStep}) - p_ref(t, {x.x, x.y - kStep})) / (2 * kStep)};
}

}  // namespace

TEST_CASE("pressure at the centre") {
  const ManufacturedProblem mp(ProblemParams{});
  // 2 * ((1/16)^2 - 1/900)
  CHECK(mp.p(1.0, {0.5, 0.5}) == doctest::Approx(0.0055903).epsilon(1e-5));
  CHECK(mp.p(1.0, {0.5, 0.5}) == doctest::Approx(2.0 * (1.0 / 256.0 - 1.0 / 900.0)).epsilon(1e-14));
}

TEST_CASE("initial displacement vanishes") {
  const ManufacturedProblem mp(ProblemParams{});
  for (double x : {0.1, 0.45, 0.9})
    for (double y : {0.2, 0.7}) {
      CHECK(mp.u(0.0, {x, y}).x == 0.0);
      CHECK(mp.u(0.0, {x, y}).y == 0.0);
    }
}

TEST_CASE("closed forms agree with independent finite differences") {
  ProblemParams pp;
  pp.kappa = 1e-4;
  pp.c0 = 0.5;
  pp.lambda = 3.0;
  pp.mu = 2.0;
  const ManufacturedProblem mp(pp);
  const double t = 0.7;
  const Vec2 x{0.3, 0.6};

  const Vec2 u = mp.u(t, x), ur = u_ref(t, x);
  CHECK(u.x == doctest::Approx(ur.x).epsilon(1e-14));
  CHECK(u.y == doctest::Approx(ur.y).epsilon(1e-14));
  CHECK(mp.p(t, x) == doctest::Approx(p_ref(t, x)).epsilon(1e-14));

  const Mat2 s = mp.stress(t, x), sf = stress_fd(t, x, pp.mu, pp.lambda);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(s(i, j) == doctest::Approx(sf(i, j)).epsilon(1e-4).scale(1.0));

  // momentum: -div sigma - grad p = f, with div sigma from differences of the stress
  const double h = 1e-4;
  const Mat2 sxp = stress_fd(t, {x.x + h, x.y}, pp.mu, pp.lambda), sxm = stress_fd(t, {x.x - h, x.y}, pp.mu, pp.lambda);
  const Mat2 syp = stress_fd(t, {x.x, x.y + h}, pp.mu, pp.lambda), sym = stress_fd(t, {x.x, x.y - h}, pp.mu, pp.lambda);
  const Vec2 div_s{(sxp(0, 0) - sxm(0, 0) + syp(0, 1) - sym(0, 1)) / (2 * h),
                   (sxp(1, 0) - sxm(1, 0) + syp(1, 1) - sym(1, 1)) / (2 * h)};
  const Vec2 gp = grad_p_fd(t, x);
  const Vec2 f = mp.f(t, x);
  const double fs = std::hypot(f.x, f.y);
  CHECK(std::abs(f.x + div_s.x + gp.x) < 1e-4 * fs);
  CHECK(std::abs(f.y + div_s.y + gp.y) < 1e-4 * fs);

  // Darcy: z = kappa grad p, so g = 0
  const Vec2 z = mp.z(t, x);
  CHECK(z.x == doctest::Approx(pp.kappa * gp.x).epsilon(1e-6));
  CHECK(z.y == doctest::Approx(pp.kappa * gp.y).epsilon(1e-6));
  CHECK(mp.g(t, x).x == 0.0);

  // mass: div u_t + div z - c0 p_t = s
  const Vec2 ex{h, 0}, ey{0, h};
  const double div_ut = ((u_ref(1, x + ex) - u_ref(1, x - ex)).x + (u_ref(1, x + ey) - u_ref(1, x - ey)).y) / (2 * h);
  const double div_z = pp.kappa * ((grad_p_fd(t, x + ex) - grad_p_fd(t, x - ex)).x +
                                   (grad_p_fd(t, x + ey) - grad_p_fd(t, x - ey)).y) / (2 * h);
  const double p_t = (p_ref(t + h, x) - p_ref(t - h, x)) / (2 * h);
  CHECK(mp.s(t, x) == doctest::Approx(div_ut + div_z - pp.c0 * p_t).epsilon(1e-4).scale(1.0));
}

TEST_CASE("fields are linear in time") {
  const ManufacturedProblem mp(ProblemParams{});
  const Vec2 x{0.37, 0.81};
  const Vec2 a = mp.u(0.25, x), b = mp.u(0.75, x);
  CHECK(b.x == doctest::Approx(3.0 * a.x).epsilon(1e-14));
  CHECK(b.y == doctest::Approx(3.0 * a.y).epsilon(1e-14));
  CHECK(mp.p(0.5, x) - mp.p(0.0, x) == doctest::Approx(mp.p(1.0, x) - mp.p(0.5, x)).epsilon(1e-12));
  CHECK(mp.p_t(0.2, x) == doctest::Approx(mp.p_t(0.9, x)).epsilon(1e-14));
}

TEST_CASE("boundary traces vanish") {
  const ManufacturedProblem mp(ProblemParams{});
  for (double s : {0.0, 0.13, 0.5, 0.77, 1.0})
    for (Vec2 x : {Vec2{s, 0.0}, Vec2{s, 1.0}, Vec2{0.0, s}, Vec2{1.0, s}}) {
      CHECK(std::abs(mp.u(0.6, x).x) < 1e-14);
      CHECK(std::abs(mp.u(0.6, x).y) < 1e-14);
      const Vec2 z = mp.z(0.6, x);
      CHECK(std::abs(z.x) + std::abs(z.y) < 1e-14);
    }
}

TEST_CASE("sampling verification") {
  for (double c0 : {0.0, 1.0}) {
    ProblemParams pp;
    pp.c0 = c0;
    pp.kappa = 1e-8;
    const VerifyReport r = verify_manufactured(ManufacturedProblem(pp), 1000);
    CHECK(r.samples == 1000);
    CHECK(r.passed);
    CHECK(r.boundary_trace < 1e-12);
    CHECK(std::abs(r.pressure_mean) < 1e-10);
  }
}

TEST_CASE("parameter validation") {
  ProblemParams pp;
  CHECK_NOTHROW(pp.validate());
  CHECK(pp.steps() == 1);
  pp.tau = 0.25;
  CHECK(pp.steps() == 4);
  CHECK(pp.biot().tau == 0.25);
  auto bad = [](auto edit) {
    ProblemParams q;
    edit(q);
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  };
  bad([](ProblemParams& q) { q.kappa = 0.0; });
  bad([](ProblemParams& q) { q.kappa = 2.0; });
  bad([](ProblemParams& q) { q.c0 = -1.0; });
  bad([](ProblemParams& q) { q.tau = 0.0; });
  bad([](ProblemParams& q) { q.T = -1.0; });
  bad([](ProblemParams& q) { q.mu = 0.0; });
  bad([](ProblemParams& q) { q.alpha = 2.0; });
}
