#include "biot/problem.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "biot/mesh.hpp"
#include "biot/refelem.hpp"

namespace biot {

namespace {

constexpr double pi = std::numbers::pi;

struct PolyP {
  double X, Y, dX, dY, P;
  explicit PolyP(Vec2 x) {
    X = x.x * x.x - x.x;
    Y = x.y * x.y - x.y;
    dX = 2.0 * x.x - 1.0;
    dY = 2.0 * x.y - 1.0;
    P = X * Y;
  }
};

}  // namespace

void ProblemParams::validate() const {
  auto bad = [](const std::string& m) { throw std::invalid_argument(m); };
  if (!(kappa > 0.0 && kappa <= 1.0)) bad("kappa must satisfy 0 < kappa <= 1");
  if (!(c0 >= 0.0 && c0 <= 1.0)) bad("c0 must satisfy 0 <= c0 <= 1");
  if (!(tau > 0.0)) bad("tau must be positive");
  if (!(T > 0.0)) bad("T must be positive");
  if (!(mu > 0.0)) bad("mu must be positive");
  if (!(lambda >= 0.0)) bad("lambda must be nonnegative");
  if (alpha != 1.0) bad("alpha is fixed to 1");
  if (!(stress_factor > 0.0)) bad("stress_factor must be positive");
  const double n = T / tau;
  if (std::abs(n - std::round(n)) > 1e-12 * std::max(1.0, n) || std::round(n) < 1) bad("tau must divide T");
}

int ProblemParams::steps() const { return static_cast<int>(std::lround(T / tau)); }

BiotParams ProblemParams::biot() const {
  BiotParams b;
  b.mu = mu;
  b.lambda = lambda;
  b.stress_factor = stress_factor;
  b.kappa = kappa;
  b.c0 = c0;
  b.tau = tau;
  b.flux_boundary = flux_boundary;
  return b;
}

ManufacturedProblem::ManufacturedProblem(ProblemParams params) : params_(params) { params_.validate(); }

Vec2 ManufacturedProblem::u(double t, Vec2 x) const {
  return {t * std::sin(pi * x.x) * std::sin(pi * x.y), 2.0 * t * std::sin(3 * pi * x.x) * std::sin(4 * pi * x.y)};
}

Vec2 ManufacturedProblem::u_t(double, Vec2 x) const { return u(1.0, x); }

Mat2 ManufacturedProblem::grad_u(double t, Vec2 x) const {
  Mat2 g;
  g(0, 0) = t * pi * std::cos(pi * x.x) * std::sin(pi * x.y);
  g(0, 1) = t * pi * std::sin(pi * x.x) * std::cos(pi * x.y);
  g(1, 0) = 6.0 * t * pi * std::cos(3 * pi * x.x) * std::sin(4 * pi * x.y);
  g(1, 1) = 8.0 * t * pi * std::sin(3 * pi * x.x) * std::cos(4 * pi * x.y);
  return g;
}

Mat2 ManufacturedProblem::strain(double t, Vec2 x) const {
  const Mat2 g = grad_u(t, x);
  return (g + g.transpose()) * 0.5;
}

Mat2 ManufacturedProblem::stress(double t, Vec2 x) const {
  const Mat2 e = strain(t, x);
  return e * (params_.stress_factor * params_.mu) + Mat2::identity() * (params_.lambda * e.trace());
}

double ManufacturedProblem::div_u(double t, Vec2 x) const { return grad_u(t, x).trace(); }

Vec2 ManufacturedProblem::div_stress(double t, Vec2 x) const {
  const Vec2 uu = u(t, x);
  const Vec2 lap{-2.0 * pi * pi * uu.x, -25.0 * pi * pi * uu.y};
  const Vec2 grad_div{
      -t * pi * pi * std::sin(pi * x.x) * std::sin(pi * x.y) +
          24.0 * t * pi * pi * std::cos(3 * pi * x.x) * std::cos(4 * pi * x.y),
      t * pi * pi * std::cos(pi * x.x) * std::cos(pi * x.y) -
          32.0 * t * pi * pi * std::sin(3 * pi * x.x) * std::sin(4 * pi * x.y)};
  const double half = 0.5 * params_.stress_factor * params_.mu;
  return lap * half + grad_div * (half + params_.lambda);
}

double ManufacturedProblem::p(double t, Vec2 x) const {
  const PolyP q(x);
  return (t + 1.0) * (q.P * q.P - 1.0 / 900.0);
}

double ManufacturedProblem::p_t(double, Vec2 x) const {
  const PolyP q(x);
  return q.P * q.P - 1.0 / 900.0;
}

Vec2 ManufacturedProblem::grad_p(double t, Vec2 x) const {
  const PolyP q(x);
  const double c = 2.0 * (t + 1.0) * q.P;
  return {c * q.dX * q.Y, c * q.X * q.dY};
}

double ManufacturedProblem::laplace_p(double t, Vec2 x) const {
  const PolyP q(x);
  const double grad2 = q.dX * q.dX * q.Y * q.Y + q.X * q.X * q.dY * q.dY;
  const double lap = 2.0 * q.Y + 2.0 * q.X;
  return 2.0 * (t + 1.0) * (grad2 + q.P * lap);
}

Vec2 ManufacturedProblem::z(double t, Vec2 x) const { return grad_p(t, x) * params_.kappa; }

Mat2 ManufacturedProblem::grad_z(double t, Vec2 x) const {
  const PolyP q(x);
  const Vec2 gP{q.dX * q.Y, q.X * q.dY};
  Mat2 h;
  h(0, 0) = gP.x * gP.x + q.P * 2.0 * q.Y;
  h(0, 1) = gP.x * gP.y + q.P * q.dX * q.dY;
  h(1, 0) = h(0, 1);
  h(1, 1) = gP.y * gP.y + q.P * 2.0 * q.X;
  return h * (2.0 * (t + 1.0) * params_.kappa);
}

double ManufacturedProblem::div_z(double t, Vec2 x) const { return params_.kappa * laplace_p(t, x); }

Vec2 ManufacturedProblem::f(double t, Vec2 x) const {
  return div_stress(t, x) * -1.0 - grad_p(t, x) * params_.alpha;
}

Vec2 ManufacturedProblem::g(double, Vec2) const { return {0.0, 0.0}; }

double ManufacturedProblem::s(double t, Vec2 x) const {
  return params_.alpha * div_u(1.0, x) + div_z(t, x) - params_.c0 * p_t(t, x);
}

BodyLoads ManufacturedProblem::loads(double t) const {
  BodyLoads l;
  l.f = [this, t](Vec2 x) { return f(t, x); };
  l.s = [this, t](Vec2 x) { return s(t, x); };
  return l;
}

namespace {

constexpr double fd_step = 1e-3;

template <class F>
auto d_dx(F&& fn, Vec2 x, int dir) {
  const Vec2 e = dir == 0 ? Vec2{fd_step, 0.0} : Vec2{0.0, fd_step};
  return (fn(x - 2.0 * e) - fn(x + 2.0 * e) + (fn(x + e) - fn(x - e)) * 8.0) * (1.0 / (12.0 * fd_step));
}

template <class F>
auto d_dt(F&& fn, double t) {
  const double h = fd_step;
  return (fn(t - 2 * h) - fn(t + 2 * h) + (fn(t + h) - fn(t - h)) * 8.0) * (1.0 / (12.0 * h));
}

Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }

}  // namespace

VerifyReport verify_manufactured(const ManufacturedProblem& pr, int samples, std::uint64_t seed, double tolerance) {
  if (samples < 100) throw std::invalid_argument("verify_manufactured: at least 100 samples required");
  const ProblemParams& pp = pr.params();
  VerifyReport rep;
  rep.samples = samples;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.01, 0.99), ut(0.05, 1.0);
  double worst = -1.0;

  auto fd_grad_u = [&](double t, Vec2 x) {
    const Vec2 dx = d_dx([&](Vec2 y) { return pr.u(t, y); }, x, 0);
    const Vec2 dy = d_dx([&](Vec2 y) { return pr.u(t, y); }, x, 1);
    Mat2 g;
    g(0, 0) = dx.x;
    g(1, 0) = dx.y;
    g(0, 1) = dy.x;
    g(1, 1) = dy.y;
    return g;
  };
  auto fd_stress = [&](double t, Vec2 x) {
    const Mat2 g = fd_grad_u(t, x);
    const Mat2 e = (g + g.transpose()) * 0.5;
    return e * (pp.stress_factor * pp.mu) + Mat2::identity() * (pp.lambda * e.trace());
  };
  auto fd_grad_p = [&](double t, Vec2 x) {
    return Vec2{d_dx([&](Vec2 y) { return pr.p(t, y); }, x, 0), d_dx([&](Vec2 y) { return pr.p(t, y); }, x, 1)};
  };

  for (int k = 0; k < samples; ++k) {
    const double t = ut(rng);
    const Vec2 x{ux(rng), ux(rng)};

    const Mat2 sx = d_dx([&](Vec2 y) { return fd_stress(t, y); }, x, 0);
    const Mat2 sy = d_dx([&](Vec2 y) { return fd_stress(t, y); }, x, 1);
    const Vec2 div_sigma{sx(0, 0) + sy(0, 1), sx(1, 0) + sy(1, 1)};
    const Vec2 gp = fd_grad_p(t, x);
    const double r1 = (-div_sigma - gp * pp.alpha - pr.f(t, x)).norm();

    const double r2 = (pr.z(t, x) * (1.0 / pp.kappa) - gp - pr.g(t, x)).norm();

    auto ut_fd = [&](Vec2 y) { return d_dt([&](double s) { return pr.u(s, y); }, t); };
    const double div_ut = d_dx(ut_fd, x, 0).x + d_dx(ut_fd, x, 1).y;
    const double div_z = d_dx([&](Vec2 y) { return pr.z(t, y); }, x, 0).x + d_dx([&](Vec2 y) { return pr.z(t, y); }, x, 1).y;
    const double pt = d_dt([&](double s) { return pr.p(s, x); }, t);
    const double r3 = std::abs(pp.alpha * div_ut + div_z - pp.c0 * pt - pr.s(t, x));

    rep.momentum_residual = std::max(rep.momentum_residual, r1);
    rep.darcy_residual = std::max(rep.darcy_residual, r2);
    rep.mass_residual = std::max(rep.mass_residual, r3);
    const double r = std::max({r1, r2, r3});
    if (r > worst) {
      worst = r;
      rep.worst_t = t;
      rep.worst_x = x;
      rep.worst_equation = r == r1 ? "momentum" : (r == r2 ? "darcy" : "mass");
    }
  }

  std::uniform_real_distribution<double> us(0.0, 1.0);
  for (int k = 0; k < 400; ++k) {
    const double a = us(rng), t = ut(rng);
    const int side = k % 4;
    const Vec2 x = side == 0 ? Vec2{a, 0.0} : side == 1 ? Vec2{1.0, a} : side == 2 ? Vec2{a, 1.0} : Vec2{0.0, a};
    const Vec2 n = side == 0 ? Vec2{0, -1} : side == 1 ? Vec2{1, 0} : side == 2 ? Vec2{0, 1} : Vec2{-1, 0};
    rep.boundary_trace = std::max({rep.boundary_trace, pr.u(t, x).norm(), std::abs(pr.z(t, x).dot(n))});
  }

  const Mesh mesh = Mesh::unit_square(4);
  const auto& rule = quadrature(8);
  double mean = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const AffineMap map = AffineMap::from_points(mesh.cell_points(static_cast<int>(c)));
    for (std::size_t q = 0; q < rule.points.size(); ++q)
      mean += rule.weights[q] * std::abs(map.det) * pr.p(1.0, map.to_physical(rule.points[q]));
  }
  rep.pressure_mean = std::abs(mean);
  rep.passed = worst < tolerance && rep.boundary_trace < 1e-13 && rep.pressure_mean < 1e-12;
  return rep;
}

}  // namespace biot
