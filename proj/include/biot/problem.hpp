#pragma once

#include <cstdint>
#include <string>

#include "biot/assemble.hpp"
#include "biot/geometry.hpp"

namespace biot {

struct ProblemParams {
  double mu = 1.0;
  double lambda = 1.0;
  double alpha = 1.0;
  double kappa = 1.0;
  double c0 = 0.0;
  double tau = 1.0;
  double T = 1.0;
  double stress_factor = 2.0;
  FluxBoundary flux_boundary = FluxBoundary::full;

  /// Throws std::invalid_argument naming the offending parameter.
  void validate() const;
  int steps() const;
  BiotParams biot() const;
};

/// Closed-form fields of the unit-square test case:
///   u = (t sin(pi x) sin(pi y), 2t sin(3 pi x) sin(4 pi y))
///   p = (t + 1)(((x - 1) x (y - 1) y)^2 - 1/900),  z = kappa grad p.
class ManufacturedProblem {
 public:
  explicit ManufacturedProblem(ProblemParams params);

  const ProblemParams& params() const { return params_; }

  Vec2 u(double t, Vec2 x) const;
  Vec2 u_t(double t, Vec2 x) const;
  Mat2 grad_u(double t, Vec2 x) const;
  Mat2 strain(double t, Vec2 x) const;
  Mat2 stress(double t, Vec2 x) const;
  double div_u(double t, Vec2 x) const;
  Vec2 div_stress(double t, Vec2 x) const;

  double p(double t, Vec2 x) const;
  double p_t(double t, Vec2 x) const;
  Vec2 grad_p(double t, Vec2 x) const;
  double laplace_p(double t, Vec2 x) const;

  Vec2 z(double t, Vec2 x) const;
  Mat2 grad_z(double t, Vec2 x) const;
  double div_z(double t, Vec2 x) const;

  Vec2 f(double t, Vec2 x) const;
  Vec2 g(double t, Vec2 x) const;
  double s(double t, Vec2 x) const;

  BodyLoads loads(double t) const;

 private:
  ProblemParams params_;
};

struct VerifyReport {
  int samples = 0;
  double momentum_residual = 0.0;
  double darcy_residual = 0.0;
  double mass_residual = 0.0;
  double boundary_trace = 0.0;  // max |u| and |z.n| on the boundary
  double pressure_mean = 0.0;
  double worst_t = 0.0;
  Vec2 worst_x;
  std::string worst_equation;
  bool passed = false;
};

/// Checks the closed forms against finite differences at random points.
VerifyReport verify_manufactured(const ManufacturedProblem& problem, int samples, std::uint64_t seed = 20240601,
                                 double tolerance = 1e-4);

}  // namespace biot
