#pragma once

#include <string>
#include <vector>

#include "biot/assemble.hpp"
#include "biot/linsolve.hpp"
#include "biot/metrics.hpp"
#include "biot/problem.hpp"
#include "biot/space.hpp"

namespace biot {

struct TimeLoopState {
  int m = 0;
  double t = 0.0;
  DiscreteField u, z, p;
  double multiplier = 0.0;
};

/// u = interpolant of u(0), p = L2 projection of p(0), z = interpolant of z(0).
TimeLoopState initial_state(const BiotSystem& sys, const ManufacturedProblem& problem);

/// Advance one step with an existing factorisation of sys.K.
TimeLoopState step(const BiotSystem& sys, const LdltFactorization& factor, const TimeLoopState& state,
                   const ManufacturedProblem& problem, SolveReport* report = nullptr);
TimeLoopState step(const BiotSystem& sys, const TimeLoopState& state, const ManufacturedProblem& problem,
                   SolveReport* report = nullptr);

struct CellResult {
  Pairing pairing = Pairing::P2_RT0_DG0;
  double kappa = 1.0;
  double c0 = 0.0;
  int n_div = 0;
  bool ok = false;
  std::string error;
  RelativeErrors errors;
  double max_residual = 0.0;  // over all steps
  std::size_t unknowns = 0;
  double seconds = 0.0;
};

/// March one (pairing, kappa, c0, mesh) configuration to T and measure errors.
CellResult run_cell(Pairing pairing, const ProblemParams& params, int n_div);

struct StudySpec {
  std::vector<Pairing> pairings{Pairing::P2_RT0_DG0};
  std::vector<double> kappas{1.0};
  std::vector<double> c0s{0.0};
  std::vector<int> levels{8, 16, 32};
  double tau = 1.0;
  double T = 1.0;
  double mu = 1.0;
  double lambda = 1.0;
  double stress_factor = 2.0;
  FluxBoundary flux_boundary = FluxBoundary::full;
  std::vector<Quantity> quantities{Quantity::displacement, Quantity::pressure, Quantity::flux_w};
  int jobs = 1;

  void validate() const;
};

struct StudyResult {
  ErrorTable table;
  std::vector<CellResult> cells;
  bool all_ok() const;
};

StudyResult run_study(const StudySpec& spec);

}  // namespace biot
