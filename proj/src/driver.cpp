#include "biot/driver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace biot {

TimeLoopState initial_state(const BiotSystem& sys, const ManufacturedProblem& pr) {
  TimeLoopState s{0, 0.0, interpolate([&](Vec2 x) { return pr.u(0.0, x); }, sys.U),
                  interpolate([&](Vec2 x) { return pr.z(0.0, x); }, sys.W),
                  l2_project([&](Vec2 x) { return pr.p(0.0, x); }, sys.Q), 0.0};
  return s;
}

TimeLoopState step(const BiotSystem& sys, const LdltFactorization& factor, const TimeLoopState& state,
                   const ManufacturedProblem& pr, SolveReport* report) {
  const int m = state.m + 1;
  const double t = m * sys.params.tau;
  const std::vector<double> rhs = assemble_load(sys, pr.loads(t), state.u.coefficients(), state.p.coefficients());
  std::vector<double> x(sys.dimension);
  SolveReport rep;
  try {
    rep = factor.solve(rhs, x);
  } catch (const SolverError& e) {
    throw SolverError("step " + std::to_string(m) + ": " + e.what(), e.index());
  }
  if (report) *report = rep;
  auto slice = [&](std::size_t off, std::size_t n) {
    return std::vector<double>(x.begin() + static_cast<long>(off), x.begin() + static_cast<long>(off + n));
  };
  TimeLoopState next{m, t, DiscreteField(sys.U, slice(sys.offset_u, sys.U->dof_count())),
                     DiscreteField(sys.W, slice(sys.offset_w, sys.W->dof_count())),
                     DiscreteField(sys.Q, slice(sys.offset_p, sys.Q->dof_count())),
                     sys.mean_constraint ? x[sys.offset_lambda] : 0.0};
  return next;
}

TimeLoopState step(const BiotSystem& sys, const TimeLoopState& state, const ManufacturedProblem& pr,
                   SolveReport* report) {
  FactorOptions fo;
  fo.signs = sys.block_signs();
  const LdltFactorization f(sys.K, fo);
  return step(sys, f, state, pr, report);
}

CellResult run_cell(Pairing pairing, const ProblemParams& params, int n_div) {
  CellResult r;
  r.pairing = pairing;
  r.kappa = params.kappa;
  r.c0 = params.c0;
  r.n_div = n_div;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const ManufacturedProblem pr(params);
    const auto mesh = std::make_shared<const Mesh>(Mesh::unit_square(n_div));
    const BiotSystem sys = assemble_biot_step(pairing, mesh, params.biot(), true);
    r.unknowns = sys.dimension;
    FactorOptions fo;
    fo.signs = sys.block_signs();
    const LdltFactorization f(sys.K, fo);
    TimeLoopState state = initial_state(sys, pr);
    for (int k = 0; k < params.steps(); ++k) {
      SolveReport rep;
      state = step(sys, f, state, pr, &rep);
      r.max_residual = std::max(r.max_residual, rep.relative_residual);
    }
    r.errors = relative_error(state.u, state.z, state.p, pr, state.t);
    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

void StudySpec::validate() const {
  if (pairings.empty()) throw std::invalid_argument("study needs at least one pairing");
  if (kappas.empty()) throw std::invalid_argument("study needs at least one kappa");
  if (c0s.empty()) throw std::invalid_argument("study needs at least one c0");
  if (levels.empty()) throw std::invalid_argument("study needs at least one mesh level");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1) throw std::invalid_argument("mesh levels must be positive");
    if (i > 0 && levels[i] <= levels[i - 1]) throw std::invalid_argument("mesh levels must be strictly increasing");
  }
  if (jobs < 1) throw std::invalid_argument("jobs must be at least 1");
  for (double k : kappas) {
    ProblemParams p;
    p.kappa = k;
    p.c0 = c0s.front();
    p.tau = tau;
    p.T = T;
    p.mu = mu;
    p.lambda = lambda;
    p.stress_factor = stress_factor;
    p.validate();
  }
  for (double c : c0s) {
    ProblemParams p;
    p.c0 = c;
    p.tau = tau;
    p.T = T;
    p.validate();
  }
}

bool StudyResult::all_ok() const {
  return std::all_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.ok; });
}

StudyResult run_study(const StudySpec& spec) {
  spec.validate();
  struct Job {
    Pairing pairing;
    double kappa, c0;
    int n;
  };
  std::vector<Job> jobs;
  for (Pairing p : spec.pairings)
    for (double c0 : spec.c0s)
      for (double k : spec.kappas)
        for (int n : spec.levels) jobs.push_back({p, k, c0, n});

  std::vector<CellResult> results(jobs.size());
  auto run = [&](std::size_t i) {
    ProblemParams pp;
    pp.kappa = jobs[i].kappa;
    pp.c0 = jobs[i].c0;
    pp.tau = spec.tau;
    pp.T = spec.T;
    pp.mu = spec.mu;
    pp.lambda = spec.lambda;
    pp.stress_factor = spec.stress_factor;
    pp.flux_boundary = spec.flux_boundary;
    results[i] = run_cell(jobs[i].pairing, pp, jobs[i].n);
  };
  const int workers = std::min<int>(spec.jobs, static_cast<int>(jobs.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run(i);
  } else {
    // largest meshes first so the tail is short
    std::vector<std::size_t> order(jobs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return jobs[a].n > jobs[b].n; });
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < order.size();) run(order[i]);
      });
    for (auto& t : pool) t.join();
  }

  StudyResult out;
  out.cells = results;
  out.table.levels = spec.levels;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::size_t idx = 0;
  for (Pairing p : spec.pairings)
    for (double c0 : spec.c0s) {
      const std::size_t block = idx;
      for (Quantity q : spec.quantities)
        for (std::size_t ki = 0; ki < spec.kappas.size(); ++ki) {
          ErrorRow row;
          row.quantity = q;
          row.pairing = p;
          row.kappa = spec.kappas[ki];
          row.c0 = c0;
          for (std::size_t li = 0; li < spec.levels.size(); ++li) {
            const CellResult& c = results[block + ki * spec.levels.size() + li];
            double v = nan;
            if (c.ok) {
              switch (q) {
                case Quantity::displacement: v = c.errors.displacement; break;
                case Quantity::pressure: v = c.errors.pressure; break;
                case Quantity::flux_w: v = c.errors.flux_w; break;
                case Quantity::flux_hdiv: v = c.errors.flux_hdiv; break;
              }
            }
            row.values.push_back(v);
          }
          out.table.rows.push_back(std::move(row));
        }
      idx += spec.kappas.size() * spec.levels.size();
    }
  out.table.compute_rates();
  return out;
}

}  // namespace biot
