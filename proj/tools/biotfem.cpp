#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "biot/config.hpp"
#include "biot/diagnostics.hpp"
#include "biot/driver.hpp"
#include "biot/report.hpp"

using namespace biot;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNumerical = 2;

struct Flags {
  std::string config;
  std::map<std::string, std::string> values;
  bool deep = false;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "key=value configuration file");
  const std::pair<const char*, const char*> opts[] = {
      {"pairing", "p2-rt0-dg0, p2-p1-dg0 or all (comma list)"},
      {"kappa", "hydraulic conductivities (comma list)"},
      {"c0", "storage coefficients (comma list)"},
      {"h", "mesh levels as divisions per side, e.g. 8,16,32 or 1/8,1/16"},
      {"tau", "time step"},
      {"T", "final time"},
      {"mu", "shear modulus"},
      {"lambda", "Lame parameter"},
      {"stress_factor", "sigma = stress_factor*mu*eps + lambda*tr(eps)*I"},
      {"p1_flux_bc", "full or normal boundary condition for the P1 flux"},
      {"norms", "displacement, pressure, flux, flux_hdiv (comma list)"},
      {"diag_levels", "mesh levels for diagnose (<= 16)"},
      {"output_dir", "directory for CSV/Markdown output"},
      {"format", "csv, markdown (comma list)"},
      {"jobs", "concurrent cells"},
      {"samples", "random samples for verify"},
  };
  for (const auto& [key, help] : opts) {
    std::string name = "--" + std::string(key);
    for (char& c : name)
      if (c == '_') c = '-';
    app->add_option_function<std::string>(
        name, [&f, key = std::string(key)](const std::string& v) { f.values[key] = v; }, help);
  }
  app->add_flag("--deep", f.deep, "extend mesh levels to h = 1/128");
}

RunConfig resolve(const Flags& f, RunConfig base = {}) {
  RunConfig cfg = f.config.empty() ? std::move(base) : load_config(f.config, std::move(base));
  for (const auto& [k, v] : f.values) set_config_value(cfg, k, v);
  if (f.deep) cfg.deep = true;
  validate_config(cfg);
  return cfg;
}

void announce(const std::vector<std::filesystem::path>& paths) {
  for (const auto& p : paths) std::cerr << "wrote " << p.string() << '\n';
}

int report_failures(const StudyResult& r) {
  int bad = 0;
  for (const auto& c : r.cells)
    if (!c.ok) {
      ++bad;
      std::cerr << "cell " << pairing_name(c.pairing) << " kappa=" << format_param(c.kappa)
                << " c0=" << format_param(c.c0) << " h=1/" << c.n_div << " failed: " << c.error << '\n';
    }
  return bad;
}

int cmd_converge(const RunConfig& cfg) {
  const StudyResult r = run_study(cfg.study());
  write_markdown(r.table, std::cout);
  announce(emit_table(r.table, cfg.output_dir, "converge", cfg.formats));
  return report_failures(r) ? kNumerical : kOk;
}

int cmd_diagnose(const RunConfig& cfg) {
  struct Job {
    Pairing pairing;
    double kappa, c0;
    int level;
  };
  std::vector<Job> jobs;
  for (Pairing p : cfg.pairings)
    for (double k : cfg.kappas)
      for (double c : cfg.c0s)
        for (int n : cfg.diag_levels) jobs.push_back({p, k, c, n});
  std::vector<std::optional<DiagnosticReport>> out(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) {
      BiotParams bp;
      bp.mu = cfg.mu;
      bp.lambda = cfg.lambda;
      bp.stress_factor = cfg.stress_factor;
      bp.kappa = jobs[i].kappa;
      bp.c0 = jobs[i].c0;
      bp.tau = cfg.tau;
      bp.flux_boundary = cfg.p1_flux_bc;
      try {
        out[i] = diagnose(jobs[i].pairing, jobs[i].level, bp);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::min<int>(cfg.jobs, static_cast<int>(jobs.size())); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<DiagnosticReport> reports;
  int bad = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (out[i]) {
      reports.push_back(*out[i]);
    } else {
      ++bad;
      std::cerr << "diagnose " << pairing_name(jobs[i].pairing) << " h=1/" << jobs[i].level << " failed: " << errors[i]
                << '\n';
    }
  }
  write_markdown(reports, std::cout);
  announce(emit_table(reports, cfg.output_dir, "diagnose", cfg.formats));
  return bad ? kNumerical : kOk;
}

int cmd_verify(const RunConfig& cfg) {
  bool ok = true;
  std::printf("kappa,c0,samples,momentum,darcy,mass,boundary,pressure_mean,status\n");
  for (double k : cfg.kappas)
    for (double c : cfg.c0s) {
      ProblemParams p;
      p.mu = cfg.mu;
      p.lambda = cfg.lambda;
      p.stress_factor = cfg.stress_factor;
      p.kappa = k;
      p.c0 = c;
      p.tau = cfg.tau;
      p.T = cfg.T;
      const VerifyReport r = verify_manufactured(ManufacturedProblem(p), cfg.samples);
      std::printf("%s,%s,%d,%s,%s,%s,%s,%s,%s\n", format_param(k).c_str(), format_param(c).c_str(), r.samples,
                  format_value(r.momentum_residual).c_str(), format_value(r.darcy_residual).c_str(),
                  format_value(r.mass_residual).c_str(), format_value(r.boundary_trace).c_str(),
                  format_value(r.pressure_mean).c_str(), r.passed ? "PASS" : "FAIL");
      if (!r.passed) {
        ok = false;
        std::fprintf(stderr, "worst residual in %s at t=%.3f x=(%.4f, %.4f)\n", r.worst_equation.c_str(), r.worst_t,
                     r.worst_x.x, r.worst_x.y);
      }
    }
  return ok ? kOk : kNumerical;
}

ErrorTable slice(const ErrorTable& all, Pairing p, const std::vector<double>& kappas, const std::vector<double>& c0s,
                 const std::vector<Quantity>& quantities) {
  ErrorTable t;
  t.levels = all.levels;
  for (Quantity q : quantities)
    for (double c : c0s)
      for (double k : kappas)
        if (const ErrorRow* r = all.find(q, p, k, c)) t.rows.push_back(*r);
  return t;
}

int cmd_reproduce(RunConfig cfg) {
  const std::vector<double> kappas{1.0, 1e-4, 1e-8, 1e-12};
  const std::vector<Quantity> w_blocks{Quantity::displacement, Quantity::pressure, Quantity::flux_w};
  int bad = 0;
  for (Pairing p : cfg.pairings) {
    RunConfig run = cfg;
    run.pairings = {p};
    run.kappas = kappas;
    run.c0s = {0.0, 1.0, 1e-12};
    run.quantities = {Quantity::displacement, Quantity::pressure, Quantity::flux_w, Quantity::flux_hdiv};
    const StudyResult r = run_study(run.study());
    bad += report_failures(r);
    const std::string name(pairing_name(p));
    const struct {
      const char* stem;
      std::string title;
      ErrorTable table;
    } tables[] = {
        {"A", name + ", c0 = 0, varying kappa", slice(r.table, p, kappas, {0.0}, w_blocks)},
        {"B", name + ", c0 = 1, varying kappa", slice(r.table, p, kappas, {1.0}, w_blocks)},
        {"C", name + ", kappa = 1, varying c0", slice(r.table, p, {1.0}, {1.0, 1e-12}, w_blocks)},
        {"intro", name + ", c0 = 0, flux in H(div)",
         slice(r.table, p, {1.0, 1e-4, 1e-8}, {0.0},
               {Quantity::displacement, Quantity::pressure, Quantity::flux_hdiv})},
    };
    for (const auto& t : tables) {
      std::cout << "## " << t.title << "\n\n";
      write_markdown(t.table, std::cout);
      std::cout << '\n';
      announce(emit_table(t.table, cfg.output_dir, name + "-" + t.stem, cfg.formats, t.title));
    }
  }
  return bad ? kNumerical : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed finite element solver and stability diagnostics for the three-field Biot equations"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  Flags converge_f, diagnose_f, verify_f, reproduce_f;
  auto* converge = app.add_subcommand("converge", "convergence study over pairings, kappa, c0 and mesh levels");
  auto* diag = app.add_subcommand("diagnose", "containment, inf-sup and Brezzi constants over a grid");
  auto* verify = app.add_subcommand("verify", "check the manufactured solution against finite differences");
  auto* reproduce = app.add_subcommand("reproduce-paper", "canned convergence tables for both pairings");
  add_common(converge, converge_f);
  add_common(diag, diagnose_f);
  add_common(verify, verify_f);
  add_common(reproduce, reproduce_f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*converge) return cmd_converge(resolve(converge_f));
    if (*diag) return cmd_diagnose(resolve(diagnose_f));
    if (*verify) {
      RunConfig base;
      base.kappas = {1.0};
      return cmd_verify(resolve(verify_f, base));
    }
    if (*reproduce) return cmd_reproduce(resolve(reproduce_f));
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const OutputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
