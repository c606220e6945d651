#include "biot/assemble.hpp"

#include <stdexcept>
#include <string>

namespace biot {

std::string_view form_name(FormKind kind) {
  switch (kind) {
    case FormKind::a: return "a";
    case FormKind::b_uq: return "b_uq";
    case FormKind::b_wq: return "b_wq";
    case FormKind::c: return "c";
    case FormKind::d: return "d";
    case FormKind::mass: return "mass";
    case FormKind::grad_grad: return "grad_grad";
    case FormKind::div_div: return "div_div";
  }
  return "?";
}

std::string_view pairing_name(Pairing p) {
  return p == Pairing::P2_RT0_DG0 ? "p2-rt0-dg0" : "p2-p1-dg0";
}

std::optional<Pairing> parse_pairing(std::string_view name) {
  if (name == "p2-rt0-dg0") return Pairing::P2_RT0_DG0;
  if (name == "p2-p1-dg0") return Pairing::P2_P1_DG0;
  return std::nullopt;
}

SpaceKind flux_space_kind(Pairing p) { return p == Pairing::P2_RT0_DG0 ? SpaceKind::RT0 : SpaceKind::P1v; }

namespace {

void require(bool ok, FormKind kind, const std::string& what) {
  if (!ok) throw std::invalid_argument("assemble_form(" + std::string(form_name(kind)) + "): " + what);
}

Mat2 sym(const Mat2& g) { return (g + g.transpose()) * 0.5; }

}  // namespace

CsrMatrix assemble_form(FormKind kind, const FunctionSpace& trial, const FunctionSpace& test, const FormParams& params) {
  require(&trial.mesh() == &test.mesh() || trial.mesh().n_div() == test.mesh().n_div(), kind,
          "spaces live on different meshes");
  const bool same = &trial == &test;
  switch (kind) {
    case FormKind::a:
      require(same && trial.vector_valued() && trial.components() == 2, kind, "needs one vector Lagrange space");
      break;
    case FormKind::b_uq:
    case FormKind::b_wq:
      require(trial.vector_valued() && !test.vector_valued(), kind, "needs vector trial and scalar test space");
      break;
    case FormKind::c:
      require(params.kappa > 0.0, kind, "kappa must be positive");
      require(same && trial.vector_valued(), kind, "needs one vector space");
      break;
    case FormKind::d:
      require(params.c0 >= 0.0, kind, "c0 must be nonnegative");
      require(same && !trial.vector_valued(), kind, "needs one scalar space");
      break;
    case FormKind::div_div:
      require(same && trial.vector_valued(), kind, "needs one vector space");
      break;
    case FormKind::mass:
    case FormKind::grad_grad:
      require(same, kind, "needs one space");
      break;
  }

  const Mesh& mesh = trial.mesh();
  const auto& rule = quadrature(params.quadrature_degree);
  const int nt = trial.local_dof_count();
  const int ns = test.local_dof_count();
  TripletBuilder builder(test.dof_count(), trial.dof_count());
  builder.reserve(mesh.num_cells() * nt * ns);

  CellTabulation tt, ts;
  std::vector<double> local(static_cast<std::size_t>(nt) * ns);
  const double mu_eff = params.stress_factor * params.mu;
  for (std::size_t cell = 0; cell < mesh.num_cells(); ++cell) {
    const int ci = static_cast<int>(cell);
    trial.tabulate(ci, rule, tt);
    const CellTabulation* tsp = &tt;
    if (!same) {
      test.tabulate(ci, rule, ts);
      tsp = &ts;
    }
    const CellTabulation& te = *tsp;
    std::fill(local.begin(), local.end(), 0.0);
    for (int q = 0; q < tt.nq; ++q) {
      const double w = tt.weights[q];
      const std::size_t bt = static_cast<std::size_t>(q) * nt;
      const std::size_t bs = static_cast<std::size_t>(q) * ns;
      for (int i = 0; i < ns; ++i) {
        double* row = local.data() + static_cast<std::size_t>(i) * nt;
        switch (kind) {
          case FormKind::a: {
            const Mat2 ei = sym(te.v_grad[bs + i]);
            const double di = te.v_div[bs + i];
            for (int j = 0; j < nt; ++j)
              row[j] += w * (mu_eff * sym(tt.v_grad[bt + j]).ddot(ei) + params.lambda * tt.v_div[bt + j] * di);
            break;
          }
          case FormKind::b_uq:
          case FormKind::b_wq: {
            const double qi = te.s_value[bs + i];
            for (int j = 0; j < nt; ++j) row[j] += w * tt.v_div[bt + j] * qi;
            break;
          }
          case FormKind::c:
          case FormKind::mass:
            if (tt.vector_valued) {
              const double s = kind == FormKind::c ? 1.0 / params.kappa : 1.0;
              for (int j = 0; j < nt; ++j) row[j] += w * s * tt.v_value[bt + j].dot(te.v_value[bs + i]);
            } else {
              for (int j = 0; j < nt; ++j) row[j] += w * tt.s_value[bt + j] * te.s_value[bs + i];
            }
            break;
          case FormKind::d:
            for (int j = 0; j < nt; ++j) row[j] += w * params.c0 * tt.s_value[bt + j] * te.s_value[bs + i];
            break;
          case FormKind::grad_grad:
            if (tt.vector_valued) {
              for (int j = 0; j < nt; ++j) row[j] += w * tt.v_grad[bt + j].ddot(te.v_grad[bs + i]);
            } else {
              for (int j = 0; j < nt; ++j) row[j] += w * tt.s_grad[bt + j].dot(te.s_grad[bs + i]);
            }
            break;
          case FormKind::div_div:
            for (int j = 0; j < nt; ++j) row[j] += w * tt.v_div[bt + j] * te.v_div[bs + i];
            break;
        }
      }
    }
    const auto dt = trial.cell_dofs(ci);
    const auto ds = test.cell_dofs(ci);
    for (int i = 0; i < ns; ++i)
      for (int j = 0; j < nt; ++j) builder.add(ds[i], dt[j], local[static_cast<std::size_t>(i) * nt + j]);
  }
  const bool symmetric = same && kind != FormKind::b_uq && kind != FormKind::b_wq;
  return builder.build(symmetric);
}

std::vector<int> BiotSystem::block_signs() const {
  std::vector<int> s(dimension, 1);
  for (std::size_t i = offset_p; i < dimension; ++i) s[i] = -1;
  return s;
}

BiotSystem assemble_biot_step(Pairing pairing, std::shared_ptr<const Mesh> mesh, const BiotParams& params,
                              bool use_mean_constraint) {
  if (!(params.kappa > 0.0)) throw std::invalid_argument("assemble_biot_step: kappa must be positive");
  if (!(params.tau > 0.0)) throw std::invalid_argument("assemble_biot_step: tau must be positive");
  if (!(params.c0 >= 0.0)) throw std::invalid_argument("assemble_biot_step: c0 must be nonnegative");

  BiotSystem sys;
  sys.pairing = pairing;
  sys.params = params;
  sys.mean_constraint = use_mean_constraint;
  sys.mesh = mesh;
  sys.U = build_space(SpaceKind::P2v, mesh);
  sys.W = build_space(flux_space_kind(pairing), mesh, params.flux_boundary);
  sys.Q = build_space(SpaceKind::DG0, mesh);

  FormParams fp;
  fp.mu = params.mu;
  fp.lambda = params.lambda;
  fp.stress_factor = params.stress_factor;
  fp.kappa = params.kappa;
  fp.c0 = params.c0;
  sys.A = assemble_form(FormKind::a, *sys.U, *sys.U, fp);
  sys.Bu = assemble_form(FormKind::b_uq, *sys.U, *sys.Q, fp);
  sys.Bz = assemble_form(FormKind::b_wq, *sys.W, *sys.Q, fp);
  sys.C = assemble_form(FormKind::c, *sys.W, *sys.W, fp);
  sys.D = assemble_form(FormKind::d, *sys.Q, *sys.Q, fp);
  sys.m.resize(mesh->num_cells());
  for (std::size_t c = 0; c < mesh->num_cells(); ++c) sys.m[c] = std::abs(mesh->signed_area(static_cast<int>(c)));

  const std::size_t nu = sys.U->dof_count(), nw = sys.W->dof_count(), nq = sys.Q->dof_count();
  sys.offset_u = 0;
  sys.offset_w = nu;
  sys.offset_p = nu + nw;
  sys.offset_lambda = nu + nw + nq;
  sys.dimension = sys.offset_lambda + (use_mean_constraint ? 1 : 0);

  const double tau = params.tau;
  TripletBuilder kb(sys.dimension, sys.dimension);
  kb.reserve(sys.A.nnz() + sys.C.nnz() + 2 * (sys.Bu.nnz() + sys.Bz.nnz()) + sys.D.nnz() + 2 * nq + nu + nw);
  const int ou = 0, ow = static_cast<int>(nu), op = static_cast<int>(nu + nw);
  kb.add_matrix(sys.A, ou, ou);
  kb.add_matrix(sys.C, ow, ow, tau);
  kb.add_matrix(sys.Bu, op, ou);
  kb.add_matrix(sys.Bu, ou, op, 1.0, true);
  kb.add_matrix(sys.Bz, op, ow, tau);
  kb.add_matrix(sys.Bz, ow, op, tau, true);
  kb.add_matrix(sys.D, op, op, -1.0);
  if (use_mean_constraint) {
    const int ol = static_cast<int>(sys.offset_lambda);
    for (std::size_t c = 0; c < nq; ++c) {
      kb.add(op + static_cast<int>(c), ol, sys.m[c]);
      kb.add(ol, op + static_cast<int>(c), sys.m[c]);
    }
  }
  sys.K = kb.build(true);

  for (int d : sys.U->constrained_dofs()) sys.constrained.push_back(ou + d);
  for (int d : sys.W->constrained_dofs()) sys.constrained.push_back(ow + d);
  apply_essential_bcs(sys.K, {}, sys.constrained);
  sys.K.set_symmetric(true);
  return sys;
}

std::vector<double> assemble_load(const BiotSystem& sys, const BodyLoads& loads, std::span<const double> u_prev,
                                  std::span<const double> p_prev) {
  const FunctionSpace& U = *sys.U;
  const FunctionSpace& W = *sys.W;
  const FunctionSpace& Q = *sys.Q;
  if (!u_prev.empty() && u_prev.size() != U.dof_count())
    throw std::invalid_argument("assemble_load: previous displacement has wrong length");
  if (!p_prev.empty() && p_prev.size() != Q.dof_count())
    throw std::invalid_argument("assemble_load: previous pressure has wrong length");

  std::vector<double> rhs(sys.dimension, 0.0);
  const auto& rule = quadrature(8);
  const double tau = sys.params.tau;
  CellTabulation tab;
  const Mesh& mesh = *sys.mesh;
  for (std::size_t cell = 0; cell < mesh.num_cells(); ++cell) {
    const int ci = static_cast<int>(cell);
    if (loads.f) {
      U.tabulate(ci, rule, tab);
      const auto dofs = U.cell_dofs(ci);
      for (int q = 0; q < tab.nq; ++q) {
        const Vec2 fq = loads.f(tab.points[q]) * tab.weights[q];
        for (int i = 0; i < tab.ndofs; ++i)
          rhs[sys.offset_u + dofs[i]] += fq.dot(tab.v_value[static_cast<std::size_t>(q) * tab.ndofs + i]);
      }
    }
    if (loads.g) {
      W.tabulate(ci, rule, tab);
      const auto dofs = W.cell_dofs(ci);
      for (int q = 0; q < tab.nq; ++q) {
        const Vec2 gq = loads.g(tab.points[q]) * (tau * tab.weights[q]);
        for (int i = 0; i < tab.ndofs; ++i)
          rhs[sys.offset_w + dofs[i]] += gq.dot(tab.v_value[static_cast<std::size_t>(q) * tab.ndofs + i]);
      }
    }
    if (loads.s) {
      Q.tabulate(ci, rule, tab);
      const auto dofs = Q.cell_dofs(ci);
      for (int q = 0; q < tab.nq; ++q) {
        const double sq = loads.s(tab.points[q]) * tau * tab.weights[q];
        for (int i = 0; i < tab.ndofs; ++i)
          rhs[sys.offset_p + dofs[i]] += sq * tab.s_value[static_cast<std::size_t>(q) * tab.ndofs + i];
      }
    }
  }
  if (!u_prev.empty()) {
    const auto bu = sys.Bu.multiply(u_prev);
    for (std::size_t i = 0; i < bu.size(); ++i) rhs[sys.offset_p + i] += bu[i];
  }
  if (!p_prev.empty()) {
    const auto dp = sys.D.multiply(p_prev);
    for (std::size_t i = 0; i < dp.size(); ++i) rhs[sys.offset_p + i] -= dp[i];
  }
  for (int d : sys.constrained) rhs[d] = 0.0;
  return rhs;
}

}  // namespace biot
