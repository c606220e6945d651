#include "biot/diagnostics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace biot {

std::string_view darcy_norms_name(DarcyNorms n) {
  switch (n) {
    case DarcyNorms::standard: return "standard";
    case DarcyNorms::A: return "A";
    case DarcyNorms::B: return "B";
  }
  return "?";
}

std::optional<DarcyNorms> parse_darcy_norms(std::string_view name) {
  if (name == "standard") return DarcyNorms::standard;
  if (name == "A") return DarcyNorms::A;
  if (name == "B") return DarcyNorms::B;
  return std::nullopt;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kZeroEigen = 1e-10;

std::vector<int> free_dofs(const FunctionSpace& s) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(s.dof_count()); ++i)
    if (!s.is_constrained(i)) out.push_back(i);
  return out;
}

std::vector<int> all_dofs(const FunctionSpace& s) {
  std::vector<int> out(s.dof_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<int>(i);
  return out;
}

MatrixXd dense(const CsrMatrix& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::vector<int> col_pos(a.cols(), -1);
  for (std::size_t j = 0; j < cols.size(); ++j) col_pos[cols[j]] = static_cast<int>(j);
  MatrixXd out = MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int p = rp[rows[i]]; p < rp[rows[i] + 1]; ++p)
      if (col_pos[ci[p]] >= 0) out(static_cast<Eigen::Index>(i), col_pos[ci[p]]) = v[p];
  return out;
}

// Orthonormal basis of the Euclidean complement of `v`.
MatrixXd complement_of(const VectorXd& v) {
  Eigen::HouseholderQR<MatrixXd> qr(v);
  const MatrixXd q = qr.householderQ() * MatrixXd::Identity(v.size(), v.size());
  return q.rightCols(v.size() - 1);
}

// Ascending eigenvalues of a x = lambda b x, b positive definite.
VectorXd pencil(const MatrixXd& a, const MatrixXd& b) {
  if (a.rows() == 0) return VectorXd();
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(a, b, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense generalized eigensolver failed");
  return es.eigenvalues();
}

InfSup infsup_from(const VectorXd& ev) {
  InfSup r;
  if (ev.size() == 0) throw std::runtime_error("inf-sup: empty pressure space after deflation");
  const double top = std::max(ev(ev.size() - 1), 0.0);
  Eigen::Index k = 0;
  while (k < ev.size() && ev(k) <= kZeroEigen * top) ++k;
  r.spurious_modes = static_cast<int>(k);
  r.beta = k < ev.size() ? std::sqrt(ev(k)) : 0.0;
  return r;
}

// B G^-1 B^T restricted to mean-free pressures, against the pressure Gram mq.
VectorXd schur_spectrum(const MatrixXd& b, const MatrixXd& g, const MatrixXd& mq) {
  const Eigen::LLT<MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) throw std::runtime_error("inf-sup: flux/velocity Gram is not definite");
  const MatrixXd s = b * llt.solve(b.transpose());
  const MatrixXd p = complement_of(mq * VectorXd::Ones(mq.rows()));
  return pencil(p.transpose() * s * p, p.transpose() * mq * p);
}

void require_dg0(const FunctionSpace& Q, const char* who) {
  if (Q.kind() != SpaceKind::DG0) throw std::invalid_argument(std::string(who) + ": pressure space must be DG0");
}

}  // namespace

double containment_residual(const FunctionSpace& W, const FunctionSpace& Q) {
  require_dg0(Q, "containment_residual");
  if (!W.vector_valued()) throw std::invalid_argument("containment_residual: flux space must be vector valued");
  if (W.mesh().num_cells() != Q.mesh().num_cells())
    throw std::invalid_argument("containment_residual: spaces live on different meshes");
  std::vector<double> div2(W.dof_count(), 0.0), res2(W.dof_count(), 0.0);
  const auto& rule = quadrature(8);
  CellTabulation tab;
  for (std::size_t cell = 0; cell < W.mesh().num_cells(); ++cell) {
    const int c = static_cast<int>(cell);
    W.tabulate(c, rule, tab);
    const auto dofs = W.cell_dofs(c);
    double area = 0.0;
    for (int q = 0; q < tab.nq; ++q) area += tab.weights[q];
    for (int i = 0; i < tab.ndofs; ++i) {
      double mean = 0.0;
      for (int q = 0; q < tab.nq; ++q) mean += tab.weights[q] * tab.v_div[q * tab.ndofs + i];
      mean /= area;
      double d2 = 0.0, r2 = 0.0;
      for (int q = 0; q < tab.nq; ++q) {
        const double d = tab.v_div[q * tab.ndofs + i];
        d2 += tab.weights[q] * d * d;
        r2 += tab.weights[q] * (d - mean) * (d - mean);
      }
      div2[dofs[i]] += d2;
      res2[dofs[i]] += r2;
    }
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < div2.size(); ++i)
    if (!W.is_constrained(static_cast<int>(i)))
      worst = std::max(worst, std::sqrt(res2[i]) / std::max(std::sqrt(div2[i]), 1e-14));
  return worst;
}

InfSup stokes_infsup(const FunctionSpace& U, const FunctionSpace& Q) {
  require_dg0(Q, "stokes_infsup");
  if (U.components() != 2) throw std::invalid_argument("stokes_infsup: velocity space must be vector Lagrange");
  const auto fu = free_dofs(U);
  const auto fq = all_dofs(Q);
  if (fu.empty()) throw std::invalid_argument("stokes_infsup: no free velocity unknowns");
  const MatrixXd g =
      dense(assemble_form(FormKind::mass, U, U), fu, fu) + dense(assemble_form(FormKind::grad_grad, U, U), fu, fu);
  const MatrixXd b = dense(assemble_form(FormKind::b_uq, U, Q), fq, fu);
  const MatrixXd mq = dense(assemble_form(FormKind::mass, Q, Q), fq, fq);
  return infsup_from(schur_spectrum(b, g, mq));
}

std::vector<InfSup> stokes_infsup(SpaceKind velocity, std::span<const int> levels) {
  std::vector<InfSup> out;
  for (int n : levels) {
    if (n < 1 || n > 16) throw std::invalid_argument("stokes_infsup: levels must lie in [1, 16]");
    auto mesh = std::make_shared<const Mesh>(Mesh::unit_square(n));
    out.push_back(stokes_infsup(*build_space(velocity, mesh), *build_space(SpaceKind::DG0, mesh)));
  }
  return out;
}

DarcyConstants darcy_brezzi(const FunctionSpace& W, const FunctionSpace& Q, DarcyNorms norms, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("darcy_brezzi: kappa must be positive");
  require_dg0(Q, "darcy_brezzi");
  const auto fw = free_dofs(W);
  const auto fq = all_dofs(Q);
  const MatrixXd mw = dense(assemble_form(FormKind::mass, W, W), fw, fw);
  const MatrixXd dw = dense(assemble_form(FormKind::div_div, W, W), fw, fw);
  const MatrixXd mq = dense(assemble_form(FormKind::mass, Q, Q), fq, fq);
  const MatrixXd b = dense(assemble_form(FormKind::b_wq, W, Q), fq, fw);
  const MatrixXd c = mw / kappa;

  MatrixXd gw, gq;
  switch (norms) {
    case DarcyNorms::standard:
      gw = mw + dw;
      gq = mq;
      break;
    case DarcyNorms::A:
      gw = mw / kappa + dw;
      gq = mq;
      break;
    case DarcyNorms::B:
      gw = (mw + dw) / kappa;
      gq = mq * kappa;
      break;
  }

  DarcyConstants r;
  r.norms = norms;
  const VectorXd ev = schur_spectrum(b, gw, gq);
  const InfSup is = infsup_from(ev);
  r.beta = is.beta;
  r.spurious_modes = is.spurious_modes;
  r.c_b = std::sqrt(std::max(ev(ev.size() - 1), 0.0));
  r.c_c = pencil(c, gw).maxCoeff();

  Eigen::BDCSVD<MatrixXd> svd(b, Eigen::ComputeFullV);
  const VectorXd sv = svd.singularValues();
  const double tol = kZeroEigen * (sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol) ++rank;
  const Eigen::Index nk = b.cols() - rank;
  if (nk == 0) {
    r.alpha_kernel = std::numeric_limits<double>::infinity();
  } else {
    const MatrixXd z = svd.matrixV().rightCols(nk);
    r.alpha_kernel = pencil(z.transpose() * c * z, z.transpose() * gw * z).minCoeff();
  }
  return r;
}

double composite_infsup(Pairing pairing, int n_div, const BiotParams& params) {
  if (n_div < 1 || n_div > 8) throw std::invalid_argument("composite_infsup: n_div must lie in [1, 8]");
  auto mesh = std::make_shared<const Mesh>(Mesh::unit_square(n_div));
  const BiotSystem sys = assemble_biot_step(pairing, mesh, params, false);
  const auto fu = free_dofs(*sys.U);
  const auto fw = free_dofs(*sys.W);
  const auto fq = all_dofs(*sys.Q);
  const Eigen::Index nu = static_cast<Eigen::Index>(fu.size());
  const Eigen::Index nw = static_cast<Eigen::Index>(fw.size());
  const Eigen::Index nq = static_cast<Eigen::Index>(fq.size());
  const double tau = params.tau;

  MatrixXd k = MatrixXd::Zero(nu + nw + nq, nu + nw + nq);
  k.block(0, 0, nu, nu) = dense(sys.A, fu, fu);
  k.block(nu, nu, nw, nw) = tau * dense(sys.C, fw, fw);
  const MatrixXd bu = dense(sys.Bu, fq, fu);
  const MatrixXd bz = tau * dense(sys.Bz, fq, fw);
  k.block(nu + nw, 0, nq, nu) = bu;
  k.block(0, nu + nw, nu, nq) = bu.transpose();
  k.block(nu + nw, nu, nq, nw) = bz;
  k.block(nu, nu + nw, nw, nq) = bz.transpose();
  k.block(nu + nw, nu + nw, nq, nq) = -dense(sys.D, fq, fq);

  const FunctionSpace& U = *sys.U;
  const FunctionSpace& W = *sys.W;
  const FunctionSpace& Q = *sys.Q;
  MatrixXd g = MatrixXd::Zero(nu + nw + nq, nu + nw + nq);
  g.block(0, 0, nu, nu) =
      dense(assemble_form(FormKind::mass, U, U), fu, fu) + dense(assemble_form(FormKind::grad_grad, U, U), fu, fu);
  g.block(nu, nu, nw, nw) = (tau / params.kappa) * dense(assemble_form(FormKind::mass, W, W), fw, fw) +
                            tau * tau * dense(assemble_form(FormKind::div_div, W, W), fw, fw);
  g.block(nu + nw, nu + nw, nq, nq) = dense(assemble_form(FormKind::mass, Q, Q), fq, fq);

  VectorXd area(nq);
  for (Eigen::Index i = 0; i < nq; ++i) area(i) = sys.m[static_cast<std::size_t>(i)];
  MatrixXd p = MatrixXd::Zero(nu + nw + nq, nu + nw + nq - 1);
  p.topLeftCorner(nu + nw, nu + nw).setIdentity();
  p.bottomRightCorner(nq, nq - 1) = complement_of(area);

  const MatrixXd kr = p.transpose() * k * p;
  const MatrixXd gr = p.transpose() * g * p;
  const Eigen::LLT<MatrixXd> llt(gr);
  if (llt.info() != Eigen::Success) throw std::runtime_error("composite_infsup: norm Gram is not definite");
  const MatrixXd l = llt.matrixL();
  const MatrixXd left = l.triangularView<Eigen::Lower>().solve(kr);
  const MatrixXd sym = l.triangularView<Eigen::Lower>().solve(left.transpose());
  const Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (sym + sym.transpose()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("composite_infsup: eigensolver failed");
  return es.eigenvalues().cwiseAbs().minCoeff();
}

DiagnosticReport diagnose(Pairing pairing, int n_div, const BiotParams& params) {
  if (n_div < 1 || n_div > 16) throw std::invalid_argument("diagnose: n_div must lie in [1, 16]");
  auto mesh = std::make_shared<const Mesh>(Mesh::unit_square(n_div));
  const auto U = build_space(SpaceKind::P2v, mesh);
  const auto W = build_space(flux_space_kind(pairing), mesh, params.flux_boundary);
  const auto Q = build_space(SpaceKind::DG0, mesh);
  DiagnosticReport r;
  r.pairing = pairing;
  r.level = n_div;
  r.kappa = params.kappa;
  r.c0 = params.c0;
  r.containment = containment_residual(*W, *Q);
  r.stokes = stokes_infsup(*U, *Q);
  for (DarcyNorms n : {DarcyNorms::standard, DarcyNorms::A, DarcyNorms::B})
    r.darcy.push_back(darcy_brezzi(*W, *Q, n, params.kappa));
  r.gamma = composite_infsup(pairing, std::min(n_div, 8), params);
  return r;
}

}  // namespace biot
