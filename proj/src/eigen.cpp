#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "biot/linsolve.hpp"

namespace biot {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd dense(const CsrMatrix& a) {
  MatrixXd d = MatrixXd::Zero(a.rows(), a.cols());
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (int p = rp[i]; p < rp[i + 1]; ++p) d(i, ci[p]) += v[p];
  return d;
}

VectorXd apply(const CsrMatrix& a, const VectorXd& x) {
  VectorXd y(a.rows());
  a.multiply(std::span<const double>(x.data(), x.size()), std::span<double>(y.data(), y.size()));
  return y;
}

// M-orthonormal basis of the deflation span (columns); drops dependent vectors.
MatrixXd m_orthonormalize(const std::vector<std::vector<double>>& vecs, const std::function<VectorXd(const VectorXd&)>& mop,
                          std::size_t n) {
  MatrixXd q(n, 0);
  for (const auto& v : vecs) {
    if (v.size() != n) throw std::invalid_argument("deflation vector has wrong length");
    VectorXd x = Eigen::Map<const VectorXd>(v.data(), n);
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < q.cols(); ++j) x -= q.col(j) * q.col(j).dot(mop(x));
    const double nrm = std::sqrt(std::max(0.0, x.dot(mop(x))));
    if (nrm <= 1e-14) continue;
    q.conservativeResize(Eigen::NoChange, q.cols() + 1);
    q.col(q.cols() - 1) = x / nrm;
  }
  return q;
}

struct Reduced {
  MatrixXd z;  // basis of the M-orthogonal complement
  MatrixXd a, m;
};

Reduced reduce(const MatrixXd& a, const MatrixXd& m, const std::vector<std::vector<double>>& deflation) {
  const std::size_t n = a.rows();
  auto mop = [&](const VectorXd& x) -> VectorXd { return m * x; };
  const MatrixXd y = m_orthonormalize(deflation, mop, n);
  Reduced r;
  if (y.cols() == 0) {
    r.z = MatrixXd::Identity(n, n);
    r.a = a;
    r.m = m;
  } else {
    const MatrixXd c = m * y;
    Eigen::HouseholderQR<MatrixXd> qr(c);
    const MatrixXd qfull = qr.householderQ() * MatrixXd::Identity(n, n);
    r.z = qfull.rightCols(n - y.cols());
    r.a = r.z.transpose() * a * r.z;
    r.m = r.z.transpose() * m * r.z;
  }
  r.a = 0.5 * (r.a + r.a.transpose()).eval();
  r.m = 0.5 * (r.m + r.m.transpose()).eval();
  return r;
}

EigenResult dense_path(const CsrMatrix& a_s, const CsrMatrix& m_s, int k,
                       const std::vector<std::vector<double>>& deflation) {
  const MatrixXd a = dense(a_s), m = dense(m_s);
  const Reduced r = reduce(a, m, deflation);
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(r.a, r.m);
  if (es.info() != Eigen::Success) throw EigenError("dense generalized eigensolver failed", INFINITY);
  const Eigen::LLT<MatrixXd> mchol(m);
  EigenResult out;
  const int count = std::min<int>(k, static_cast<int>(r.z.cols()));
  for (int i = 0; i < count; ++i) {
    const double lam = es.eigenvalues()(i);
    const VectorXd x = r.z * es.eigenvectors().col(i);
    const VectorXd res = a * x - lam * (m * x);
    const double rn = std::sqrt(std::max(0.0, res.dot(mchol.solve(res))));
    out.max_residual = std::max(out.max_residual, rn);
    out.values.push_back(lam);
    out.vectors.emplace_back(x.data(), x.data() + x.size());
  }
  return out;
}

EigenResult sparse_path(const CsrMatrix& a, const CsrMatrix& m, int k, const std::vector<std::vector<double>>& deflation,
                        const EigenOptions& opt) {
  const std::size_t n = a.rows();
  const double shift = opt.shift * std::max(1.0, a.norm_inf() / std::max(m.norm_inf(), 1e-300));
  TripletBuilder sb(n, n);
  sb.add_matrix(a, 0, 0);
  sb.add_matrix(m, 0, 0, -shift);
  const CsrMatrix shifted = sb.build(true);
  FactorOptions fo;
  fo.signs.assign(n, 1);
  fo.reorder = false;
  const LdltFactorization fa(shifted, fo);
  const LdltFactorization fm(m, fo);

  auto mop = [&](const VectorXd& x) { return apply(m, x); };
  auto minv = [&](const VectorXd& r) {
    VectorXd y(n);
    fm.apply_inverse(std::span<const double>(r.data(), n), std::span<double>(y.data(), n));
    return y;
  };
  const MatrixXd q = m_orthonormalize(deflation, mop, n);
  auto deflate = [&](VectorXd& x) {
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < q.cols(); ++j) x -= q.col(j) * q.col(j).dot(mop(x));
  };

  const std::size_t avail = n - q.cols();
  const int p = static_cast<int>(std::min<std::size_t>(avail, std::max(2 * k, k + 8)));
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  MatrixXd x(n, p);
  for (int j = 0; j < p; ++j)
    for (std::size_t i = 0; i < n; ++i) x(i, j) = nd(rng);

  EigenResult out;
  double best = INFINITY;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    MatrixXd y(n, p);
    for (int j = 0; j < p; ++j) {
      VectorXd rhs = mop(x.col(j));
      VectorXd col(n);
      fa.apply_inverse(std::span<const double>(rhs.data(), n), std::span<double>(col.data(), n));
      deflate(col);
      y.col(j) = col;
    }
    MatrixXd my(n, p), ay(n, p);
    for (int j = 0; j < p; ++j) {
      my.col(j) = mop(y.col(j));
      ay.col(j) = apply(a, y.col(j));
    }
    MatrixXd ar = y.transpose() * ay, mr = y.transpose() * my;
    ar = 0.5 * (ar + ar.transpose()).eval();
    mr = 0.5 * (mr + mr.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(ar, mr);
    if (es.info() != Eigen::Success) throw EigenError("Rayleigh-Ritz step failed", best);
    x = y * es.eigenvectors();
    double worst = 0.0;
    for (int i = 0; i < k; ++i) {
      const double lam = es.eigenvalues()(i);
      const VectorXd res = apply(a, x.col(i)) - lam * mop(x.col(i));
      const double rn = std::sqrt(std::max(0.0, res.dot(minv(res))));
      worst = std::max(worst, rn / std::max(1.0, std::abs(lam)));
    }
    best = std::min(best, worst);
    if (worst <= opt.tolerance) {
      out.iterations = it;
      for (int i = 0; i < k; ++i) {
        const double lam = es.eigenvalues()(i);
        const VectorXd res = apply(a, x.col(i)) - lam * mop(x.col(i));
        out.max_residual = std::max(out.max_residual, std::sqrt(std::max(0.0, res.dot(minv(res)))));
        out.values.push_back(lam);
        out.vectors.emplace_back(x.col(i).data(), x.col(i).data() + n);
      }
      return out;
    }
  }
  throw EigenError("subspace iteration did not converge; best residual " + std::to_string(best), best);
}

}  // namespace

EigenResult smallest_generalized_eigenpairs(const CsrMatrix& a, const CsrMatrix& m, int k,
                                            const std::vector<std::vector<double>>& deflation,
                                            const EigenOptions& options) {
  if (a.rows() != a.cols() || m.rows() != m.cols() || a.rows() != m.rows())
    throw std::invalid_argument("smallest_generalized_eigenpairs: A and M must be square and of equal size");
  if (k < 1) throw std::invalid_argument("smallest_generalized_eigenpairs: k must be positive");
  if (a.rows() <= options.dense_limit) return dense_path(a, m, k, deflation);
  return sparse_path(a, m, k, deflation, options);
}

std::vector<double> generalized_spectrum(const std::vector<double>& a_dense, const std::vector<double>& m_dense,
                                         std::size_t n, const std::vector<std::vector<double>>& deflation) {
  if (a_dense.size() != n * n || m_dense.size() != n * n)
    throw std::invalid_argument("generalized_spectrum: dense matrices have wrong size");
  const MatrixXd a = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(a_dense.data(), n, n);
  const MatrixXd m = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(m_dense.data(), n, n);
  const Reduced r = reduce(a, m, deflation);
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(r.a, r.m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw EigenError("dense generalized eigensolver failed", INFINITY);
  const VectorXd& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace biot
