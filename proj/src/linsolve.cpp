#include "biot/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "biot/ordering.hpp"
#include "biot/simd/kernels.hpp"

namespace biot {

namespace {

std::vector<double> ruiz_scaling(const CsrMatrix& k, int sweeps) {
  const std::size_t n = k.rows();
  std::vector<double> s(n, 1.0), rmax(n);
  const auto rp = k.row_ptr();
  const auto ci = k.col_idx();
  const auto v = k.values();
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double m = 0.0;
      for (int p = rp[i]; p < rp[i + 1]; ++p) m = std::max(m, std::abs(s[i] * v[p] * s[ci[p]]));
      rmax[i] = m;
      worst = std::max(worst, std::abs(1.0 - m));
    }
    for (std::size_t i = 0; i < n; ++i)
      if (rmax[i] > 0.0) s[i] /= std::sqrt(rmax[i]);
    if (worst < 1e-3) break;
  }
  return s;
}

// No -1 row may be eliminated before its first +1 neighbour; rows with no
// +1 neighbour go to the end.
std::vector<int> delay_dual_rows(const CsrMatrix& k, const std::vector<int>& order, const std::vector<int>& signs) {
  const std::size_t n = order.size();
  std::vector<int> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[order[i]] = static_cast<int>(i);
  const auto rp = k.row_ptr();
  const auto ci = k.col_idx();
  std::vector<std::pair<double, int>> key(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int node = order[i];
    if (signs[node] > 0) {
      key[i] = {static_cast<double>(i), node};
      continue;
    }
    int first = -1;
    for (int p = rp[node]; p < rp[node + 1]; ++p)
      if (signs[ci[p]] > 0 && (first < 0 || pos[ci[p]] < first)) first = pos[ci[p]];
    key[i] = {first >= 0 ? std::max<double>(i, first + 0.5) : static_cast<double>(n) + i, node};
  }
  std::stable_sort(key.begin(), key.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = key[i].second;
  return out;
}

double inf_norm(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

double relative_residual(const CsrMatrix& k, std::span<const double> x, std::span<const double> b) {
  std::vector<double> r(k.rows());
  k.multiply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  const double denom = k.norm_inf() * inf_norm(x) + inf_norm(b);
  return denom > 0.0 ? inf_norm(r) / denom : 0.0;
}

LdltFactorization::LdltFactorization(const CsrMatrix& k, FactorOptions options) : k_(k), n_(k.rows()) {
  if (k.rows() != k.cols()) throw std::invalid_argument("LdltFactorization: matrix must be square");
  const int n = static_cast<int>(n_);
  norm_k_ = k.norm_inf();
  for (int i = 0; i < n; ++i) {
    bool empty = true;
    for (int p = k.row_ptr()[i]; p < k.row_ptr()[i + 1] && empty; ++p) empty = k.values()[p] == 0.0;
    if (empty) throw SolverError("LdltFactorization: zero row " + std::to_string(i), i);
  }

  std::vector<int> signs = std::move(options.signs);
  if (signs.empty()) {
    signs.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) signs[i] = k.at(i, i) > 0.0 ? 1 : -1;
  } else if (signs.size() != n_) {
    throw std::invalid_argument("LdltFactorization: sign vector has wrong length");
  }

  scale_ = ruiz_scaling(k, options.equilibration_sweeps);
  if (options.ordering == OrderingMethod::automatic && n_ >= 2000) {
    std::vector<int> a = amd_ordering(k);
    std::vector<int> d = nested_dissection_ordering(k);
    if (options.reorder) {
      a = delay_dual_rows(k, a, signs);
      d = delay_dual_rows(k, d, signs);
    }
    perm_ = cholesky_fill(k, d) < cholesky_fill(k, a) ? std::move(d) : std::move(a);
  } else {
    perm_ = fill_reducing_ordering(k, options.ordering);
    if (options.reorder) perm_ = delay_dual_rows(k, perm_, signs);
  }
  std::vector<int> pinv(n_);
  for (int i = 0; i < n; ++i) pinv[perm_[i]] = i;

  // upper triangle of the permuted, scaled matrix, by columns
  const auto rp = k.row_ptr();
  const auto ci = k.col_idx();
  const auto kv = k.values();
  std::vector<int> ap(n_ + 1, 0), ai;
  std::vector<double> ax;
  ai.reserve(k.nnz() / 2 + n_);
  ax.reserve(k.nnz() / 2 + n_);
  for (int j = 0; j < n; ++j) {
    const int oj = perm_[j];
    for (int p = rp[oj]; p < rp[oj + 1]; ++p) {
      const int i = pinv[ci[p]];
      if (i <= j) {
        ai.push_back(i);
        ax.push_back(scale_[ci[p]] * kv[p] * scale_[oj]);
      }
    }
    ap[j + 1] = static_cast<int>(ai.size());
  }

  // elimination tree and column counts
  std::vector<int> parent(n_), flag(n_), lnz(n_);
  for (int kk = 0; kk < n; ++kk) {
    parent[kk] = -1;
    flag[kk] = kk;
    lnz[kk] = 0;
    for (int p = ap[kk]; p < ap[kk + 1]; ++p) {
      for (int i = ai[p]; i < kk && flag[i] != kk; i = parent[i]) {
        if (parent[i] == -1) parent[i] = kk;
        ++lnz[i];
        flag[i] = kk;
      }
    }
  }
  lp_.assign(n_ + 1, 0);
  for (int kk = 0; kk < n; ++kk) lp_[kk + 1] = lp_[kk] + lnz[kk];
  li_.resize(lp_[n]);
  lx_.resize(lp_[n]);
  d_.resize(n_);

  // up-looking numeric factorisation
  std::vector<double> y(n_, 0.0);
  std::vector<int> pattern(n_);
  for (int kk = 0; kk < n; ++kk) {
    y[kk] = 0.0;
    int top = n;
    flag[kk] = kk;
    lnz[kk] = 0;
    for (int p = ap[kk]; p < ap[kk + 1]; ++p) {
      int i = ai[p];
      y[i] += ax[p];
      int len = 0;
      for (; flag[i] != kk; i = parent[i]) {
        pattern[len++] = i;
        flag[i] = kk;
      }
      while (len > 0) pattern[--top] = pattern[--len];
    }
    double dk = y[kk];
    if (signs[perm_[kk]] < 0) dk -= options.regularization;
    y[kk] = 0.0;
    for (; top < n; ++top) {
      const int i = pattern[top];
      const double yi = y[i];
      y[i] = 0.0;
      const int p2 = lp_[i] + lnz[i];
      for (int p = lp_[i]; p < p2; ++p) y[li_[p]] -= lx_[p] * yi;
      const double l = yi / d_[i];
      dk -= l * yi;
      li_[p2] = kk;
      lx_[p2] = l;
      ++lnz[i];
    }
    if (!(std::abs(dk) > options.pivot_tolerance))
      throw SolverError("LdltFactorization: zero pivot at row " + std::to_string(perm_[kk]), perm_[kk]);
    d_[kk] = dk;
    if (dk > 0.0)
      ++inertia_.positive;
    else
      ++inertia_.negative;
  }
}

void LdltFactorization::apply_inverse(std::span<const double> b, std::span<double> x) const {
  const std::size_t n = n_;
  std::vector<double> y(n);
  for (std::size_t j = 0; j < n; ++j) y[j] = scale_[perm_[j]] * b[perm_[j]];
  for (std::size_t j = 0; j < n; ++j) {
    const double yj = y[j];
    if (yj != 0.0)
      for (int p = lp_[j]; p < lp_[j + 1]; ++p) y[li_[p]] -= lx_[p] * yj;
  }
  for (std::size_t j = 0; j < n; ++j) y[j] /= d_[j];
  for (std::size_t j = n; j-- > 0;) {
    double s = y[j];
    for (int p = lp_[j]; p < lp_[j + 1]; ++p) s -= lx_[p] * y[li_[p]];
    y[j] = s;
  }
  for (std::size_t j = 0; j < n; ++j) x[perm_[j]] = scale_[perm_[j]] * y[j];
}

SolveReport LdltFactorization::solve(std::span<const double> b, std::span<double> x, double target,
                                     int max_refinement) const {
  if (b.size() != n_ || x.size() != n_) throw std::invalid_argument("LdltFactorization::solve: dimension mismatch");
  SolveReport rep;
  rep.inertia = inertia_;
  rep.factor_nnz = li_.size();
  apply_inverse(b, x);
  std::vector<double> r(n_), dx(n_);
  const double nb = inf_norm(b);
  auto residual = [&]() {
    k_.multiply(x, r);
    for (std::size_t i = 0; i < n_; ++i) r[i] = b[i] - r[i];
    const double denom = norm_k_ * inf_norm(x) + nb;
    return denom > 0.0 ? inf_norm(r) / denom : 0.0;
  };
  double rel = residual();
  std::vector<double> best(x.begin(), x.end());
  double best_rel = rel;
  int stall = 0;
  for (int it = 0; it < max_refinement && rel > 1e-15; ++it) {
    apply_inverse(r, dx);
    simd::axpy(1.0, dx, x);
    ++rep.refinement_steps;
    rel = residual();
    if (rel < best_rel) {
      stall = rel > 0.5 * best_rel ? stall + 1 : 0;
      best_rel = rel;
      std::copy(x.begin(), x.end(), best.begin());
    } else {
      ++stall;
    }
    if (stall >= 3) break;
  }
  std::copy(best.begin(), best.end(), x.begin());
  rep.relative_residual = best_rel;
  if (!(best_rel <= target))
    throw SolverError("LdltFactorization::solve: relative residual " + std::to_string(best_rel) +
                      " above target after " + std::to_string(rep.refinement_steps) + " refinement steps");
  return rep;
}

std::vector<double> LdltFactorization::solve(std::span<const double> b, SolveReport* report) const {
  std::vector<double> x(n_);
  const SolveReport rep = solve(b, x);
  if (report) *report = rep;
  return x;
}

std::vector<double> factor_solve(const CsrMatrix& k, std::span<const double> b, SolveReport* report,
                                 FactorOptions options) {
  if (k.rows() != b.size()) throw std::invalid_argument("factor_solve: dimension mismatch");
  const LdltFactorization f(k, std::move(options));
  return f.solve(b, report);
}

std::vector<double> to_dense(const CsrMatrix& a) {
  std::vector<double> d(a.rows() * a.cols(), 0.0);
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (int p = rp[i]; p < rp[i + 1]; ++p) d[i * a.cols() + ci[p]] += v[p];
  return d;
}

}  // namespace biot
