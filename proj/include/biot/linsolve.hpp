#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "biot/ordering.hpp"
#include "biot/sparse.hpp"

namespace biot {

struct Inertia {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, long index = -1) : std::runtime_error(what), index_(index) {}
  /// Offending row of the original matrix, or -1.
  long index() const { return index_; }

 private:
  long index_;
};

struct FactorOptions {
  /// +1 / -1 per row. Rows marked -1 get the quasi-definite shift and are
  /// kept behind their first +1 neighbour. Empty: taken from the diagonal sign.
  std::vector<int> signs;
  /// Shift applied to -1 rows of the equilibrated matrix.
  double regularization = 1e-10;
  /// Pivots below this magnitude (equilibrated scale) are treated as zero.
  double pivot_tolerance = 1e-14;
  int equilibration_sweeps = 12;
  bool reorder = true;
  OrderingMethod ordering = OrderingMethod::automatic;
};

struct SolveReport {
  double relative_residual = 0.0;
  int refinement_steps = 0;
  Inertia inertia;
  std::size_t factor_nnz = 0;
};

/// Sparse LDL^T of a symmetric (possibly indefinite) matrix after symmetric
/// equilibration, fill-reducing ordering and a small quasi-definite shift.
/// solve() refines against the unshifted matrix.
class LdltFactorization {
 public:
  explicit LdltFactorization(const CsrMatrix& k, FactorOptions options = {});

  std::size_t dimension() const { return n_; }
  Inertia inertia() const { return inertia_; }
  std::size_t factor_nnz() const { return li_.size(); }
  std::span<const int> permutation() const { return perm_; }

  /// One pass with the factors (no refinement).
  void apply_inverse(std::span<const double> b, std::span<double> x) const;
  /// Solve with iterative refinement; throws SolverError if the target is missed.
  SolveReport solve(std::span<const double> b, std::span<double> x, double target = 1e-9,
                    int max_refinement = 40) const;
  std::vector<double> solve(std::span<const double> b, SolveReport* report = nullptr) const;

 private:
  CsrMatrix k_;
  std::size_t n_ = 0;
  std::vector<double> scale_;
  std::vector<int> perm_;  // perm_[new] = old
  std::vector<int> lp_, li_;
  std::vector<double> lx_, d_;
  Inertia inertia_;
  double norm_k_ = 0.0;
};

/// ||Kx - b||_inf / (||K||_inf ||x||_inf + ||b||_inf)
double relative_residual(const CsrMatrix& k, std::span<const double> x, std::span<const double> b);

std::vector<double> factor_solve(const CsrMatrix& k, std::span<const double> b, SolveReport* report = nullptr,
                                 FactorOptions options = {});

struct EigenOptions {
  std::size_t dense_limit = 2000;
  int max_iterations = 500;
  double tolerance = 1e-8;
  /// Shift for the sparse path (A - shift M is factored); must keep it definite.
  double shift = -1e-3;
};

struct EigenResult {
  std::vector<double> values;                // ascending
  std::vector<std::vector<double>> vectors;  // M-normalised
  double max_residual = 0.0;                 // ||Ax - lambda Mx|| in the M^-1 norm
  int iterations = 0;
};

class EigenError : public std::runtime_error {
 public:
  EigenError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

/// k smallest eigenpairs of A x = lambda M x on the M-orthogonal complement of
/// `deflation`. A symmetric semidefinite, M symmetric positive definite.
EigenResult smallest_generalized_eigenpairs(const CsrMatrix& a, const CsrMatrix& m, int k,
                                            const std::vector<std::vector<double>>& deflation = {},
                                            const EigenOptions& options = {});

/// Whole spectrum (ascending) of the dense pencil on the deflated complement.
std::vector<double> generalized_spectrum(const std::vector<double>& a_dense, const std::vector<double>& m_dense,
                                         std::size_t n, const std::vector<std::vector<double>>& deflation = {});

/// Row-major dense copy.
std::vector<double> to_dense(const CsrMatrix& a);

}  // namespace biot
