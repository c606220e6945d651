#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "biot/simd/kernels.hpp"

namespace biot {

/// Compressed sparse row matrix. Column indices are sorted within each row.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(std::size_t rows, std::size_t cols, std::vector<int> row_ptr, std::vector<int> col_idx,
            std::vector<double> values, bool symmetric = false);

  static CsrMatrix identity(std::size_t n);
  static CsrMatrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }
  bool symmetric() const { return symmetric_; }
  void set_symmetric(bool s) { symmetric_ = s; }

  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Stored value at (i, j), 0 if structurally absent.
  double at(std::size_t i, std::size_t j) const;

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;

  CsrMatrix transpose() const;
  CsrMatrix scaled(double s) const;
  double max_abs() const;
  /// Maximum absolute row sum.
  double norm_inf() const;
  /// max |A - A^T| / max |A|
  double symmetry_defect() const;
  std::vector<double> diagonal_values() const;
  /// Remove explicitly stored zeros.
  void prune();

  simd::CsrView view() const { return {rows_, row_ptr_.data(), col_idx_.data(), values_.data()}; }

  /// "i j value" lines (0-based), preceded by a "rows cols nnz" header.
  void write_coordinates(std::ostream& os) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
  bool symmetric_ = false;
};

/// Accumulates (i, j, v) contributions; duplicates are summed on build().
class TripletBuilder {
 public:
  TripletBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  void reserve(std::size_t n) { entries_.reserve(n); }
  void add(int i, int j, double v);
  /// Add `scale * M` (or its transpose) with its (0,0) entry at (row_offset, col_offset).
  void add_matrix(const CsrMatrix& m, int row_offset, int col_offset, double scale = 1.0, bool transpose = false);

  CsrMatrix build(bool symmetric = false) const;

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  struct Entry {
    int i;
    int j;
    double v;
  };
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Entry> entries_;
};

}  // namespace biot
