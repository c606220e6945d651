#include "biot/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace biot {

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols, std::vector<int> row_ptr, std::vector<int> col_idx,
                     std::vector<double> values, bool symmetric)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)),
      symmetric_(symmetric) {
  if (row_ptr_.size() != rows_ + 1 || col_idx_.size() != values_.size() ||
      static_cast<std::size_t>(row_ptr_.back()) != values_.size())
    throw std::invalid_argument("CsrMatrix: inconsistent CSR arrays");
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
  std::vector<double> ones(n, 1.0);
  return diagonal(ones);
}

CsrMatrix CsrMatrix::diagonal(std::span<const double> d) {
  const std::size_t n = d.size();
  std::vector<int> rp(n + 1), ci(n);
  for (std::size_t i = 0; i < n; ++i) {
    rp[i + 1] = static_cast<int>(i + 1);
    ci[i] = static_cast<int>(i);
  }
  return CsrMatrix(n, n, std::move(rp), std::move(ci), std::vector<double>(d.begin(), d.end()), true);
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
  const auto begin = col_idx_.begin() + row_ptr_[i];
  const auto end = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(begin, end, static_cast<int>(j));
  if (it == end || *it != static_cast<int>(j)) return 0.0;
  return values_[it - col_idx_.begin()];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols_ || y.size() != rows_) throw std::invalid_argument("CsrMatrix::multiply: dimension mismatch");
  simd::csr_matvec(view(), x, y);
}

std::vector<double> CsrMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply(x, y);
  return y;
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<int> rp(cols_ + 1, 0);
  for (int c : col_idx_) ++rp[c + 1];
  for (std::size_t i = 0; i < cols_; ++i) rp[i + 1] += rp[i];
  std::vector<int> next(rp.begin(), rp.end() - 1);
  std::vector<int> ci(nnz());
  std::vector<double> v(nnz());
  for (std::size_t r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const int dst = next[col_idx_[k]]++;
      ci[dst] = static_cast<int>(r);
      v[dst] = values_[k];
    }
  return CsrMatrix(cols_, rows_, std::move(rp), std::move(ci), std::move(v), symmetric_);
}

CsrMatrix CsrMatrix::scaled(double s) const {
  CsrMatrix out = *this;
  for (double& v : out.values_) v *= s;
  return out;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double CsrMatrix::norm_inf() const {
  double m = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += std::abs(values_[k]);
    m = std::max(m, s);
  }
  return m;
}

double CsrMatrix::symmetry_defect() const {
  if (rows_ != cols_) return INFINITY;
  const double scale = max_abs();
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      worst = std::max(worst, std::abs(values_[k] - at(col_idx_[k], r)));
  return worst / scale;
}

std::vector<double> CsrMatrix::diagonal_values() const {
  std::vector<double> d(std::min(rows_, cols_), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(i, i);
  return d;
}

void CsrMatrix::prune() {
  std::size_t out = 0;
  std::vector<int> rp(rows_ + 1, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (values_[k] != 0.0) {
        col_idx_[out] = col_idx_[k];
        values_[out] = values_[k];
        ++out;
      }
    }
    rp[r + 1] = static_cast<int>(out);
  }
  col_idx_.resize(out);
  values_.resize(out);
  row_ptr_ = std::move(rp);
}

void CsrMatrix::write_coordinates(std::ostream& os) const {
  const auto old = os.precision(17);
  os << rows_ << ' ' << cols_ << ' ' << nnz() << '\n';
  for (std::size_t r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) os << r << ' ' << col_idx_[k] << ' ' << values_[k] << '\n';
  os.precision(old);
}

void TripletBuilder::add(int i, int j, double v) {
  if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= rows_ || static_cast<std::size_t>(j) >= cols_)
    throw std::out_of_range("TripletBuilder::add: index (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") out of range");
  entries_.push_back({i, j, v});
}

void TripletBuilder::add_matrix(const CsrMatrix& m, int row_offset, int col_offset, double scale, bool transpose) {
  const auto rp = m.row_ptr();
  const auto ci = m.col_idx();
  const auto v = m.values();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (int k = rp[r]; k < rp[r + 1]; ++k) {
      const int i = static_cast<int>(r);
      if (transpose)
        add(row_offset + ci[k], col_offset + i, scale * v[k]);
      else
        add(row_offset + i, col_offset + ci[k], scale * v[k]);
    }
}

CsrMatrix TripletBuilder::build(bool symmetric) const {
  // bucket by row, then sort each row by column and merge duplicates
  std::vector<int> count(rows_ + 1, 0);
  for (const auto& e : entries_) ++count[e.i + 1];
  for (std::size_t r = 0; r < rows_; ++r) count[r + 1] += count[r];
  std::vector<std::pair<int, double>> bucket(entries_.size());
  std::vector<int> next(count.begin(), count.end() - 1);
  for (const auto& e : entries_) bucket[next[e.i]++] = {e.j, e.v};

  std::vector<int> rp(rows_ + 1, 0);
  std::vector<int> ci;
  std::vector<double> vals;
  ci.reserve(entries_.size() / 2);
  vals.reserve(entries_.size() / 2);
  for (std::size_t r = 0; r < rows_; ++r) {
    auto first = bucket.begin() + count[r];
    auto last = bucket.begin() + count[r + 1];
    std::sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = first; it != last;) {
      const int col = it->first;
      double sum = 0.0;
      for (; it != last && it->first == col; ++it) sum += it->second;
      if (sum != 0.0) {
        ci.push_back(col);
        vals.push_back(sum);
      }
    }
    rp[r + 1] = static_cast<int>(ci.size());
  }
  return CsrMatrix(rows_, cols_, std::move(rp), std::move(ci), std::move(vals), symmetric);
}

}  // namespace biot
