#include "divcurl/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "divcurl/errors.hpp"

namespace divcurl {

SparseMatrix::SparseMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), row_ptr_(static_cast<std::size_t>(rows) + 1, 0) {}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<Triplet> entries,
                                         bool drop_zeros) {
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw DimensionError("triplet index out of range");
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m(rows, cols);
  m.col_idx_.reserve(entries.size());
  m.values_.reserve(entries.size());
  std::vector<int> counts(static_cast<std::size_t>(rows), 0);
  std::size_t k = 0;
  while (k < entries.size()) {
    const int r = entries[k].row;
    const int c = entries[k].col;
    double sum = 0.0;
    while (k < entries.size() && entries[k].row == r && entries[k].col == c) {
      sum += entries[k].value;
      ++k;
    }
    if (drop_zeros && sum == 0.0) continue;
    m.col_idx_.push_back(c);
    m.values_.push_back(sum);
    ++counts[static_cast<std::size_t>(r)];
  }
  for (int i = 0; i < rows; ++i) m.row_ptr_[i + 1] = m.row_ptr_[i] + counts[i];
  return m;
}

SparseMatrix SparseMatrix::identity(int n) {
  Vector ones(static_cast<std::size_t>(n), 1.0);
  return diagonal(ones);
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> d) {
  const int n = static_cast<int>(d.size());
  SparseMatrix m(n, n);
  m.col_idx_.resize(d.size());
  m.values_.assign(d.begin(), d.end());
  for (int i = 0; i < n; ++i) {
    m.col_idx_[i] = i;
    m.row_ptr_[i + 1] = i + 1;
  }
  return m;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (static_cast<int>(x.size()) != cols_ || static_cast<int>(y.size()) != rows_)
    throw DimensionError("multiply: dimension mismatch");
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] = s;
  }
}

void SparseMatrix::multiply_transpose(std::span<const double> x, std::span<double> y) const {
  if (static_cast<int>(x.size()) != rows_ || static_cast<int>(y.size()) != cols_)
    throw DimensionError("multiply_transpose: dimension mismatch");
  std::fill(y.begin(), y.end(), 0.0);
  for (int i = 0; i < rows_; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) y[col_idx_[k]] += values_[k] * xi;
  }
}

Vector SparseMatrix::operator*(std::span<const double> x) const {
  Vector y(static_cast<std::size_t>(rows_));
  multiply(x, y);
  return y;
}

Vector SparseMatrix::transpose_times(std::span<const double> x) const {
  Vector y(static_cast<std::size_t>(cols_));
  multiply_transpose(x, y);
  return y;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  std::vector<int> counts(static_cast<std::size_t>(cols_), 0);
  for (int c : col_idx_) ++counts[c];
  for (int j = 0; j < cols_; ++j) t.row_ptr_[j + 1] = t.row_ptr_[j] + counts[j];
  t.col_idx_.resize(col_idx_.size());
  t.values_.resize(values_.size());
  std::vector<int> next(t.row_ptr_.begin(), t.row_ptr_.end() - 1);
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const int pos = next[col_idx_[k]]++;
      t.col_idx_[pos] = i;
      t.values_[pos] = values_[k];
    }
  }
  return t;
}

SparseMatrix SparseMatrix::scaled(double s) const {
  SparseMatrix m = *this;
  for (double& v : m.values_) v *= s;
  return m;
}

Vector SparseMatrix::diagonal_entries() const {
  Vector d(static_cast<std::size_t>(std::min(rows_, cols_)), 0.0);
  for (int i = 0; i < static_cast<int>(d.size()); ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (col_idx_[k] == i) d[i] = values_[k];
  }
  return d;
}

double SparseMatrix::at(int i, int j) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw DimensionError("at: index out of range");
  const auto first = col_idx_.begin() + row_ptr_[i];
  const auto last = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

SparseMatrix SparseMatrix::select(std::span<const int> row_ids, std::span<const int> col_ids) const {
  std::vector<int> col_map(static_cast<std::size_t>(cols_), -1);
  for (std::size_t j = 0; j < col_ids.size(); ++j) col_map[col_ids[j]] = static_cast<int>(j);
  std::vector<Triplet> out;
  for (std::size_t r = 0; r < row_ids.size(); ++r) {
    const int i = row_ids[r];
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const int c = col_map[col_idx_[k]];
      if (c >= 0) out.push_back({static_cast<int>(r), c, values_[k]});
    }
  }
  return from_triplets(static_cast<int>(row_ids.size()), static_cast<int>(col_ids.size()),
                       std::move(out));
}

SparseMatrix SparseMatrix::select_rows(std::span<const int> row_ids) const {
  std::vector<int> all(static_cast<std::size_t>(cols_));
  for (int j = 0; j < cols_; ++j) all[j] = j;
  return select(row_ids, all);
}

SparseMatrix SparseMatrix::select_cols(std::span<const int> col_ids) const {
  std::vector<int> all(static_cast<std::size_t>(rows_));
  for (int i = 0; i < rows_; ++i) all[i] = i;
  return select(all, col_ids);
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(values_.size());
  for (int i = 0; i < rows_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) out.push_back({i, col_idx_[k], values_[k]});
  return out;
}

bool SparseMatrix::is_symmetric(double rel_tol) const {
  if (rows_ != cols_) return false;
  double scale = 0.0;
  for (double v : values_) scale = std::max(scale, std::abs(v));
  const SparseMatrix t = transpose();
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (std::abs(values_[k] - t.at(i, col_idx_[k])) > rel_tol * scale) return false;
    }
    for (int k = t.row_ptr_[i]; k < t.row_ptr_[i + 1]; ++k) {
      if (std::abs(t.values_[k] - at(i, t.col_idx_[k])) > rel_tol * scale) return false;
    }
  }
  return true;
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: dimension mismatch");
  const auto arp = a.row_ptr();
  const auto aci = a.col_idx();
  const auto av = a.values();
  const auto brp = b.row_ptr();
  const auto bci = b.col_idx();
  const auto bv = b.values();
  std::vector<Triplet> out;
  std::vector<double> acc(static_cast<std::size_t>(b.cols()), 0.0);
  std::vector<int> marker(static_cast<std::size_t>(b.cols()), -1);
  std::vector<int> touched;
  for (int i = 0; i < a.rows(); ++i) {
    touched.clear();
    for (int k = arp[i]; k < arp[i + 1]; ++k) {
      const int m = aci[k];
      for (int l = brp[m]; l < brp[m + 1]; ++l) {
        const int j = bci[l];
        if (marker[j] != i) {
          marker[j] = i;
          acc[j] = 0.0;
          touched.push_back(j);
        }
        acc[j] += av[k] * bv[l];
      }
    }
    for (int j : touched) out.push_back({i, j, acc[j]});
  }
  return SparseMatrix::from_triplets(a.rows(), b.cols(), std::move(out));
}

namespace {
SparseMatrix combine(const SparseMatrix& a, const SparseMatrix& b, double beta) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("matrix sum: dimension mismatch");
  auto t = a.triplets();
  for (auto e : b.triplets()) t.push_back({e.row, e.col, beta * e.value});
  return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}
}  // namespace

SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) { return combine(a, b, 1.0); }
SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) { return combine(a, b, -1.0); }

SparseMatrix hstack(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("hstack: row mismatch");
  auto t = a.triplets();
  for (auto e : b.triplets()) t.push_back({e.row, e.col + a.cols(), e.value});
  return SparseMatrix::from_triplets(a.rows(), a.cols() + b.cols(), std::move(t));
}

SparseMatrix vstack(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.cols()) throw DimensionError("vstack: column mismatch");
  auto t = a.triplets();
  for (auto e : b.triplets()) t.push_back({e.row + a.rows(), e.col, e.value});
  return SparseMatrix::from_triplets(a.rows() + b.rows(), a.cols(), std::move(t));
}

SparseMatrix from_columns(int rows, const std::vector<Vector>& columns) {
  std::vector<Triplet> t;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (static_cast<int>(columns[j].size()) != rows) throw DimensionError("from_columns: length mismatch");
    for (int i = 0; i < rows; ++i)
      if (columns[j][i] != 0.0) t.push_back({i, static_cast<int>(j), columns[j][i]});
  }
  return SparseMatrix::from_triplets(rows, static_cast<int>(columns.size()), std::move(t));
}

namespace vec {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw DimensionError("axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vector add(std::span<const double> a, std::span<const double> b, double beta) {
  if (a.size() != b.size()) throw DimensionError("add: length mismatch");
  Vector r(a.begin(), a.end());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += beta * b[i];
  return r;
}

Vector scaled(std::span<const double> a, double s) {
  Vector r(a.begin(), a.end());
  for (double& v : r) v *= s;
  return r;
}

}  // namespace vec
}  // namespace divcurl
