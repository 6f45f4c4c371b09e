#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace divcurl {

using Vector = std::vector<double>;

struct Triplet {
  int row;
  int col;
  double value;
};

// Compressed sparse row matrix. Duplicate entries are summed on construction.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols);

  static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> entries,
                                    bool drop_zeros = false);
  static SparseMatrix identity(int n);
  static SparseMatrix diagonal(std::span<const double> d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  // y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  // y = A^T x
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;
  Vector operator*(std::span<const double> x) const;
  Vector transpose_times(std::span<const double> x) const;

  SparseMatrix transpose() const;
  SparseMatrix scaled(double s) const;
  Vector diagonal_entries() const;
  double at(int i, int j) const;

  // Submatrix with the given rows and columns, renumbered in list order.
  SparseMatrix select(std::span<const int> row_ids, std::span<const int> col_ids) const;
  SparseMatrix select_rows(std::span<const int> row_ids) const;
  SparseMatrix select_cols(std::span<const int> col_ids) const;

  std::vector<Triplet> triplets() const;
  bool is_symmetric(double rel_tol) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b);
// Horizontal / vertical concatenation.
SparseMatrix hstack(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix vstack(const SparseMatrix& a, const SparseMatrix& b);
// Matrix whose columns are the given dense vectors (zeros dropped).
SparseMatrix from_columns(int rows, const std::vector<Vector>& columns);

namespace vec {
double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double norm_inf(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
Vector add(std::span<const double> a, std::span<const double> b, double beta = 1.0);
Vector scaled(std::span<const double> a, double s);
}  // namespace vec

}  // namespace divcurl
