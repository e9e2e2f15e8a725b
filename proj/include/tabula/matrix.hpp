#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace tabula {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::vector<double> column(std::size_t c) const;

  const std::vector<double>& data() const noexcept { return data_; }

  Matrix transposed() const;
  Matrix select_rows(std::span<const std::size_t> indices) const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

std::vector<double> operator*(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double squared_euclidean(std::span<const double> a, std::span<const double> b);

/// Column means of a data matrix (rows are samples).
std::vector<double> column_means(const Matrix& x);

/// Sample covariance with divisor (n - ddof).
Matrix covariance(const Matrix& x, std::size_t ddof);

/// Solves A x = b by Gaussian elimination with partial pivoting. Throws
/// rank_deficient when a pivot falls below `pivot_tol` times the largest
/// absolute entry of A.
std::vector<double> solve_linear(Matrix a, std::vector<double> b, double pivot_tol = 1e-10);

struct Cholesky {
  Matrix lower;
  double log_det = 0.0;
};

/// Cholesky factor of a symmetric positive definite matrix, or nullopt when
/// a non-positive pivot shows up.
std::optional<Cholesky> cholesky(const Matrix& a);

/// Solves L y = b for lower-triangular L.
std::vector<double> forward_substitute(const Matrix& lower, std::span<const double> b);

struct SymmetricEigen {
  std::vector<double> values;  ///< descending
  Matrix vectors;              ///< column j is the eigenvector of values[j]
  int sweeps = 0;
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Iterates until
/// the off-diagonal Frobenius norm drops below `off_tol`. Each eigenvector
/// is signed so its largest-magnitude entry is positive.
SymmetricEigen jacobi_eigen(const Matrix& symmetric, double off_tol = 1e-12, int max_sweeps = 100);

}  // namespace tabula
