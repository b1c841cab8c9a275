#pragma once

// Foundational value types shared by every module: dense and symmetric
// matrices, empirical spectra, tridiagonal Lanczos output and the symmetric
// linear-operator contract.

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmt {

/// Input that violates a documented precondition (bad shape, non-finite data).
class RejectedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that could not complete: non-convergence, malformed file.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// General row-major matrix. Used for rectangular factors and non-symmetric products.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  DenseMatrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// C = A * B.
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);

/// Real symmetric n x n matrix stored in full row-major form.
/// Construction symmetrizes (A + A^T)/2 and rejects asymmetry above 1e-8 relative.
class SymmetricMatrix {
 public:
  static constexpr double kAsymmetryTolerance = 1e-8;

  static SymmetricMatrix from_entries(std::size_t n, std::vector<double> entries);
  static SymmetricMatrix from_dense(const DenseMatrix& m);
  static SymmetricMatrix identity(std::size_t n);
  static SymmetricMatrix diagonal(std::span<const double> values);
  static SymmetricMatrix zeros(std::size_t n);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
  std::span<const double> data() const { return data_; }

  double trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  /// y = A x.
  void multiply(std::span<const double> x, std::span<double> y) const;

  bool operator==(const SymmetricMatrix&) const = default;

 private:
  SymmetricMatrix(std::size_t n, std::vector<double> data) : n_(n), data_(std::move(data)) {}
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// (1/scale) * X * X^T for a row-major factor X; exact symmetry by construction.
SymmetricMatrix gram(const DenseMatrix& x, double scale);

/// Sorted real eigenvalues with optional positive weights summing to one.
/// An empty weight list means uniform weight 1/size().
struct EmpiricalSpectrum {
  std::vector<double> values;
  std::vector<double> weights;

  EmpiricalSpectrum() = default;
  explicit EmpiricalSpectrum(std::vector<double> v, std::vector<double> w = {});

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
  double weight(std::size_t i) const {
    return weights.empty() ? 1.0 / static_cast<double>(values.size()) : weights[i];
  }
  /// sum_i w_i * values_i^k
  double moment(int k) const;
  double min() const { return values.front(); }
  double max() const { return values.back(); }

  /// Throws RejectedInput when ordering or weight invariants fail.
  void validate() const;
};

/// Lanczos coefficients: alpha on the diagonal, strictly positive beta off it.
struct TridiagonalMatrix {
  std::vector<double> alpha;
  std::vector<double> beta;

  std::size_t size() const { return alpha.size(); }
  void validate() const;
};

/// Symmetric linear map given only by its action. apply(x, y) writes y = A x.
struct LinearOperator {
  std::size_t dim = 0;
  std::function<void(std::span<const double>, std::span<double>)> apply;

  std::vector<double> operator()(std::span<const double> x) const {
    std::vector<double> y(dim);
    apply(x, y);
    return y;
  }
};

/// Wraps a matrix; the matrix is shared so the operator may outlive the caller's copy.
LinearOperator operator_from_matrix(SymmetricMatrix a);

/// Diagonal operator without materializing the matrix.
LinearOperator diagonal_operator(std::vector<double> diag);

}  // namespace rmt
