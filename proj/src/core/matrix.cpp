#include "rmt/core.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "rmt/simd.hpp"

namespace rmt {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) throw RejectedInput("DenseMatrix: entry count does not match shape");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw RejectedInput("multiply: inner dimensions differ");
  const auto& k = simd::active();
  DenseMatrix c(a.rows(), b.cols());
  const std::size_t n = b.cols();
  std::size_t i = 0;
  for (; i + 4 <= a.rows(); i += 4) {
    double* const ys[4] = {c.row(i).data(), c.row(i + 1).data(), c.row(i + 2).data(),
                           c.row(i + 3).data()};
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double coef[4] = {a(i, l), a(i + 1, l), a(i + 2, l), a(i + 3, l)};
      k.axpy4(coef, b.row(l).data(), ys, n);
    }
  }
  for (; i < a.rows(); ++i) {
    for (std::size_t l = 0; l < a.cols(); ++l) k.axpy(a(i, l), b.row(l).data(), c.row(i).data(), n);
  }
  return c;
}

SymmetricMatrix SymmetricMatrix::from_entries(std::size_t n, std::vector<double> entries) {
  if (n == 0) throw RejectedInput("SymmetricMatrix: dimension must be positive");
  if (entries.size() != n * n) throw RejectedInput("SymmetricMatrix: expected n*n entries");
  double scale = 0.0;
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double a = entries[i * n + j];
      const double b = entries[j * n + i];
      scale = std::max({scale, std::abs(a), std::abs(b)});
      asym = std::max(asym, std::abs(a - b));
    }
  }
  if (asym > kAsymmetryTolerance * scale) {
    throw RejectedInput("SymmetricMatrix: input asymmetry " + std::to_string(asym / scale) +
                        " exceeds relative tolerance 1e-8");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double m = 0.5 * (entries[i * n + j] + entries[j * n + i]);
      entries[i * n + j] = m;
      entries[j * n + i] = m;
    }
  }
  return SymmetricMatrix(n, std::move(entries));
}

SymmetricMatrix SymmetricMatrix::from_dense(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw RejectedInput("SymmetricMatrix: matrix is not square");
  return from_entries(m.rows(), std::vector<double>(m.data().begin(), m.data().end()));
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
  std::vector<double> d(n, 1.0);
  return diagonal(d);
}

SymmetricMatrix SymmetricMatrix::diagonal(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) throw RejectedInput("SymmetricMatrix: dimension must be positive");
  std::vector<double> e(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = values[i];
  return SymmetricMatrix(n, std::move(e));
}

SymmetricMatrix SymmetricMatrix::zeros(std::size_t n) {
  if (n == 0) throw RejectedInput("SymmetricMatrix: dimension must be positive");
  return SymmetricMatrix(n, std::vector<double>(n * n, 0.0));
}

double SymmetricMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += data_[i * n_ + i];
  return t;
}

double SymmetricMatrix::frobenius_norm() const {
  return std::sqrt(simd::active().dot(data_.data(), data_.data(), data_.size()));
}

double SymmetricMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

void SymmetricMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_) throw RejectedInput("SymmetricMatrix::multiply: size mismatch");
  const auto& k = simd::active();
  std::size_t i = 0;
  for (; i + 4 <= n_; i += 4) {
    const double* rows[4] = {&data_[i * n_], &data_[(i + 1) * n_], &data_[(i + 2) * n_],
                             &data_[(i + 3) * n_]};
    k.dot4(rows, x.data(), n_, &y[i]);
  }
  for (; i < n_; ++i) y[i] = k.dot(&data_[i * n_], x.data(), n_);
}

SymmetricMatrix gram(const DenseMatrix& x, double scale) {
  const std::size_t p = x.rows();
  const std::size_t n = x.cols();
  if (p == 0) throw RejectedInput("gram: factor has no rows");
  const auto& k = simd::active();
  std::vector<double> c(p * p, 0.0);
  std::size_t i = 0;
  for (; i + 4 <= p; i += 4) {
    const double* rows[4] = {x.row(i).data(), x.row(i + 1).data(), x.row(i + 2).data(),
                             x.row(i + 3).data()};
    for (std::size_t j = 0; j <= i + 3; ++j) {
      double out[4];
      k.dot4(rows, x.row(j).data(), n, out);
      for (std::size_t r = 0; r < 4; ++r) {
        if (j <= i + r) c[(i + r) * p + j] = out[r] / scale;
      }
    }
  }
  for (; i < p; ++i) {
    for (std::size_t j = 0; j <= i; ++j) c[i * p + j] = k.dot(x.row(i).data(), x.row(j).data(), n) / scale;
  }
  for (std::size_t r = 0; r < p; ++r)
    for (std::size_t s = r + 1; s < p; ++s) c[r * p + s] = c[s * p + r];
  return SymmetricMatrix::from_entries(p, std::move(c));
}

EmpiricalSpectrum::EmpiricalSpectrum(std::vector<double> v, std::vector<double> w)
    : values(std::move(v)), weights(std::move(w)) {
  validate();
}

double EmpiricalSpectrum::moment(int k) const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += weight(i) * std::pow(values[i], k);
  return s;
}

void EmpiricalSpectrum::validate() const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw RejectedInput("EmpiricalSpectrum: non-finite eigenvalue");
    if (i > 0 && values[i] < values[i - 1]) throw RejectedInput("EmpiricalSpectrum: values not ascending");
  }
  if (weights.empty()) return;
  if (weights.size() != values.size()) throw RejectedInput("EmpiricalSpectrum: weight count mismatch");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw RejectedInput("EmpiricalSpectrum: weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw RejectedInput("EmpiricalSpectrum: weights must sum to 1");
}

void TridiagonalMatrix::validate() const {
  if (alpha.empty()) throw RejectedInput("TridiagonalMatrix: empty");
  if (beta.size() + 1 != alpha.size()) throw RejectedInput("TridiagonalMatrix: need m-1 off-diagonal entries");
  for (double a : alpha)
    if (!std::isfinite(a)) throw RejectedInput("TridiagonalMatrix: non-finite alpha");
  for (double b : beta)
    if (!(b > 0.0) || !std::isfinite(b)) throw RejectedInput("TridiagonalMatrix: beta entries must be positive");
}

LinearOperator operator_from_matrix(SymmetricMatrix a) {
  auto shared = std::make_shared<const SymmetricMatrix>(std::move(a));
  LinearOperator op;
  op.dim = shared->size();
  op.apply = [shared](std::span<const double> x, std::span<double> y) { shared->multiply(x, y); };
  return op;
}

LinearOperator diagonal_operator(std::vector<double> diag) {
  auto shared = std::make_shared<const std::vector<double>>(std::move(diag));
  LinearOperator op;
  op.dim = shared->size();
  op.apply = [shared](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < shared->size(); ++i) y[i] = (*shared)[i] * x[i];
  };
  return op;
}

}  // namespace rmt
