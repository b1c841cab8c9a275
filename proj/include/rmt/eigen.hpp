#pragma once

#include <optional>
#include <vector>

#include "rmt/core.hpp"

namespace rmt {

struct SymmetricEigen {
  EmpiricalSpectrum spectrum;
  /// Column j is the unit eigenvector of spectrum.values[j]. Present only when requested.
  std::optional<DenseMatrix> vectors;
};

/// All eigenvalues of a dense symmetric matrix, ascending.
/// Householder tridiagonalization followed by implicit-shift QL.
/// Throws RejectedInput on non-finite entries, NumericFailure if QL stalls.
SymmetricEigen eigh_dense(const SymmetricMatrix& a, bool want_vectors = false);

/// Shorthand for eigh_dense(a).spectrum.
EmpiricalSpectrum eigvalsh(const SymmetricMatrix& a);

struct TridiagonalEigen {
  std::vector<double> nodes;             // ascending
  std::vector<double> first_components;  // first entry of each unit eigenvector (empty if not requested)
};

/// Eigenvalues of a symmetric tridiagonal matrix and, optionally, the first
/// component of each normalized eigenvector (Golub-Welsch weights are their squares).
TridiagonalEigen eigh_tridiagonal(const TridiagonalMatrix& t, bool want_first_components = true);

}  // namespace rmt
