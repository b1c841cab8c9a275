#include "rmt/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rmt/simd.hpp"

namespace rmt {

namespace {

struct Reflector {
  std::vector<double> u;  // global indexing, zero above the active block
  double tau = 0.0;
};

// Householder reduction of the lower triangle of `a` (row-major n x n, modified
// in place). Each step applies the previous step's rank-2 update and the next
// symmetric mat-vec in a single sweep over the trailing block.
void householder_tridiagonal(std::vector<double>& a, std::size_t n, std::vector<double>& d,
                             std::vector<double>& e, std::vector<Reflector>* reflectors) {
  const auto& kern = simd::active();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  if (n == 1) {
    d[0] = a[0];
    return;
  }
  std::vector<double> up(n, 0.0), wp(n, 0.0), u(n, 0.0), p(n, 0.0);

  for (std::size_t k = 0; k + 2 < n; ++k) {
    for (std::size_t i = k; i < n; ++i) a[i * n + k] -= up[i] * wp[k] + wp[i] * up[k];
    d[k] = a[k * n + k];

    const double x0 = a[(k + 1) * n + k];
    double tail = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) tail += a[i * n + k] * a[i * n + k];

    std::fill(u.begin(), u.end(), 0.0);
    double tau = 0.0;
    if (tail > 0.0) {
      const double alpha = -std::copysign(std::sqrt(x0 * x0 + tail), x0);
      u[k + 1] = x0 - alpha;
      for (std::size_t i = k + 2; i < n; ++i) u[i] = a[i * n + k];
      tau = 2.0 / (tail + u[k + 1] * u[k + 1]);
      e[k] = alpha;
    } else {
      e[k] = x0;
    }

    std::fill(p.begin() + static_cast<std::ptrdiff_t>(k) + 1, p.end(), 0.0);
    const std::size_t j0 = k + 1;
    for (std::size_t i = j0; i < n; ++i) {
      double* row = &a[i * n];
      const double s = kern.rank2_dot_axpy(row + j0, up[i], wp[i], up.data() + j0, wp.data() + j0,
                                           u.data() + j0, u[i], p.data() + j0, i - j0);
      row[i] -= 2.0 * up[i] * wp[i];
      p[i] += s + row[i] * u[i];
    }

    std::fill(wp.begin(), wp.end(), 0.0);
    if (tau != 0.0) {
      double pu = 0.0;
      for (std::size_t i = j0; i < n; ++i) {
        p[i] *= tau;
        pu += p[i] * u[i];
      }
      const double half = 0.5 * tau * pu;
      for (std::size_t i = j0; i < n; ++i) wp[i] = p[i] - half * u[i];
    }
    up = u;
    if (reflectors) reflectors->push_back({u, tau});
  }

  const std::size_t m = n - 2;
  a[m * n + m] -= 2.0 * up[m] * wp[m];
  a[(m + 1) * n + m] -= up[m + 1] * wp[m] + wp[m + 1] * up[m];
  a[(m + 1) * n + m + 1] -= 2.0 * up[m + 1] * wp[m + 1];
  d[m] = a[m * n + m];
  e[m] = a[(m + 1) * n + m];
  d[m + 1] = a[(m + 1) * n + m + 1];
}

// Implicit QL with Wilkinson-style shifts on (d, e), e[i] coupling i and i+1.
// Rotations are mirrored onto the rows of `zt` (if non-null, n columns wide)
// and onto `first` (if non-null), which tracks the first row of Z.
void implicit_ql(std::vector<double>& d, std::vector<double>& e, DenseMatrix* zt,
                 std::vector<double>* first) {
  const std::size_t n = d.size();
  if (n == 0) return;
  e[n - 1] = 0.0;
  const auto& kern = simd::active();
  constexpr int kMaxIterations = 60;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  // Absolute floor: without it a block of numerically zero eigenvalues never splits.
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) norm = std::max(norm, std::abs(d[i]) + std::abs(e[i]));
  const double floor = eps * norm;

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd || std::abs(e[m]) <= floor) break;
      }
      if (m != l) {
        if (iter++ == kMaxIterations) throw NumericFailure("implicit QL did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool deflated = false;
        for (std::size_t ii = m; ii-- > l;) {
          const std::size_t i = ii;
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            deflated = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (zt) kern.rotate(zt->row(i).data(), zt->row(i + 1).data(), c, s, zt->cols());
          if (first) {
            f = (*first)[i + 1];
            (*first)[i + 1] = s * (*first)[i] + c * f;
            (*first)[i] = c * (*first)[i] - s * f;
          }
        }
        if (deflated) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

std::vector<std::size_t> ascending_order(const std::vector<double>& d) {
  std::vector<std::size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
  return idx;
}

}  // namespace

SymmetricEigen eigh_dense(const SymmetricMatrix& a, bool want_vectors) {
  const std::size_t n = a.size();
  for (double v : a.data()) {
    if (!std::isfinite(v)) throw RejectedInput("eigh_dense: matrix has non-finite entries");
  }
  std::vector<double> work(a.data().begin(), a.data().end());
  std::vector<double> d, e;
  std::vector<Reflector> reflectors;
  householder_tridiagonal(work, n, d, e, want_vectors ? &reflectors : nullptr);
  work.clear();
  work.shrink_to_fit();

  SymmetricEigen out;
  if (!want_vectors) {
    implicit_ql(d, e, nullptr, nullptr);
    std::sort(d.begin(), d.end());
    out.spectrum = EmpiricalSpectrum(std::move(d));
    return out;
  }

  // Rows of zt start as Q^T = H_{n-3} ... H_0 and end as eigenvectors.
  const auto& kern = simd::active();
  DenseMatrix zt = DenseMatrix::identity(n);
  std::vector<double> r(n);
  for (const Reflector& h : reflectors) {
    if (h.tau == 0.0) continue;
    std::fill(r.begin(), r.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (h.u[i] != 0.0) kern.axpy(h.u[i], zt.row(i).data(), r.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      if (h.u[i] != 0.0) kern.axpy(-h.tau * h.u[i], r.data(), zt.row(i).data(), n);
  }
  implicit_ql(d, e, &zt, nullptr);

  const auto order = ascending_order(d);
  std::vector<double> values(n);
  DenseMatrix vectors(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    values[j] = d[order[j]];
    const auto src = zt.row(order[j]);
    for (std::size_t i = 0; i < n; ++i) vectors(i, j) = src[i];
  }
  out.spectrum = EmpiricalSpectrum(std::move(values));
  out.vectors = std::move(vectors);
  return out;
}

EmpiricalSpectrum eigvalsh(const SymmetricMatrix& a) { return eigh_dense(a, false).spectrum; }

TridiagonalEigen eigh_tridiagonal(const TridiagonalMatrix& t, bool want_first_components) {
  t.validate();
  const std::size_t m = t.size();
  std::vector<double> d = t.alpha;
  std::vector<double> e(m, 0.0);
  std::copy(t.beta.begin(), t.beta.end(), e.begin());

  std::vector<double> first;
  if (want_first_components) {
    first.assign(m, 0.0);
    first[0] = 1.0;
  }
  implicit_ql(d, e, nullptr, want_first_components ? &first : nullptr);

  const auto order = ascending_order(d);
  TridiagonalEigen out;
  out.nodes.resize(m);
  for (std::size_t j = 0; j < m; ++j) out.nodes[j] = d[order[j]];
  if (want_first_components) {
    out.first_components.resize(m);
    for (std::size_t j = 0; j < m; ++j) out.first_components[j] = first[order[j]];
  }
  return out;
}

}  // namespace rmt
