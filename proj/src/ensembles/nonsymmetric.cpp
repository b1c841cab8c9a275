// The only non-symmetric eigensolver in the library. Used for complex spectra
// of square Ginibre products.

#include <algorithm>
#include <cmath>
#include <limits>

#include "rmt/ensembles.hpp"
#include "rmt/simd.hpp"

namespace rmt {

namespace {

// Householder reduction to upper Hessenberg form, in place on row-major `a`.
// Both the left and right updates run along rows.
void hessenberg(std::vector<double>& a, std::size_t n) {
  const auto& kern = simd::active();
  std::vector<double> v(n), w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double tail = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) tail += a[i * n + k] * a[i * n + k];
    if (tail == 0.0) continue;
    const double x0 = a[(k + 1) * n + k];
    const double alpha = -std::copysign(std::sqrt(x0 * x0 + tail), x0);
    std::fill(v.begin(), v.end(), 0.0);
    v[k + 1] = x0 - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = a[i * n + k];
    const double tau = 2.0 / (tail + v[k + 1] * v[k + 1]);

    // Left: rows k+1.. of columns k.. get A -= tau v (v^T A).
    const std::size_t width = n - k;
    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t i = k + 1; i < n; ++i) kern.axpy(v[i], &a[i * n + k], w.data(), width);
    for (std::size_t i = k + 1; i < n; ++i) kern.axpy(-tau * v[i], w.data(), &a[i * n + k], width);

    // Right: every row gets A -= tau (A v) v^T over columns k+1..
    const std::size_t cols = n - k - 1;
    for (std::size_t i = 0; i < n; ++i) {
      double* row = &a[i * n + k + 1];
      const double s = kern.dot(row, v.data() + k + 1, cols);
      kern.axpy(-tau * s, v.data() + k + 1, row, cols);
    }

    a[(k + 1) * n + k] = alpha;
    for (std::size_t i = k + 2; i < n; ++i) a[i * n + k] = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix, eigenvalues only.
void hessenberg_qr(std::vector<double>& h, int n, std::vector<double>& wr, std::vector<double>& wi) {
  auto a = [&](int i, int j) -> double& { return h[static_cast<std::size_t>(i) * n + j]; };
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr int kMaxIterations = 60;

  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));

  int nn = n - 1;
  double t = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l;
    do {
      for (l = nn; l >= 1; --l) {
        double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) <= eps * s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      double x = a(nn, nn);
      if (l == nn) {
        wr[nn] = x + t;
        wi[nn] = 0.0;
        --nn;
        continue;
      }
      double y = a(nn - 1, nn - 1);
      double w = a(nn, nn - 1) * a(nn - 1, nn);
      if (l == nn - 1) {
        double p = 0.5 * (y - x);
        double q = p * p + w;
        double z = std::sqrt(std::abs(q));
        x += t;
        if (q >= 0.0) {
          z = p + std::copysign(z, p);
          wr[nn - 1] = wr[nn] = x + z;
          if (z != 0.0) wr[nn] = x - w / z;
          wi[nn - 1] = wi[nn] = 0.0;
        } else {
          wr[nn - 1] = wr[nn] = x + p;
          wi[nn - 1] = -z;
          wi[nn] = z;
        }
        nn -= 2;
        continue;
      }

      if (its == kMaxIterations) throw NumericFailure("Hessenberg QR did not converge");
      if (its > 0 && its % 10 == 0) {
        // Exceptional shift.
        t += x;
        for (int i = 0; i <= nn; ++i) a(i, i) -= x;
        const double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
        y = x = 0.75 * s;
        w = -0.4375 * s * s;
      }
      ++its;

      int m;
      double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
      for (m = nn - 2; m >= l; --m) {
        z = a(m, m);
        r = x - z;
        double s = y - z;
        p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
        q = a(m + 1, m + 1) - z - r - s;
        r = a(m + 2, m + 1);
        s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
        const double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
        if (u <= eps * v) break;
      }
      for (int i = m + 2; i <= nn; ++i) {
        a(i, i - 2) = 0.0;
        if (i != m + 2) a(i, i - 3) = 0.0;
      }
      for (int k = m; k <= nn - 1; ++k) {
        if (k != m) {
          p = a(k, k - 1);
          q = a(k + 1, k - 1);
          r = 0.0;
          if (k != nn - 1) r = a(k + 2, k - 1);
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x != 0.0) {
            p /= x;
            q /= x;
            r /= x;
          }
        }
        const double s = std::copysign(std::sqrt(p * p + q * q + r * r), p);
        if (s == 0.0) continue;
        if (k == m) {
          if (l != m) a(k, k - 1) = -a(k, k - 1);
        } else {
          a(k, k - 1) = -s * x;
        }
        p += s;
        x = p / s;
        y = q / s;
        z = r / s;
        q /= p;
        r /= p;
        for (int j = k; j <= nn; ++j) {
          p = a(k, j) + q * a(k + 1, j);
          if (k != nn - 1) {
            p += r * a(k + 2, j);
            a(k + 2, j) -= p * z;
          }
          a(k + 1, j) -= p * y;
          a(k, j) -= p * x;
        }
        const int mmin = std::min(nn, k + 3);
        for (int i = l; i <= mmin; ++i) {
          p = x * a(i, k) + y * a(i, k + 1);
          if (k != nn - 1) {
            p += z * a(i, k + 2);
            a(i, k + 2) -= p * r;
          }
          a(i, k + 1) -= p * q;
          a(i, k) -= p;
        }
      }
    } while (l < nn - 1);
  }
}

}  // namespace

std::vector<std::complex<double>> eigvals_general(const DenseMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw RejectedInput("eigvals_general: matrix must be square and nonempty");
  for (double v : m.data())
    if (!std::isfinite(v)) throw RejectedInput("eigvals_general: matrix has non-finite entries");
  const std::size_t n = m.rows();
  std::vector<double> h(m.data().begin(), m.data().end());
  hessenberg(h, n);
  std::vector<double> wr(n), wi(n);
  hessenberg_qr(h, static_cast<int>(n), wr, wi);

  std::vector<std::complex<double>> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {wr[i], wi[i]};
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    const double ax = std::abs(x), ay = std::abs(y);
    if (ax != ay) return ax > ay;
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  return out;
}

}  // namespace rmt
