// AVX2+FMA kernels. This translation unit is compiled with -mavx2 -mfma, so it
// deliberately includes nothing beyond <cstddef> and the intrinsics header:
// any inline library code instantiated here could be picked by the linker
// for callers running on CPUs without AVX2.

#include <cstddef>
#include <immintrin.h>

namespace rmt::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot(const double* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
  }
  if (i + 4 <= n) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    i += 4;
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void dot4(const double* const rows[4], const double* y, std::size_t n, double out[4]) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  __m256d s2 = _mm256_setzero_pd();
  __m256d s3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(rows[0] + i), vy, s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(rows[1] + i), vy, s1);
    s2 = _mm256_fmadd_pd(_mm256_loadu_pd(rows[2] + i), vy, s2);
    s3 = _mm256_fmadd_pd(_mm256_loadu_pd(rows[3] + i), vy, s3);
  }
  double r0 = hsum(s0), r1 = hsum(s1), r2 = hsum(s2), r3 = hsum(s3);
  for (; i < n; ++i) {
    r0 += rows[0][i] * y[i];
    r1 += rows[1][i] * y[i];
    r2 += rows[2][i] * y[i];
    r3 += rows[3][i] * y[i];
  }
  out[0] = r0;
  out[1] = r1;
  out[2] = r2;
  out[3] = r3;
}

void axpy4(const double a[4], const double* x, double* const ys[4], std::size_t n) {
  const __m256d a0 = _mm256_set1_pd(a[0]);
  const __m256d a1 = _mm256_set1_pd(a[1]);
  const __m256d a2 = _mm256_set1_pd(a[2]);
  const __m256d a3 = _mm256_set1_pd(a[3]);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(ys[0] + i, _mm256_fmadd_pd(a0, vx, _mm256_loadu_pd(ys[0] + i)));
    _mm256_storeu_pd(ys[1] + i, _mm256_fmadd_pd(a1, vx, _mm256_loadu_pd(ys[1] + i)));
    _mm256_storeu_pd(ys[2] + i, _mm256_fmadd_pd(a2, vx, _mm256_loadu_pd(ys[2] + i)));
    _mm256_storeu_pd(ys[3] + i, _mm256_fmadd_pd(a3, vx, _mm256_loadu_pd(ys[3] + i)));
  }
  for (; i < n; ++i) {
    ys[0][i] += a[0] * x[i];
    ys[1][i] += a[1] * x[i];
    ys[2][i] += a[2] * x[i];
    ys[3][i] += a[3] * x[i];
  }
}

void rank2(double* row, double vi, double wi, const double* v, const double* w, std::size_t n) {
  const __m256d nvi = _mm256_set1_pd(-vi);
  const __m256d nwi = _mm256_set1_pd(-wi);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d r = _mm256_loadu_pd(row + j);
    r = _mm256_fmadd_pd(nvi, _mm256_loadu_pd(w + j), r);
    r = _mm256_fmadd_pd(nwi, _mm256_loadu_pd(v + j), r);
    _mm256_storeu_pd(row + j, r);
  }
  for (; j < n; ++j) row[j] -= vi * w[j] + wi * v[j];
}

double rank2_dot_axpy(double* row, double vi, double wi, const double* v, const double* w,
                      const double* u, double ui, double* p, std::size_t n) {
  const __m256d nvi = _mm256_set1_pd(-vi);
  const __m256d nwi = _mm256_set1_pd(-wi);
  const __m256d vui = _mm256_set1_pd(ui);
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d r = _mm256_loadu_pd(row + j);
    r = _mm256_fmadd_pd(nvi, _mm256_loadu_pd(w + j), r);
    r = _mm256_fmadd_pd(nwi, _mm256_loadu_pd(v + j), r);
    _mm256_storeu_pd(row + j, r);
    acc = _mm256_fmadd_pd(r, _mm256_loadu_pd(u + j), acc);
    _mm256_storeu_pd(p + j, _mm256_fmadd_pd(r, vui, _mm256_loadu_pd(p + j)));
  }
  double s = hsum(acc);
  for (; j < n; ++j) {
    const double r = row[j] - (vi * w[j] + wi * v[j]);
    row[j] = r;
    s += r * u[j];
    p[j] += r * ui;
  }
  return s;
}

void rotate(double* x, double* y, double c, double s, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xi = _mm256_loadu_pd(x + i);
    const __m256d yi = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(x + i, _mm256_fmsub_pd(vc, xi, _mm256_mul_pd(vs, yi)));
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vs, xi, _mm256_mul_pd(vc, yi)));
  }
  for (; i < n; ++i) {
    const double xv = x[i];
    const double yv = y[i];
    x[i] = c * xv - s * yv;
    y[i] = s * xv + c * yv;
  }
}

}  // namespace rmt::simd::avx2
