// NEON (AArch64, float64x2) kernels. Built only on arm64 hosts.

#include <arm_neon.h>
#include <cstddef>

namespace rmt::simd::neon {

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t a0 = vdupq_n_f64(0.0);
  float64x2_t a1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 = vfmaq_f64(a0, vld1q_f64(x + i), vld1q_f64(y + i));
    a1 = vfmaq_f64(a1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(a0, a1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void dot4(const double* const rows[4], const double* y, std::size_t n, double out[4]) {
  float64x2_t s[4] = {vdupq_n_f64(0.0), vdupq_n_f64(0.0), vdupq_n_f64(0.0), vdupq_n_f64(0.0)};
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vy = vld1q_f64(y + i);
    for (int r = 0; r < 4; ++r) s[r] = vfmaq_f64(s[r], vld1q_f64(rows[r] + i), vy);
  }
  for (int r = 0; r < 4; ++r) {
    double acc = vaddvq_f64(s[r]);
    for (std::size_t k = i; k < n; ++k) acc += rows[r][k] * y[k];
    out[r] = acc;
  }
}

void axpy4(const double a[4], const double* x, double* const ys[4], std::size_t n) {
  for (int r = 0; r < 4; ++r) axpy(a[r], x, ys[r], n);
}

void rank2(double* row, double vi, double wi, const double* v, const double* w, std::size_t n) {
  const float64x2_t nvi = vdupq_n_f64(-vi);
  const float64x2_t nwi = vdupq_n_f64(-wi);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    float64x2_t r = vld1q_f64(row + j);
    r = vfmaq_f64(r, nvi, vld1q_f64(w + j));
    r = vfmaq_f64(r, nwi, vld1q_f64(v + j));
    vst1q_f64(row + j, r);
  }
  for (; j < n; ++j) row[j] -= vi * w[j] + wi * v[j];
}

double rank2_dot_axpy(double* row, double vi, double wi, const double* v, const double* w,
                      const double* u, double ui, double* p, std::size_t n) {
  const float64x2_t nvi = vdupq_n_f64(-vi);
  const float64x2_t nwi = vdupq_n_f64(-wi);
  const float64x2_t vui = vdupq_n_f64(ui);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    float64x2_t r = vld1q_f64(row + j);
    r = vfmaq_f64(r, nvi, vld1q_f64(w + j));
    r = vfmaq_f64(r, nwi, vld1q_f64(v + j));
    vst1q_f64(row + j, r);
    acc = vfmaq_f64(acc, r, vld1q_f64(u + j));
    vst1q_f64(p + j, vfmaq_f64(vld1q_f64(p + j), r, vui));
  }
  double s = vaddvq_f64(acc);
  for (; j < n; ++j) {
    const double r = row[j] - (vi * w[j] + wi * v[j]);
    row[j] = r;
    s += r * u[j];
    p[j] += r * ui;
  }
  return s;
}

void rotate(double* x, double* y, double c, double s, std::size_t n) {
  const float64x2_t vc = vdupq_n_f64(c);
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t xi = vld1q_f64(x + i);
    const float64x2_t yi = vld1q_f64(y + i);
    vst1q_f64(x + i, vfmsq_f64(vmulq_f64(vc, xi), vs, yi));
    vst1q_f64(y + i, vfmaq_f64(vmulq_f64(vc, yi), vs, xi));
  }
  for (; i < n; ++i) {
    const double xv = x[i];
    const double yv = y[i];
    x[i] = c * xv - s * yv;
    y[i] = s * xv + c * yv;
  }
}

}  // namespace rmt::simd::neon
