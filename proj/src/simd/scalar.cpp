#include "rmt/simd.hpp"

namespace rmt::simd::scalar {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void dot4(const double* const rows[4], const double* y, std::size_t n, double out[4]) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double yi = y[i];
    s0 += rows[0][i] * yi;
    s1 += rows[1][i] * yi;
    s2 += rows[2][i] * yi;
    s3 += rows[3][i] * yi;
  }
  out[0] = s0;
  out[1] = s1;
  out[2] = s2;
  out[3] = s3;
}

void axpy4(const double a[4], const double* x, double* const ys[4], std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    ys[0][i] += a[0] * xi;
    ys[1][i] += a[1] * xi;
    ys[2][i] += a[2] * xi;
    ys[3][i] += a[3] * xi;
  }
}

void rank2(double* row, double vi, double wi, const double* v, const double* w, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) row[j] -= vi * w[j] + wi * v[j];
}

double rank2_dot_axpy(double* row, double vi, double wi, const double* v, const double* w,
                      const double* u, double ui, double* p, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double r = row[j] - (vi * w[j] + wi * v[j]);
    row[j] = r;
    s += r * u[j];
    p[j] += r * ui;
  }
  return s;
}

void rotate(double* x, double* y, double c, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

}  // namespace rmt::simd::scalar
