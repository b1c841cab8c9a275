#pragma once

// Data-parallel inner loops used by the eigensolvers, Lanczos and the
// ensemble builders. Every kernel has a scalar reference implementation;
// vector variants are selected once at runtime from the host CPU features.
// Setting RMT_SIMD=scalar in the environment forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace rmt::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

/// Raw kernel signatures. Pointers must not alias unless stated.
struct KernelTable {
  Isa isa;
  // sum_i x[i]*y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a*x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // out[r] = dot(rows[r], y) for four rows
  void (*dot4)(const double* const rows[4], const double* y, std::size_t n, double out[4]);
  // y[r] += a[r]*x for four destination rows
  void (*axpy4)(const double a[4], const double* x, double* const ys[4], std::size_t n);
  // row[j] -= vi*w[j] + wi*v[j]
  void (*rank2)(double* row, double vi, double wi, const double* v, const double* w, std::size_t n);
  // rank2 on row, then p[j] += row[j]*ui and return dot(row, u) over the updated row
  double (*rank2_dot_axpy)(double* row, double vi, double wi, const double* v, const double* w,
                           const double* u, double ui, double* p, std::size_t n);
  // (x, y) <- (c*x - s*y, s*x + c*y)
  void (*rotate)(double* x, double* y, double c, double s, std::size_t n);
};

bool isa_available(Isa isa);
const KernelTable& table_for(Isa isa);
/// Active table: best available ISA unless overridden by RMT_SIMD.
const KernelTable& active();

// Thin span-based wrappers over the active table.
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void rotate(std::span<double> x, std::span<double> y, double c, double s);

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void dot4(const double* const rows[4], const double* y, std::size_t n, double out[4]);
void axpy4(const double a[4], const double* x, double* const ys[4], std::size_t n);
void rank2(double* row, double vi, double wi, const double* v, const double* w, std::size_t n);
double rank2_dot_axpy(double* row, double vi, double wi, const double* v, const double* w,
                      const double* u, double ui, double* p, std::size_t n);
void rotate(double* x, double* y, double c, double s, std::size_t n);
}  // namespace scalar

namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void dot4(const double* const rows[4], const double* y, std::size_t n, double out[4]);
void axpy4(const double a[4], const double* x, double* const ys[4], std::size_t n);
void rank2(double* row, double vi, double wi, const double* v, const double* w, std::size_t n);
double rank2_dot_axpy(double* row, double vi, double wi, const double* v, const double* w,
                      const double* u, double ui, double* p, std::size_t n);
void rotate(double* x, double* y, double c, double s, std::size_t n);
}  // namespace avx2

namespace neon {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void dot4(const double* const rows[4], const double* y, std::size_t n, double out[4]);
void axpy4(const double a[4], const double* x, double* const ys[4], std::size_t n);
void rank2(double* row, double vi, double wi, const double* v, const double* w, std::size_t n);
double rank2_dot_axpy(double* row, double vi, double wi, const double* v, const double* w,
                      const double* u, double ui, double* p, std::size_t n);
void rotate(double* x, double* y, double c, double s, std::size_t n);
}  // namespace neon

}  // namespace rmt::simd
