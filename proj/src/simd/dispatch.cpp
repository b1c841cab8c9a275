#include "rmt/simd.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace rmt::simd {

namespace {

constexpr KernelTable kScalar{Isa::scalar,   scalar::dot,   scalar::axpy,
                              scalar::dot4,  scalar::axpy4, scalar::rank2,
                              scalar::rank2_dot_axpy, scalar::rotate};

#if defined(RMT_HAVE_AVX2_KERNELS)
constexpr KernelTable kAvx2{Isa::avx2,   avx2::dot,   avx2::axpy,
                            avx2::dot4,  avx2::axpy4, avx2::rank2,
                            avx2::rank2_dot_axpy, avx2::rotate};
#endif

#if defined(RMT_HAVE_NEON_KERNELS)
constexpr KernelTable kNeon{Isa::neon,   neon::dot,   neon::axpy,
                            neon::dot4,  neon::axpy4, neon::rank2,
                            neon::rank2_dot_axpy, neon::rotate};
#endif

const KernelTable& select() {
  if (const char* forced = std::getenv("RMT_SIMD")) {
    const std::string name(forced);
    if (name == "scalar") return kScalar;
    if (name == "avx2" && isa_available(Isa::avx2)) return table_for(Isa::avx2);
    if (name == "neon" && isa_available(Isa::neon)) return table_for(Isa::neon);
  }
  if (isa_available(Isa::avx2)) return table_for(Isa::avx2);
  if (isa_available(Isa::neon)) return table_for(Isa::neon);
  return kScalar;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(RMT_HAVE_AVX2_KERNELS)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(RMT_HAVE_NEON_KERNELS)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  if (!isa_available(isa)) {
    throw std::runtime_error("SIMD kernels not available on this host: " + std::string(isa_name(isa)));
  }
  switch (isa) {
#if defined(RMT_HAVE_AVX2_KERNELS)
    case Isa::avx2: return kAvx2;
#endif
#if defined(RMT_HAVE_NEON_KERNELS)
    case Isa::neon: return kNeon;
#endif
    default: return kScalar;
  }
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), std::min(x.size(), y.size()));
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), std::min(x.size(), y.size()));
}

void rotate(std::span<double> x, std::span<double> y, double c, double s) {
  active().rotate(x.data(), y.data(), c, s, std::min(x.size(), y.size()));
}

}  // namespace rmt::simd
