#pragma once

#include <cstdint>
#include <random>

namespace rmt {

/// Reproducible random stream keyed by (seed, stream index).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Distributions are implemented here rather than taken from
/// <random>, because library distributions differ between vendors.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Marsaglia polar method).
  double normal();
  /// +1 or -1 with equal probability.
  double rademacher();
  bool bernoulli(double p) { return uniform() < p; }

  /// Stream index for the t-th trial of the i-th parameter point in a sweep.
  static std::uint64_t sweep_stream(std::uint64_t param_index, std::uint64_t trial) {
    return (param_index << 32) + trial;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rmt
