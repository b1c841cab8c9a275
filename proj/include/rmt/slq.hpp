#pragma once

// Matrix-free spectral density estimation by stochastic Lanczos quadrature.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "rmt/core.hpp"
#include "rmt/laws.hpp"

namespace rmt {

struct LanczosResult {
  TridiagonalMatrix t;
  std::size_t steps_taken = 0;
  /// Recursion stopped because beta fell below 1e-12 times the running max of |alpha|, beta.
  bool breakdown = false;
  /// Row j is the j-th Lanczos vector; present only when requested.
  std::optional<DenseMatrix> basis;
};

/// Lanczos with full two-pass classical Gram-Schmidt reorthogonalization.
/// v0 must have unit norm (within 1e-12); m must lie in [1, op.dim].
LanczosResult lanczos(const LinearOperator& op, std::span<const double> v0, std::size_t m, bool keep_basis = false);

struct QuadratureRule {
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;  // positive, sum to one

  /// Weighted empirical spectrum (weights renormalized to sum exactly to one).
  EmpiricalSpectrum to_spectrum() const;
  double moment(int k) const;
};

/// Gauss rule: nodes are eigenvalues of T, weights the squared first eigenvector components.
QuadratureRule quadrature_from_tridiagonal(const TridiagonalMatrix& t);

enum class ProbeKind { rademacher, gaussian };
std::string_view to_string(ProbeKind k);
ProbeKind parse_probe_kind(std::string_view s);

struct SlqOptions {
  std::size_t steps = 80;
  std::size_t probes = 10;
  ProbeKind probe = ProbeKind::rademacher;
  /// Gaussian smoothing width for the presentation curve; 0 disables it.
  double kernel_width = 0.0;
  std::size_t grid_points = 512;
  std::uint64_t seed = 0;
};

struct SlqResult {
  std::vector<QuadratureRule> per_probe;
  /// All probe rules merged with weight 1/probes each.
  QuadratureRule average;
  /// Smoothed curve; empty unless kernel_width > 0.
  SampledDensity smoothed;
};

/// Probe i is drawn from RngStream(seed, i) and normalized to unit length.
SlqResult slq_density(const LinearOperator& op, const SlqOptions& opt);

/// Gaussian-kernel smoothing of a discrete rule on a uniform grid.
SampledDensity smooth_rule(const QuadratureRule& rule, double width, std::size_t grid_points);

struct TraceEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

/// Mean of v^T A v over unnormalized zero-mean unit-variance probes.
TraceEstimate hutchinson_trace(const LinearOperator& op, std::size_t probes, ProbeKind kind, std::uint64_t seed);

/// Streaming-operator file protocol.
///
/// The directory holds `operator.json` with {"dim": n}. For the s-th product
/// (s = 0, 1, ...) the client writes `request_<s>.rvec` and waits for the server
/// to write `response_<s>.rvec`; both are RVEC files, and both sides write to a
/// temporary name and rename, so a visible file is always complete. The client
/// removes both files after reading the response.
struct StreamOptions {
  std::chrono::milliseconds timeout{60000};
  std::chrono::milliseconds poll_interval{1};
};

/// Client side. The returned operator keeps a request counter, so it must not
/// be applied from several threads at once.
LinearOperator stream_operator(const std::filesystem::path& dir, StreamOptions opt = {});

/// Server side: answers requests in sequence with `op` until keep_running()
/// returns false or `max_requests` have been served. Returns the number served.
std::size_t serve_stream_requests(const std::filesystem::path& dir, const LinearOperator& op,
                                  const std::function<bool()>& keep_running, std::size_t max_requests = SIZE_MAX,
                                  StreamOptions opt = {});

/// Writes operator.json for a server of dimension n.
void write_stream_manifest(const std::filesystem::path& dir, std::size_t n);

}  // namespace rmt
