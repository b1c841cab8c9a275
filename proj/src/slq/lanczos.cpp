#include <algorithm>
#include <cmath>
#include <numeric>

#include "rmt/eigen.hpp"
#include "rmt/rng.hpp"
#include "rmt/simd.hpp"
#include "rmt/slq.hpp"

namespace rmt {

namespace {

constexpr double kBreakdownRatio = 1e-12;

// w -= sum_i <v_i, w> v_i over the first `count` rows of `basis`.
void orthogonalize(const std::vector<double>& basis, std::size_t count, std::size_t n, std::vector<double>& w,
                   std::vector<double>& coef) {
  const auto& k = simd::active();
  coef.assign(count, 0.0);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const double* rows[4] = {&basis[i * n], &basis[(i + 1) * n], &basis[(i + 2) * n], &basis[(i + 3) * n]};
    k.dot4(rows, w.data(), n, &coef[i]);
  }
  for (; i < count; ++i) coef[i] = k.dot(&basis[i * n], w.data(), n);
  for (i = 0; i < count; ++i) k.axpy(-coef[i], &basis[i * n], w.data(), n);
}

std::vector<double> draw_probe(std::size_t n, ProbeKind kind, RngStream& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = kind == ProbeKind::rademacher ? rng.rademacher() : rng.normal();
  return v;
}

}  // namespace

LanczosResult lanczos(const LinearOperator& op, std::span<const double> v0, std::size_t m, bool keep_basis) {
  const std::size_t n = op.dim;
  if (n == 0 || !op.apply) throw RejectedInput("lanczos: operator is empty");
  if (v0.size() != n) throw RejectedInput("lanczos: start vector length differs from operator dimension");
  if (m == 0 || m > n) throw RejectedInput("lanczos: steps must lie in [1, dim]");
  const auto& k = simd::active();
  const double norm = std::sqrt(k.dot(v0.data(), v0.data(), n));
  if (std::abs(norm - 1.0) > 1e-12) throw RejectedInput("lanczos: start vector must have unit norm");

  std::vector<double> basis(v0.begin(), v0.end());
  basis.reserve(m * n);
  std::vector<double> w(n), coef;
  LanczosResult out;
  double scale = 0.0;

  for (std::size_t j = 0; j < m; ++j) {
    const double* vj = &basis[j * n];
    op.apply(std::span<const double>(vj, n), w);
    const double alpha = k.dot(vj, w.data(), n);
    out.t.alpha.push_back(alpha);
    scale = std::max(scale, std::abs(alpha));
    if (j + 1 == m) break;

    // Full reorthogonalization subsumes the three-term subtraction.
    orthogonalize(basis, j + 1, n, w, coef);
    orthogonalize(basis, j + 1, n, w, coef);
    const double beta = std::sqrt(k.dot(w.data(), w.data(), n));
    scale = std::max(scale, beta);
    if (beta < kBreakdownRatio * scale || beta == 0.0) {
      out.breakdown = true;
      break;
    }
    out.t.beta.push_back(beta);
    const double inv = 1.0 / beta;
    for (double& x : w) x *= inv;
    basis.insert(basis.end(), w.begin(), w.end());
  }

  out.steps_taken = out.t.alpha.size();
  if (keep_basis) {
    basis.resize(out.steps_taken * n);
    out.basis = DenseMatrix(out.steps_taken, n, std::move(basis));
  }
  return out;
}

EmpiricalSpectrum QuadratureRule::to_spectrum() const {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<double> w(weights.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = weights[i] / total;
  return EmpiricalSpectrum(nodes, std::move(w));
}

double QuadratureRule::moment(int k) const {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * std::pow(nodes[i], k);
  return s;
}

QuadratureRule quadrature_from_tridiagonal(const TridiagonalMatrix& t) {
  const TridiagonalEigen e = eigh_tridiagonal(t, true);
  QuadratureRule rule;
  for (std::size_t j = 0; j < e.nodes.size(); ++j) {
    const double w = e.first_components[j] * e.first_components[j];
    if (w == 0.0) continue;  // invisible to this probe
    rule.nodes.push_back(e.nodes[j]);
    rule.weights.push_back(w);
  }
  return rule;
}

std::string_view to_string(ProbeKind k) { return k == ProbeKind::rademacher ? "rademacher" : "gaussian"; }

ProbeKind parse_probe_kind(std::string_view s) {
  if (s == "rademacher") return ProbeKind::rademacher;
  if (s == "gaussian") return ProbeKind::gaussian;
  throw RejectedInput("unknown probe kind '" + std::string(s) + "'");
}

SlqResult slq_density(const LinearOperator& op, const SlqOptions& opt) {
  if (opt.steps < 2 && op.dim >= 2) throw RejectedInput("slq_density: need at least 2 Lanczos steps");
  if (opt.probes == 0) throw RejectedInput("slq_density: need at least one probe");
  const std::size_t n = op.dim;
  const std::size_t m = std::min(opt.steps, n);
  SlqResult out;
  std::vector<std::pair<double, double>> merged;
  for (std::size_t i = 0; i < opt.probes; ++i) {
    RngStream rng(opt.seed, i);
    std::vector<double> v = draw_probe(n, opt.probe, rng);
    const double norm = std::sqrt(simd::dot(v, v));
    for (double& x : v) x /= norm;
    const LanczosResult lr = lanczos(op, v, m);
    QuadratureRule rule = quadrature_from_tridiagonal(lr.t);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      merged.emplace_back(rule.nodes[j], rule.weights[j] / static_cast<double>(opt.probes));
    }
    out.per_probe.push_back(std::move(rule));
  }
  std::stable_sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [node, w] : merged) {
    out.average.nodes.push_back(node);
    out.average.weights.push_back(w);
  }
  if (opt.kernel_width > 0.0) out.smoothed = smooth_rule(out.average, opt.kernel_width, opt.grid_points);
  return out;
}

SampledDensity smooth_rule(const QuadratureRule& rule, double width, std::size_t grid_points) {
  if (!(width > 0.0)) throw RejectedInput("smooth_rule: width must be positive");
  if (rule.nodes.empty()) throw RejectedInput("smooth_rule: empty rule");
  const double lo = rule.nodes.front() - 4.0 * width;
  const double hi = rule.nodes.back() + 4.0 * width;
  SampledDensity out;
  out.x = linear_grid(lo, hi, grid_points);
  out.density.assign(out.x.size(), 0.0);
  const double norm = 1.0 / (width * std::sqrt(2.0 * M_PI));
  for (std::size_t g = 0; g < out.x.size(); ++g) {
    double s = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double d = (out.x[g] - rule.nodes[j]) / width;
      s += rule.weights[j] * std::exp(-0.5 * d * d);
    }
    out.density[g] = s * norm;
  }
  return out;
}

TraceEstimate hutchinson_trace(const LinearOperator& op, std::size_t probes, ProbeKind kind, std::uint64_t seed) {
  if (probes < 2) throw RejectedInput("hutchinson_trace: need at least 2 probes");
  const std::size_t n = op.dim;
  std::vector<double> samples(probes);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < probes; ++i) {
    RngStream rng(seed, i);
    const std::vector<double> v = draw_probe(n, kind, rng);
    op.apply(v, y);
    samples[i] = simd::dot(v, y);
  }
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(probes);
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  const double var = ss / static_cast<double>(probes - 1);
  return {mean, std::sqrt(var / static_cast<double>(probes))};
}

}  // namespace rmt
