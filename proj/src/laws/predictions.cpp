#include <cmath>

#include "rmt/laws.hpp"

namespace rmt {

EdgePrediction spiked_edge_prediction(const std::vector<double>& spikes, double sigma) {
  if (!(sigma > 0.0)) throw RejectedInput("spiked_edge_prediction: sigma must be positive");
  EdgePrediction out;
  out.top = 2.0 * sigma;
  out.bottom = -2.0 * sigma;
  for (double b : spikes) {
    if (!std::isfinite(b)) throw RejectedInput("spiked_edge_prediction: spikes must be finite");
    std::optional<double> outlier;
    if (b > sigma) outlier = b + sigma * sigma / b;
    if (b < -sigma) outlier = b + sigma * sigma / b;
    if (outlier) {
      out.top = std::max(out.top, *outlier);
      out.bottom = std::min(out.bottom, *outlier);
    }
    out.outliers.push_back(outlier);
  }
  return out;
}

EdgePrediction spiked_edge_prediction_scaled(const std::vector<double>& spikes, double sigma, double scale) {
  if (!(sigma > 0.0)) throw RejectedInput("spiked_edge_prediction_scaled: sigma must be positive");
  if (!(scale > 0.0)) throw RejectedInput("spiked_edge_prediction_scaled: scale must be positive");
  const double edge = std::sqrt(2.0) * sigma;
  EdgePrediction out;
  out.top = edge;
  out.bottom = -edge;
  for (double b : spikes) {
    if (!std::isfinite(b)) throw RejectedInput("spiked_edge_prediction_scaled: spikes must be finite");
    std::optional<double> outlier;
    if (std::abs(b) > edge) outlier = b + scale * sigma / b;
    if (outlier) {
      out.top = std::max(out.top, *outlier);
      out.bottom = std::min(out.bottom, *outlier);
    }
    out.outliers.push_back(outlier);
  }
  return out;
}

double degeneracy_fraction(std::size_t l, const std::vector<double>& ratios, bool* small_ratio) {
  if (l == 0) throw RejectedInput("degeneracy_fraction: L must be at least 1");
  if (ratios.empty()) throw RejectedInput("degeneracy_fraction: need at least one ratio");
  double mean_inverse = 0.0;
  bool small = false;
  for (double r : ratios) {
    if (!(r >= 1.0) || !std::isfinite(r)) throw RejectedInput("degeneracy_fraction: ratios must be >= 1");
    small = small || r < 5.0;
    mean_inverse += 1.0 / r;
  }
  mean_inverse /= static_cast<double>(ratios.size());
  if (small_ratio) *small_ratio = small;
  return 1.0 - mean_inverse / static_cast<double>(l);
}

double sparse_extremal_prediction(double p, double k_index, double d) {
  if (!(p >= 3.0)) throw RejectedInput("sparse_extremal_prediction: P must be at least 3");
  if (!(k_index >= 1.0) || !(k_index <= p)) throw RejectedInput("sparse_extremal_prediction: need 1 <= k <= P");
  if (!(d > 0.0)) throw RejectedInput("sparse_extremal_prediction: d must be positive");
  const double inner = std::log(p) / d;
  if (!(inner > 1.0)) throw RejectedInput("sparse_extremal_prediction: need log(P)/d > 1");
  return std::sqrt(std::log(p / k_index) / std::log(inner));
}

double sparse_tail_density(double x, double p_row) {
  if (x == 0.0 || !std::isfinite(x)) throw RejectedInput("sparse_tail_density: x must be finite and nonzero");
  if (!(p_row > 0.0)) throw RejectedInput("sparse_tail_density: p_row must be positive");
  const double x2 = x * x;
  return std::pow(M_E * p_row / x2, x2);
}

}  // namespace rmt
