#include <cmath>

#include "rmt/ensembles.hpp"
#include "rmt/simd.hpp"

namespace rmt {

namespace {

// Fills the upper triangle row by row from `draw(i, j)` and mirrors it.
template <typename Draw>
SymmetricMatrix symmetric_from_upper(std::size_t p, double scale, Draw draw) {
  std::vector<double> e(p * p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      const double v = draw(i, j) * scale;
      e[i * p + j] = v;
      e[j * p + i] = v;
    }
  }
  return SymmetricMatrix::from_entries(p, std::move(e));
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw RejectedInput(std::string(what) + " must be positive and finite");
}

DenseMatrix gaussian_factor(std::size_t rows, std::size_t cols, double scale, RngStream& rng) {
  DenseMatrix x(rows, cols);
  for (double& v : x.data()) v = scale * rng.normal();
  return x;
}

}  // namespace

SymmetricMatrix sample_goe(std::size_t p, double sigma, RngStream& rng) {
  if (p == 0) throw RejectedInput("sample_goe: dimension must be positive");
  require_positive(sigma, "sample_goe: sigma");
  const double diag = std::sqrt(2.0) * sigma;
  return symmetric_from_upper(p, 1.0 / std::sqrt(static_cast<double>(p)),
                              [&](std::size_t i, std::size_t j) { return (i == j ? diag : sigma) * rng.normal(); });
}

SymmetricMatrix sample_wigner_general(std::size_t p, double sigma, EntryDistribution dist, RngStream& rng) {
  if (p == 0) throw RejectedInput("sample_wigner_general: dimension must be positive");
  require_positive(sigma, "sample_wigner_general: sigma");
  // Unit-variance draw; diagonal entries get the same sqrt(2) boost as the GOE.
  auto unit = [&]() {
    switch (dist) {
      case EntryDistribution::gaussian: return rng.normal();
      case EntryDistribution::rademacher: return rng.rademacher();
      case EntryDistribution::uniform: return std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
    }
    return 0.0;
  };
  const double diag = std::sqrt(2.0) * sigma;
  return symmetric_from_upper(p, 1.0 / std::sqrt(static_cast<double>(p)),
                              [&](std::size_t i, std::size_t j) { return (i == j ? diag : sigma) * unit(); });
}

SymmetricMatrix sample_wishart(std::size_t p, std::size_t n, double sigma, RngStream& rng) {
  if (p == 0 || n == 0) throw RejectedInput("sample_wishart: dimensions must be positive");
  require_positive(sigma, "sample_wishart: sigma");
  return gram(gaussian_factor(p, n, sigma, rng), static_cast<double>(n));
}

SymmetricMatrix sample_wishart_product(const std::vector<std::size_t>& dims, double sigma, RngStream& rng) {
  if (dims.size() < 2) throw RejectedInput("sample_wishart_product: need at least two dimensions (L >= 1)");
  for (std::size_t d : dims)
    if (d == 0) throw RejectedInput("sample_wishart_product: dimensions must be positive");
  require_positive(sigma, "sample_wishart_product: sigma");
  // Each factor carries its own 1/sqrt(N_{l+1}), so the product needs no
  // final rescaling and intermediate magnitudes stay O(1).
  DenseMatrix x = gaussian_factor(dims[0], dims[1], sigma / std::sqrt(static_cast<double>(dims[1])), rng);
  for (std::size_t l = 1; l + 1 < dims.size(); ++l) {
    const DenseMatrix f =
        gaussian_factor(dims[l], dims[l + 1], sigma / std::sqrt(static_cast<double>(dims[l + 1])), rng);
    x = multiply(x, f);
  }
  return gram(x, 1.0);
}

SymmetricMatrix percolate(const SymmetricMatrix& a, double k, RngStream& rng) {
  require_positive(k, "percolate: k");
  const std::size_t p = a.size();
  const double keep = k / static_cast<double>(p);
  if (keep > 1.0) throw RejectedInput("percolate: keep probability k/P exceeds 1");
  return symmetric_from_upper(p, 1.0, [&](std::size_t i, std::size_t j) {
    const bool kept = rng.bernoulli(keep);
    return kept ? a(i, j) : 0.0;
  });
}

SymmetricMatrix sample_spiked_goe(std::size_t p, double sigma, const std::vector<double>& spikes, RngStream& rng) {
  if (spikes.size() * 10 > p) throw RejectedInput("sample_spiked_goe: spike count must not exceed P/10");
  for (double b : spikes)
    if (!std::isfinite(b)) throw RejectedInput("sample_spiked_goe: spike magnitudes must be finite");
  const SymmetricMatrix noise = sample_goe(p, sigma, rng);
  if (spikes.empty()) return noise;

  const auto& kern = simd::active();
  std::vector<std::vector<double>> us;
  while (us.size() < spikes.size()) {
    std::vector<double> u(p);
    for (double& v : u) v = rng.normal();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& prev : us) kern.axpy(-kern.dot(prev.data(), u.data(), p), prev.data(), u.data(), p);
    }
    const double norm = std::sqrt(kern.dot(u.data(), u.data(), p));
    if (norm < 1e-12) continue;
    for (double& v : u) v /= norm;
    us.push_back(std::move(u));
  }

  std::vector<double> e(noise.data().begin(), noise.data().end());
  for (std::size_t s = 0; s < spikes.size(); ++s) {
    const auto& u = us[s];
    for (std::size_t i = 0; i < p; ++i) kern.axpy(spikes[s] * u[i], u.data(), &e[i * p], p);
  }
  return SymmetricMatrix::from_entries(p, std::move(e));
}

GinibreProduct sample_ginibre_product(const std::vector<std::size_t>& dims, const std::vector<double>& sigmas,
                                      RngStream& rng, bool want_eigenvalues) {
  if (dims.size() < 2) throw RejectedInput("sample_ginibre_product: need at least two dimensions (L >= 1)");
  const std::size_t l = dims.size() - 1;
  if (sigmas.size() != l) throw RejectedInput("sample_ginibre_product: need one sigma per factor");
  for (std::size_t d : dims)
    if (d == 0) throw RejectedInput("sample_ginibre_product: dimensions must be positive");
  for (double s : sigmas) require_positive(s, "sample_ginibre_product: sigma");
  if (want_eigenvalues) {
    for (std::size_t d : dims)
      if (d != dims[0]) throw RejectedInput("sample_ginibre_product: eigenvalues need a square product");
  }

  GinibreProduct out;
  out.product = gaussian_factor(dims[0], dims[1], sigmas[0] / std::sqrt(static_cast<double>(dims[0])), rng);
  for (std::size_t f = 1; f < l; ++f) {
    const DenseMatrix x = gaussian_factor(dims[f], dims[f + 1], sigmas[f] / std::sqrt(static_cast<double>(dims[f])), rng);
    out.product = multiply(out.product, x);
  }
  if (want_eigenvalues) out.eigenvalues = eigvals_general(out.product);
  return out;
}

}  // namespace rmt
