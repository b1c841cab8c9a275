#pragma once

// Seeded samplers for the random matrix families used in the experiments.
//
// Normalization conventions (fixed here, used everywhere):
//   Wigner-type     entries / sqrt(P)           -> support [-2 sigma, 2 sigma]
//   Wishart         X X^T / N                   -> Marcenko-Pastur, q = P / N
//   Wishart product X~ X~^T / (N_2 ... N_{L+1}) -> mean eigenvalue sigma^(2L)

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rmt/core.hpp"
#include "rmt/rng.hpp"

namespace rmt {

enum class EnsembleKind {
  goe,
  wigner_general,
  wishart,
  ginibre_product,
  wishart_product,
  percolated_wigner,
  percolated_wishart,
  percolated_product,
  spiked_goe,
};

enum class EntryDistribution { gaussian, rademacher, uniform };

std::string_view to_string(EnsembleKind k);
std::string_view to_string(EntryDistribution d);
EnsembleKind parse_ensemble_kind(std::string_view s);
EntryDistribution parse_entry_distribution(std::string_view s);

/// Tagged description of an ensemble. Fields not used by `kind` are ignored.
struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::goe;
  std::size_t dim = 100;                // P
  double sigma = 1.0;                   // entry scale
  std::size_t n = 0;                    // Wishart inner dimension N (0: equal to dim)
  std::vector<std::size_t> dims;        // product kinds: N_1 .. N_{L+1}
  std::vector<double> sigmas;           // Ginibre product: per-factor scale (empty: all sigma)
  double k = 0.0;                       // percolation: expected kept entries per row, p = k / P
  std::vector<double> spikes;           // spiked GOE magnitudes (signed)
  EntryDistribution entries = EntryDistribution::gaussian;

  std::size_t factors() const { return dims.empty() ? 0 : dims.size() - 1; }
  /// Throws RejectedInput describing the first violated constraint.
  void validate() const;
  /// Symmetric kinds only; ginibre_product throws (use sample_ginibre_product).
  SymmetricMatrix sample(RngStream& rng) const;

  std::string to_json() const;
  static EnsembleSpec from_json(std::string_view text);
};

SymmetricMatrix sample_goe(std::size_t p, double sigma, RngStream& rng);
SymmetricMatrix sample_wigner_general(std::size_t p, double sigma, EntryDistribution dist, RngStream& rng);
SymmetricMatrix sample_wishart(std::size_t p, std::size_t n, double sigma, RngStream& rng);
/// dims = N_1 .. N_{L+1}; factor l is N_l x N_{l+1}.
SymmetricMatrix sample_wishart_product(const std::vector<std::size_t>& dims, double sigma, RngStream& rng);
/// Keeps each upper-triangle entry (diagonal included) with probability k / P.
SymmetricMatrix percolate(const SymmetricMatrix& a, double k, RngStream& rng);
/// A + B with A = sum_i beta_i u_i u_i^T (orthonormal u_i) and B ~ sample_goe(P, sigma).
SymmetricMatrix sample_spiked_goe(std::size_t p, double sigma, const std::vector<double>& spikes, RngStream& rng);

struct GinibreProduct {
  DenseMatrix product;
  std::vector<std::complex<double>> eigenvalues;  // empty unless requested
};

/// X_1 X_2 ... X_L with factor l of shape N_l x N_{l+1} and entries Normal(0, sigma_l^2 / N_l).
/// Eigenvalues require every dimension to be equal.
GinibreProduct sample_ginibre_product(const std::vector<std::size_t>& dims, const std::vector<double>& sigmas,
                                      RngStream& rng, bool want_eigenvalues = true);

/// Eigenvalues of a real square matrix: Hessenberg reduction, then Francis
/// double-shift QR accepting 2x2 blocks. Ordered by descending modulus.
std::vector<std::complex<double>> eigvals_general(const DenseMatrix& a);

}  // namespace rmt
