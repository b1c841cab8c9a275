#include <cctype>
#include <cmath>
#include <nlohmann/json.hpp>

#include "rmt/ensembles.hpp"

namespace rmt {

namespace {

struct KindName {
  EnsembleKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {EnsembleKind::goe, "goe"},
    {EnsembleKind::wigner_general, "wigner-general"},
    {EnsembleKind::wishart, "wishart"},
    {EnsembleKind::ginibre_product, "ginibre-product"},
    {EnsembleKind::wishart_product, "wishart-product"},
    {EnsembleKind::percolated_wigner, "percolated-wigner"},
    {EnsembleKind::percolated_wishart, "percolated-wishart"},
    {EnsembleKind::percolated_product, "percolated-product"},
    {EnsembleKind::spiked_goe, "spiked-goe"},
};

bool is_product(EnsembleKind k) {
  return k == EnsembleKind::ginibre_product || k == EnsembleKind::wishart_product ||
         k == EnsembleKind::percolated_product;
}

bool is_percolated(EnsembleKind k) {
  return k == EnsembleKind::percolated_wigner || k == EnsembleKind::percolated_wishart ||
         k == EnsembleKind::percolated_product;
}

}  // namespace

std::string_view to_string(EnsembleKind k) {
  for (const auto& kn : kKindNames)
    if (kn.kind == k) return kn.name;
  return "unknown";
}

std::string_view to_string(EntryDistribution d) {
  switch (d) {
    case EntryDistribution::gaussian: return "gaussian";
    case EntryDistribution::rademacher: return "rademacher";
    case EntryDistribution::uniform: return "uniform";
  }
  return "unknown";
}

EnsembleKind parse_ensemble_kind(std::string_view s) {
  std::string norm(s);
  for (char& c : norm) c = c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (const auto& kn : kKindNames)
    if (kn.name == norm) return kn.kind;
  throw RejectedInput("unknown ensemble '" + std::string(s) + "'");
}

EntryDistribution parse_entry_distribution(std::string_view s) {
  if (s == "gaussian") return EntryDistribution::gaussian;
  if (s == "rademacher") return EntryDistribution::rademacher;
  if (s == "uniform") return EntryDistribution::uniform;
  throw RejectedInput("unknown entry distribution '" + std::string(s) + "'");
}

void EnsembleSpec::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw RejectedInput("ensemble: sigma must be positive");
  if (is_product(kind)) {
    if (dims.size() < 2) throw RejectedInput("ensemble: product kinds need dims N_1..N_{L+1} with L >= 1");
    for (std::size_t d : dims)
      if (d == 0) throw RejectedInput("ensemble: dims must be positive");
    if (kind == EnsembleKind::ginibre_product && !sigmas.empty() && sigmas.size() != factors()) {
      throw RejectedInput("ensemble: sigmas must list one value per factor");
    }
  } else if (dim == 0) {
    throw RejectedInput("ensemble: dim must be positive");
  }
  if (is_percolated(kind)) {
    const std::size_t p = kind == EnsembleKind::percolated_product ? dims.front() : dim;
    if (!(k > 0.0)) throw RejectedInput("ensemble: sparsity constant k must be positive");
    if (k > static_cast<double>(p)) throw RejectedInput("ensemble: k exceeds P, keep probability above 1");
  }
  if (kind == EnsembleKind::spiked_goe && spikes.size() * 10 > dim) {
    throw RejectedInput("ensemble: spike count must not exceed P/10");
  }
}

SymmetricMatrix EnsembleSpec::sample(RngStream& rng) const {
  validate();
  const std::size_t inner = n == 0 ? dim : n;
  switch (kind) {
    case EnsembleKind::goe: return sample_goe(dim, sigma, rng);
    case EnsembleKind::wigner_general: return sample_wigner_general(dim, sigma, entries, rng);
    case EnsembleKind::wishart: return sample_wishart(dim, inner, sigma, rng);
    case EnsembleKind::wishart_product: return sample_wishart_product(dims, sigma, rng);
    case EnsembleKind::spiked_goe: return sample_spiked_goe(dim, sigma, spikes, rng);
    case EnsembleKind::percolated_wigner: {
      const SymmetricMatrix a = sample_goe(dim, sigma, rng);
      return percolate(a, k, rng);
    }
    case EnsembleKind::percolated_wishart: {
      const SymmetricMatrix a = sample_wishart(dim, inner, sigma, rng);
      return percolate(a, k, rng);
    }
    case EnsembleKind::percolated_product: {
      const SymmetricMatrix a = sample_wishart_product(dims, sigma, rng);
      return percolate(a, k, rng);
    }
    case EnsembleKind::ginibre_product:
      throw RejectedInput("ensemble: ginibre-product is not symmetric; sample it with sample_ginibre_product");
  }
  throw RejectedInput("ensemble: unhandled kind");
}

std::string EnsembleSpec::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = std::string(to_string(kind));
  j["dim"] = dim;
  j["sigma"] = sigma;
  j["n"] = n;
  j["dims"] = dims;
  j["sigmas"] = sigmas;
  j["k"] = k;
  j["p"] = dim > 0 && k > 0.0 ? k / static_cast<double>(is_product(kind) && !dims.empty() ? dims.front() : dim) : 0.0;
  j["spikes"] = spikes;
  j["entry_distribution"] = std::string(to_string(entries));
  return j.dump();
}

EnsembleSpec EnsembleSpec::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw RejectedInput(std::string("ensemble JSON: ") + e.what());
  }
  if (!j.is_object()) throw RejectedInput("ensemble JSON: expected an object");
  EnsembleSpec s;
  try {
    if (j.contains("kind")) s.kind = parse_ensemble_kind(j["kind"].get<std::string>());
    if (j.contains("dim")) s.dim = j["dim"].get<std::size_t>();
    if (j.contains("sigma")) s.sigma = j["sigma"].get<double>();
    if (j.contains("n")) s.n = j["n"].get<std::size_t>();
    if (j.contains("dims")) s.dims = j["dims"].get<std::vector<std::size_t>>();
    if (j.contains("sigmas")) s.sigmas = j["sigmas"].get<std::vector<double>>();
    if (j.contains("k")) s.k = j["k"].get<double>();
    if (j.contains("spikes")) s.spikes = j["spikes"].get<std::vector<double>>();
    if (j.contains("entry_distribution")) s.entries = parse_entry_distribution(j["entry_distribution"].get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw RejectedInput(std::string("ensemble JSON: ") + e.what());
  }
  return s;
}

}  // namespace rmt
