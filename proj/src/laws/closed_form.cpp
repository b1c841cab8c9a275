#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numeric>

#include "rmt/laws.hpp"

namespace rmt {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw RejectedInput(std::string(what) + " must be positive and finite");
}

// F(M) = prod (M / R_i + 1) and its derivative.
std::pair<double, double> m_polynomial(double m, const std::vector<double>& ratios) {
  double f = 1.0;
  double df = 0.0;
  for (double r : ratios) {
    const double factor = m / r + 1.0;
    df = df * factor + f / r;
    f *= factor;
  }
  return {f, df};
}

// Lowest M on the branch: the product vanishes at -min R, the atom weight 1 + M
// vanishes at -1.
double m_branch_floor(const std::vector<double>& ratios) {
  return std::max(-1.0, -*std::min_element(ratios.begin(), ratios.end()));
}

}  // namespace

SpectralLaw semicircle_law(double sigma) {
  require_positive(sigma, "semicircle_law: sigma");
  const double s2 = sigma * sigma;
  const double edge = 2.0 * sigma;
  SpectralLaw::Definition d;
  d.name = "semicircle";
  d.params = {{"sigma", sigma}};
  d.support = {{-edge, edge}};
  d.pdf = [s2](double x) { return std::sqrt(std::max(0.0, 4.0 * s2 - x * x)) / (2.0 * M_PI * s2); };
  d.cdf = [edge](double x) {
    if (x <= -edge) return 0.0;
    if (x >= edge) return 1.0;
    const double t = x / edge;
    return 0.5 + (t * std::sqrt(1.0 - t * t) + std::asin(t)) / M_PI;
  };
  return SpectralLaw(std::move(d));
}

SpectralLaw marcenko_pastur_law(double q, double sigma) {
  require_positive(q, "marcenko_pastur_law: q");
  require_positive(sigma, "marcenko_pastur_law: sigma");
  const double s2 = sigma * sigma;
  const double lo = s2 * (1.0 - std::sqrt(q)) * (1.0 - std::sqrt(q));
  const double hi = s2 * (1.0 + std::sqrt(q)) * (1.0 + std::sqrt(q));
  SpectralLaw::Definition d;
  d.name = "marcenko-pastur";
  d.params = {{"q", q}, {"sigma", sigma}};
  d.support = {{lo, hi}};
  d.pdf = [=](double x) {
    if (x <= 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(std::max(0.0, (hi - x) * (x - lo))) / (2.0 * M_PI * x * q * s2);
  };
  if (q > 1.0) d.atoms = {{0.0, 1.0 - 1.0 / q}};
  return SpectralLaw(std::move(d));
}

double ginibre_product_planar_density(double r, std::size_t l, const std::vector<double>& sigmas) {
  if (l == 0 || sigmas.size() != l) throw RejectedInput("ginibre_product: need L >= 1 and one sigma per factor");
  const double s = std::accumulate(sigmas.begin(), sigmas.end(), 1.0, std::multiplies<>());
  r = std::abs(r);
  if (r > s) return 0.0;
  const double a = 2.0 / static_cast<double>(l);
  return std::pow(r, a - 2.0) / (static_cast<double>(l) * M_PI * std::pow(s, a));
}

SpectralLaw ginibre_product_radial_law(std::size_t l, const std::vector<double>& sigmas) {
  if (l == 0 || sigmas.size() != l) throw RejectedInput("ginibre_product: need L >= 1 and one sigma per factor");
  for (double s : sigmas) require_positive(s, "ginibre_product: sigma");
  const double s = std::accumulate(sigmas.begin(), sigmas.end(), 1.0, std::multiplies<>());
  const double a = 2.0 / static_cast<double>(l);
  SpectralLaw::Definition d;
  d.name = "ginibre-product-radial";
  d.params = {{"L", static_cast<double>(l)}, {"radius", s}};
  for (std::size_t i = 0; i < l; ++i) d.params.emplace_back("sigma_" + std::to_string(i + 1), sigmas[i]);
  d.support = {{0.0, s}};
  d.pdf = [a, s](double r) { return a * std::pow(r, a - 1.0) / std::pow(s, a); };
  d.cdf = [a, s](double r) { return r <= 0.0 ? 0.0 : r >= s ? 1.0 : std::pow(r / s, a); };
  return SpectralLaw(std::move(d));
}

double product_wishart_planar_density_l2(double modulus, double r, double sigma) {
  if (!(r > 0.0)) throw RejectedInput("product_wishart_law_l2: R must be positive");
  if (r > 1.0) throw RejectedInput("product_wishart_law_l2: R > 1 gives a negative atom; pass 1/R instead");
  require_positive(sigma, "product_wishart_law_l2: sigma");
  const double z2 = modulus * modulus;
  if (z2 > sigma * sigma) return 0.0;
  return r / (M_PI * sigma * sigma * std::sqrt((1.0 - r) * (1.0 - r) + 4.0 * r * z2 / (sigma * sigma)));
}

SpectralLaw product_wishart_law_l2(double r, double sigma) {
  product_wishart_planar_density_l2(0.0, r, sigma);  // validates
  SpectralLaw::Definition d;
  d.name = "product-wishart-l2";
  d.params = {{"R", r}, {"sigma", sigma}};
  d.support = {{0.0, sigma}};
  // Radial form 2 pi x * planar, rearranged so x^2 never underflows against the 1/|z| pole at R = 1.
  d.pdf = [r, sigma](double x) {
    return 2.0 * r / (sigma * sigma * std::sqrt((1.0 - r) * (1.0 - r) / (x * x) + 4.0 * r / (sigma * sigma)));
  };
  if (r < 1.0) d.atoms = {{0.0, 1.0 - r}};
  d.cdf = [r, sigma](double x) {
    if (x < 0.0) return 0.0;
    if (x >= sigma) return 1.0;
    const double c = (std::sqrt((1.0 - r) * (1.0 - r) + 4.0 * r * x * x / (sigma * sigma)) - (1.0 - r)) / 2.0;
    return (1.0 - r) + c;
  };
  return SpectralLaw(std::move(d));
}

double m_transform_root(double u, const std::vector<double>& ratios) {
  if (ratios.empty()) throw RejectedInput("m_transform: need at least one ratio");
  for (double r : ratios) require_positive(r, "m_transform: ratio");
  const double floor = m_branch_floor(ratios);
  const double u_floor = m_polynomial(floor, ratios).first;
  if (u <= u_floor) return floor;
  if (u >= 1.0) return 0.0;
  // F is increasing on the branch, so the root is bracketed by [floor, 0].
  const auto f = [&](double m) {
    const auto [v, dv] = m_polynomial(m, ratios);
    return std::make_pair(v - u, dv);
  };
  std::uintmax_t iters = 200;
  return boost::math::tools::newton_raphson_iterate(f, 0.5 * floor, floor, 0.0, 50, iters);
}

double product_m_transform_planar_density(double modulus, const std::vector<double>& ratios, double sigma) {
  require_positive(sigma, "m_transform: sigma");
  const double u = modulus * modulus / (sigma * sigma);
  if (u > 1.0) return 0.0;
  const double floor = m_branch_floor(ratios);
  if (u < m_polynomial(floor, ratios).first) return 0.0;
  const double m = m_transform_root(u, ratios);
  return 1.0 / (M_PI * sigma * sigma * m_polynomial(m, ratios).second);
}

SpectralLaw product_m_transform_law(const std::vector<double>& ratios, double sigma) {
  if (ratios.empty()) throw RejectedInput("m_transform: need at least one ratio");
  for (double r : ratios) require_positive(r, "m_transform: ratio");
  require_positive(sigma, "m_transform: sigma");
  const double floor = m_branch_floor(ratios);
  const double inner = sigma * std::sqrt(std::max(0.0, m_polynomial(floor, ratios).first));
  SpectralLaw::Definition d;
  d.name = "product-m-transform";
  d.params = {{"sigma", sigma}};
  for (std::size_t i = 0; i < ratios.size(); ++i) d.params.emplace_back("R_" + std::to_string(i + 1), ratios[i]);
  d.support = {{inner, sigma}};
  d.pdf = [ratios, sigma](double x) {
    // Below this the squared modulus underflows; the radial density is continuous there.
    x = std::max(x, 1e-150 * sigma);
    return 2.0 * M_PI * x * product_m_transform_planar_density(x, ratios, sigma);
  };
  const double atom = 1.0 + floor;
  if (atom > 0.0) d.atoms = {{0.0, atom}};
  // Radial mass below |z| is M(u) - M(u_inner), plus the atom.
  d.cdf = [ratios, sigma, floor, atom](double x) {
    if (x < 0.0) return 0.0;
    if (x >= sigma) return 1.0;
    return atom + m_transform_root(x * x / (sigma * sigma), ratios) - floor;
  };
  return SpectralLaw(std::move(d));
}

}  // namespace rmt
