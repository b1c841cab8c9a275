#pragma once

// Limiting spectral laws, Stieltjes-transform machinery and closed-form
// predictions (spiked edges, degeneracy fractions, sparse extremes).

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rmt/core.hpp"

namespace rmt {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct Atom {
  double location = 0.0;
  double weight = 0.0;
};

/// Analytic density: continuous part on disjoint sorted support intervals
/// plus point masses. Immutable; copies share the cumulative table.
class SpectralLaw {
 public:
  struct Definition {
    std::string name;
    std::vector<std::pair<std::string, double>> params;
    std::function<double(double)> pdf;  // evaluated only inside the support
    std::vector<Interval> support;
    std::vector<Atom> atoms;
    /// Optional closed-form CDF of the whole law (atoms included, right-continuous).
    std::function<double(double)> cdf;
  };

  /// Checks that continuous mass plus atom weights equals one within 1e-6.
  explicit SpectralLaw(Definition def);

  const std::string& name() const { return def_->name; }
  const std::vector<std::pair<std::string, double>>& params() const { return def_->params; }
  const std::vector<Interval>& support() const { return def_->support; }
  const std::vector<Atom>& atoms() const { return def_->atoms; }

  double pdf(double x) const;
  /// P(X <= x), right-continuous, atoms as steps.
  double cdf(double x) const;
  /// Smallest x with cdf(x) >= u.
  double quantile(double u) const;
  double continuous_mass() const { return table_->total; }
  double atom_mass() const;
  /// E[X^k] by quadrature plus atom terms.
  double moment(int k) const;
  /// Integral of pdf over [a, b] (continuous part only).
  double integrate_pdf(double a, double b) const;
  /// Hull of support intervals and atom locations.
  Interval hull() const;
  /// JSON object with name, params, support and atoms.
  std::string to_json() const;

 private:
  struct Table {
    // Per support interval: breakpoints and cumulative continuous mass at each.
    std::vector<std::vector<double>> knots;
    std::vector<std::vector<double>> cumulative;
    double total = 0.0;
  };
  double continuous_cdf(double x) const;

  std::shared_ptr<const Definition> def_;
  std::shared_ptr<const Table> table_;
};

/// Density (1/(2 pi sigma^2)) sqrt(4 sigma^2 - x^2) on [-2 sigma, 2 sigma].
SpectralLaw semicircle_law(double sigma);
/// Marcenko-Pastur with ratio q = P/N; atom 1 - 1/q at zero when q > 1.
SpectralLaw marcenko_pastur_law(double q, double sigma);
/// Radial law of the modulus of eigenvalues of a product of L square Ginibre
/// factors: planar density (1/(L pi s^(2/L))) |z|^(2/L - 2) on |z| <= s, s = prod sigma_l.
SpectralLaw ginibre_product_radial_law(std::size_t l, const std::vector<double>& sigmas);
double ginibre_product_planar_density(double r, std::size_t l, const std::vector<double>& sigmas);
/// Two-factor law with a single ratio R in (0, 1], over the modulus |z|:
/// radial marginal of R / (pi sigma^2 sqrt((1-R)^2 + 4 R |z|^2 / sigma^2)) plus atom 1 - R.
/// Throws for R > 1 (invert the ratio).
SpectralLaw product_wishart_law_l2(double r, double sigma);
double product_wishart_planar_density_l2(double modulus, double r, double sigma);
/// General ratios: M solves prod_i (M / R_i + 1) = |z|^2 / sigma^2 on the branch
/// through M(1) = 0; planar density (1/(pi sigma^2)) dM/du, atom 1 + M(0).
SpectralLaw product_m_transform_law(const std::vector<double>& ratios, double sigma);
double product_m_transform_planar_density(double modulus, const std::vector<double>& ratios, double sigma);
/// Branch value M(u) of the polynomial above.
double m_transform_root(double u, const std::vector<double>& ratios);

/// Complex-valued S(z) = integral rho(u) / (z - u) du.
class StieltjesFunction {
 public:
  StieltjesFunction() = default;
  explicit StieltjesFunction(std::function<std::complex<double>(std::complex<double>)> f) : f_(std::move(f)) {}
  /// Throws RejectedInput when Im z == 0.
  std::complex<double> operator()(std::complex<double> z) const;
  bool valid() const { return static_cast<bool>(f_); }

 private:
  std::function<std::complex<double>(std::complex<double>)> f_;
};

/// Numeric Stieltjes transform of a law: adaptive Gauss-Kronrod with edge
/// substitutions, plus exact atom terms weight / (z - location).
StieltjesFunction stieltjes_of_law(const SpectralLaw& law);
/// (z - sqrt(z - 2 sigma) sqrt(z + 2 sigma)) / (2 sigma^2).
StieltjesFunction semicircle_stieltjes(double sigma);
/// Closed form including the zero atom when q > 1.
StieltjesFunction marcenko_pastur_stieltjes(double q, double sigma);
/// Single point mass.
StieltjesFunction atom_stieltjes(double location);

struct SampledDensity {
  std::vector<double> x;
  std::vector<double> density;
};

/// density(x) = |Im S(x - i eta)| / pi.
SampledDensity invert_stieltjes(const StieltjesFunction& s, const std::vector<double>& grid, double eta);
/// Default eta: 1e-3 times the support width.
double default_inversion_eta(const SpectralLaw& law);
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

struct SubordinationOptions {
  double tolerance = 1e-10;
  int max_iterations = 10000;
};

/// Stieltjes transform of base ⊞ semicircle(sigma_w), solving
/// S = S_base(z - sigma_w^2 S) by damped fixed point followed by Newton.
StieltjesFunction free_add_wigner(StieltjesFunction base, double sigma_w, SubordinationOptions opt = {});
/// semicircle(sigma_w) ⊞ Marcenko-Pastur(q, sigma_mp).
StieltjesFunction free_add_wigner_wishart(double sigma_w, double q, double sigma_mp, SubordinationOptions opt = {});

struct EdgePrediction {
  double top = 0.0;
  double bottom = 0.0;
  /// One entry per spike: its detached eigenvalue, or nullopt when absorbed by the bulk.
  std::vector<std::optional<double>> outliers;
};

/// beta > sigma -> beta + sigma^2/beta; beta < -sigma -> -(|beta| + sigma^2/|beta|);
/// otherwise the bulk edge +-2 sigma.
EdgePrediction spiked_edge_prediction(const std::vector<double>& spikes, double sigma);
/// Variant with an explicit scale factor c (c = sqrt(P / 2N) in the loss-surface
/// normalization, bulk edge sqrt(2) sigma): beta -> beta + c sigma / beta when |beta| > sqrt(2) sigma.
EdgePrediction spiked_edge_prediction_scaled(const std::vector<double>& spikes, double sigma, double scale);

/// 1 - mean(1/R_i) / L. Sets *small_ratio when some R_i < 5, where the
/// large-ratio derivation is doubtful.
double degeneracy_fraction(std::size_t l, const std::vector<double>& ratios, bool* small_ratio = nullptr);

/// sqrt(log(P/k) / log(log(P)/d)).
double sparse_extremal_prediction(double p, double k_index, double d);
/// (e p_row / x^2)^(x^2), an unnormalized tail shape.
double sparse_tail_density(double x, double p_row);

}  // namespace rmt
