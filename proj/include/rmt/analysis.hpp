#pragma once

// Empirical-versus-analytic comparison, spectral feature detectors and the
// parameter sweeps. All default tolerances are choices of this library.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rmt/core.hpp"
#include "rmt/laws.hpp"

namespace rmt {

struct CompareTolerances {
  double atom_tol = 1e-8;
  /// |empirical - law| zero-atom weight above this is flagged as a mismatch.
  double atom_discrepancy = 0.01;
  double min_relative_gap = 0.1;
  /// Overrides the default outlier allowance max(0.05 w, 3 P^(-2/3) w).
  std::optional<double> edge_tol;
  /// When set, compare() also fits the near-origin exponent over this window.
  std::optional<Interval> slope_window;
};

struct GapResult {
  bool exists = false;
  Interval interval;
};

struct OutlierReport {
  std::size_t above = 0;
  std::size_t below = 0;
  std::vector<double> positions;
  double edge_tol = 0.0;
};

struct SlopeFit {
  double exponent = 0.0;
  double standard_error = 0.0;
  Interval window;
  std::size_t points = 0;
  std::size_t bins = 0;
};

struct ComparisonReport {
  double ks_distance = 0.0;
  std::vector<double> moment_errors;  // moments 1..6
  double atom_zero_weight = 0.0;
  double law_atom_zero_weight = 0.0;
  bool atom_mismatch = false;
  GapResult gap;
  OutlierReport outliers;
  std::optional<SlopeFit> slope_fit;

  /// JSON object (snake_case keys).
  std::string to_json() const;
};

/// sup |F_emp - F_law| with right-continuous empirical CDF and atom steps in
/// the law. Eigenvalues within `snap_tol` of a law atom are treated as sitting on it.
double ks_distance(const EmpiricalSpectrum& s, const SpectralLaw& law, double snap_tol = 1e-8);
/// Same against an arbitrary continuous CDF.
double ks_distance(const EmpiricalSpectrum& s, const std::function<double(double)>& cdf);
/// KS distance between two weighted empirical spectra.
double ks_distance(const EmpiricalSpectrum& a, const EmpiricalSpectrum& b);

ComparisonReport compare(const EmpiricalSpectrum& s, const SpectralLaw& law, const CompareTolerances& tol = {});

/// Weight of eigenvalues with |x| <= atom_tol.
double detect_atom_zero(const EmpiricalSpectrum& s, double atom_tol = 1e-8);

/// Largest spacing among eigenvalues in [-atom_tol, median of the nonzero bulk];
/// flagged when it exceeds min_relative_gap times the spectral range.
GapResult detect_gap(const EmpiricalSpectrum& s, double min_relative_gap = 0.1, double atom_tol = 1e-8);

/// Eigenvalues beyond the law's hull by more than the edge allowance.
OutlierReport detect_outliers(const EmpiricalSpectrum& s, const SpectralLaw& law, std::optional<double> edge_tol = {});
double default_edge_tol(const SpectralLaw& law, std::size_t p);

/// Log-log least squares slope of a log-binned histogram over `window`.
/// Bins with fewer than `min_per_bin` eigenvalues are merged with their neighbour.
/// Requires at least 30 eigenvalues in the window and window.lo > atom_tol.
SlopeFit fit_origin_exponent(const EmpiricalSpectrum& s, Interval window, std::size_t bins = 20,
                             std::size_t min_per_bin = 10, double atom_tol = 1e-8);

/// Maximum likelihood exponent of a planar density |z|^e near the origin from
/// moduli r <= r_max: the radial law is then proportional to r^(e+2).
SlopeFit fit_planar_exponent(const std::vector<double>& moduli, double r_max);

// Sweeps. Trial t at parameter index i uses RngStream(seed, sweep_stream(i, t)).

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

enum class BbpMode { fixed, scaled };
enum class ExtremeSolver { dense, lanczos };

struct BbpSweepOptions {
  std::vector<std::size_t> dims{500, 1000, 2000};
  double beta = 3.0;
  double sigma = 1.0;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  BbpMode mode = BbpMode::fixed;
  /// Scaled mode: spike magnitude beta * sqrt(P / (2 n0)).
  double n0 = 250.0;
  ExtremeSolver solver = ExtremeSolver::dense;
  std::size_t lanczos_steps = 100;
};

struct BbpRow {
  std::size_t dim = 0;
  double spike = 0.0;
  double mean_top = 0.0, std_top = 0.0;
  double mean_bottom = 0.0, std_bottom = 0.0;
  double predicted_top = 0.0, predicted_bottom = 0.0;
};

std::vector<BbpRow> sweep_bbp(const BbpSweepOptions& opt);
Table to_table(const std::vector<BbpRow>& rows);

struct DegeneracySweepOptions {
  std::vector<std::size_t> factors{1, 2, 3, 5};
  std::vector<double> ratios{5.0};
  std::size_t dim_base = 1000;
  std::size_t trials = 5;
  std::uint64_t seed = 0;
  double sigma = 1.0;
  double atom_tol = 1e-8;
};

struct DegeneracyRow {
  std::size_t factors = 0;
  double ratio = 0.0;
  double predicted = 0.0;
  double measured_mean = 0.0, measured_min = 0.0, measured_max = 0.0;
  bool small_ratio = false;
};

/// Factor dims: N_1 = dim_base, every inner dim round(dim_base / R).
std::vector<std::size_t> degeneracy_dims(std::size_t factors, double ratio, std::size_t dim_base);
std::vector<DegeneracyRow> sweep_degeneracy(const DegeneracySweepOptions& opt);
Table to_table(const std::vector<DegeneracyRow>& rows);

struct PercolationSweepOptions {
  std::size_t dim = 2000;
  std::vector<double> ks{1.0, 2.0, 5.0, 10.0};
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  double sigma = 1.0;
  double atom_tol = 1e-8;
};

struct PercolationRow {
  double k = 0.0;
  double keep_probability = 0.0;
  double atom_weight = 0.0;
  double zero_row_fraction = 0.0;
  double max_abs = 0.0;
  double sigma_hat = 0.0;
  double tail_mass = 0.0;   // weight of |x| > 2 sigma_hat
  bool exits_bulk = false;  // max_abs > 2 sigma_hat + edge allowance (all trials)
};

/// Fraction of rows of `a` that are entirely zero.
double zero_row_fraction(const SymmetricMatrix& a);
/// sqrt(||A||_F^2 / P): semicircle scale matching the second moment.
double entry_scale(const SymmetricMatrix& a);
std::vector<PercolationRow> sweep_percolation(const PercolationSweepOptions& opt);
Table to_table(const std::vector<PercolationRow>& rows);

}  // namespace rmt
