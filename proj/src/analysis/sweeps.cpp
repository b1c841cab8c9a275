#include <algorithm>
#include <cmath>

#include "rmt/analysis.hpp"
#include "rmt/eigen.hpp"
#include "rmt/ensembles.hpp"
#include "rmt/rng.hpp"
#include "rmt/simd.hpp"
#include "rmt/slq.hpp"

namespace rmt {

namespace {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& v) {
  MeanStd m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return m;
}

// Extreme eigenvalues: exact, or Ritz extremes of a Lanczos run whose start
// vector comes from a stream disjoint from the matrix stream.
std::pair<double, double> extremes(const SymmetricMatrix& a, ExtremeSolver solver, std::size_t steps,
                                   std::uint64_t seed, std::uint64_t stream) {
  if (solver == ExtremeSolver::dense || a.size() <= steps) {
    const EmpiricalSpectrum s = eigvalsh(a);
    return {s.min(), s.max()};
  }
  RngStream rng(seed, stream | (std::uint64_t{1} << 63));
  std::vector<double> v(a.size());
  for (double& x : v) x = rng.normal();
  const double norm = std::sqrt(simd::dot(v, v));
  for (double& x : v) x /= norm;
  const LanczosResult lr = lanczos(operator_from_matrix(a), v, steps);
  const TridiagonalEigen e = eigh_tridiagonal(lr.t, false);
  return {e.nodes.front(), e.nodes.back()};
}

}  // namespace

std::vector<BbpRow> sweep_bbp(const BbpSweepOptions& opt) {
  if (!(opt.sigma > 0.0)) throw RejectedInput("sweep_bbp: sigma must be positive");
  if (opt.trials == 0) throw RejectedInput("sweep_bbp: need at least one trial");
  if (opt.mode == BbpMode::scaled && !(opt.n0 > 0.0)) throw RejectedInput("sweep_bbp: n0 must be positive");
  std::vector<BbpRow> rows;
  for (std::size_t i = 0; i < opt.dims.size(); ++i) {
    const std::size_t p = opt.dims[i];
    BbpRow row;
    row.dim = p;
    row.spike = opt.mode == BbpMode::fixed ? opt.beta : opt.beta * std::sqrt(static_cast<double>(p) / (2.0 * opt.n0));
    const EdgePrediction pred = spiked_edge_prediction({row.spike}, opt.sigma);
    row.predicted_top = pred.top;
    row.predicted_bottom = pred.bottom;
    std::vector<double> tops, bottoms;
    for (std::size_t t = 0; t < opt.trials; ++t) {
      const std::uint64_t stream = RngStream::sweep_stream(i, t);
      RngStream rng(opt.seed, stream);
      const SymmetricMatrix a = sample_spiked_goe(p, opt.sigma, {row.spike}, rng);
      const auto [lo, hi] = extremes(a, opt.solver, opt.lanczos_steps, opt.seed, stream);
      bottoms.push_back(lo);
      tops.push_back(hi);
    }
    const MeanStd top = mean_std(tops), bottom = mean_std(bottoms);
    row.mean_top = top.mean;
    row.std_top = top.std;
    row.mean_bottom = bottom.mean;
    row.std_bottom = bottom.std;
    rows.push_back(row);
  }
  return rows;
}

Table to_table(const std::vector<BbpRow>& rows) {
  Table t;
  t.header = {"dim", "spike", "mean_top", "std_top", "mean_bottom", "std_bottom", "predicted_top", "predicted_bottom"};
  t.columns.assign(t.header.size(), {});
  for (const BbpRow& r : rows) {
    const double v[] = {static_cast<double>(r.dim), r.spike, r.mean_top, r.std_top, r.mean_bottom,
                        r.std_bottom, r.predicted_top, r.predicted_bottom};
    for (std::size_t c = 0; c < t.columns.size(); ++c) t.columns[c].push_back(v[c]);
  }
  return t;
}

std::vector<std::size_t> degeneracy_dims(std::size_t factors, double ratio, std::size_t dim_base) {
  if (factors == 0) throw RejectedInput("degeneracy_dims: need at least one factor");
  if (!(ratio >= 1.0)) throw RejectedInput("degeneracy_dims: ratio must be >= 1");
  const auto inner = static_cast<std::size_t>(std::llround(static_cast<double>(dim_base) / ratio));
  if (inner == 0) throw RejectedInput("degeneracy_dims: dim_base / R rounds to zero");
  std::vector<std::size_t> dims(factors + 1, inner);
  dims[0] = dim_base;
  return dims;
}

std::vector<DegeneracyRow> sweep_degeneracy(const DegeneracySweepOptions& opt) {
  if (opt.trials == 0) throw RejectedInput("sweep_degeneracy: need at least one trial");
  std::vector<DegeneracyRow> rows;
  std::size_t index = 0;
  for (double ratio : opt.ratios) {
    for (std::size_t l : opt.factors) {
      DegeneracyRow row;
      row.factors = l;
      row.ratio = ratio;
      row.predicted = degeneracy_fraction(l, std::vector<double>(l, ratio), &row.small_ratio);
      const auto dims = degeneracy_dims(l, ratio, opt.dim_base);
      std::vector<double> measured;
      for (std::size_t t = 0; t < opt.trials; ++t) {
        RngStream rng(opt.seed, RngStream::sweep_stream(index, t));
        measured.push_back(detect_atom_zero(eigvalsh(sample_wishart_product(dims, opt.sigma, rng)), opt.atom_tol));
      }
      row.measured_mean = mean_std(measured).mean;
      row.measured_min = *std::min_element(measured.begin(), measured.end());
      row.measured_max = *std::max_element(measured.begin(), measured.end());
      rows.push_back(row);
      ++index;
    }
  }
  return rows;
}

Table to_table(const std::vector<DegeneracyRow>& rows) {
  Table t;
  t.header = {"factors", "ratio", "predicted", "measured_mean", "measured_min", "measured_max", "small_ratio"};
  t.columns.assign(t.header.size(), {});
  for (const DegeneracyRow& r : rows) {
    const double v[] = {static_cast<double>(r.factors), r.ratio, r.predicted, r.measured_mean,
                        r.measured_min, r.measured_max, r.small_ratio ? 1.0 : 0.0};
    for (std::size_t c = 0; c < t.columns.size(); ++c) t.columns[c].push_back(v[c]);
  }
  return t;
}

double zero_row_fraction(const SymmetricMatrix& a) {
  std::size_t zero = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto row = a.row(i);
    if (std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; })) ++zero;
  }
  return static_cast<double>(zero) / static_cast<double>(a.size());
}

double entry_scale(const SymmetricMatrix& a) {
  const double f = a.frobenius_norm();
  return std::sqrt(f * f / static_cast<double>(a.size()));
}

std::vector<PercolationRow> sweep_percolation(const PercolationSweepOptions& opt) {
  if (opt.trials == 0) throw RejectedInput("sweep_percolation: need at least one trial");
  std::vector<PercolationRow> rows;
  for (std::size_t i = 0; i < opt.ks.size(); ++i) {
    const double k = opt.ks[i];
    if (!(k > 0.0) || k > static_cast<double>(opt.dim)) throw RejectedInput("sweep_percolation: k must lie in (0, P]");
    PercolationRow row;
    row.k = k;
    row.keep_probability = k / static_cast<double>(opt.dim);
    row.exits_bulk = true;
    const double n = static_cast<double>(opt.trials);
    for (std::size_t t = 0; t < opt.trials; ++t) {
      RngStream rng(opt.seed, RngStream::sweep_stream(i, t));
      const SymmetricMatrix goe = sample_goe(opt.dim, opt.sigma, rng);
      const SymmetricMatrix a = percolate(goe, k, rng);
      const EmpiricalSpectrum s = eigvalsh(a);
      const double sh = entry_scale(a);
      const double max_abs = std::max(std::abs(s.min()), std::abs(s.max()));
      double tail = 0.0;
      for (std::size_t j = 0; j < s.size(); ++j)
        if (std::abs(s.values[j]) > 2.0 * sh) tail += s.weight(j);
      const double allowance = std::max(0.05, 3.0 * std::pow(static_cast<double>(opt.dim), -2.0 / 3.0)) * 4.0 * sh;
      row.atom_weight += detect_atom_zero(s, opt.atom_tol) / n;
      row.zero_row_fraction += zero_row_fraction(a) / n;
      row.max_abs += max_abs / n;
      row.sigma_hat += sh / n;
      row.tail_mass += tail / n;
      row.exits_bulk = row.exits_bulk && max_abs > 2.0 * sh + allowance;
    }
    rows.push_back(row);
  }
  return rows;
}

Table to_table(const std::vector<PercolationRow>& rows) {
  Table t;
  t.header = {"k", "keep_probability", "atom_weight", "zero_row_fraction", "max_abs", "sigma_hat", "tail_mass",
              "exits_bulk"};
  t.columns.assign(t.header.size(), {});
  for (const PercolationRow& r : rows) {
    const double v[] = {r.k, r.keep_probability, r.atom_weight, r.zero_row_fraction, r.max_abs,
                        r.sigma_hat, r.tail_mass, r.exits_bulk ? 1.0 : 0.0};
    for (std::size_t c = 0; c < t.columns.size(); ++c) t.columns[c].push_back(v[c]);
  }
  return t;
}

}  // namespace rmt
