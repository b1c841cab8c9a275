#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "rmt/analysis.hpp"

namespace rmt {

namespace {

struct Step {
  double x;
  double before;  // empirical CDF just below x
  double after;   // empirical CDF at x
};

// Groups equal values of a sorted weighted sample into CDF steps.
std::vector<Step> empirical_steps(const std::vector<double>& values, const std::vector<double>& weights) {
  std::vector<Step> steps;
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size();) {
    const double x = values[i];
    const double before = acc;
    while (i < values.size() && values[i] == x) acc += weights[i++];
    steps.push_back({x, before, std::min(acc, 1.0)});
  }
  if (!steps.empty()) steps.back().after = 1.0;
  return steps;
}

std::vector<double> weights_of(const EmpiricalSpectrum& s) {
  std::vector<double> w(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) w[i] = s.weight(i);
  return w;
}

}  // namespace

double ks_distance(const EmpiricalSpectrum& s, const SpectralLaw& law, double snap_tol) {
  if (s.empty()) throw RejectedInput("ks_distance: empty spectrum");
  std::vector<std::pair<double, double>> pts(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    double v = s.values[i];
    for (const Atom& a : law.atoms())
      if (std::abs(v - a.location) <= snap_tol) v = a.location;
    pts[i] = {v, s.weight(i)};
  }
  std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<double> values(pts.size()), weights(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) std::tie(values[i], weights[i]) = pts[i];

  double d = 0.0;
  for (const Step& st : empirical_steps(values, weights)) {
    const double f = law.cdf(st.x);
    double atom = 0.0;
    for (const Atom& a : law.atoms())
      if (a.location == st.x) atom += a.weight;
    d = std::max({d, std::abs(f - st.after), std::abs(f - atom - st.before)});
  }
  return std::min(d, 1.0);
}

double ks_distance(const EmpiricalSpectrum& s, const std::function<double(double)>& cdf) {
  if (s.empty()) throw RejectedInput("ks_distance: empty spectrum");
  double d = 0.0;
  for (const Step& st : empirical_steps(s.values, weights_of(s))) {
    const double f = cdf(st.x);
    d = std::max({d, std::abs(f - st.after), std::abs(f - st.before)});
  }
  return std::min(d, 1.0);
}

double ks_distance(const EmpiricalSpectrum& a, const EmpiricalSpectrum& b) {
  if (a.empty() || b.empty()) throw RejectedInput("ks_distance: empty spectrum");
  const auto wa = weights_of(a), wb = weights_of(b);
  std::size_t i = 0, j = 0;
  double fa = 0.0, fb = 0.0, d = 0.0;
  while (i < a.size() || j < b.size()) {
    const double x = j >= b.size() || (i < a.size() && a.values[i] <= b.values[j]) ? a.values[i] : b.values[j];
    while (i < a.size() && a.values[i] == x) fa += wa[i++];
    while (j < b.size() && b.values[j] == x) fb += wb[j++];
    d = std::max(d, std::abs(fa - fb));
  }
  return std::min(d, 1.0);
}

double detect_atom_zero(const EmpiricalSpectrum& s, double atom_tol) {
  if (s.weights.empty()) {
    // Count then divide: summing 1/P terms drifts off exact fractions like 4/5.
    const auto n = std::count_if(s.values.begin(), s.values.end(), [&](double v) { return std::abs(v) <= atom_tol; });
    return static_cast<double>(n) / static_cast<double>(s.size());
  }
  double w = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (std::abs(s.values[i]) <= atom_tol) w += s.weight(i);
  return std::min(w, 1.0);
}

GapResult detect_gap(const EmpiricalSpectrum& s, double min_relative_gap, double atom_tol) {
  GapResult out;
  if (s.size() < 2) return out;
  std::vector<double> bulk;
  for (double v : s.values)
    if (std::abs(v) > atom_tol) bulk.push_back(v);
  if (bulk.empty()) return out;
  const double median = bulk[bulk.size() / 2];
  std::vector<double> cand;
  for (double v : s.values)
    if (v >= -atom_tol && v <= median) cand.push_back(v);
  const double range = s.max() - s.min();
  if (cand.size() < 2 || !(range > 0.0)) return out;
  double best = -1.0;
  for (std::size_t i = 1; i < cand.size(); ++i) {
    const double g = cand[i] - cand[i - 1];
    if (g > best) {
      best = g;
      out.interval = {cand[i - 1], cand[i]};
    }
  }
  out.exists = best > min_relative_gap * range;
  return out;
}

double default_edge_tol(const SpectralLaw& law, std::size_t p) {
  const double w = law.hull().width();
  const double fluct = 3.0 * std::pow(static_cast<double>(std::max<std::size_t>(p, 1)), -2.0 / 3.0);
  return std::max(0.05, fluct) * w;
}

OutlierReport detect_outliers(const EmpiricalSpectrum& s, const SpectralLaw& law, std::optional<double> edge_tol) {
  OutlierReport out;
  out.edge_tol = edge_tol ? *edge_tol : default_edge_tol(law, s.size());
  const Interval h = law.hull();
  for (double v : s.values) {
    if (v > h.hi + out.edge_tol) {
      ++out.above;
      out.positions.push_back(v);
    } else if (v < h.lo - out.edge_tol) {
      ++out.below;
      out.positions.push_back(v);
    }
  }
  return out;
}

SlopeFit fit_origin_exponent(const EmpiricalSpectrum& s, Interval window, std::size_t bins, std::size_t min_per_bin,
                             double atom_tol) {
  if (!(window.lo > atom_tol) || !(window.hi > window.lo)) {
    throw RejectedInput("fit_origin_exponent: window must satisfy atom_tol < lo < hi");
  }
  if (bins < 3) throw RejectedInput("fit_origin_exponent: need at least 3 bins");
  std::vector<double> edges(bins + 1);
  const double ratio = window.hi / window.lo;
  for (std::size_t i = 0; i <= bins; ++i) {
    edges[i] = window.lo * std::pow(ratio, static_cast<double>(i) / static_cast<double>(bins));
  }
  edges.front() = window.lo;
  edges.back() = window.hi;

  std::vector<std::size_t> counts(bins, 0);
  std::vector<double> mass(bins, 0.0);
  std::size_t points = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double v = s.values[i];
    if (v < window.lo || v > window.hi) continue;
    std::size_t b = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin());
    b = std::clamp<std::size_t>(b, 1, bins) - 1;
    ++counts[b];
    mass[b] += s.weight(i);
    ++points;
  }
  if (points < 30) {
    throw RejectedInput("fit_origin_exponent: " + std::to_string(points) + " eigenvalues in window, need at least 30");
  }

  // Merge sparse bins forward; a sparse tail joins the last merged bin.
  struct Merged {
    double lo, hi, mass;
    std::size_t count;
  };
  std::vector<Merged> merged;
  Merged cur{edges[0], edges[0], 0.0, 0};
  for (std::size_t b = 0; b < bins; ++b) {
    cur.hi = edges[b + 1];
    cur.mass += mass[b];
    cur.count += counts[b];
    if (cur.count >= min_per_bin) {
      merged.push_back(cur);
      cur = {edges[b + 1], edges[b + 1], 0.0, 0};
    }
  }
  if (cur.count > 0) {
    if (merged.empty()) {
      merged.push_back(cur);
    } else {
      merged.back().hi = cur.hi;
      merged.back().mass += cur.mass;
      merged.back().count += cur.count;
    }
  }
  if (merged.size() < 3) throw RejectedInput("fit_origin_exponent: fewer than 3 populated bins after merging");

  std::vector<double> x, y;
  for (const Merged& m : merged) {
    x.push_back(0.5 * (std::log(m.lo) + std::log(m.hi)));
    y.push_back(std::log(m.mass / (m.hi - m.lo)));
  }
  const double k = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + slope * (x[i] - mx));
    sse += r * r;
  }
  SlopeFit fit;
  fit.exponent = slope;
  fit.standard_error = std::sqrt(sse / (k - 2.0) / sxx);
  fit.window = window;
  fit.points = points;
  fit.bins = merged.size();
  return fit;
}

SlopeFit fit_planar_exponent(const std::vector<double>& moduli, double r_max) {
  if (!(r_max > 0.0)) throw RejectedInput("fit_planar_exponent: r_max must be positive");
  double sum_log = 0.0;
  std::size_t n = 0;
  for (double r : moduli) {
    if (r > 0.0 && r <= r_max) {
      sum_log += std::log(r_max / r);
      ++n;
    }
  }
  if (n < 30) throw RejectedInput("fit_planar_exponent: fewer than 30 moduli inside r_max");
  // Radial CDF (r / r_max)^a on [0, r_max]: the MLE of a is n / sum log(r_max / r_i).
  const double a = static_cast<double>(n) / sum_log;
  SlopeFit fit;
  fit.exponent = a - 2.0;
  fit.standard_error = a / std::sqrt(static_cast<double>(n));
  fit.window = {0.0, r_max};
  fit.points = n;
  return fit;
}

ComparisonReport compare(const EmpiricalSpectrum& s, const SpectralLaw& law, const CompareTolerances& tol) {
  if (s.empty()) throw RejectedInput("compare: empty spectrum");
  ComparisonReport r;
  r.ks_distance = ks_distance(s, law, tol.atom_tol);
  const double scale = std::sqrt(std::abs(law.moment(2)));
  for (int k = 1; k <= 6; ++k) {
    const double ml = law.moment(k);
    const double denom = std::max(std::abs(ml), std::pow(scale, k));
    r.moment_errors.push_back(denom > 0.0 ? std::abs(s.moment(k) - ml) / denom : std::abs(s.moment(k)));
  }
  r.atom_zero_weight = detect_atom_zero(s, tol.atom_tol);
  for (const Atom& a : law.atoms())
    if (std::abs(a.location) <= tol.atom_tol) r.law_atom_zero_weight += a.weight;
  r.atom_mismatch = std::abs(r.atom_zero_weight - r.law_atom_zero_weight) > tol.atom_discrepancy;
  r.gap = detect_gap(s, tol.min_relative_gap, tol.atom_tol);
  r.outliers = detect_outliers(s, law, tol.edge_tol);
  if (tol.slope_window) r.slope_fit = fit_origin_exponent(s, *tol.slope_window, 20, 10, tol.atom_tol);
  return r;
}

std::string ComparisonReport::to_json() const {
  nlohmann::ordered_json j;
  j["ks_distance"] = ks_distance;
  j["moment_errors"] = moment_errors;
  j["atom_zero_weight"] = atom_zero_weight;
  j["law_atom_zero_weight"] = law_atom_zero_weight;
  j["atom_mismatch"] = atom_mismatch;
  j["gap"] = {{"gap_exists", gap.exists}, {"gap_interval", {gap.interval.lo, gap.interval.hi}}};
  j["outliers"] = {{"count_above", outliers.above},
                   {"count_below", outliers.below},
                   {"positions", outliers.positions},
                   {"edge_tol", outliers.edge_tol}};
  if (slope_fit) {
    j["slope_fit"] = {{"exponent", slope_fit->exponent},
                      {"stderr", slope_fit->standard_error},
                      {"fit_window", {slope_fit->window.lo, slope_fit->window.hi}},
                      {"points", slope_fit->points},
                      {"bins", slope_fit->bins}};
  } else {
    j["slope_fit"] = nullptr;
  }
  return j.dump();
}

}  // namespace rmt
