#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <nlohmann/json.hpp>

#include "rmt/laws.hpp"

namespace rmt {

namespace {

constexpr std::size_t kKnotsPerInterval = 128;
constexpr double kNormalizationTolerance = 1e-6;

double integrate(const std::function<double(double)>& f, double a, double b) {
  if (!(b > a)) return 0.0;
  thread_local boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, a, b, 1e-12);
}

}  // namespace

SpectralLaw::SpectralLaw(Definition def) {
  if (!def.pdf && !def.support.empty()) throw RejectedInput("SpectralLaw: support given without a pdf");
  std::sort(def.support.begin(), def.support.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  for (std::size_t i = 0; i < def.support.size(); ++i) {
    const Interval& s = def.support[i];
    if (!(s.hi > s.lo) || !std::isfinite(s.lo) || !std::isfinite(s.hi)) {
      throw RejectedInput("SpectralLaw: support intervals must be finite with hi > lo");
    }
    if (i > 0 && s.lo < def.support[i - 1].hi) throw RejectedInput("SpectralLaw: support intervals overlap");
  }
  std::sort(def.atoms.begin(), def.atoms.end(), [](const Atom& x, const Atom& y) { return x.location < y.location; });
  for (const Atom& a : def.atoms) {
    if (!(a.weight >= 0.0 && a.weight <= 1.0)) throw RejectedInput("SpectralLaw: atom weight outside [0, 1]");
  }
  def_ = std::make_shared<const Definition>(std::move(def));

  auto table = std::make_shared<Table>();
  const auto pdf = [this](double x) { return this->pdf(x); };
  for (const Interval& s : def_->support) {
    std::vector<double> knots(kKnotsPerInterval + 1);
    std::vector<double> cum(kKnotsPerInterval + 1, 0.0);
    // Chebyshev spacing puts more knots near the edges, where densities are singular.
    for (std::size_t i = 0; i <= kKnotsPerInterval; ++i) {
      const double theta = M_PI * static_cast<double>(i) / static_cast<double>(kKnotsPerInterval);
      knots[i] = s.lo + 0.5 * s.width() * (1.0 - std::cos(theta));
    }
    knots.front() = s.lo;
    knots.back() = s.hi;
    for (std::size_t i = 1; i <= kKnotsPerInterval; ++i) {
      cum[i] = cum[i - 1] + integrate(pdf, knots[i - 1], knots[i]);
    }
    table->total += cum.back();
    table->knots.push_back(std::move(knots));
    table->cumulative.push_back(std::move(cum));
  }
  table_ = std::move(table);

  const double mass = table_->total + atom_mass();
  if (std::abs(mass - 1.0) > kNormalizationTolerance) {
    throw NumericFailure("SpectralLaw '" + def_->name + "': total mass " + std::to_string(mass) + " differs from 1");
  }
}

double SpectralLaw::pdf(double x) const {
  for (const Interval& s : def_->support) {
    if (s.contains(x)) {
      const double v = def_->pdf(x);
      return std::isnan(v) ? 0.0 : std::max(v, 0.0);
    }
  }
  return 0.0;
}

double SpectralLaw::atom_mass() const {
  double m = 0.0;
  for (const Atom& a : def_->atoms) m += a.weight;
  return m;
}

double SpectralLaw::continuous_cdf(double x) const {
  const auto pdf = [this](double t) { return this->pdf(t); };
  double acc = 0.0;
  for (std::size_t k = 0; k < def_->support.size(); ++k) {
    const Interval& s = def_->support[k];
    const auto& knots = table_->knots[k];
    const auto& cum = table_->cumulative[k];
    if (x >= s.hi) {
      acc += cum.back();
      continue;
    }
    if (x <= s.lo) break;
    const auto it = std::upper_bound(knots.begin(), knots.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - knots.begin()) - 1;
    acc += cum[i] + integrate(pdf, knots[i], x);
    break;
  }
  return acc;
}

double SpectralLaw::cdf(double x) const {
  if (def_->cdf) return std::clamp(def_->cdf(x), 0.0, 1.0);
  double a = 0.0;
  for (const Atom& at : def_->atoms)
    if (at.location <= x) a += at.weight;
  return std::clamp(continuous_cdf(x) + a, 0.0, 1.0);
}

double SpectralLaw::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw RejectedInput("SpectralLaw::quantile: u must lie in [0, 1]");
  const Interval h = hull();
  if (u <= 0.0) return h.lo;

  // Checkpoints: every knot and atom location, ascending.
  std::vector<double> points;
  for (const auto& knots : table_->knots) points.insert(points.end(), knots.begin(), knots.end());
  for (const Atom& a : def_->atoms) points.push_back(a.location);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  auto atom_at = [this](double x) {
    double w = 0.0;
    for (const Atom& a : def_->atoms)
      if (a.location == x) w += a.weight;
    return w;
  };

  // Binary search for the first checkpoint whose cdf reaches u.
  std::size_t lo = 0, hi = points.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (cdf(points[mid]) >= u) hi = mid;
    else lo = mid + 1;
  }
  if (lo == points.size()) return h.hi;
  const double right = points[lo];
  const double left_limit = cdf(right) - atom_at(right);
  if (left_limit < u || lo == 0) return right;

  const double left = points[lo - 1];
  const auto f = [&](double x) { return cdf(x) - u; };
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 100;
  const double fl = cdf(left) - u;
  const double fr = left_limit - u;
  if (fr <= 0.0) return right;
  const auto r = boost::math::tools::toms748_solve(f, left, right, fl, fr, tol, iters);
  return 0.5 * (r.first + r.second);
}

double SpectralLaw::moment(int k) const {
  double m = 0.0;
  for (const Interval& s : def_->support) {
    m += integrate([&](double x) { return std::pow(x, k) * pdf(x); }, s.lo, s.hi);
  }
  for (const Atom& a : def_->atoms) m += a.weight * std::pow(a.location, k);
  return m;
}

double SpectralLaw::integrate_pdf(double a, double b) const {
  if (!(b > a)) return 0.0;
  return continuous_cdf(b) - continuous_cdf(a);
}

Interval SpectralLaw::hull() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Interval& s : def_->support) {
    lo = std::min(lo, s.lo);
    hi = std::max(hi, s.hi);
  }
  for (const Atom& a : def_->atoms) {
    lo = std::min(lo, a.location);
    hi = std::max(hi, a.location);
  }
  return {lo, hi};
}

std::string SpectralLaw::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = def_->name;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [key, value] : def_->params) params[key] = value;
  j["params"] = params;
  nlohmann::ordered_json support = nlohmann::ordered_json::array();
  for (const Interval& s : def_->support) support.push_back({s.lo, s.hi});
  j["support"] = support;
  nlohmann::ordered_json atoms = nlohmann::ordered_json::array();
  for (const Atom& a : def_->atoms) atoms.push_back({{"location", a.location}, {"weight", a.weight}});
  j["atoms"] = atoms;
  j["continuous_mass"] = table_->total;
  return j.dump();
}

}  // namespace rmt
