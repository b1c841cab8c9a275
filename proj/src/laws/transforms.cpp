#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "rmt/laws.hpp"

namespace rmt {

namespace {

using cd = std::complex<double>;

double gk(const std::function<double(double)>& f, double a, double b) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-12);
}

// Integral of g over [a, b] with x = a + t^2 (singular edge at a).
cd integrate_from_left(const std::function<cd(double)>& g, double a, double b) {
  const double t_max = std::sqrt(b - a);
  const auto re = [&](double t) { return g(a + t * t).real() * 2.0 * t; };
  const auto im = [&](double t) { return g(a + t * t).imag() * 2.0 * t; };
  return {gk(re, 0.0, t_max), gk(im, 0.0, t_max)};
}

// Integral of g over [a, b] with x = b - t^2 (singular edge at b).
cd integrate_from_right(const std::function<cd(double)>& g, double a, double b) {
  const double t_max = std::sqrt(b - a);
  const auto re = [&](double t) { return g(b - t * t).real() * 2.0 * t; };
  const auto im = [&](double t) { return g(b - t * t).imag() * 2.0 * t; };
  return {gk(re, 0.0, t_max), gk(im, 0.0, t_max)};
}

}  // namespace

cd StieltjesFunction::operator()(cd z) const {
  if (!f_) throw RejectedInput("StieltjesFunction: empty");
  if (z.imag() == 0.0 || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw RejectedInput("StieltjesFunction: z must be finite with nonzero imaginary part");
  }
  return f_(z);
}

StieltjesFunction stieltjes_of_law(const SpectralLaw& law) {
  return StieltjesFunction([law](cd z) {
    cd total = 0.0;
    for (const Interval& s : law.support()) {
      const double a = s.lo, b = s.hi;
      const double x0 = z.real();
      if (x0 > a && x0 < b) {
        // Subtract the pole-adjacent value so the remaining integrand stays bounded
        // when z approaches the real axis.
        double c = law.pdf(x0);
        if (!std::isfinite(c)) c = 0.0;
        const auto g = [&](double x) { return (law.pdf(x) - c) / (z - x); };
        total += integrate_from_left(g, a, x0) + integrate_from_right(g, x0, b);
        total += c * (std::log(z - a) - std::log(z - b));
      } else {
        const double mid = 0.5 * (a + b);
        const auto g = [&](double x) { return law.pdf(x) / (z - x); };
        total += integrate_from_left(g, a, mid) + integrate_from_right(g, mid, b);
      }
    }
    for (const Atom& at : law.atoms()) total += at.weight / (z - at.location);
    return total;
  });
}

StieltjesFunction semicircle_stieltjes(double sigma) {
  if (!(sigma > 0.0)) throw RejectedInput("semicircle_stieltjes: sigma must be positive");
  return StieltjesFunction([sigma](cd z) {
    // Product of principal roots: branch cut only on [-2 sigma, 2 sigma], S ~ 1/z at infinity.
    return (z - std::sqrt(z - 2.0 * sigma) * std::sqrt(z + 2.0 * sigma)) / (2.0 * sigma * sigma);
  });
}

StieltjesFunction marcenko_pastur_stieltjes(double q, double sigma) {
  if (!(q > 0.0) || !(sigma > 0.0)) throw RejectedInput("marcenko_pastur_stieltjes: q and sigma must be positive");
  const double s2 = sigma * sigma;
  const double lo = s2 * (1.0 - std::sqrt(q)) * (1.0 - std::sqrt(q));
  const double hi = s2 * (1.0 + std::sqrt(q)) * (1.0 + std::sqrt(q));
  return StieltjesFunction([=](cd z) {
    return (z - s2 * (1.0 - q) - std::sqrt(z - lo) * std::sqrt(z - hi)) / (2.0 * q * s2 * z);
  });
}

StieltjesFunction atom_stieltjes(double location) {
  return StieltjesFunction([location](cd z) { return 1.0 / (z - location); });
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (count == 0) throw RejectedInput("linear_grid: need at least one point");
  if (!(hi >= lo)) throw RejectedInput("linear_grid: hi must not be below lo");
  std::vector<double> g(count);
  if (count == 1) {
    g[0] = 0.5 * (lo + hi);
    return g;
  }
  const double h = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) g[i] = lo + h * static_cast<double>(i);
  g.back() = hi;
  return g;
}

SampledDensity invert_stieltjes(const StieltjesFunction& s, const std::vector<double>& grid, double eta) {
  if (!(eta > 0.0)) throw RejectedInput("invert_stieltjes: eta must be positive");
  SampledDensity out;
  out.x = grid;
  out.density.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.density[i] = std::abs(s(cd(grid[i], -eta)).imag()) / M_PI;
  }
  return out;
}

double default_inversion_eta(const SpectralLaw& law) {
  const Interval h = law.hull();
  const double w = h.width();
  return 1e-3 * (w > 0.0 ? w : 1.0);
}

StieltjesFunction free_add_wigner(StieltjesFunction base, double sigma_w, SubordinationOptions opt) {
  if (!(sigma_w >= 0.0)) throw RejectedInput("free_add_wigner: sigma_w must be nonnegative");
  if (!base.valid()) throw RejectedInput("free_add_wigner: base transform is empty");
  const double v = sigma_w * sigma_w;
  return StieltjesFunction([base, v, opt](cd z) -> cd {
    const bool lower = z.imag() < 0.0;
    if (lower) z = std::conj(z);
    cd s = base(z);
    if (v == 0.0) return lower ? std::conj(s) : s;

    constexpr int kDampedWarmup = 25;
    double residual = 0.0;
    for (int it = 0; it < opt.max_iterations; ++it) {
      const cd w = z - v * s;
      const cd f = base(w);
      const cd g = s - f;
      residual = std::abs(g);
      if (residual <= opt.tolerance * (1.0 + std::abs(s))) return lower ? std::conj(f) : f;

      cd next = 0.5 * (s + f);
      if (it >= kDampedWarmup) {
        // Newton on g(S) = S - base(z - v S), derivative by central difference along Re w.
        const double h = 1e-6 * (1.0 + std::abs(w));
        const cd dbase = (base(w + h) - base(w - h)) / (2.0 * h);
        const cd step = g / (1.0 + v * dbase);
        const cd trial = s - step;
        if (std::isfinite(trial.real()) && std::isfinite(trial.imag()) && trial.imag() < 0.0) next = trial;
      }
      s = next;
    }
    std::ostringstream msg;
    msg << "free_add_wigner: subordination did not converge after " << opt.max_iterations
        << " iterations at z = (" << z.real() << ", " << z.imag() << "), residual " << residual;
    throw NumericFailure(msg.str());
  });
}

StieltjesFunction free_add_wigner_wishart(double sigma_w, double q, double sigma_mp, SubordinationOptions opt) {
  return free_add_wigner(marcenko_pastur_stieltjes(q, sigma_mp), sigma_w, opt);
}

}  // namespace rmt
