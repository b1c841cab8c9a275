// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "rmt/analysis.hpp"
#include "rmt/cli.hpp"
#include "rmt/eigen.hpp"
#include "rmt/ensembles.hpp"
#include "rmt/io.hpp"
#include "rmt/laws.hpp"
#include "rmt/slq.hpp"
#include "temp_dir.hpp"

namespace {

using namespace rmt;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, bool ok, const std::string& detail, Clock::time_point start) {
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  std::printf("%s criterion %d: %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, detail.c_str(), secs);
  std::fflush(stdout);
  failures += !ok;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c, d);
  return buf;
}

double max_abs(const EmpiricalSpectrum& s) { return std::max(std::abs(s.min()), std::abs(s.max())); }

void semicircle_convergence() {
  const auto t0 = Clock::now();
  RngStream rng(2024, 0);
  const auto s = eigvalsh(sample_goe(2000, 1.0, rng));
  const double ks = ks_distance(s, semicircle_law(1.0));
  const double edge = max_abs(s);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  report(1, ks <= 0.02 && std::abs(edge - 2.0) <= 0.15 && secs < 60.0,
         fmt("GOE P=2000 KS=%.4f max|lambda|=%.4f", ks, edge), t0);
}

void universality() {
  const auto t0 = Clock::now();
  RngStream rng(2024, 1);
  const auto s = eigvalsh(sample_wigner_general(2000, 1.0, EntryDistribution::rademacher, rng));
  const double ks = ks_distance(s, semicircle_law(1.0));
  const double edge = max_abs(s);
  report(2, ks <= 0.02 && std::abs(edge - 2.0) <= 0.15, fmt("Rademacher P=2000 KS=%.4f max|lambda|=%.4f", ks, edge),
         t0);
}

void marcenko_pastur() {
  const auto t0 = Clock::now();
  RngStream rng(2024, 2);
  const auto bulk = eigvalsh(sample_wishart(1000, 2000, 1.0, rng));
  const double ks = ks_distance(bulk, marcenko_pastur_law(0.5, 1.0));
  const auto tall = eigvalsh(sample_wishart(600, 100, 1.0, rng));
  const auto zeros = std::count_if(tall.values.begin(), tall.values.end(), [](double v) { return std::abs(v) <= 1e-8; });
  report(3, ks <= 0.03 && zeros == 500,
         fmt("q=1/2 KS=%.4f; q=6 zeros=%.0f of 600", ks, static_cast<double>(zeros)), t0);
}

void bbp_transition() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  const std::vector<std::pair<double, double>> cases{{3.0, 10.0 / 3.0}, {0.5, 2.0}, {-3.0, -10.0 / 3.0}};
  for (const auto& [beta, want] : cases) {
    BbpSweepOptions opt;
    opt.dims = {2000};
    opt.beta = beta;
    opt.trials = 10;
    opt.seed = 7;
    const BbpRow row = sweep_bbp(opt).front();
    // A negative spike detaches below the bulk.
    const double got = beta < 0 ? row.mean_bottom : row.mean_top;
    ok = ok && std::abs(got - want) <= 0.1;
    detail += fmt("beta=%+.1f -> %.4f (want %.4f); ", beta, got, want);
  }
  report(4, ok, detail, t0);
}

void growth_mode() {
  const auto t0 = Clock::now();
  BbpSweepOptions opt;
  opt.dims = {500, 1000, 2000, 4000};
  opt.mode = BbpMode::scaled;
  opt.beta = 3.0;
  opt.trials = 10;
  opt.seed = 8;
  opt.solver = ExtremeSolver::lanczos;
  opt.lanczos_steps = 100;
  const auto rows = sweep_bbp(opt);
  bool ok = true;
  std::string detail = "mean top:";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) ok = ok && rows[i].mean_top > rows[i - 1].mean_top;
    detail += fmt(" P=%.0f:%.3f", static_cast<double>(rows[i].dim), rows[i].mean_top);
  }
  report(5, ok, detail, t0);
}

void ginibre_product() {
  const auto t0 = Clock::now();
  RngStream rng(2024, 3);
  const auto two = sample_ginibre_product({1000, 1000, 1000}, {1.0, 1.0}, rng);
  std::vector<double> moduli;
  for (const auto& z : two.eigenvalues) moduli.push_back(std::abs(z));
  const SlopeFit fit = fit_planar_exponent(moduli, 0.5);
  const auto one = sample_ginibre_product({1000, 1000}, {1.0}, rng);
  double outside = 0.0;
  for (const auto& z : one.eigenvalues) outside += std::abs(z) > 1.05;
  outside /= static_cast<double>(one.eigenvalues.size());
  report(6, std::abs(fit.exponent + 1.0) <= 0.1 && outside <= 0.01,
         fmt("L=2 planar exponent %.4f +- %.4f (%.0f moduli); L=1 fraction |lambda|>1.05 = %.4f", fit.exponent,
             fit.standard_error, static_cast<double>(fit.points), outside),
         t0);
}

void degeneracy() {
  const auto t0 = Clock::now();
  DegeneracySweepOptions one;
  one.factors = {1};
  one.ratios = {5.0};
  one.dim_base = 1000;
  one.trials = 5;
  const auto exact = sweep_degeneracy(one).front();
  const bool exact_ok = exact.measured_min == 0.8 && exact.measured_max == 0.8 &&
                        std::abs(exact.predicted - 0.8) < 1e-15;

  DegeneracySweepOptions grid;
  grid.factors = {1, 2, 3, 5};
  grid.ratios = {5.0, 10.0, 20.0};
  grid.dim_base = 1000;
  grid.trials = 5;
  const auto rows = sweep_degeneracy(grid);
  auto at = [&](std::size_t li, std::size_t ri) { return rows[ri * grid.factors.size() + li].measured_mean; };
  bool monotone = true;
  std::size_t ties = 0;
  for (std::size_t ri = 0; ri < grid.ratios.size(); ++ri)
    for (std::size_t li = 1; li < grid.factors.size(); ++li) {
      monotone = monotone && at(li, ri) >= at(li - 1, ri);
      ties += at(li, ri) == at(li - 1, ri);
    }
  for (std::size_t li = 0; li < grid.factors.size(); ++li)
    for (std::size_t ri = 1; ri < grid.ratios.size(); ++ri) {
      monotone = monotone && at(li, ri) >= at(li, ri - 1);
      ties += at(li, ri) == at(li, ri - 1);
    }
  report(7, exact_ok && monotone,
         fmt("L=1 R=5 measured %.6f; grid monotone=%.0f, non-strict steps=%.0f; L=5 R=20 measured %.4f",
             exact.measured_mean, monotone, static_cast<double>(ties), at(3, 2)),
         t0);
}

void percolation() {
  const auto t0 = Clock::now();
  const std::size_t p = 2000;
  PercolationSweepOptions opt;
  opt.dim = p;
  opt.ks = {1.0};
  opt.seed = 9;
  const PercolationRow row = sweep_percolation(opt).front();
  // Each row holds P independent entries kept with probability 1/P.
  const double oracle = std::pow(1.0 - 1.0 / static_cast<double>(p), static_cast<double>(p));

  RngStream a(9, 100), b(9, 101);
  const auto goe = sample_goe(p, 1.0, a);
  const auto full = percolate(goe, static_cast<double>(p), b);
  const auto s0 = eigvalsh(goe), s1 = eigvalsh(full);
  const bool bit_exact = full == goe && s0.values == s1.values;

  report(8, std::abs(row.zero_row_fraction - oracle) <= 0.03 && row.tail_mass > 0.0 && bit_exact,
         fmt("zero rows %.4f vs oracle %.4f; tail mass %.4f; k=P bit-exact=%.0f", row.zero_row_fraction, oracle,
             row.tail_mass, bit_exact),
         t0);
}

void slq_fidelity() {
  const auto t0 = Clock::now();
  RngStream rng(2024, 4);
  const auto a = sample_goe(2000, 1.0, rng);
  const auto dense = eigvalsh(a);
  SlqOptions opt;
  opt.steps = 80;
  opt.probes = 10;
  opt.probe = ProbeKind::rademacher;
  opt.seed = 10;
  const SlqResult r = slq_density(operator_from_matrix(a), opt);
  const EmpiricalSpectrum est = r.average.to_spectrum();
  // Odd moments vanish in the limit, so errors are taken relative to max(|m_k|, m_2^(k/2)).
  double worst = 0.0;
  std::string per_moment;
  const double scale = std::sqrt(dense.moment(2));
  for (int k = 1; k <= 6; ++k) {
    const double m = dense.moment(k);
    const double e = std::abs(est.moment(k) - m) / std::max(std::abs(m), std::pow(scale, k));
    worst = std::max(worst, e);
    per_moment += fmt(" m%.0f:%.4f", k, e);
  }
  const double ks = ks_distance(est, dense);

  const double s3 = 1.0 / std::sqrt(3.0);
  const auto rule = quadrature_from_tridiagonal(lanczos(diagonal_operator({1.0, 2.0, 3.0}), std::vector<double>{s3, s3, s3}, 3).t);
  double toy = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    toy = std::max({toy, std::abs(rule.nodes[i] - static_cast<double>(i + 1)), std::abs(rule.weights[i] - 1.0 / 3.0)});
  }

  std::vector<double> d(100);
  std::iota(d.begin(), d.end(), 1.0);
  // Rademacher samples are exact on a diagonal, so Gaussian probes exercise the error bar.
  const TraceEstimate h = hutchinson_trace(diagonal_operator(d), 50, ProbeKind::gaussian, 11);
  const bool hutch = std::abs(h.estimate - 5050.0) <= 3.0 * h.standard_error;

  report(9, worst <= 0.02 && ks <= 0.05 && toy <= 1e-10 && hutch,
         "moment errors" + per_moment +
             fmt(" (max %.4f); KS %.4f; toy error %.1e; Hutchinson z=%.2f", worst, ks, toy,
                 (h.estimate - 5050.0) / h.standard_error),
         t0);
}

void transforms() {
  const auto t0 = Clock::now();
  const auto numeric = stieltjes_of_law(semicircle_law(1.0));
  const auto closed = semicircle_stieltjes(1.0);
  double st = 0.0;
  for (double y : {0.01, 0.1, 1.0})
    for (int i = 0; i <= 60; ++i) {
      const std::complex<double> z(-3.0 + 0.1 * i, y);
      st = std::max(st, std::abs(numeric(z) - closed(z)));
    }

  auto inversion_error = [](const StieltjesFunction& s, const SpectralLaw& law, double lo, double hi) {
    const auto grid = linear_grid(lo, hi, 200);
    const auto d = invert_stieltjes(s, grid, 1e-3);
    double e = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) e = std::max(e, std::abs(d.density[i] - law.pdf(grid[i])));
    return e;
  };
  const auto mp = marcenko_pastur_law(0.5, 1.0);
  const Interval ms = mp.support()[0];
  const double inv_sc = inversion_error(closed, semicircle_law(1.0), -1.8, 1.8);
  const double inv_mp = inversion_error(marcenko_pastur_stieltjes(0.5, 1.0), mp, ms.lo + 0.1, ms.hi - 0.1);
  const double sum_sigma = std::sqrt(1.0 + 0.75 * 0.75);
  const double inv_sum = inversion_error(free_add_wigner(semicircle_stieltjes(1.0), 0.75), semicircle_law(sum_sigma),
                                         -1.8 * sum_sigma, 1.8 * sum_sigma);
  report(10, st <= 1e-6 && inv_sc <= 5e-3 && inv_mp <= 5e-3 && inv_sum <= 5e-3,
         fmt("Stieltjes %.1e; inversion semicircle %.1e, MP %.1e; wigner+wigner %.1e", st, inv_sc, inv_mp, inv_sum),
         t0);
}

std::string slurp(const std::filesystem::path& p) {
  const auto b = io::read_bytes(p);
  return {b.begin(), b.end()};
}

void determinism() {
  const auto t0 = Clock::now();
  TempDir dir;
  // Every command, with every output it writes.  is replaced by the run index.
  const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> commands{
      {{"sample", "--ensemble", "spiked_goe", "--dim", "300", "--spikes", "3", "--seed", "5", "--out", "m.rmtx"},
       {"m.rmtx"}},
      {{"sample", "--ensemble", "ginibre_product", "--dims", "50,50,50", "--seed", "5", "--out", "g.rmtx"},
       {"g.rmtx"}},
      {{"eig", "--in", "m.rmtx", "--out", "e.csv"}, {"e.csv"}},
      {{"eig", "--in", "g.rmtx", "--general", "--out", "ge.csv"}, {"ge.csv"}},
      {{"slq", "--in", "m.rmtx", "--steps", "40", "--probes", "4", "--kernel-width", "0.05", "--out", "s.csv",
        "--smooth-out", "ss.csv", "--report", "s.json"},
       {"s.csv", "ss.csv", "s.json"}},
      {{"law", "--name", "product-m-transform", "--ratios", "0.5,2", "--out", "l.csv"}, {"l.csv", "l.json"}},
      {{"compare", "--spectrum", "e.csv", "--law", "semicircle", "--report", "c.json"}, {"c.json"}},
      {{"hist", "--spectrum", "e.csv", "--bins", "30", "--out", "h.csv"}, {"h.csv", "h.json"}},
      {{"sweep-bbp", "--dims", "200,400", "--trials", "2", "--out", "b.csv", "--report", "b.json"},
       {"b.csv", "b.json"}},
      {{"sweep-degeneracy", "--factors", "1,2", "--ratios", "5", "--dim-base", "200", "--trials", "2", "--out",
        "d.csv", "--report", "d.json"},
       {"d.csv", "d.json"}},
      {{"sweep-percolation", "--dim", "300", "--ks", "1,5", "--out", "p.csv", "--report", "p.json"},
       {"p.csv", "p.json"}},
      {{"free-add", "--base", "marcenko-pastur", "--q", "0.5", "--sigma-w", "0.5", "--grid", "100", "--out",
        "f.csv"},
       {"f.csv", "f.json"}},
  };
  auto expand = [&](const std::string& s) {
    if (s.find('.') != std::string::npos && s.find(',') == std::string::npos && s[0] != '-' && !std::isdigit(s[0])) {
      return (dir.path() / s).string();
    }
    return s;
  };
  // Each command runs twice with identical flags; the first output is snapshotted.
  bool ok = true;
  std::size_t compared = 0;
  std::string detail;
  for (const auto& [args, outputs] : commands) {
    std::vector<std::string> a;
    for (const auto& s : args) a.push_back(expand(s));
    std::vector<std::string> first;
    for (int run = 0; run < 2 && ok; ++run) {
      std::ostringstream out, err;
      if (cli::run(a, out, err) != cli::kExitOk) {
        ok = false;
        detail += args[0] + " failed: " + err.str();
        break;
      }
      for (std::size_t i = 0; i < outputs.size(); ++i) {
        const std::string bytes = slurp(expand(outputs[i]));
        if (run == 0) {
          first.push_back(bytes);
          continue;
        }
        ++compared;
        if (bytes != first[i]) {
          ok = false;
          detail += outputs[i] + " differs; ";
        }
      }
    }
  }
  report(11, ok, fmt("%.0f output files byte-identical across reruns of %.0f commands", static_cast<double>(compared),
                     static_cast<double>(commands.size())) + (detail.empty() ? "" : ": " + detail),
         t0);
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{semicircle_convergence, universality, marcenko_pastur,
                                                    bbp_transition,         growth_mode,  ginibre_product,
                                                    degeneracy,             percolation,  slq_fidelity,
                                                    transforms,             determinism};
  for (const auto& c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      std::printf("FAIL criterion: exception %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
