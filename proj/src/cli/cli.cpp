#include "rmt/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <functional>
#include <iostream>
#include <nlohmann/json.hpp>

#include "rmt/analysis.hpp"
#include "rmt/eigen.hpp"
#include "rmt/ensembles.hpp"
#include "rmt/io.hpp"
#include "rmt/laws.hpp"
#include "rmt/slq.hpp"

namespace rmt::cli {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

// Registers long-only flags on a subcommand and remembers how to serialize
// each bound value, so a report can embed the effective configuration.
class Flags {
 public:
  explicit Flags(CLI::App* app) : app_(app) {
    app_->add_option("--config", config_path_, "JSON config merged under the command line flags");
    app_->add_flag("--timestamp", timestamp_, "Add a UTC timestamp to JSON reports");
  }

  template <class T>
  CLI::Option* add(const std::string& name, T& var, const std::string& help) {
    writers_.emplace_back(name, [&var] { return ojson(var); });
    return app_->add_option("--" + name, var, help)->capture_default_str();
  }

  CLI::Option* flag(const std::string& name, bool& var, const std::string& help) {
    writers_.emplace_back(name, [&var] { return ojson(var); });
    return app_->add_flag("--" + name, var, help);
  }

  CLI::App* app() const { return app_; }
  bool timestamp() const { return timestamp_; }

  ojson config() const {
    ojson c;
    c["command"] = app_->get_name();
    for (const auto& [name, write] : writers_) c[name] = write();
    return c;
  }

 private:
  CLI::App* app_;
  std::string config_path_;
  bool timestamp_ = false;
  std::vector<std::pair<std::string, std::function<ojson()>>> writers_;
};

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ojson report_header(const Flags& flags) {
  ojson r;
  r["schema_version"] = 1;
  r["config"] = flags.config();
  if (flags.timestamp()) r["timestamp"] = utc_now();
  return r;
}

void write_json(const fs::path& path, const ojson& j) { io::write_text(path, j.dump(2) + "\n"); }

// `x.csv` -> `x.json`; a path already ending in .json gets a second suffix.
fs::path sidecar_path(const fs::path& out) {
  if (out.extension() == ".json") return fs::path(out.string() + ".json");
  fs::path p = out;
  return p.replace_extension(".json");
}

ojson table_json(const Table& t) {
  ojson rows = ojson::array();
  const std::size_t n = t.columns.empty() ? 0 : t.columns.front().size();
  for (std::size_t i = 0; i < n; ++i) {
    ojson row;
    for (std::size_t c = 0; c < t.header.size(); ++c) row[t.header[c]] = t.columns[c][i];
    rows.push_back(row);
  }
  return rows;
}

// Appends config-file entries for flags absent from the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  const auto bytes = io::read_bytes(path);
  ojson j;
  try {
    j = ojson::parse(bytes.begin(), bytes.end());
  } catch (const ojson::exception& e) {
    throw RejectedInput("config " + path + ": " + e.what());
  }
  if (j.is_object() && j.contains("config") && j["config"].is_object()) j = j["config"];
  if (!j.is_object()) throw RejectedInput("config " + path + ": expected a JSON object");

  auto present = [&args](const std::string& flag) {
    return std::any_of(args.begin(), args.end(),
                       [&flag](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
  };
  auto text = [](const ojson& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  for (const auto& [key, value] : j.items()) {
    if (key == "command" || key == "config" || value.is_null()) continue;
    const std::string flag = "--" + key;
    if (present(flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      if (value.empty()) continue;
      args.push_back(flag);
      for (const ojson& v : value) args.push_back(text(v));
    } else {
      args.push_back(flag);
      args.push_back(text(value));
    }
  }
  return args;
}

struct LawArgs {
  std::string name;
  double sigma = 1.0;
  double q = 1.0;
  std::size_t factors = 1;
  std::vector<double> sigmas;
  double ratio = 1.0;
  std::vector<double> ratios;
};

void add_law_flags(Flags& f, LawArgs& a, const std::string& name_flag) {
  f.add(name_flag, a.name,
        "semicircle, marcenko-pastur, ginibre-product-radial, product-wishart-l2 or product-m-transform")
      ->required();
  f.add("sigma", a.sigma, "Scale parameter");
  f.add("q", a.q, "Marcenko-Pastur aspect ratio P/N");
  f.add("factors", a.factors, "Number of product factors L");
  f.add("sigmas", a.sigmas, "Per-factor scales (default: sigma for every factor)")->delimiter(',');
  f.add("ratio", a.ratio, "Product-Wishart ratio R (L = 2 closed form)");
  f.add("ratios", a.ratios, "Per-factor ratios R_l (default: ratio for every factor)")->delimiter(',');
}

SpectralLaw make_law(const LawArgs& a) {
  if (a.name == "semicircle") return semicircle_law(a.sigma);
  if (a.name == "marcenko-pastur") return marcenko_pastur_law(a.q, a.sigma);
  if (a.name == "ginibre-product-radial") {
    return ginibre_product_radial_law(a.factors, a.sigmas.empty() ? std::vector<double>(a.factors, a.sigma) : a.sigmas);
  }
  if (a.name == "product-wishart-l2") return product_wishart_law_l2(a.ratio, a.sigma);
  if (a.name == "product-m-transform") {
    return product_m_transform_law(a.ratios.empty() ? std::vector<double>(a.factors, a.ratio) : a.ratios, a.sigma);
  }
  throw RejectedInput("unknown law '" + a.name + "'");
}

StieltjesFunction make_stieltjes(const LawArgs& a) {
  if (a.name == "semicircle") return semicircle_stieltjes(a.sigma);
  if (a.name == "marcenko-pastur") return marcenko_pastur_stieltjes(a.q, a.sigma);
  return stieltjes_of_law(make_law(a));
}

// Cell midpoints of `count` equal cells on [lo, hi].
std::vector<double> midpoints(double lo, double hi, std::size_t count) {
  if (count == 0) throw RejectedInput("grid must have at least one point");
  std::vector<double> x(count);
  const double h = (hi - lo) / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) x[i] = lo + (static_cast<double>(i) + 0.5) * h;
  return x;
}

std::pair<double, double> range_of(const std::vector<double>& range) {
  if (range.size() != 2 || !(range[1] > range[0])) throw RejectedInput("--range needs two values lo < hi");
  return {range[0], range[1]};
}

// ---------------------------------------------------------------- commands

struct SampleCmd {
  std::string ensemble = "goe";
  std::size_t dim = 100;
  double sigma = 1.0;
  std::size_t n = 0;
  std::vector<std::size_t> dims;
  std::vector<double> sigmas;
  double k = 0.0;
  std::vector<double> spikes;
  std::string entries = "gaussian";
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string out;

  void bind(Flags& f) {
    f.add("ensemble", ensemble,
          "goe, wigner-general, wishart, ginibre-product, wishart-product, percolated-wigner, "
          "percolated-wishart, percolated-product or spiked-goe");
    f.add("dim", dim, "Matrix dimension P");
    f.add("sigma", sigma, "Entry scale");
    f.add("n", n, "Wishart inner dimension N (0: equal to dim)");
    f.add("dims", dims, "Product factor dimensions N_1 .. N_{L+1}")->delimiter(',');
    f.add("sigmas", sigmas, "Ginibre product per-factor scales")->delimiter(',');
    f.add("k", k, "Percolation: expected kept entries per row");
    f.add("spikes", spikes, "Spiked GOE magnitudes")->delimiter(',');
    f.add("entries", entries, "Wigner entry distribution: gaussian, rademacher or uniform");
    f.add("seed", seed, "RNG seed");
    f.add("stream", stream, "RNG stream index");
    f.add("out", out, "Output RMTX file")->required();
  }

  void run() const {
    EnsembleSpec spec;
    spec.kind = parse_ensemble_kind(ensemble);
    spec.dim = dim;
    spec.sigma = sigma;
    spec.n = n;
    spec.dims = dims;
    spec.sigmas = sigmas;
    spec.k = k;
    spec.spikes = spikes;
    spec.entries = parse_entry_distribution(entries);
    spec.validate();
    RngStream rng(seed, stream);
    if (spec.kind == EnsembleKind::ginibre_product) {
      const std::vector<double> s = sigmas.empty() ? std::vector<double>(spec.factors(), sigma) : sigmas;
      io::write_rmtx(out, sample_ginibre_product(dims, s, rng, false).product);
    } else {
      io::write_rmtx(out, spec.sample(rng));
    }
  }
};

struct EigCmd {
  std::string in;
  std::string out;
  bool general = false;

  void bind(Flags& f) {
    f.add("in", in, "Input RMTX file")->required();
    f.add("out", out, "Output CSV")->required();
    f.flag("general", general, "Non-symmetric input: write complex eigenvalues as re,im");
  }

  void run() const {
    if (!general) {
      io::write_spectrum_csv(out, eigvalsh(io::read_rmtx(in)));
      return;
    }
    io::RawMatrix raw = io::read_rmtx_raw(in);
    const DenseMatrix a(raw.n, raw.n, std::move(raw.entries));
    const auto ev = eigvals_general(a);
    std::vector<double> re, im;
    for (const auto& z : ev) {
      re.push_back(z.real());
      im.push_back(z.imag());
    }
    io::write_csv(out, {"re", "im"}, {re, im});
  }
};

struct SlqCmd {
  std::string in;
  std::string stream_dir;
  std::size_t steps = 80;
  std::size_t probes = 10;
  std::string probe = "rademacher";
  std::uint64_t seed = 0;
  double kernel_width = 0.0;
  std::size_t grid = 512;
  std::uint64_t timeout_ms = 60000;
  std::string out;
  std::string smooth_out;
  std::string report;

  void bind(Flags& f) {
    f.add("in", in, "Input RMTX file");
    f.add("stream-dir", stream_dir, "Directory served by a streaming operator");
    f.add("steps", steps, "Lanczos steps m");
    f.add("probes", probes, "Number of probe vectors");
    f.add("probe", probe, "rademacher or gaussian");
    f.add("seed", seed, "RNG seed");
    f.add("kernel-width", kernel_width, "Gaussian smoothing width for --smooth-out");
    f.add("grid", grid, "Points of the smoothed curve");
    f.add("timeout-ms", timeout_ms, "Streaming operator response timeout");
    f.add("out", out, "Output CSV node,weight")->required();
    f.add("smooth-out", smooth_out, "Optional smoothed CSV x,pdf");
    f.add("report", report, "Optional JSON report with moments");
  }

  void run(const Flags& flags) const {
    if (in.empty() == stream_dir.empty()) throw RejectedInput("slq: give exactly one of --in and --stream-dir");
    if (!smooth_out.empty() && !(kernel_width > 0.0)) throw RejectedInput("slq: --smooth-out needs --kernel-width > 0");
    StreamOptions so;
    so.timeout = std::chrono::milliseconds(timeout_ms);
    const LinearOperator op = in.empty() ? stream_operator(stream_dir, so) : operator_from_matrix(io::read_rmtx(in));
    SlqOptions opt;
    opt.steps = std::min(steps, op.dim);
    opt.probes = probes;
    opt.probe = parse_probe_kind(probe);
    opt.kernel_width = kernel_width;
    opt.grid_points = grid;
    opt.seed = seed;
    const SlqResult r = slq_density(op, opt);
    io::write_csv(out, {"node", "weight"}, {r.average.nodes, r.average.weights});
    if (!smooth_out.empty()) io::write_csv(smooth_out, {"x", "pdf"}, {r.smoothed.x, r.smoothed.density});
    if (!report.empty()) {
      ojson j = report_header(flags);
      j["dim"] = op.dim;
      ojson m = ojson::array();
      for (int k = 1; k <= 6; ++k) m.push_back(r.average.moment(k));
      j["moments"] = m;
      write_json(report, j);
    }
  }
};

struct LawCmd {
  LawArgs law;
  std::size_t grid = 512;
  std::string out;

  void bind(Flags& f) {
    add_law_flags(f, law, "name");
    f.add("grid", grid, "Number of grid cells over the support hull");
    f.add("out", out, "Output CSV x,pdf; the JSON sidecar replaces the extension")->required();
  }

  void run(const Flags& flags) const {
    const SpectralLaw l = make_law(law);
    const Interval h = l.hull();
    const std::vector<double> x = midpoints(h.lo, h.hi, grid);
    std::vector<double> pdf(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) pdf[i] = l.pdf(x[i]);
    io::write_csv(out, {"x", "pdf"}, {x, pdf});
    ojson j = report_header(flags);
    const ojson desc = ojson::parse(l.to_json());
    for (const auto& [key, value] : desc.items()) j[key] = value;
    write_json(sidecar_path(out), j);
  }
};

struct CompareCmd {
  std::string spectrum;
  LawArgs law;
  std::string report;
  CompareTolerances tol;
  double edge_tol = -1.0;
  std::vector<double> slope_window;

  void bind(Flags& f) {
    f.add("spectrum", spectrum, "Spectrum CSV (eigenvalue[,weight])")->required();
    add_law_flags(f, law, "law");
    f.add("report", report, "Output JSON report")->required();
    f.add("atom-tol", tol.atom_tol, "Eigenvalues with |x| <= atom-tol count as zero");
    f.add("atom-discrepancy", tol.atom_discrepancy, "Flag zero-atom weight mismatches above this");
    f.add("min-relative-gap", tol.min_relative_gap, "Gap detection threshold relative to the spectral range");
    f.add("edge-tol", edge_tol, "Outlier allowance beyond the support (negative: automatic)");
    f.add("slope-window", slope_window, "lo,hi window for the near-origin exponent fit")->delimiter(',');
  }

  void run(const Flags& flags) const {
    const EmpiricalSpectrum s = io::read_spectrum_csv(spectrum);
    const SpectralLaw l = make_law(law);
    CompareTolerances t = tol;
    if (edge_tol >= 0.0) t.edge_tol = edge_tol;
    if (!slope_window.empty()) {
      const auto [lo, hi] = range_of(slope_window);
      t.slope_window = Interval{lo, hi};
    }
    const ComparisonReport r = compare(s, l, t);
    ojson j = report_header(flags);
    j["law"] = ojson::parse(l.to_json());
    j["eigenvalues"] = s.size();
    const ojson fields = ojson::parse(r.to_json());
    for (const auto& [key, value] : fields.items()) j[key] = value;
    write_json(report, j);
  }
};

struct HistCmd {
  std::string spectrum;
  std::size_t bins = 50;
  bool log_y = false;
  double atom_tol = 1e-8;
  std::vector<double> range;
  std::string out;

  void bind(Flags& f) {
    f.add("spectrum", spectrum, "Spectrum CSV (eigenvalue[,weight])")->required();
    f.add("bins", bins, "Number of bins");
    f.flag("log-y", log_y, "Add a log10_density column");
    f.add("atom-tol", atom_tol, "Eigenvalues with |x| <= atom-tol form the zero atom, reported in the sidecar");
    f.add("range", range, "lo,hi histogram range (default: bulk min and max)")->delimiter(',');
    f.add("out", out, "Output CSV bin_center,density")->required();
  }

  void run(const Flags& flags) const {
    if (bins == 0) throw RejectedInput("hist: --bins must be positive");
    const EmpiricalSpectrum s = io::read_spectrum_csv(spectrum);
    if (s.empty()) throw RejectedInput("hist: spectrum is empty");
    double atom = 0.0, lo = HUGE_VAL, hi = -HUGE_VAL;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (std::abs(s.values[i]) <= atom_tol) {
        atom += s.weight(i);
      } else {
        lo = std::min(lo, s.values[i]);
        hi = std::max(hi, s.values[i]);
      }
    }
    if (!range.empty()) {
      std::tie(lo, hi) = range_of(range);
    } else if (!(lo < hi)) {
      const double c = lo <= hi ? lo : 0.0;
      lo = c - 0.5;
      hi = c + 0.5;
    }
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<double> mass(bins, 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double x = s.values[i];
      if (std::abs(x) <= atom_tol || x < lo || x > hi) continue;
      const auto b = std::min(bins - 1, static_cast<std::size_t>((x - lo) / width));
      mass[b] += s.weight(i);
    }
    std::vector<double> center(bins), density(bins), logd(bins);
    for (std::size_t b = 0; b < bins; ++b) {
      center[b] = lo + (static_cast<double>(b) + 0.5) * width;
      density[b] = mass[b] / width;
      logd[b] = std::log10(density[b]);
    }
    if (log_y) {
      io::write_csv(out, {"bin_center", "density", "log10_density"}, {center, density, logd});
    } else {
      io::write_csv(out, {"bin_center", "density"}, {center, density});
    }
    ojson j = report_header(flags);
    ojson atoms = ojson::array();
    if (atom > 0.0) atoms.push_back({{"location", 0.0}, {"weight", atom}});
    j["atoms"] = atoms;
    j["bulk_mass"] = 1.0 - atom;
    j["range"] = {lo, hi};
    j["bin_width"] = width;
    write_json(sidecar_path(out), j);
  }
};

void write_table(const Flags& flags, const Table& t, const std::string& out, const std::string& report) {
  io::write_csv(out, t.header, t.columns);
  if (report.empty()) return;
  ojson j = report_header(flags);
  j["rows"] = table_json(t);
  write_json(report, j);
}

struct SweepBbpCmd {
  BbpSweepOptions opt;
  std::string mode = "fixed";
  std::string solver = "dense";
  std::string out;
  std::string report;

  void bind(Flags& f) {
    f.add("dims", opt.dims, "Matrix dimensions")->delimiter(',');
    f.add("beta", opt.beta, "Spike magnitude (scaled mode: coefficient of sqrt(P / (2 n0)))");
    f.add("sigma", opt.sigma, "Noise scale");
    f.add("trials", opt.trials, "Trials per dimension");
    f.add("seed", opt.seed, "RNG seed");
    f.add("mode", mode, "fixed or scaled");
    f.add("n0", opt.n0, "Scaled mode sample count");
    f.add("solver", solver, "dense or lanczos");
    f.add("lanczos-steps", opt.lanczos_steps, "Lanczos steps for the extreme eigenvalues");
    f.add("out", out, "Output CSV")->required();
    f.add("report", report, "Optional JSON report");
  }

  void run(const Flags& flags) {
    if (mode == "fixed") {
      opt.mode = BbpMode::fixed;
    } else if (mode == "scaled") {
      opt.mode = BbpMode::scaled;
    } else {
      throw RejectedInput("sweep-bbp: --mode must be fixed or scaled");
    }
    if (solver == "dense") {
      opt.solver = ExtremeSolver::dense;
    } else if (solver == "lanczos") {
      opt.solver = ExtremeSolver::lanczos;
    } else {
      throw RejectedInput("sweep-bbp: --solver must be dense or lanczos");
    }
    write_table(flags, to_table(sweep_bbp(opt)), out, report);
  }
};

struct SweepDegeneracyCmd {
  DegeneracySweepOptions opt;
  std::string out;
  std::string report;

  void bind(Flags& f) {
    f.add("factors", opt.factors, "Factor counts L")->delimiter(',');
    f.add("ratios", opt.ratios, "Ratios R")->delimiter(',');
    f.add("dim-base", opt.dim_base, "Outer dimension N_1");
    f.add("trials", opt.trials, "Trials per (L, R)");
    f.add("seed", opt.seed, "RNG seed");
    f.add("sigma", opt.sigma, "Entry scale");
    f.add("atom-tol", opt.atom_tol, "Eigenvalues with |x| <= atom-tol count as zero");
    f.add("out", out, "Output CSV")->required();
    f.add("report", report, "Optional JSON report");
  }

  void run(const Flags& flags) const { write_table(flags, to_table(sweep_degeneracy(opt)), out, report); }
};

struct SweepPercolationCmd {
  PercolationSweepOptions opt;
  std::string out;
  std::string report;

  void bind(Flags& f) {
    f.add("dim", opt.dim, "Matrix dimension P");
    f.add("ks", opt.ks, "Sparsity constants k")->delimiter(',');
    f.add("trials", opt.trials, "Trials per k");
    f.add("seed", opt.seed, "RNG seed");
    f.add("sigma", opt.sigma, "Entry scale");
    f.add("atom-tol", opt.atom_tol, "Eigenvalues with |x| <= atom-tol count as zero");
    f.add("out", out, "Output CSV")->required();
    f.add("report", report, "Optional JSON report");
  }

  void run(const Flags& flags) const { write_table(flags, to_table(sweep_percolation(opt)), out, report); }
};

struct FreeAddCmd {
  LawArgs base;
  double sigma_w = 1.0;
  std::size_t grid = 512;
  std::vector<double> range;
  double eta = 0.0;
  SubordinationOptions sub;
  std::string out;

  void bind(Flags& f) {
    add_law_flags(f, base, "base");
    f.add("sigma-w", sigma_w, "Scale of the added Wigner component");
    f.add("grid", grid, "Number of grid cells");
    f.add("range", range, "lo,hi evaluation range (default: base hull widened by 2.5 sigma-w)")->delimiter(',');
    f.add("eta", eta, "Inversion offset (0: 1e-3 times the range width)");
    f.add("tolerance", sub.tolerance, "Subordination fixed-point tolerance");
    f.add("max-iterations", sub.max_iterations, "Subordination iteration cap");
    f.add("out", out, "Output CSV x,pdf; the JSON sidecar replaces the extension")->required();
  }

  void run(const Flags& flags) const {
    double lo, hi;
    if (range.empty()) {
      const Interval h = make_law(base).hull();
      lo = h.lo - 2.5 * sigma_w;
      hi = h.hi + 2.5 * sigma_w;
    } else {
      std::tie(lo, hi) = range_of(range);
    }
    const double e = eta > 0.0 ? eta : 1e-3 * (hi - lo);
    const StieltjesFunction g = base.name == "marcenko-pastur"
                                    ? free_add_wigner_wishart(sigma_w, base.q, base.sigma, sub)
                                    : free_add_wigner(make_stieltjes(base), sigma_w, sub);
    const SampledDensity d = invert_stieltjes(g, midpoints(lo, hi, grid), e);
    io::write_csv(out, {"x", "pdf"}, {d.x, d.density});
    ojson j = report_header(flags);
    j["eta"] = e;
    j["range"] = {lo, hi};
    write_json(sidecar_path(out), j);
  }
};

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random-matrix spectral laboratory", "rmtlab"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  SampleCmd sample;
  EigCmd eig;
  SlqCmd slq;
  LawCmd law;
  CompareCmd cmp;
  HistCmd hist;
  SweepBbpCmd bbp;
  SweepDegeneracyCmd deg;
  SweepPercolationCmd perc;
  FreeAddCmd fadd;

  std::vector<std::unique_ptr<Flags>> flags;
  auto sub = [&](const char* name, const char* help) -> Flags& {
    flags.push_back(std::make_unique<Flags>(app.add_subcommand(name, help)));
    return *flags.back();
  };
  Flags& f_sample = sub("sample", "Draw a matrix from an ensemble and write RMTX");
  Flags& f_eig = sub("eig", "Dense eigenvalues of an RMTX matrix");
  Flags& f_slq = sub("slq", "Stochastic Lanczos quadrature density estimate");
  Flags& f_law = sub("law", "Tabulate an analytic law");
  Flags& f_cmp = sub("compare", "Compare a spectrum against an analytic law");
  Flags& f_hist = sub("hist", "Density histogram of a spectrum");
  Flags& f_bbp = sub("sweep-bbp", "Spiked GOE outlier sweep");
  Flags& f_deg = sub("sweep-degeneracy", "Product-Wishart zero-eigenvalue sweep");
  Flags& f_perc = sub("sweep-percolation", "Percolated GOE sweep");
  Flags& f_fadd = sub("free-add", "Density of a law freely added to a Wigner component");
  sample.bind(f_sample);
  eig.bind(f_eig);
  slq.bind(f_slq);
  law.bind(f_law);
  cmp.bind(f_cmp);
  hist.bind(f_hist);
  bbp.bind(f_bbp);
  deg.bind(f_deg);
  perc.bind(f_perc);
  fadd.bind(f_fadd);

  try {
    std::vector<std::string> args = merge_config(raw_args);
    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::CallForHelp&) {
      const auto subs = app.get_subcommands();
      out << (subs.empty() ? app.help() : subs.front()->help());
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      const auto subs = app.get_subcommands();
      err << "error: " << e.what() << "\n\n" << (subs.empty() ? app.help() : subs.front()->help());
      return kExitUsage;
    }

    if (f_sample.app()->parsed()) sample.run();
    if (f_eig.app()->parsed()) eig.run();
    if (f_slq.app()->parsed()) slq.run(f_slq);
    if (f_law.app()->parsed()) law.run(f_law);
    if (f_cmp.app()->parsed()) cmp.run(f_cmp);
    if (f_hist.app()->parsed()) hist.run(f_hist);
    if (f_bbp.app()->parsed()) bbp.run(f_bbp);
    if (f_deg.app()->parsed()) deg.run(f_deg);
    if (f_perc.app()->parsed()) perc.run(f_perc);
    if (f_fadd.app()->parsed()) fadd.run(f_fadd);
  } catch (const RejectedInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace rmt::cli
