#include "nprev/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "nprev/discretize.hpp"
#include "nprev/errors.hpp"

namespace nprev {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Number of leading eigenvalues compared by the convergence study.
constexpr int kConvergenceLeading = 20;

/// Spectra for every n. Independent grid sizes run concurrently; a single
/// grid spends the threads on assembly instead.
std::vector<SpectrumResult> spectra_for(const GeneratingCurve& curve, const std::vector<int>& ns, int threads) {
  std::vector<SpectrumResult> out(ns.size());
  if (ns.size() == 1 || threads <= 1) {
    for (std::size_t i = 0; i < ns.size(); ++i) out[i] = compute_spectrum(curve, ns[i], {threads});
    return out;
  }
  std::vector<std::exception_ptr> errors(ns.size());
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    const int workers = std::min<int>(threads, static_cast<int>(ns.size()));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next++) < ns.size();) {
          try {
            out[i] = compute_spectrum(curve, ns[i], {1});
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

void warn_if_above_half(const SpectrumResult& s) {
  if (s.exceeds_half())
    std::fprintf(stderr, "np-revolve: warning: n=%d: max |rho| = %.17g exceeds 1/2\n", s.n, std::abs(s.all_eigs[0]));
}

class Outputs {
 public:
  Outputs(fs::path dir, const RunConfig& cfg) : dir_(std::move(dir)), cfg_(cfg) {}

  void csv_eigenvalues(const SpectrumResult& s, const std::string& name) {
    if (!cfg_.write_csv) return;
    write_eigenvalues_csv(s, path(name));
  }
  void json(const ordered_json& doc, const std::string& name) {
    if (!cfg_.write_json) return;
    write_json(doc, path(name));
  }
  CsvWriter csv(const std::string& name, const std::vector<std::string>& header) {
    return CsvWriter(path(name), header);
  }
  bool want_csv() const { return cfg_.write_csv; }
  std::string binary(const std::string& name) { return path(name); }
  const std::vector<std::string>& files() const { return files_; }

 private:
  std::string path(const std::string& name) {
    files_.push_back(name);
    return (dir_ / name).string();
  }

  fs::path dir_;
  const RunConfig& cfg_;
  std::vector<std::string> files_;
};

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

fs::path prepare_output_dir(const RunConfig& cfg, const CliOptions& opts) {
  const std::string dir = !opts.out_dir.empty() ? opts.out_dir : cfg.output_dir;
  if (dir.empty()) throw ConfigError("output_dir", "no output directory (set output_dir or pass --out)");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("output_dir", "cannot create " + dir);
  const fs::path probe = fs::path(dir) / ".np-revolve-probe";
  {
    std::ofstream os(probe);
    if (!os) throw ConfigError("output_dir", dir + " is not writable");
  }
  fs::remove(probe, ec);
  return dir;
}

FitWindow window_for(const RunConfig& cfg, int n) { return cfg.fit_window ? *cfg.fit_window : default_fit_window(n); }

void run_spectrum(const RunConfig& cfg, const CliOptions& opts, Outputs& out, bool with_asymptotics) {
  const int n = cfg.n_list.back();
  const SpectrumResult s = compute_spectrum(cfg.curve, n, {opts.threads});
  warn_if_above_half(s);
  out.csv_eigenvalues(s, "eigenvalues.csv");
  ordered_json sj = to_json(s);
  sj["curve"] = cfg.curve.label();
  out.json(sj, "spectrum.json");
  if (!with_asymptotics) return;

  const FitWindow win = window_for(cfg, n);
  const AsymptoticsReport rep = make_asymptotics_report(cfg.curve, s, win);
  ordered_json aj = to_json(rep);
  aj["curve"] = cfg.curve.label();
  out.json(aj, "asymptotics.json");
  if (out.want_csv()) {
    CsvWriter w = out.csv("weyl_fit.csv", {"j", "j_rho_plus", "j_rho_minus", "j_rho_abs", "in_fit_window"});
    const std::size_t rows = std::min(s.pos_eigs.size(), s.neg_eigs.size());
    for (std::size_t i = 0; i < rows; ++i) {
      const double j = static_cast<double>(i + 1);
      const int jj = static_cast<int>(i + 1);
      w.cell(jj).cell(j * s.pos_eigs[i]).cell(j * s.neg_eigs[i]).cell(j * std::abs(s.all_eigs[i]));
      w.cell(jj >= win.j_min && jj <= win.j_max ? 1 : 0);
      w.end_row();
    }
    w.close();
  }
}

double max_leading_delta(const std::vector<double>& a, const std::vector<double>& b, int leading) {
  const std::size_t m = std::min({a.size(), b.size(), static_cast<std::size_t>(leading)});
  double d = 0;
  for (std::size_t i = 0; i < m; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

void run_convergence(const RunConfig& cfg, const CliOptions& opts, Outputs& out) {
  if (cfg.n_list.size() < 2) throw ConfigError("n_list", "the convergence command needs at least 2 grid sizes");
  const auto spectra = spectra_for(cfg.curve, cfg.n_list, opts.threads);
  ordered_json doc;
  doc["curve"] = cfg.curve.label();
  doc["grid_sizes"] = cfg.n_list;
  doc["leading"] = kConvergenceLeading;
  ordered_json per_n = ordered_json::array();
  for (const auto& s : spectra) {
    warn_if_above_half(s);
    out.csv_eigenvalues(s, "eigenvalues_n" + std::to_string(s.n) + ".csv");
    ordered_json e;
    e["n"] = s.n;
    e["route"] = s.route == SpectrumRoute::symmetrized ? "symmetrized" : "nystrom";
    e["symmetrization_residual"] = s.symmetrization_residual;
    e["positive_count"] = s.pos_eigs.size();
    e["negative_count"] = s.neg_eigs.size();
    e["leading_pos"] = std::vector<double>(s.pos_eigs.begin(),
                                           s.pos_eigs.begin() + std::min<std::size_t>(kConvergenceLeading, s.pos_eigs.size()));
    e["leading_neg"] = std::vector<double>(s.neg_eigs.begin(),
                                           s.neg_eigs.begin() + std::min<std::size_t>(kConvergenceLeading, s.neg_eigs.size()));
    per_n.push_back(std::move(e));
  }
  doc["spectra"] = std::move(per_n);

  ordered_json deltas = ordered_json::array();
  std::optional<CsvWriter> w;
  if (out.want_csv()) w.emplace(out.csv("convergence.csv", {"n", "n_next", "delta_plus", "delta_minus"}));
  for (std::size_t i = 0; i + 1 < spectra.size(); ++i) {
    const double dp = max_leading_delta(spectra[i].pos_eigs, spectra[i + 1].pos_eigs, kConvergenceLeading);
    const double dm = max_leading_delta(spectra[i].neg_eigs, spectra[i + 1].neg_eigs, kConvergenceLeading);
    deltas.push_back({{"n", spectra[i].n}, {"n_next", spectra[i + 1].n}, {"delta_plus", dp}, {"delta_minus", dm}});
    if (w) {
      w->cell(spectra[i].n).cell(spectra[i + 1].n).cell(dp).cell(dm);
      w->end_row();
    }
  }
  if (w) w->close();
  doc["deltas"] = std::move(deltas);
  out.json(doc, "convergence.json");
}

void run_corners(const RunConfig& cfg, const CliOptions& opts, Outputs& out) {
  if (cfg.n_list.size() < 3) throw ConfigError("n_list", "the corners command needs at least 3 grid sizes");
  if (!cfg.curve.has_corners()) throw ConfigError("curve", "the corners command needs a polygon or square curve");
  const CornerPrediction pred = essential_bound(cfg.curve.interior_angles());
  const auto spectra = spectra_for(cfg.curve, cfg.n_list, opts.threads);
  for (const auto& s : spectra) warn_if_above_half(s);
  const ClusteringReport rep = clustering_diagnostic(spectra, pred, cfg.clustering);
  ordered_json doc;
  doc["curve"] = cfg.curve.label();
  doc["prediction"] = to_json(pred);
  doc["margin"] = cfg.clustering.margin;
  doc["clustering"] = to_json(rep);
  out.json(doc, "corners.json");
  if (out.want_csv()) {
    CsvWriter w = out.csv("clustering.csv", {"n", "bin", "lo", "hi", "count"});
    for (std::size_t g = 0; g < rep.grid_sizes.size(); ++g) {
      for (std::size_t k = 0; k < rep.counts[g].size(); ++k) {
        w.cell(rep.grid_sizes[g]).cell(static_cast<int>(k)).cell(rep.bin_edges[k]).cell(rep.bin_edges[k + 1]);
        w.cell(rep.counts[g][k]);
        w.end_row();
      }
    }
    w.close();
  }
}

void run_kernels_dump(const RunConfig& cfg, const CliOptions& opts, Outputs& out) {
  const AssemblyOptions ao{opts.threads};
  for (int n : cfg.n_list) {
    const SampledCurve grid = SampledCurve::make(cfg.curve, n);
    const std::string suffix = "_n" + std::to_string(n) + ".bin";
    for (const KernelMatrix& m : {assemble_K0(grid, ao), assemble_S0(grid, ao), assemble_planar_np(grid, ao),
                                  assemble_log_part(grid, ao), assemble_remainder(grid, ao)}) {
      write_kernel_matrix(m, out.binary("kernel_" + to_string(m.kind) + suffix));
    }
  }
}

}  // namespace

std::vector<std::string> run(const RunConfig& cfg, const CliOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = utc_timestamp();
  const fs::path dir = prepare_output_dir(cfg, opts);
  Outputs out(dir, cfg);
  switch (cfg.command) {
    case Command::spectrum: run_spectrum(cfg, opts, out, false); break;
    case Command::asymptotics: run_spectrum(cfg, opts, out, true); break;
    case Command::convergence: run_convergence(cfg, opts, out); break;
    case Command::corners: run_corners(cfg, opts, out); break;
    case Command::kernels_dump: run_kernels_dump(cfg, opts, out); break;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  ordered_json m;
  m["tool"] = "np-revolve";
  m["version"] = kToolVersion;
  m["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                       std::to_string(EIGEN_MINOR_VERSION);
  m["compiler"] = __VERSION__;
  m["command"] = to_string(cfg.command);
  m["config"] = cfg.echo;
  m["curve"] = cfg.curve.label();
  m["curve_id"] = hex_id(cfg.curve.fingerprint());
  m["seed"] = cfg.seed;
  m["threads"] = opts.threads;
  m["files"] = out.files();
  m["started_at"] = started;
  m["wall_time_seconds"] = wall;
  write_json(m, (dir / "manifest.json").string());

  std::vector<std::string> files = out.files();
  files.push_back("manifest.json");
  return files;
}

int validate_outputs(const std::vector<std::string>& paths) {
  int checked = 0;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<fs::path> entries;
      for (const auto& e : fs::directory_iterator(p)) {
        const auto ext = e.path().extension();
        if (e.is_regular_file() && (ext == ".csv" || ext == ".json" || ext == ".bin")) entries.push_back(e.path());
      }
      std::sort(entries.begin(), entries.end());
      for (const auto& e : entries) {
        validate_file(e.string());
        ++checked;
      }
    } else {
      validate_file(p);
      ++checked;
    }
  }
  return checked;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectrum of the zeroth-mode Neumann-Poincare operator on surfaces of revolution", "np-revolve"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  CliOptions opts;
  const std::vector<std::pair<Command, std::string>> commands = {
      {Command::spectrum, "Eigenvalues of the largest grid size"},
      {Command::asymptotics, "Spectrum plus Weyl-constant fits"},
      {Command::convergence, "Spectra over n_list and self-convergence deltas"},
      {Command::corners, "Essential-spectrum bound and clustering diagnostic"},
      {Command::kernels_dump, "Binary dumps of the assembled kernel matrices"},
  };
  std::vector<std::pair<Command, CLI::App*>> subs;
  for (const auto& [cmd, help] : commands) {
    CLI::App* sub = app.add_subcommand(to_string(cmd), help);
    sub->add_option("--config", opts.config_path, "Run configuration (JSON)")->required();
    sub->add_option("--out", opts.out_dir, "Output directory (overrides output_dir)");
    sub->add_option("--threads", opts.threads, "Worker threads")->check(CLI::Range(1, 256));
    subs.emplace_back(cmd, sub);
  }
  std::vector<std::string> targets;
  CLI::App* val = app.add_subcommand("validate", "Re-parse files written by the tool");
  val->add_option("paths", targets, "Files or output directories")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForVersion& e) {
    out << kToolVersion << '\n';
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "np-revolve: usage error: " << e.what() << '\n';
    return exit_config;
  }

  try {
    if (val->parsed()) {
      const int n = validate_outputs(targets);
      out << "validated " << n << " file(s)\n";
      return exit_ok;
    }
    Command cmd = Command::spectrum;
    for (const auto& [c, sub] : subs)
      if (sub->parsed()) cmd = c;
    RunConfig cfg = load_config(opts.config_path);
    if (cfg.command_given && cfg.command != cmd)
      throw ConfigError("command", "config is for '" + to_string(cfg.command) + "' but the tool was invoked with '" +
                                       to_string(cmd) + "'");
    cfg.command = cmd;
    const auto files = run(cfg, opts);
    for (const auto& f : files) out << f << '\n';
    return exit_ok;
  } catch (const ConfigError& e) {
    err << "np-revolve: config error: " << e.what() << '\n';
    return exit_config;
  } catch (const GeometryError& e) {
    err << "np-revolve: geometry error: " << e.what() << '\n';
    return exit_geometry;
  } catch (const NumericalError& e) {
    err << "np-revolve: numerical error: " << e.what() << '\n';
    return exit_numerical;
  } catch (const DomainError& e) {
    err << "np-revolve: numerical error: " << e.what() << '\n';
    return exit_numerical;
  } catch (const SingularEvaluationError& e) {
    err << "np-revolve: numerical error: " << e.what() << '\n';
    return exit_numerical;
  } catch (const std::exception& e) {
    err << "np-revolve: error: " << e.what() << '\n';
    return exit_failure;
  }
}

}  // namespace nprev
