// mcwin: detection-window optimization and BER simulation for diffusion
// molecular communication links.
//
//   mcwin metrics   -c run.cfg [-o metrics.csv]
//   mcwin optimize  -c run.cfg [--scheme closed_form]
//   mcwin simulate  -c run.cfg [--scheme num_msinar | --t1 A --t2 B | --n1 A --n2 B] [--threshold X]
//   mcwin sweep     -c run.cfg [-o sweep.csv]
//   mcwin reproduce cmp-ab -o out/ [-c run.cfg]
//   mcwin config    -c run.cfg            (canonical form of the config)
//
// Exit codes: 0 ok, 2 config error, 3 domain error, 4 I/O error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mcwin/mcwin.hpp"

namespace {

using namespace mcwin;

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidParams:
    case ErrorCode::Config: return 2;
    case ErrorCode::Io: return 4;
    default: return 3;
  }
}

struct ConfigArgs {
  std::string file;
  std::vector<std::string> overrides;
};

void add_config_options(CLI::App* app, ConfigArgs& a, bool required) {
  auto* opt = app->add_option("-c,--config", a.file, "experiment config file (key = value lines)");
  if (required) opt->required();
  app->add_option("--set", a.overrides, "override a config key, key=value (repeatable)");
}

ExperimentConfig load_config(const ConfigArgs& a, std::optional<int> workers,
                             const std::vector<std::pair<std::string, std::string>>& defaults = {}) {
  ConfigBuilder b;
  for (const auto& [k, v] : defaults) b.set(k, v);
  if (!a.file.empty()) b.parse_file(a.file);
  for (const auto& kv : a.overrides) b.set_assignment(kv);
  ExperimentConfig c = b.build();
  if (workers) c.sweep.trial.workers = *workers;
  return c;
}

/// Runs `fn` with an output stream: stdout for "" or "-", else the named file.
template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  fn(out);
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

void print_kv(std::ostream& os, const std::string& key, double x) { os << key << '=' << csv::format_double(x) << '\n'; }
void print_kv(std::ostream& os, const std::string& key, std::string_view s) { os << key << '=' << s << '\n'; }
void print_kv(std::ostream& os, const std::string& key, std::int64_t x) { os << key << '=' << x << '\n'; }

void print_window(std::ostream& os, const DetectionWindow& w) {
  if (w.is_sampled()) {
    print_kv(os, "n1", static_cast<std::int64_t>(w.n1));
    print_kv(os, "n2", static_cast<std::int64_t>(w.n2));
  } else {
    print_kv(os, "t1", w.t1);
    print_kv(os, "t2", w.t2);
  }
}

void print_intermediates(std::ostream& os, const ClosedFormIntermediates& c) {
  print_kv(os, "regime", to_string(c.regime));
  if (c.q_hat) print_kv(os, "q_hat", *c.q_hat);
  else print_kv(os, "q_hat", std::string_view("none"));
  print_kv(os, "branch", to_string(c.branch));
  print_kv(os, "i_ratio", c.i_ratio);
  print_kv(os, "v_ratio", c.v_ratio);
  print_kv(os, "w_ratio", c.w_ratio);
  print_kv(os, "a_ratio", c.a_ratio);
  print_kv(os, "gamma", c.gamma);
  print_kv(os, "delta1", c.delta1);
  print_kv(os, "delta2", c.delta2);
  print_kv(os, "s1_re", c.s1.real());
  print_kv(os, "s1_im", c.s1.imag());
  print_kv(os, "s2_re", c.s2.real());
  print_kv(os, "s2_im", c.s2.imag());
  print_kv(os, "t1_anchor", c.t1_anchor);
  print_kv(os, "t2_anchor", c.t2_anchor);
  print_kv(os, "n1_anchor", c.n1_anchor);
  print_kv(os, "n2_anchor", c.n2_anchor);
  print_kv(os, "condition", c.condition);
  print_kv(os, "gain", c.gain);
  print_kv(os, "first_edge", c.first_edge);
  print_kv(os, "upper_fraction", c.upper_fraction);
  print_kv(os, "clamped", std::string_view(c.clamped ? "true" : "false"));
}

int cmd_metrics(const ExperimentConfig& c, const std::string& out) {
  const auto rows = metric_grid(c.system, c.metrics_grid_steps);
  with_output(out.empty() ? c.output : out, [&](std::ostream& os) { write_metrics_csv(os, c.system.receiver, rows); });
  return 0;
}

int cmd_optimize(const ExperimentConfig& c, const std::string& scheme) {
  const SystemParams& p = c.system;
  const OptimizationResult r = scheme_window(p, parse_scheme(scheme), c.sweep);
  const BerEstimate a = r.threshold ? analytic_ber(p, r.window, *r.threshold, r.shift) : optimal_threshold(p, r.window, r.shift);
  std::ostream& os = std::cout;
  print_kv(os, "scheme", scheme);
  print_kv(os, "method", to_string(r.method));
  print_kv(os, "receiver", to_string(p.receiver));
  print_kv(os, "molecules", p.molecules);
  print_window(os, r.window);
  print_kv(os, "shift", r.shift);
  print_kv(os, "objective", r.objective);
  print_kv(os, "degenerate", std::string_view(r.degenerate ? "true" : "false"));
  print_kv(os, "threshold", a.threshold);
  print_kv(os, "analytic_ber", a.value);
  if (r.intermediates) print_intermediates(os, *r.intermediates);
  return 0;
}

struct SimulateArgs {
  std::string scheme = "closed_form";
  std::optional<double> t1, t2, threshold;
  std::optional<int> n1, n2;
};

int cmd_simulate(const ExperimentConfig& c, const SimulateArgs& s) {
  const SystemParams& p = c.system;
  DetectionWindow w;
  double shift = 0.0;
  std::string source = s.scheme;
  if (s.t1 || s.t2) {
    if (!s.t1 || !s.t2) throw Error(ErrorCode::Config, "--t1 and --t2 go together");
    w = DetectionWindow::continuous(*s.t1, *s.t2);
    source = "explicit";
  } else if (s.n1 || s.n2) {
    if (!s.n1 || !s.n2) throw Error(ErrorCode::Config, "--n1 and --n2 go together");
    w = DetectionWindow::sampled(*s.n1, *s.n2);
    source = "explicit";
  } else {
    const OptimizationResult r = scheme_window(p, parse_scheme(s.scheme), c.sweep);
    w = r.window;
    shift = r.shift;
  }
  validate_window(p, w);
  const BerEstimate a = s.threshold ? analytic_ber(p, w, *s.threshold, shift) : optimal_threshold(p, w, shift);
  const BerEstimate mc = simulate_ber(p, w, a.threshold, c.sweep.trial, shift);
  std::ostream& os = std::cout;
  print_kv(os, "window_source", source);
  print_window(os, w);
  print_kv(os, "shift", shift);
  print_kv(os, "threshold", a.threshold);
  print_kv(os, "analytic_ber", a.value);
  print_kv(os, "mc_ber", mc.value);
  print_kv(os, "mc_ci_halfwidth", mc.ci_halfwidth);
  print_kv(os, "mc_trials", mc.trials);
  print_kv(os, "mc_errors", mc.errors);
  return 0;
}

int cmd_sweep(const ExperimentConfig& c, const std::string& out) {
  std::vector<std::int64_t> qs = c.q_values;
  if (qs.empty()) qs.push_back(c.system.molecules);
  std::vector<Scheme> schemes = c.schemes;
  if (schemes.empty()) schemes = {Scheme::NumericMsinar, Scheme::FullWindow};
  const auto rows = run_sweep(c.system, qs, schemes, c.sweep);
  with_output(out.empty() ? c.output : out, [&](std::ostream& os) { write_sweep_csv(os, rows); });
  return 0;
}

int cmd_reproduce(const ExperimentConfig& c, const std::string& figure, const std::string& dir) {
  Recipe r = find_recipe(figure);
  if (!c.q_values.empty()) r.q_values = c.q_values;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create directory '" + dir + "': " + ec.message());
  const std::string csv_name = r.id + ".csv";
  std::size_t rows = 0;
  with_output((std::filesystem::path(dir) / csv_name).string(),
              [&](std::ostream& os) { rows = run_recipe(os, r, c.sweep, c.sample_rule); });
  with_output((std::filesystem::path(dir) / (r.id + ".manifest.csv")).string(), [&](std::ostream& os) {
    csv::write_line(os, {"file", "schema", "figure", "rows"});
    csv::write_line(os, {csv_name, r.schema, r.id, std::to_string(rows)});
  });
  with_output((std::filesystem::path(dir) / (r.id + ".cfg")).string(),
              [&](std::ostream& os) { os << emit_config(c); });
  std::cout << "figure=" << r.id << "\nrows=" << rows << "\nschema=" << r.schema << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detection-window optimization and BER simulation for diffusion molecular communication"};
  app.require_subcommand(1);
  std::optional<int> workers;
  app.add_option("--workers", workers, "worker threads (default: MCWIN_WORKERS or all cores)")->check(CLI::PositiveNumber);

  ConfigArgs metrics_cfg, optimize_cfg, simulate_cfg, sweep_cfg, reproduce_cfg, config_cfg;
  std::string metrics_out, sweep_out, reproduce_dir, figure, optimize_scheme = "closed_form";
  SimulateArgs sim;

  auto* metrics = app.add_subcommand("metrics", "evaluate all metrics on a window grid (CSV)");
  add_config_options(metrics, metrics_cfg, true);
  metrics->add_option("-o,--output", metrics_out, "CSV path, '-' for stdout");

  auto* optimize = app.add_subcommand("optimize", "choose a detection window and print key=value lines");
  add_config_options(optimize, optimize_cfg, true);
  optimize->add_option("--scheme", optimize_scheme,
                       "closed_form, num_msinar, num_sinar, num_sid, exhaustive, shift_tau or full");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo BER of one window");
  add_config_options(simulate, simulate_cfg, true);
  simulate->add_option("--scheme", sim.scheme, "scheme that picks the window");
  simulate->add_option("--t1", sim.t1, "explicit window start (s, absorbing)");
  simulate->add_option("--t2", sim.t2, "explicit window end (s, absorbing)");
  simulate->add_option("--n1", sim.n1, "explicit first sample (passive)");
  simulate->add_option("--n2", sim.n2, "explicit last sample (passive)");
  simulate->add_option("--threshold", sim.threshold, "detection threshold (default: analytic optimum)");

  auto* sweep = app.add_subcommand("sweep", "BER versus Q for several schemes (CSV)");
  add_config_options(sweep, sweep_cfg, true);
  sweep->add_option("-o,--output", sweep_out, "CSV path, '-' for stdout");

  auto* reproduce = app.add_subcommand("reproduce", "run a figure recipe and write its CSV bundle");
  reproduce->add_option("figure", figure, "conv-ab, conv-pa, ver-ab, ver-pa, cmp-ab or cmp-pa")->required();
  reproduce->add_option("-o,--output", reproduce_dir, "output directory")->required();
  add_config_options(reproduce, reproduce_cfg, false);

  auto* config = app.add_subcommand("config", "print the canonical form of a config");
  add_config_options(config, config_cfg, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*metrics) return cmd_metrics(load_config(metrics_cfg, workers), metrics_out);
    if (*optimize) return cmd_optimize(load_config(optimize_cfg, workers), optimize_scheme);
    if (*simulate) return cmd_simulate(load_config(simulate_cfg, workers), sim);
    if (*sweep) return cmd_sweep(load_config(sweep_cfg, workers), sweep_out);
    if (*reproduce) {
      // the recipe supplies the physical setup; the config only tunes the run
      const ExperimentConfig c = load_config(reproduce_cfg, workers,
                                             {{"symbol_time", "0.2"}, {"isi_length", "1"}, {"trials", "100000"}});
      return cmd_reproduce(c, figure, reproduce_dir);
    }
    if (*config) {
      std::cout << emit_config(load_config(config_cfg, workers));
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "mcwin: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "mcwin: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
