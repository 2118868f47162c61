#pragma once

// Experiment orchestration: Q sweeps over detection schemes, metric grids and
// the figure reproduction recipes, with their CSV schemas.

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "mcwin/csv.hpp"
#include "mcwin/error.hpp"
#include "mcwin/metrics.hpp"
#include "mcwin/montecarlo.hpp"
#include "mcwin/optimizer.hpp"
#include "mcwin/params.hpp"
#include "mcwin/reception.hpp"
#include "mcwin/window.hpp"

namespace mcwin {

enum class Scheme { FullWindow, ShiftTau, NumericSid, NumericSinar, NumericMsinar, ClosedForm, ExhaustiveBer };

inline constexpr Scheme kAllSchemes[] = {Scheme::FullWindow,   Scheme::ShiftTau,   Scheme::NumericSid,
                                         Scheme::NumericSinar, Scheme::NumericMsinar, Scheme::ClosedForm,
                                         Scheme::ExhaustiveBer};

constexpr std::string_view to_string(Scheme s) noexcept {
  switch (s) {
    case Scheme::FullWindow: return "full";
    case Scheme::ShiftTau: return "shift_tau";
    case Scheme::NumericSid: return "num_sid";
    case Scheme::NumericSinar: return "num_sinar";
    case Scheme::NumericMsinar: return "num_msinar";
    case Scheme::ClosedForm: return "closed_form";
    case Scheme::ExhaustiveBer: return "exhaustive";
  }
  return "?";
}

inline Scheme parse_scheme(std::string_view name) {
  for (Scheme s : kAllSchemes) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorCode::Config, "unknown scheme '" + std::string(name) + "'");
}

struct SweepOptions {
  int metric_grid_steps = 400;  ///< metric searches, delta t = T_s / steps
  int ber_grid_steps = 100;     ///< exhaustive BER search grid
  int tau_steps = 100;          ///< shift-tau grid over [0, t_max]
  bool simulate = true;         ///< run Monte Carlo next to the analytic BER
  TrialConfig trial;

  bool operator==(const SweepOptions&) const = default;
};

/// Window (and shift) chosen by one scheme. Metric and closed-form schemes do
/// not carry a threshold; the caller picks the optimal one.
inline OptimizationResult scheme_window(const SystemParams& p, Scheme s, const SweepOptions& o) {
  const int workers = o.trial.workers;
  switch (s) {
    case Scheme::FullWindow: return full_window(p);
    case Scheme::ShiftTau: return shift_tau_search(p, {o.tau_steps, workers});
    case Scheme::NumericSid: return numeric_metric_search(p, Metric::Sid, {o.metric_grid_steps, workers});
    case Scheme::NumericSinar: return numeric_metric_search(p, Metric::Sinar, {o.metric_grid_steps, workers});
    case Scheme::NumericMsinar: return numeric_metric_search(p, Metric::Msinar, {o.metric_grid_steps, workers});
    case Scheme::ClosedForm: return closed_form_interval(p);
    case Scheme::ExhaustiveBer: return exhaustive_ber_search(p, {o.ber_grid_steps, workers});
  }
  throw Error(ErrorCode::Domain, "unknown scheme");
}

struct SweepRow {
  SystemParams params;
  Scheme scheme = Scheme::FullWindow;
  std::string status = "ok";  ///< "ok" or the error code that stopped this row
  std::optional<OptimizationResult> result;
  std::optional<BerEstimate> analytic;
  std::optional<BerEstimate> monte_carlo;
};

/// Seed of the Monte Carlo run for row `index` of a sweep.
inline std::uint64_t row_seed(std::uint64_t seed, std::uint64_t index) { return splitmix64(seed ^ splitmix64(index)); }

/// One row per (Q, scheme), Q-major. Library errors of a row are recorded in
/// its status; the sweep continues.
inline std::vector<SweepRow> run_sweep(const SystemParams& base, const std::vector<std::int64_t>& q_values,
                                       const std::vector<Scheme>& schemes, const SweepOptions& o,
                                       std::uint64_t first_row = 0) {
  if (q_values.empty() || schemes.empty()) throw Error(ErrorCode::Config, "sweep needs Q values and schemes");
  std::vector<SweepRow> rows;
  std::uint64_t index = first_row;
  for (std::int64_t q : q_values) {
    const SystemParams p = base.with_molecules(q);
    p.validate();
    for (Scheme s : schemes) {
      SweepRow row;
      row.params = p;
      row.scheme = s;
      try {
        OptimizationResult r = scheme_window(p, s, o);
        BerEstimate a = optimal_threshold(p, r.window, r.shift);
        if (r.threshold && *r.threshold != a.threshold) {
          a = analytic_ber(p, r.window, *r.threshold, r.shift);
        }
        r.threshold = a.threshold;
        row.analytic = a;
        if (o.simulate) {
          TrialConfig cfg = o.trial;
          cfg.seed = row_seed(o.trial.seed, index);
          row.monte_carlo = simulate_ber(p, r.window, a.threshold, cfg, r.shift);
        }
        row.result = r;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidParams || e.code() == ErrorCode::Config) throw;
        row.status = std::string(to_string(e.code()));
      }
      rows.push_back(std::move(row));
      ++index;
    }
  }
  return rows;
}

inline constexpr std::string_view kSweepSchema = "sweep/1";

inline std::vector<std::string> sweep_header() {
  return {"receiver", "symbol_time", "isi_length", "q",           "scheme",       "method",      "status",
          "t1",       "t2",          "n1",         "n2",          "shift",        "threshold",   "analytic_ber",
          "mc_ber",   "mc_ci_halfwidth", "mc_trials", "mc_errors", "regime",       "q_hat"};
}

inline csv::Row sweep_csv_row(const SweepRow& r) {
  csv::Row out;
  const SystemParams& p = r.params;
  out.add(to_string(p.receiver)).add(p.symbol_time).add(p.isi_length).add(p.molecules).add(to_string(r.scheme));
  if (!r.result) {
    out.add("").add(r.status);
    for (int i = 0; i < 13; ++i) out.add("");
    return out;
  }
  const OptimizationResult& o = *r.result;
  out.add(to_string(o.method)).add(o.degenerate ? std::string("degenerate") : r.status);
  if (o.window.is_sampled()) {
    out.add("").add("").add(o.window.n1).add(o.window.n2);
  } else {
    out.add(o.window.t1).add(o.window.t2).add("").add("");
  }
  out.add(o.shift).add(o.threshold).add(r.analytic->value);
  if (r.monte_carlo) {
    out.add(r.monte_carlo->value).add(r.monte_carlo->ci_halfwidth).add(r.monte_carlo->trials).add(r.monte_carlo->errors);
  } else {
    out.add("").add("").add("").add("");
  }
  if (o.intermediates) {
    out.add(to_string(o.intermediates->regime)).add(o.intermediates->q_hat);
  } else {
    out.add("").add("");
  }
  return out;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  csv::write_line(os, sweep_header());
  for (const SweepRow& r : rows) csv::write_row(os, sweep_csv_row(r));
}

// ---- metric grid ----

inline constexpr std::string_view kMetricsSchema = "metrics/1";

struct MetricRow {
  DetectionWindow window;
  MetricReport report;
};

/// Every window of the grid: t1 < t2 on T_s / steps for the absorbing
/// receiver, every 0 <= n1 <= n2 <= N for the passive one.
inline std::vector<MetricRow> metric_grid(const SystemParams& p, int steps) {
  p.validate();
  if (steps < 1) throw Error(ErrorCode::Config, "metric grid needs at least one step");
  std::vector<MetricRow> rows;
  const detail::WindowGrid grid{p, steps};
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    grid.row(r, [&](const DetectionWindow& w) { rows.push_back({w, metric_report(p, w)}); });
  }
  return rows;
}

inline std::vector<std::string> metrics_header(Receiver rx) {
  if (rx == Receiver::Absorbing) return {"t1", "t2", "sir", "sid", "sinar", "msinar", "msid"};
  return {"n1", "n2", "sir", "sid", "sinar", "msinar", "msid"};
}

inline void write_metrics_csv(std::ostream& os, Receiver rx, const std::vector<MetricRow>& rows) {
  csv::write_line(os, metrics_header(rx));
  for (const MetricRow& m : rows) {
    csv::Row r;
    if (m.window.is_sampled()) r.add(m.window.n1).add(m.window.n2);
    else r.add(m.window.t1).add(m.window.t2);
    r.add(m.report.sir).add(m.report.sid).add(m.report.sinar).add(m.report.msinar).add(m.report.msid);
    csv::write_row(os, r);
  }
}

// ---- figure reproduction ----

enum class FigureKind { Convergence, Ber };

struct Recipe {
  std::string id;
  Receiver receiver = Receiver::Absorbing;
  FigureKind kind = FigureKind::Ber;
  std::vector<double> symbol_times;
  std::vector<int> isi_lengths;
  std::vector<std::int64_t> q_values;
  std::vector<Scheme> schemes;  ///< Ber figures only
  std::string schema;
};

inline std::vector<Recipe> recipes() {
  const std::vector<std::int64_t> q_ab = {50, 100, 200, 500, 1000, 2000, 5000, 10000, 20000, 50000};
  const std::vector<std::int64_t> q_pa = {1000, 2000, 5000, 10000, 20000, 50000, 100000, 200000, 500000, 1000000};
  const std::vector<Scheme> ver = {Scheme::NumericMsinar, Scheme::ClosedForm, Scheme::ExhaustiveBer};
  const std::vector<Scheme> cmp = {Scheme::NumericMsinar, Scheme::NumericSinar, Scheme::NumericSid, Scheme::ShiftTau,
                                   Scheme::FullWindow};
  return {
      {"conv-ab", Receiver::Absorbing, FigureKind::Convergence, {0.2, 0.3}, {4, 5, 6, 8}, q_ab, {}, "conv-ab/1"},
      {"conv-pa", Receiver::Passive, FigureKind::Convergence, {1.0, 2.0}, {2, 3, 5, 10}, q_pa, {}, "conv-pa/1"},
      {"ver-ab", Receiver::Absorbing, FigureKind::Ber, {0.2, 0.3}, {4, 5, 6, 8}, q_ab, ver, std::string(kSweepSchema)},
      {"ver-pa", Receiver::Passive, FigureKind::Ber, {1.0, 2.0}, {2, 3, 5, 10}, q_pa, ver, std::string(kSweepSchema)},
      {"cmp-ab", Receiver::Absorbing, FigureKind::Ber, {0.2, 0.3}, {1, 4, 5, 6, 8}, q_ab, cmp, std::string(kSweepSchema)},
      {"cmp-pa", Receiver::Passive, FigureKind::Ber, {1.0, 2.0}, {1, 2, 3, 5, 10}, q_pa, cmp, std::string(kSweepSchema)},
  };
}

inline Recipe find_recipe(std::string_view id) {
  for (const Recipe& r : recipes()) {
    if (r.id == id) return r;
  }
  throw Error(ErrorCode::Config, "unknown figure id '" + std::string(id) + "'");
}

/// Preset parameters for the recipe's receiver at (T_s, L), passive
/// sampling from `rule`.
inline SystemParams recipe_params(const Recipe& r, double ts, int l, SampleIntervalRule rule) {
  return r.receiver == Receiver::Absorbing ? table1_absorbing(ts, l, 1) : table1_passive(ts, l, 1, rule);
}

inline std::vector<std::string> convergence_header(Receiver rx) {
  const std::string a = rx == Receiver::Absorbing ? "t1" : "n1";
  const std::string b = rx == Receiver::Absorbing ? "t2" : "n2";
  return {"symbol_time",    "isi_length",     "q",           "msinar_" + a, "msinar_" + b, "exhaustive_" + a,
          "exhaustive_" + b, "closed_" + a,    "closed_" + b, "closed_status", "regime",    "q_hat"};
}

inline void add_window(csv::Row& row, const DetectionWindow& w) {
  if (w.is_sampled()) row.add(w.n1).add(w.n2);
  else row.add(w.t1).add(w.t2);
}

/// Runs a recipe and writes its CSV. Returns the number of data rows.
inline std::size_t run_recipe(std::ostream& os, const Recipe& r, const SweepOptions& o, SampleIntervalRule rule) {
  std::size_t count = 0;
  std::uint64_t index = 0;
  if (r.kind == FigureKind::Ber) {
    csv::write_line(os, sweep_header());
    for (double ts : r.symbol_times) {
      for (int l : r.isi_lengths) {
        const auto rows = run_sweep(recipe_params(r, ts, l, rule), r.q_values, r.schemes, o, index);
        index += rows.size();
        for (const SweepRow& row : rows) csv::write_row(os, sweep_csv_row(row));
        count += rows.size();
      }
    }
    return count;
  }
  csv::write_line(os, convergence_header(r.receiver));
  for (double ts : r.symbol_times) {
    for (int l : r.isi_lengths) {
      for (std::int64_t q : r.q_values) {
        const SystemParams p = recipe_params(r, ts, l, rule).with_molecules(q);
        csv::Row row;
        row.add(ts).add(l).add(q);
        add_window(row, numeric_metric_search(p, Metric::Msinar, {o.metric_grid_steps, o.trial.workers}).window);
        add_window(row, exhaustive_ber_search(p, {o.ber_grid_steps, o.trial.workers}).window);
        try {
          const OptimizationResult cf = closed_form_interval(p);
          add_window(row, cf.window);
          row.add("ok").add(to_string(cf.intermediates->regime)).add(cf.intermediates->q_hat);
        } catch (const Error& e) {
          row.add("").add("").add(to_string(e.code())).add("").add("");
        }
        csv::write_row(os, row);
        ++count;
      }
    }
  }
  return count;
}

}  // namespace mcwin
