#include "screme/experiments.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "screme/coverage_mc.hpp"
#include "screme/dimm_topology.hpp"
#include "screme/lifetime_mc.hpp"
#include "screme/timing_sim.hpp"

namespace screme::cli {

namespace {

std::string fmt(double v, int prec) {
  char buf[64];
  snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string fmt_g(double v) {
  char buf[64];
  snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> notes;  // emitted as comment lines in CSV

  std::string to_csv() const {
    std::ostringstream os;
    for (const auto& n : notes) os << "# " << n << "\n";
    for (size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
      for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << "\n";
    }
    return os.str();
  }

  std::string to_json() const {
    nlohmann::ordered_json j;
    j["notes"] = notes;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
      nlohmann::ordered_json o;
      for (size_t i = 0; i < columns.size() && i < row.size(); ++i) o[columns[i]] = row[i];
      j["rows"].push_back(o);
    }
    return j.dump(2) + "\n";
  }
};

std::string out_path(const std::string& subcmd, const GlobalOpts& opts,
                     const config::Config& cfg) {
  if (!opts.out.empty()) return opts.out;
  char buf[64];
  snprintf(buf, sizeof buf, "%s_s%" PRIu64 "_%08" PRIx64 ".%s", subcmd.c_str(), opts.seed,
           cfg.content_hash() & 0xFFFFFFFFull, opts.format == "json" ? "json" : "csv");
  return buf;
}

void write_output(const std::string& path, const Table& t, const GlobalOpts& opts) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << (opts.format == "json" ? t.to_json() : t.to_csv());
  std::cout << "wrote " << path << "\n";
}

}  // namespace

int cmd_coverage(const config::Config& cfg, const GlobalOpts& opts) {
  auto scenarios = cfg.get_list_or("coverage.scenarios", fault::standard_scenarios());
  std::vector<coverage::Scheme> schemes;
  for (const auto& name : cfg.get_list_or("coverage.schemes", {"all"})) {
    if (name == "all") {
      schemes = coverage::all_schemes();
      break;
    }
    auto s = coverage::scheme_from_name(name);
    if (!s) throw config::ConfigError("unknown scheme '" + name + "'");
    schemes.push_back(*s);
  }
  uint64_t trials = opts.trials ? *opts.trials : cfg.get_u64_or("coverage.trials", 100000);
  if (trials == 0) throw config::ConfigError("coverage.trials must be >= 1");

  coverage::Options copt;
  std::string scf = cfg.get_or("coverage.scf_sampling", "exact-nonzero");
  if (scf == "exact-nonzero")
    copt.scf_sampling = fault::ScfSampling::ExactNonzeroSymbols;
  else if (scf == "may-be-zero")
    copt.scf_sampling = fault::ScfSampling::UniformMayBeZero;
  else
    throw config::ConfigError("coverage.scf_sampling must be exact-nonzero or may-be-zero");
  std::string od = cfg.get_or("coverage.on_die", "marker");
  if (od == "marker")
    copt.on_die = coverage::OnDieModel::Marker;
  else if (od == "physical")
    copt.on_die = coverage::OnDieModel::Physical;
  else
    throw config::ConfigError("coverage.on_die must be marker or physical");
  copt.screme_spare_replacements = cfg.get_int_or("coverage.spare_replacements", 2);
  cfg.reject_unconsumed();

  Table t;
  t.columns = {"scenario", "scheme", "trials", "dce_pct", "due_pct", "sdc_pct", "stderr_pct"};
  bool dbf_combo = false;
  for (const auto& sc : scenarios) {
    auto kinds = fault::parse_scenario_label(sc);  // validates the label
    int dbf_count = 0;
    for (auto k : kinds) dbf_count += k == fault::FaultKind::DoubleBit;
    if (dbf_count >= 2) dbf_combo = true;
    for (auto scheme : schemes) {
      auto row = coverage::run_coverage(sc, scheme, trials, opts.seed, copt);
      t.rows.push_back({row.scenario, coverage::scheme_name(scheme), std::to_string(row.trials),
                        fmt(row.dce_pct(), 3), fmt(row.due_pct(), 3), fmt(row.sdc_pct(), 3),
                        fmt(row.stderr_pct(), 4)});
    }
  }
  if (dbf_combo) {
    t.notes.push_back(
        "DBF+DBF and DBF+DBF+DBF rows follow this artifact's uniform distinct-bit placement "
        "model (closed-form DCE 58.223% for DBF+DBF).");
    t.notes.push_back(
        "Previously reported figures for these rows (46.875 / 8.789 DCE) assume an undocumented "
        "sequential placement discipline and are not reproduced here.");
  }
  write_output(out_path("coverage", opts, cfg), t, opts);
  return 0;
}

int cmd_timing(const config::Config& cfg, const GlobalOpts& opts) {
  std::vector<timing::MemRequest> trace;
  if (auto path = cfg.get("timing.trace")) {
    trace = timing::load_trace(*path);
  } else {
    timing::TraceProfile prof;
    prof.read_fraction = cfg.get_double_or("timing.profile.read_fraction", 0.67);
    prof.locality = cfg.get_double_or("timing.profile.locality", 0.6);
    prof.footprint_bytes = cfg.get_u64_or("timing.profile.footprint_mb", 64) << 20;
    prof.arrival_rate = cfg.get_double_or("timing.profile.arrival_rate", 0.03);
    prof.length = cfg.get_u64_or("timing.profile.length", 100000);
    trace = timing::generate_trace(prof, Rng::derive(opts.seed, {0x7472ull}));
  }

  timing::TimingParams p;
  p.cl = cfg.get_int_or("timing.params.cl", p.cl);
  p.n_rcd = cfg.get_int_or("timing.params.n_rcd", p.n_rcd);
  p.n_rp = cfg.get_int_or("timing.params.n_rp", p.n_rp);
  p.n_ras = cfg.get_int_or("timing.params.n_ras", p.n_ras);
  p.n_ccd_s = cfg.get_int_or("timing.params.n_ccd_s", p.n_ccd_s);
  p.n_ccd_l = cfg.get_int_or("timing.params.n_ccd_l", p.n_ccd_l);
  p.n_ccd_l_wr = cfg.get_int_or("timing.params.n_ccd_l_wr", p.n_ccd_l_wr);
  p.t_burst = cfg.get_int_or("timing.params.t_burst", p.t_burst);
  p.write_queue_capacity = cfg.get_int_or("timing.params.write_queue_capacity", p.write_queue_capacity);
  p.read_queue_capacity = cfg.get_int_or("timing.params.read_queue_capacity", p.read_queue_capacity);
  p.data_buffer_latency = cfg.get_int_or("timing.params.data_buffer_latency", p.data_buffer_latency);
  p.t_wr = cfg.get_int_or("timing.params.t_wr", p.t_wr);
  p.t_wtr_s = cfg.get_int_or("timing.params.t_wtr_s", p.t_wtr_s);
  p.t_wtr_l = cfg.get_int_or("timing.params.t_wtr_l", p.t_wtr_l);
  p.t_rtw = cfg.get_int_or("timing.params.t_rtw", p.t_rtw);
  p.wq_drain_high = cfg.get_int_or("timing.params.wq_drain_high", p.wq_drain_high);
  p.wq_drain_low = cfg.get_int_or("timing.params.wq_drain_low", p.wq_drain_low);
  p.parity_buffer_entries = cfg.get_int_or("timing.params.parity_buffer_entries", p.parity_buffer_entries);
  p.access_granularity = cfg.get_int_or("timing.params.access_granularity", p.access_granularity);

  auto ratios_s = cfg.get_list_or("timing.ratio_sweep", {"1.0", "0.5", "0.375"});
  auto plans_s = cfg.get_list_or("timing.plan_sweep", {});
  auto errors_s = cfg.get_list_or("timing.error_rates", {});
  double error_ratio = cfg.get_double_or("timing.error_ratio", 0.5);
  cfg.reject_unconsumed();

  Table t;
  t.columns = {"label",           "total_cycles",  "reads",
               "writes",          "avg_read_latency", "throughput_rpkc",
               "ecc_utilization", "slow_stall_cycles", "slowdown",
               "frames",          "frame_violation_fraction"};

  auto base_topo = dimm::DimmTopology::baseline();
  auto identity = dimm::identity_plan();
  auto baseline = timing::simulate(trace, p, base_topo, identity);

  auto push = [&](const std::string& label, const timing::SimReport& r, double slowdown,
                  double viol) {
    t.rows.push_back({label, std::to_string(r.total_cycles), std::to_string(r.reads),
                      std::to_string(r.writes), fmt(r.avg_read_latency, 2),
                      fmt(r.throughput_rpkc, 3), fmt(r.ecc_lane_utilization, 4),
                      std::to_string(r.slow_stall_cycles), fmt(slowdown, 6),
                      std::to_string(r.frames.size()), fmt(viol, 4)});
  };

  for (const auto& rs : ratios_s) {
    double ratio = std::stod(rs);
    auto topo = ratio < 1.0 ? dimm::apply_screme_wo(base_topo, ratio) : base_topo;
    auto rep = ratio < 1.0 ? timing::simulate(trace, p, topo, identity) : baseline;
    double thresh = 1.0 / ratio - 1.0;
    auto fs = timing::frame_statistics(rep, thresh);
    push("ratio-" + fmt_g(ratio), rep, rep.slowdown_vs(baseline), fs.violation_fraction);
  }

  for (const auto& ps : plans_s) {
    dimm::RankPlan plan;
    if (ps == "identity" || ps == "ideal")
      plan = identity;
    else if (ps == "reorganized")
      plan = dimm::apply_io_row(base_topo, {0}).plan;
    else if (ps == "half-rank")
      plan = dimm::half_rank_plan(0);
    else
      throw config::ConfigError("unknown plan '" + ps + "' (identity|reorganized|half-rank)");
    auto rep = timing::simulate(trace, p, base_topo, plan);
    push("plan-" + ps, rep, rep.slowdown_vs(baseline), 0.0);
  }

  if (!errors_s.empty()) {
    auto topo = dimm::apply_screme_wo(base_topo, error_ratio);
    auto ref = timing::simulate(trace, p, topo, identity);
    for (const auto& es : errors_s) {
      double rate = std::stod(es);
      auto rep = timing::simulate_with_errors(trace, p, topo, identity, rate,
                                              Rng::derive(opts.seed, {0xE77ull}));
      push("err-" + fmt_g(rate), rep, rep.slowdown_vs(ref), 0.0);
    }
  }

  write_output(out_path("timing", opts, cfg), t, opts);
  return 0;
}

int cmd_lifetime(const config::Config& cfg, const GlobalOpts& opts) {
  lifetime::LifetimeConfig base;
  base.chips = cfg.get_int_or("lifetime.chips", base.chips);
  base.fit_sbf = cfg.get_double_or("lifetime.fit_sbf", base.fit_sbf);
  base.fit_dbf = cfg.get_double_or("lifetime.fit_dbf", base.fit_dbf);
  base.fit_scf = cfg.get_double_or("lifetime.fit_scf", base.fit_scf);
  base.mission_hours = cfg.get_double_or("lifetime.mission_hours", base.mission_hours);
  base.time_samples = cfg.get_int_or("lifetime.time_samples", base.time_samples);
  base.fit_multiplier = cfg.get_double_or("lifetime.fit_multiplier", base.fit_multiplier);
  base.pre_failed_chips = cfg.get_int_or("lifetime.pre_failed_chips", base.pre_failed_chips);
  base.spare_chips = cfg.get_int_or("lifetime.spare_chips", base.spare_chips);
  base.retire_threshold = cfg.get_int_or("lifetime.retire_threshold", base.retire_threshold);
  uint64_t trials = opts.trials ? *opts.trials : cfg.get_u64_or("lifetime.trials", 10000);

  std::vector<lifetime::LifetimeScheme> schemes;
  for (const auto& name : cfg.get_list_or("lifetime.schemes", {"all"})) {
    if (name == "all") {
      schemes = lifetime::all_lifetime_schemes();
      break;
    }
    auto s = lifetime::lifetime_scheme_from_name(name);
    if (!s) throw config::ConfigError("unknown lifetime scheme '" + name + "'");
    schemes.push_back(*s);
  }
  cfg.reject_unconsumed();

  Table t;
  t.columns = {"time_hours", "scheme", "due_prob", "sdc_prob", "stderr"};
  for (auto scheme : schemes) {
    lifetime::LifetimeConfig c = base;
    c.scheme = scheme;
    auto curve = lifetime::run_lifetime(c, trials, opts.seed);
    for (const auto& pt : curve.points)
      t.rows.push_back({fmt(pt.t_hours, 1), lifetime::lifetime_scheme_name(scheme),
                        fmt(pt.due_prob, 6), fmt(pt.sdc_prob, 6), fmt(pt.stderr_prob, 6)});
  }
  write_output(out_path("lifetime", opts, cfg), t, opts);
  return 0;
}

int cmd_topology(const config::Config& cfg, const GlobalOpts& opts) {
  auto topo = dimm::DimmTopology::baseline();
  int spare_count = cfg.get_int_or("topology.spare_count", 4);
  double spare_cap = cfg.get_double_or("topology.spare_capacity", 0.5);
  topo.spare_pool.assign(static_cast<size_t>(spare_count), dimm::SpareChip{spare_cap, 0.5, false, 0});

  std::optional<dimm::RankPlan> plan;
  auto events = config::split_list(cfg.get_or("topology.events", ""), ';');
  cfg.reject_unconsumed();

  for (const auto& ev : events) {
    std::istringstream in(ev);
    std::string op;
    in >> op;
    if (op == "screme-wo") {
      double ratio = 0.5;
      in >> ratio;
      topo = dimm::apply_screme_wo(topo, ratio);
    } else if (op == "io-col") {
      int col = -1, pair = 0;
      if (!(in >> col >> pair)) throw config::ConfigError("io-col needs: <col> <pair>");
      topo = dimm::apply_io_col(topo, {col, pair});
    } else if (op == "io-row") {
      int row = -1;
      if (!(in >> row)) throw config::ConfigError("io-row needs: <row>");
      auto res = dimm::apply_io_row(topo, {row});
      topo = res.topology;
      plan = res.plan;
    } else if (op == "framework") {
      int row = -1, col = -1;
      if (!(in >> row >> col)) throw config::ConfigError("framework needs: <row> <col>");
      topo = dimm::apply_framework(topo, {row, col});
    } else if (op == "scalable-ecc") {
      topo = dimm::apply_framework_scalable(topo);
    } else {
      throw config::ConfigError("unknown topology event '" + op + "'");
    }
  }

  std::ostringstream report;
  report << to_text(topo);
  if (plan) report << to_text(*plan);
  auto violations = dimm::validate(topo);
  if (plan) {
    auto pv = dimm::validate(*plan);
    violations.insert(violations.end(), pv.begin(), pv.end());
  }
  if (violations.empty()) {
    report << "validate: clean\n";
  } else {
    for (const auto& v : violations) report << "violation: " << v.invariant << " at " << v.where << "\n";
  }
  std::cout << report.str();

  std::string path = out_path("topology", opts, cfg);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  if (opts.format == "json")
    f << dimm::to_json(topo) << "\n";
  else
    f << report.str();
  std::cout << "wrote " << path << "\n";
  return violations.empty() ? 0 : 4;
}

int run(int argc, char** argv) {
  CLI::App app{"resilient-memory workbench: coverage / timing / lifetime / topology experiments"};
  app.require_subcommand(1);

  std::string config_path, out, format = "csv";
  uint64_t seed = 0;
  bool seed_set = false;
  uint64_t trials = 0;
  bool trials_set = false;

  app.add_option("--config", config_path, "experiment config file (section.key = value lines)");
  auto* seed_opt = app.add_option("--seed", seed, "master seed for all stochastic output");
  auto* trials_opt = app.add_option("--trials", trials, "trial-count override");
  app.add_option("--out", out, "output path (default: derived from subcommand, seed, config)");
  app.add_option("--format", format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* c_cov = app.add_subcommand("coverage", "fault-scenario error-coverage Monte Carlo");
  auto* c_tim = app.add_subcommand("timing", "trace-driven DRAM timing experiments");
  auto* c_lif = app.add_subcommand("lifetime", "module failure probability over mission time");
  auto* c_top = app.add_subcommand("topology", "apply reconfiguration events and validate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  seed_set = seed_opt->count() > 0;
  trials_set = trials_opt->count() > 0;

  try {
    config::Config cfg;
    if (!config_path.empty()) cfg = config::Config::from_file(config_path);
    GlobalOpts opts;
    opts.seed = seed_set ? seed : cfg.get_u64_or("seed", 12345);
    opts.out = !out.empty() ? out : cfg.get_or("out", "");
    opts.format = format != "csv" ? format : cfg.get_or("format", "csv");
    if (trials_set) opts.trials = trials;

    if (c_cov->parsed()) return cmd_coverage(cfg, opts);
    if (c_tim->parsed()) return cmd_timing(cfg, opts);
    if (c_lif->parsed()) return cmd_lifetime(cfg, opts);
    if (c_top->parsed()) return cmd_topology(cfg, opts);
    return 2;
  } catch (const config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const timing::TraceParseError& e) {
    std::cerr << "trace error (line " << e.line_no << "): " << e.what() << "\n";
    return 3;
  } catch (const dimm::InfeasibleError& e) {
    std::cerr << "reconfiguration infeasible: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace screme::cli
