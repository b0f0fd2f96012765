// Command-line front end: simulate, sweep, compare-average, verify-gap, check-dwell.
// Exit codes: 0 pass, 1 a check failed, 2 bad config or IO.

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>

#include "hyseek/errors.hpp"
#include "hyseek/hybrid/arc_io.hpp"
#include "hyseek/scenarios/plot.hpp"
#include "hyseek/scenarios/sweep.hpp"
#include "hyseek/uncertainty.hpp"

namespace {

using namespace hyseek;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kBadInput = 2;

int cmd_simulate(const std::string& config, std::optional<std::uint64_t> seed, const std::string& out) {
  ScenarioConfig cfg = load_config(config);
  if (seed) cfg.solver.seed = *seed;
  if (!out.empty()) cfg.out = out;
  RunRecord rec = run(cfg);
  if (!cfg.out.empty()) emit_plot_data(rec, cfg.kind, default_plots(cfg.kind), cfg.out / "plots");
  std::cout << rec.summary.render();
  return run_checks_pass(rec) ? kPass : kFail;
}

int cmd_sweep(const std::string& config, const std::string& grid_file, double nu, unsigned threads) {
  ScenarioConfig cfg = load_config(config);
  ParameterGrid grid = load_grid(grid_file);
  SweepResult res = sweep(cfg, grid, nu, threads);

  std::cout << "index";
  for (const auto& [key, values] : grid) std::cout << ',' << key;
  std::cout << ",status,final_dist,success,jumps,checks,summary_hash,error\n";
  bool all_checks = true;
  for (const auto& row : res.rows) {
    std::cout << row.index;
    for (const auto& [key, v] : row.overrides) std::cout << ',' << v;
    if (row.ok) {
      bool checks = row.summary.get("adt_ok") == "true" && row.summary.get("att_ok") == "true" &&
                    row.summary.get("post_jump_violations") == "0" &&
                    row.summary.get("jump_decrease_violations") == "0";
      all_checks = all_checks && checks;
      std::cout << ",ok," << row.summary.get("final_dist") << ',' << (row.success ? 1 : 0) << ','
                << row.summary.get("jumps") << ',' << (checks ? "pass" : "fail") << ','
                << row.summary.get("summary_hash") << ",\n";
    } else {
      std::string err = row.error;
      std::replace(err.begin(), err.end(), ',', ';');
      std::cout << ",error,,0,,,," << err << '\n';
    }
  }
  std::cout << "# runs = " << res.rows.size() << ", failures = " << res.failures
            << ", success_rate = " << res.success_rate << '\n';
  return res.failures == 0 && all_checks ? kPass : kFail;
}

int cmd_compare(const std::string& config, const std::string& eps_text, int phases, double max_ratio) {
  ScenarioConfig cfg = load_config(config);
  std::vector<double> eps;
  std::stringstream ss(eps_text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      eps.push_back(std::stod(item));
    } catch (const std::logic_error&) {
      throw ConfigInvalid("--eps: bad number '" + item + "'");
    }
  }
  auto rows = compare_average(cfg, eps, phases);
  bool ok = true;
  std::cout << "eps,deviation,ratio\n" << std::setprecision(8);
  for (const auto& r : rows) {
    std::cout << r.eps << ',' << r.deviation << ',';
    if (std::isnan(r.ratio)) {
      std::cout << "-\n";
    } else {
      std::cout << r.ratio << '\n';
      ok = ok && r.ratio <= max_ratio;
    }
  }
  std::cout << "# ratio bound " << max_ratio << ": " << (ok ? "pass" : "fail") << '\n';
  return ok ? kPass : kFail;
}

int cmd_gap(const std::string& config, int grid_points) {
  ScenarioConfig cfg = load_config(config);
  GapSearchOptions opts;
  opts.grid_points = grid_points;
  GapCheck g = verify_gap(cfg, opts);
  std::cout << std::setprecision(10) << "scenario = " << to_string(cfg.kind) << '\n'
            << "gap = " << g.gap << '\n'
            << "delta = " << g.delta << '\n'
            << "critical_points = " << g.report.points.size() << '\n'
            << "seeds = " << g.report.seeds << '\n'
            << "result = " << (g.pass ? "pass" : "fail") << '\n';
  for (const auto& cp : g.report.points) {
    std::cout << "# mode " << cp.mode << " value " << cp.value << " margin " << cp.margin << " at (";
    for (Eigen::Index i = 0; i < cp.p.size(); ++i) std::cout << (i ? ", " : "") << cp.p[i];
    std::cout << ")\n";
  }
  return g.pass ? kPass : kFail;
}

int cmd_check_dwell(const std::string& arc_file, double chi1, double chi2, double t_circ) {
  HybridArc arc = read_arc(arc_file);
  auto jt = direction_jump_times(arc);
  bool adt = verify_adt(jt, chi1);
  bool att = verify_att(arc, chi2, t_circ);
  bool box = true;
  if (arc.has_channel("ratio")) {
    for (double v : arc.channel("ratio")) box = box && v >= -1e-6 && v <= t_circ + 1e-6;
  }
  std::cout << "direction_jumps = " << jt.size() << '\n'
            << "min_gap = " << min_jump_gap(jt) << '\n'
            << "adt = " << (adt ? "pass" : "fail") << '\n'
            << "att = " << (att ? "pass" : "fail") << '\n'
            << "ratio_in_box = " << (box ? "pass" : "fail") << '\n';
  return adt && att && box ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid minimum-seeking simulator"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  auto* sim = app.add_subcommand("simulate", "run one scenario and write its arc");
  sim->add_option("--config", config, "scenario config file")->required();
  sim->add_option("--seed", seed, "override solver.seed");
  sim->add_option("--out", out, "output directory");

  std::string grid;
  double nu = 0.15;
  unsigned threads = 0;
  auto* sw = app.add_subcommand("sweep", "run a parameter grid");
  sw->add_option("--config", config)->required();
  sw->add_option("--grid", grid, "grid file")->required();
  sw->add_option("--nu", nu, "success radius for final distance");
  sw->add_option("--threads", threads, "worker count, 0 for all cores");

  std::string eps = "0.2,0.1,0.05";
  int phases = 8;
  double max_ratio = 0.7;
  auto* cmp = app.add_subcommand("compare-average", "closed loop against the averaged system");
  cmp->add_option("--config", config)->required();
  cmp->add_option("--eps", eps, "comma-separated eps values");
  cmp->add_option("--phases", phases, "rotor phases to average over");
  cmp->add_option("--max-ratio", max_ratio, "largest accepted deviation ratio");

  int grid_points = 100000;
  auto* gap = app.add_subcommand("verify-gap", "estimate the synergy gap");
  gap->add_option("--config", config)->required();
  gap->add_option("--grid-points", grid_points, "seeding grid size");

  std::string arc_file;
  double chi1 = 0.5;
  double chi2 = 0.5;
  double t_circ = 2.0;
  auto* dwell = app.add_subcommand("check-dwell", "check dwell and activation bounds of an arc");
  dwell->add_option("--arc", arc_file, "arc file written by simulate")->required();
  dwell->add_option("--chi1", chi1);
  dwell->add_option("--chi2", chi2);
  dwell->add_option("--t-circ", t_circ);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kBadInput;
  }

  try {
    if (*sim) return cmd_simulate(config, seed, out);
    if (*sw) return cmd_sweep(config, grid, nu, threads);
    if (*cmp) return cmd_compare(config, eps, phases, max_ratio);
    if (*gap) return cmd_gap(config, grid_points);
    if (*dwell) return cmd_check_dwell(arc_file, chi1, chi2, t_circ);
  } catch (const ConfigInvalid& e) {
    std::cerr << e.what() << '\n';
    return kBadInput;
  } catch (const IOError& e) {
    std::cerr << e.what() << '\n';
    return kBadInput;
  } catch (const MissingChannel& e) {
    std::cerr << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kFail;
  }
  return kBadInput;
}
