#include "hyseek/scenarios/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "hyseek/errors.hpp"
#include "hyseek/hybrid/arc_io.hpp"
#include "hyseek/hybrid/checks.hpp"
#include "hyseek/uncertainty.hpp"

namespace hyseek {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::uint64_t text_hash(const std::string& s) {
  Fnv1a h;
  h.text(s);
  return h.digest();
}

int count_reason(const HybridArc& arc, const std::string& tag) {
  int n = 0;
  for (const auto& jr : arc.jumps())
    if (jr.reason.find(tag) != std::string::npos) ++n;
  return n;
}

double max_of(const std::vector<double>& v) {
  return v.empty() ? std::numeric_limits<double>::quiet_NaN() : *std::max_element(v.begin(), v.end());
}

double min_of(const std::vector<double>& v) {
  return v.empty() ? std::numeric_limits<double>::quiet_NaN() : *std::min_element(v.begin(), v.end());
}

}  // namespace

void Summary::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries.emplace_back(key, value);
}

void Summary::set(const std::string& key, double value) { set(key, fmt(value)); }
void Summary::set(const std::string& key, long value) { set(key, std::to_string(value)); }

const std::string& Summary::get(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return v;
  throw PreconditionViolated("summary has no entry '" + key + "'");
}

double Summary::number(const std::string& key) const { return std::stod(get(key)); }

std::string Summary::render() const {
  std::string out;
  for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
  return out;
}

RunRecord run(const ScenarioConfig& cfg) { return run(build_scenario(cfg)); }

RunRecord run(const Scenario& sc) {
  auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.arc = solve(sc.system, sc.x0, sc.solver);
  const HybridArc& arc = rec.arc;
  rec.config_hash = text_hash(render_config(sc.cfg));

  Summary& s = rec.summary;
  s.set("scenario", to_string(sc.cfg.kind));
  s.set("controller", to_string(sc.cfg.controller));
  s.set("theta_mode", to_string(sc.cfg.theta_mode));
  s.set("seed", std::to_string(sc.cfg.solver.seed));
  s.set("config_hash", hex(rec.config_hash));
  s.set("step", sc.solver.step);
  s.set("samples", static_cast<long>(arc.size()));
  s.set("t_final", arc.time(arc.size() - 1).t);
  s.set("termination", arc.termination == Termination::Horizon ? "horizon" : "max_jumps");
  s.set("jumps", static_cast<long>(arc.jumps().size()));
  s.set("jumps_synergy", static_cast<long>(count_reason(arc, "synergy")));
  s.set("jumps_dwell", static_cast<long>(count_reason(arc, "dwell")));
  s.set("jumps_forced", static_cast<long>(count_reason(arc, "forced")));

  const auto& dist = arc.channel("dist_A");
  s.set("final_dist", dist.back());
  s.set("min_dist", min_of(dist));
  s.set("max_dist_bad", max_of(arc.channel("dist_bad")));
  const auto& v = arc.channel("V");
  s.set("V_final", v.back());
  s.set("V_min", min_of(v));
  s.set("V_max", max_of(v));
  s.set("W_final", arc.channel("W").back());
  if (arc.has_channel("clearance")) s.set("min_clearance", min_of(arc.channel("clearance")));
  s.set("max_drift", max_of(arc.channel("drift")));
  s.set("max_eta_drift", max_of(arc.channel("eta_drift")));

  const auto& a = sc.cfg.automaton;
  auto jt = direction_jump_times(arc);
  bool adt = verify_adt(jt, a.chi1);
  bool att = verify_att(arc, a.chi2, a.t_circ);
  s.set("adt_ok", adt ? "true" : "false");
  s.set("att_ok", att ? "true" : "false");
  s.set("min_direction_gap", min_jump_gap(jt));
  s.set("post_jump_violations", static_cast<long>(arc.post_jump_violations));
  auto dec = check_jump_decrease(arc, "V", sc.family->delta());
  s.set("jump_decrease_violations", static_cast<long>(dec.size()));
  s.set("arc_hash", hex(arc.content_hash()));

  rec.summary_hash = text_hash(s.render());
  s.set("summary_hash", hex(rec.summary_hash));
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  s.set("wall_seconds", rec.wall_seconds);

  if (!sc.cfg.out.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(sc.cfg.out, ec);
    if (ec) throw IOError("cannot create " + sc.cfg.out.string() + ": " + ec.message());
    write_arc(arc, sc.cfg.out / "arc.csv");
    std::ofstream os(sc.cfg.out / "summary.txt");
    os << s.render();
    std::ofstream cs(sc.cfg.out / "config.ini");
    cs << render_config(sc.cfg);
    if (!os || !cs) throw IOError("cannot write run files in " + sc.cfg.out.string());
  }
  return rec;
}

bool run_checks_pass(const RunRecord& rec) {
  const Summary& s = rec.summary;
  return s.get("adt_ok") == "true" && s.get("att_ok") == "true" && s.get("post_jump_violations") == "0" &&
         s.get("jump_decrease_violations") == "0";
}

Vec sample_at(const HybridArc& arc, double t, int dim) {
  const auto& times = arc.times();
  auto it = std::upper_bound(times.begin(), times.end(), t,
                             [](double value, const HybridTime& ht) { return value < ht.t; });
  if (it == times.begin()) return arc.state(0).head(dim);
  std::size_t k = static_cast<std::size_t>(it - times.begin()) - 1;
  Vec out = arc.state(k).head(dim);
  if (k + 1 < arc.size() && times[k + 1].j == times[k].j && times[k + 1].t > times[k].t) {
    double w = (t - times[k].t) / (times[k + 1].t - times[k].t);
    out += w * (arc.state(k + 1).head(dim) - out);
  }
  return out;
}

std::vector<AverageComparison> compare_average(const ScenarioConfig& cfg, const std::vector<double>& eps_list,
                                               int phases) {
  if (phases < 1) throw ConfigInvalid("need at least one phase");
  if (eps_list.empty()) throw ConfigInvalid("need at least one eps");
  if (cfg.controller == ControllerKind::Baseline) {
    throw ConfigInvalid("the averaged comparator is built from the synergistic family; use hybrid");
  }
  std::vector<AverageComparison> rows;
  for (double eps : eps_list) {
    ScenarioConfig c = cfg;
    c.gains.eps = eps;
    c.theta_mode = ThetaMode::Frozen;
    c.initial_gains.clear();
    c.perturbation.a = 0.0;
    c.solver.step = 0.0;
    c.solver.sample_stride = 1;
    c.out.clear();

    ScenarioConfig ca = c;
    ca.controller = ControllerKind::Averaged;
    Scenario avg_sc = build_scenario(ca);
    HybridArc avg = solve(avg_sc.system, avg_sc.x0, avg_sc.solver);
    const int dim = avg_sc.layout.p_dim;

    std::vector<HybridArc> loops;
    for (int k = 0; k < phases; ++k) {
      ScenarioConfig ck = c;
      double phi = 2.0 * std::numbers::pi * k / phases;
      ck.phases.assign(c.periods.size(), phi);
      Scenario sc = build_scenario(ck);
      loops.push_back(solve(sc.system, sc.x0, sc.solver));
    }
    double dev = 0.0;
    for (const auto& ht : loops.front().times()) {
      Vec mean = Vec::Zero(dim);
      for (const auto& arc : loops) mean += sample_at(arc, ht.t, dim);
      mean /= static_cast<double>(phases);
      dev = std::max(dev, (mean - sample_at(avg, ht.t, dim)).norm());
    }
    double ratio = rows.empty() ? std::numeric_limits<double>::quiet_NaN() : dev / rows.back().deviation;
    rows.push_back({eps, dev, ratio});
  }
  return rows;
}

GapCheck verify_gap(const ScenarioConfig& cfg, const GapSearchOptions& opts) {
  // The gap does not depend on delta; build with an admissible one so that an
  // out-of-range delta is reported as a failed check, not a build error.
  ScenarioConfig probe = cfg;
  probe.delta = 0.1;
  probe.controller = ControllerKind::Hybrid;
  probe.out.clear();
  Scenario sc = build_scenario(probe);
  GapCheck out;
  out.report = estimate_synergy_gap(*sc.synergistic, opts);
  out.gap = out.report.gap;
  out.delta = cfg.delta;
  out.pass = cfg.delta > 0.0 && cfg.delta < out.gap;
  return out;
}

}  // namespace hyseek
