#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hyseek/hybrid/arc.hpp"
#include "hyseek/scenarios/scenario.hpp"
#include "hyseek/synergistic/gap.hpp"

namespace hyseek {

/// Ordered key-value summary of one run.
struct Summary {
  std::vector<std::pair<std::string, std::string>> entries;

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, long value);
  const std::string& get(const std::string& key) const;  // throws PreconditionViolated
  double number(const std::string& key) const;
  std::string render() const;  // "key = value" lines
};

struct RunRecord {
  HybridArc arc;
  Summary summary;
  std::uint64_t config_hash = 0;
  std::uint64_t summary_hash = 0;  // over every summary entry except wall time
  double wall_seconds = 0.0;
};

/// Solves the scenario and fills the summary: final and extreme distances,
/// jump counts by reason, V extrema, dwell and activation checks, post-jump and
/// jump-decrease results. Writes arc, jumps and summary files when cfg.out is
/// set. Solver errors propagate.
RunRecord run(const ScenarioConfig& cfg);
RunRecord run(const Scenario& sc);

/// Did the run pass the dwell, activation, post-jump and jump-decrease checks?
bool run_checks_pass(const RunRecord& rec);

struct AverageComparison {
  double eps;
  double deviation;  // sup over t of |mean over phases p_eps(t) - p_avg(t)|
  double ratio;      // deviation / previous deviation (NaN for the first row)
};

/// Closed loop at each eps (gains frozen at +1, no disturbance) against the
/// averaged system from the same start; the closed loop is averaged over
/// `phases` evenly spaced rotor phases first.
std::vector<AverageComparison> compare_average(const ScenarioConfig& cfg, const std::vector<double>& eps_list,
                                               int phases);

struct GapCheck {
  double gap;
  double delta;
  bool pass;  // delta < gap
  GapReport report;
};

/// Gap of the scenario's two-mode family against its configured delta.
GapCheck verify_gap(const ScenarioConfig& cfg, const GapSearchOptions& opts = {});

/// p(t) read off an arc: the last sample at or before t, linearly blended
/// with the next sample when both lie on the same flow interval.
Vec sample_at(const HybridArc& arc, double t, int dim);

}  // namespace hyseek
