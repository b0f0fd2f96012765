#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "hyseek/hybrid/arc.hpp"
#include "hyseek/hybrid/system.hpp"

namespace hyseek {

using Gains = std::vector<int>;

enum class JumpPolicy { UniformRandom, Scripted, Adversarial };

/// Picks the next gain vector from the admissible set given the full state.
using Adversary = std::function<Gains(const Vec& state, const std::vector<Gains>& admissible)>;

/// The direction automaton keeps its state as r gains followed by the dwell
/// timer and the ratio monitor: theta = (g_1..g_r, dwell, ratio).
struct AutomatonConfig {
  int r = 1;
  double t_circ = 2.0;     // ratio monitor ceiling
  double chi1 = 0.5;       // dwell rate bound
  double chi2 = 0.5;       // activation ratio bound
  double dwell_rate = 0.0; // 0 means chi1
  JumpPolicy policy = JumpPolicy::UniformRandom;
  std::vector<Gains> script;
  Adversary adversary;
  bool frozen = false;     // gains never switch: no dwell jumps, no forced jumps

  /// Throws PreconditionViolated.
  void validate() const;
  double rate() const { return dwell_rate > 0.0 ? dwell_rate : chi1; }
  int size() const { return r + 2; }
};

bool has_zero_gain(const Eigen::Ref<const Vec>& theta, int r);

/// Derivative of theta: zero on gains, rate() on the dwell timer, chi2 minus
/// the zero-gain indicator on the ratio monitor, clamped to keep it in [0, T].
void theta_flow(const Eigen::Ref<const Vec>& theta, const AutomatonConfig& cfg, Eigen::Ref<Vec> dtheta);

bool theta_flow_set(const Eigen::Ref<const Vec>& theta, const AutomatonConfig& cfg, double tol);

// The ratio flow saturates at the box edges; a fixed step can overshoot by
// one step, so the integrator clamps it back.
void theta_clamp(Eigen::Ref<Vec> theta, const AutomatonConfig& cfg);
bool theta_dwell_due(const Eigen::Ref<const Vec>& theta, const AutomatonConfig& cfg);
bool theta_forced_due(const Eigen::Ref<const Vec>& theta, const AutomatonConfig& cfg);
inline bool theta_jump_set(const Eigen::Ref<const Vec>& theta, const AutomatonConfig& cfg) {
  return theta_dwell_due(theta, cfg) || theta_forced_due(theta, cfg);
}

/// Gain vectors the next jump may select. Forced exits land in {-1, 1}^r.
/// Zero-gain targets are offered only when the ratio monitor can afford a
/// full dwell period inside the zero-gain set.
std::vector<Gains> admissible_targets(const Eigen::Ref<const Vec>& theta, const AutomatonConfig& cfg,
                                      bool forced);

/// Applies a direction jump in place and returns its reason ("dwell",
/// "forced" or "dwell+forced"). A dwell jump resets the dwell timer; a forced
/// exit alone leaves it. `state` is the full closed-loop state handed to an
/// adversary. Throws PreconditionViolated when no jump is due or nothing is
/// admissible.
std::string theta_jump(Eigen::Ref<Vec> theta, const AutomatonConfig& cfg, RunContext& ctx,
                       const Vec& state);

/// Initial automaton state: all gains +1, dwell 0, ratio at the ceiling.
Vec theta_initial(const AutomatonConfig& cfg);

/// Stand-alone automaton as a hybrid system, logging the "in_Eb" channel.
HybridSystemDef automaton_system(const AutomatonConfig& cfg);

/// Jump records counted as direction jumps: reasons containing "dwell" or "forced".
std::vector<double> direction_jump_times(const HybridArc& arc);

/// N(t1, t2) <= chi1 (t2 - t1) + 1 for every window, checked at jump times.
bool verify_adt(const std::vector<double>& jump_times, double chi1, double tol = 1e-6);
bool verify_adt(const HybridArc& arc, double chi1, double tol = 1e-6);

/// Time spent with a zero gain over every window is at most chi2 (t2 - t1) + T,
/// with the "in_Eb" channel integrated left-constant between samples.
/// Throws MissingChannel.
bool verify_att(const HybridArc& arc, double chi2, double t_circ, double tol = 1e-6);

/// Smallest time between consecutive direction jumps (infinity with < 2 jumps).
double min_jump_gap(const std::vector<double>& jump_times);

/// One gain vector per line, r entries in {-1, 0, 1}. Throws IOError.
std::vector<Gains> load_sequence_file(const std::filesystem::path& path, int r);

}  // namespace hyseek
