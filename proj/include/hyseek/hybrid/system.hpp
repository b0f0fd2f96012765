#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hyseek {

using Vec = Eigen::VectorXd;

/// Point of a hybrid time domain: continuous time t and jump counter j.
struct HybridTime {
  double t = 0.0;
  int j = 0;

  friend std::partial_ordering operator<=>(const HybridTime& a, const HybridTime& b) {
    if (auto c = a.t <=> b.t; c != 0) return c;
    return a.j <=> b.j;
  }
  friend bool operator==(const HybridTime&, const HybridTime&) = default;
};

/// Per-run mutable state handed to jump maps: the randomness stream and a
/// cursor for scripted selections. Each solve() owns exactly one.
struct RunContext {
  std::mt19937_64 rng;
  std::size_t script_cursor = 0;

  explicit RunContext(std::uint64_t seed) : rng(seed) {}
};

/// Result of one application of the jump map. The reason tag ends up in the
/// arc's jump records ("synergy", "dwell", "forced", combinations joined by '+').
struct JumpOutcome {
  Vec state;
  std::string reason;
};

/// Named scalar computed from the state at every recorded sample.
struct Channel {
  std::string name;
  std::function<double(const Vec&)> eval;
};

/// Data (C, F, D, G) of a hybrid system, with single-valued selections for the
/// flow and jump maps. Immutable once built; share freely between runs.
struct HybridSystemDef {
  int dim = 0;
  /// x in C, allowing an outward band of width tol.
  std::function<bool(const Vec& x, double tol)> flow_set;
  std::function<bool(const Vec& x)> jump_set;
  std::function<void(const Vec& x, Vec& dx)> flow_field;
  std::function<JumpOutcome(const Vec& x, RunContext& ctx)> jump_map;
  /// Leaving C without entering D applies the jump map instead of failing.
  bool forced_jump_on_exit = false;
  std::vector<Channel> channels;
};

}  // namespace hyseek
