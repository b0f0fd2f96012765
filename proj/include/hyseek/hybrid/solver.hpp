#pragma once

#include <cstdint>
#include <functional>

#include "hyseek/hybrid/arc.hpp"
#include "hyseek/hybrid/system.hpp"

namespace hyseek {

struct SolverConfig {
  double step = 1e-3;        // flow integration step h
  double horizon_t = 10.0;   // max continuous time; 0 gives a single-sample arc
  int max_jumps = 100000;    // J_max, ends the run normally
  double jump_tol = 1e-9;    // bisection width (time) and flow-set band
  int window_jumps = 1000;   // at most this many jumps ...
  double window_length = 1e-3;  // ... in any window of this length
  int sample_stride = 1;     // record every n-th flow step (jumps always recorded)
  std::function<void(Vec&)> renormalize;  // projection applied after each step and jump
  std::uint64_t seed = 0;

  /// Throws PreconditionViolated on step <= 0, horizon < 0, jump_tol <= 0.
  void validate() const;
};

/// Integrates sys from x0. Flows by RK4 until the jump set is entered, locates
/// the crossing by bisection to within jump_tol, then applies the jump map.
/// Jumps take priority on C and D overlaps.
///
/// Throws ZenoGuardTripped, DeadlockState, NonFiniteState.
HybridArc solve(const HybridSystemDef& sys, const Vec& x0, const SolverConfig& cfg);

}  // namespace hyseek
