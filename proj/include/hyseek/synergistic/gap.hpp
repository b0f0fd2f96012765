#pragma once

#include <vector>

#include "hyseek/synergistic/family.hpp"

namespace hyseek {

struct CriticalPoint {
  int mode;
  Vec p;
  double value;        // V_q(p)
  double margin;       // V_q(p) - min over modes at p
  double grad_norm;    // tangent gradient norm after refinement
};

struct GapReport {
  double gap = 0.0;  // min margin over critical points other than the target
  std::vector<CriticalPoint> points;  // target excluded
  int seeds = 0;
};

struct GapSearchOptions {
  int grid_points = 100000;   // approximate size of the seeding grid
  double converge = 1e-8;     // tangent gradient norm accepted as critical
  double max_step = 0.2;      // chart step cap per Newton iteration
  int max_iterations = 60;
  double dedupe_radius = 1e-3;
};

/// Seeds a chart grid of the manifold, keeps grid-local minima of the tangent
/// gradient norm of each mode and refines them by Newton iterations in a
/// local chart, so minima, saddles and maxima are all found.
/// Throws NoCriticalPointsFound if nothing besides the target converges.
GapReport estimate_synergy_gap(const PotentialFamily& fam, const GapSearchOptions& opts = {});

/// Newton refinement of one seed on mode q. Returns false if it did not converge.
bool refine_critical_point(const PotentialFamily& fam, int q, Vec& p, const GapSearchOptions& opts);

}  // namespace hyseek
