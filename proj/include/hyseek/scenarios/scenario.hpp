#pragma once

#include <memory>

#include "hyseek/hybrid/solver.hpp"
#include "hyseek/scenarios/config.hpp"

namespace hyseek {

/// Offsets of the composite state (p, q, theta, eta).
struct StateLayout {
  int p_dim = 0;    // manifold point, ambient coordinates
  int fam_dim = 0;  // leading part of p the potentials read
  int q = 0;        // logic mode
  int theta = 0;    // r gains, dwell timer, ratio monitor
  int r = 0;
  int eta = 0;      // two entries per rotor
  int n_osc = 0;
  int dim = 0;
};

struct ScenarioModel;

/// Assembled closed loop plus what analysis needs to read its arcs.
struct Scenario {
  ScenarioConfig cfg;
  StateLayout layout;
  FamilyPtr family;       // potentials driving the inputs
  FamilyPtr synergistic;  // the two-mode family of the scenario
  HybridSystemDef system;
  Vec x0;
  SolverConfig solver;
  std::shared_ptr<const ScenarioModel> model;

  /// Natural coordinates of the manifold point (positions for obstacle scenarios).
  Vec position(const Vec& x) const;
  double target_distance(const Vec& x) const;
  double bad_distance(const Vec& x) const;
  int mode(const Vec& x) const;
  double potential(const Vec& x) const;
};

/// Throws ConfigInvalid for inconsistent or out-of-range settings.
Scenario build_scenario(const ScenarioConfig& cfg);

}  // namespace hyseek
