#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hyseek/controller.hpp"
#include "hyseek/hybrid/solver.hpp"
#include "hyseek/synergistic/family.hpp"
#include "hyseek/uncertainty.hpp"

namespace hyseek {

enum class ScenarioKind { Circle, ObstacleHolonomic, Sphere, SO3, ObstacleNonholonomic, Custom };
enum class ControllerKind { Hybrid, Baseline, Averaged };
enum class ThetaMode { Random, Frozen, Scripted };

std::string to_string(ScenarioKind k);
std::string to_string(ControllerKind k);
std::string to_string(ThetaMode m);

/// Plant supplied in code for scenario = custom: a family on an embedded
/// manifold and one control field per gain.
struct CustomPlant {
  FamilyPtr family;
  std::function<std::vector<Vec>(const Vec& p)> fields;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::Circle;
  ControllerKind controller = ControllerKind::Hybrid;

  ESGains gains;
  double delta = 0.25;
  std::vector<Rational> periods;

  Vec target;                  // circle/sphere point, obstacle target position
  Vec3 perp = Vec3::UnitY();   // sphere warping axis
  Vec3 axis_weights = Vec3(11, 12, 13);
  Vec2 obstacle_center = Vec2::Zero();
  double obstacle_radius = 1.0;
  double margin = 1.05;        // d* = margin * obstacle_radius

  Vec bad_point;               // the trap; natural coordinates
  Vec initial;                 // natural coordinates; empty starts at bad_point
  int initial_mode = 1;
  std::vector<double> phases;  // initial rotor angles; empty draws them from the seed

  ThetaMode theta_mode = ThetaMode::Random;
  AutomatonConfig automaton;
  Gains initial_gains;         // empty means all +1
  std::filesystem::path script_path;

  Perturbation perturbation;   // center in natural coordinates; empty means bad_point

  SolverConfig solver;         // step <= 0 picks eps^2 T_min / 40
  std::filesystem::path out;

  std::shared_ptr<CustomPlant> custom;
};

/// Parameter set of each scenario.
ScenarioConfig default_config(ScenarioKind kind);

/// Applies one "section.key = value" setting (top-level keys have no section).
/// Throws ConfigInvalid on unknown keys and malformed values.
void apply_setting(ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// INI-style file: top-level keys plus [solver], [gains], [automaton],
/// [perturbation] sections. The scenario key picks the defaults the other
/// keys override. Throws ConfigInvalid or IOError.
ScenarioConfig load_config(const std::filesystem::path& path);
ScenarioConfig parse_config_text(const std::string& text);

/// Canonical flat key-value rendering; equal configs render equally.
std::string render_config(const ScenarioConfig& cfg);

/// Resolved integration step (explicit or eps^2 T_min / 40).
double effective_step(const ScenarioConfig& cfg);

}  // namespace hyseek
