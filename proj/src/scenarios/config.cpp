#include "hyseek/scenarios/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hyseek/errors.hpp"

namespace hyseek {

using std::numbers::pi;

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Circle: return "circle";
    case ScenarioKind::ObstacleHolonomic: return "obstacle_holonomic";
    case ScenarioKind::Sphere: return "sphere";
    case ScenarioKind::SO3: return "so3";
    case ScenarioKind::ObstacleNonholonomic: return "obstacle_nonholonomic";
    case ScenarioKind::Custom: return "custom";
  }
  return "?";
}

std::string to_string(ControllerKind k) {
  switch (k) {
    case ControllerKind::Hybrid: return "hybrid";
    case ControllerKind::Baseline: return "baseline";
    case ControllerKind::Averaged: return "averaged";
  }
  return "?";
}

std::string to_string(ThetaMode m) {
  switch (m) {
    case ThetaMode::Random: return "random";
    case ThetaMode::Frozen: return "frozen";
    case ThetaMode::Scripted: return "scripted";
  }
  return "?";
}

namespace {

Vec vec_of(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

double to_double(const std::string& key, const std::string& text) {
  std::string t = boost::algorithm::trim_copy(text);
  try {
    std::size_t used = 0;
    double v = std::stod(t, &used);
    if (used == t.size() && std::isfinite(v)) return v;
  } catch (const std::logic_error&) {
  }
  throw ConfigInvalid(key + ": expected a number, got '" + text + "'");
}

long to_long(const std::string& key, const std::string& text) {
  double v = to_double(key, text);
  if (v != std::floor(v)) throw ConfigInvalid(key + ": expected an integer, got '" + text + "'");
  return static_cast<long>(v);
}

std::vector<std::string> list_items(const std::string& text) {
  std::vector<std::string> items;
  boost::algorithm::split(items, text, boost::is_any_of(", "), boost::token_compress_on);
  std::erase_if(items, [](const std::string& s) { return s.empty(); });
  return items;
}

Vec to_vec(const std::string& key, const std::string& text, int expected = -1) {
  auto items = list_items(text);
  if (expected >= 0 && static_cast<int>(items.size()) != expected) {
    throw ConfigInvalid(key + ": expected " + std::to_string(expected) + " components");
  }
  Vec v(static_cast<Eigen::Index>(items.size()));
  for (std::size_t i = 0; i < items.size(); ++i) v[static_cast<Eigen::Index>(i)] = to_double(key, items[i]);
  return v;
}

template <typename Enum>
Enum to_enum(const std::string& key, const std::string& text, std::initializer_list<Enum> options) {
  std::string t = boost::algorithm::trim_copy(text);
  for (Enum e : options)
    if (to_string(e) == t) return e;
  throw ConfigInvalid(key + ": unknown value '" + text + "'");
}

}  // namespace

ScenarioConfig default_config(ScenarioKind kind) {
  ScenarioConfig c;
  c.kind = kind;
  c.gains.gamma = 1.0;
  c.gains.kappa = 4.0;
  c.automaton.t_circ = 2.0;
  c.automaton.chi1 = 0.5;
  c.automaton.chi2 = 0.5;
  c.solver.step = 0.0;
  c.perturbation.a = 0.15;
  c.perturbation.sigma = 0.35;
  switch (kind) {
    case ScenarioKind::Circle:
      c.gains.eps = 1.0 / std::sqrt(4.0 * pi);
      c.delta = 0.25;
      c.periods = {{1, 1}};
      c.target = vec_of({0.0, 1.0});
      c.bad_point = vec_of({0.0, -1.0});
      c.automaton.r = 1;
      c.solver.horizon_t = 60.0;
      break;
    case ScenarioKind::Sphere:
      c.gains.eps = 1.0 / std::sqrt(8.0 * pi);
      c.delta = 0.2;
      c.periods = {{3, 1}, {2, 1}, {1, 1}};
      c.target = vec_of({0.0, 0.0, 1.0});
      c.perp = Vec3::UnitY();
      c.bad_point = vec_of({0.0, 0.0, -1.0});
      c.automaton.r = 3;
      c.solver.horizon_t = 60.0;
      break;
    case ScenarioKind::SO3:
      c.gains.eps = 1.0 / std::sqrt(12.0 * pi);
      c.delta = 0.2;
      c.periods = {{1, 1}, {2, 1}, {3, 1}};
      c.target = vec(Mat3::Identity());
      c.bad_point = vec(Vec3(-1.0, 1.0, -1.0).asDiagonal().toDenseMatrix());
      c.automaton.r = 3;
      c.solver.horizon_t = 70.0;
      // The saddle at the bad point is much steeper here than on the circle or
      // sphere; a 0.15 well does not hold the baseline.
      c.perturbation.a = 0.5;
      break;
    case ScenarioKind::ObstacleHolonomic:
    case ScenarioKind::ObstacleNonholonomic:
      c.gains.gamma = 2.0;
      c.gains.eps = 1.0 / std::sqrt(6.0 * pi);
      c.delta = 0.25;
      c.periods = {{1, 1}};
      c.target = vec_of({0.0, 2.0});
      c.bad_point = kind == ScenarioKind::ObstacleHolonomic ? vec_of({0.0, -2.0}) : vec_of({0.0, -2.0, 1.0, 0.0});
      c.automaton.r = 1;
      c.perturbation.a = 0.0;
      c.solver.horizon_t = 80.0;
      break;
    case ScenarioKind::Custom:
      c.gains.eps = 0.2;
      c.periods = {{1, 1}};
      c.perturbation.a = 0.0;
      break;
  }
  return c;
}

void apply_setting(ScenarioConfig& c, const std::string& key, const std::string& raw) {
  const std::string v = boost::algorithm::trim_copy(raw);
  // Top level.
  if (key == "scenario") {
    if (to_string(c.kind) != v) throw ConfigInvalid("scenario may only be set first");
  } else if (key == "controller") {
    c.controller = to_enum(key, v, {ControllerKind::Hybrid, ControllerKind::Baseline, ControllerKind::Averaged});
  } else if (key == "target") {
    c.target = to_vec(key, v, static_cast<int>(c.target.size()));
  } else if (key == "perp") {
    c.perp = to_vec(key, v, 3);
  } else if (key == "axis_weights") {
    c.axis_weights = to_vec(key, v, 3);
  } else if (key == "obstacle_center") {
    c.obstacle_center = to_vec(key, v, 2);
  } else if (key == "obstacle_radius") {
    c.obstacle_radius = to_double(key, v);
  } else if (key == "margin") {
    c.margin = to_double(key, v);
  } else if (key == "bad_point") {
    c.bad_point = to_vec(key, v, static_cast<int>(c.bad_point.size()));
  } else if (key == "initial") {
    c.initial = to_vec(key, v, static_cast<int>(c.bad_point.size()));
  } else if (key == "initial_mode") {
    c.initial_mode = static_cast<int>(to_long(key, v));
  } else if (key == "phases") {
    Vec ph = to_vec(key, v);
    c.phases.assign(ph.data(), ph.data() + ph.size());
  } else if (key == "out") {
    c.out = v;
  // [solver]
  } else if (key == "solver.step") {
    c.solver.step = to_double(key, v);
  } else if (key == "solver.horizon") {
    c.solver.horizon_t = to_double(key, v);
  } else if (key == "solver.max_jumps") {
    c.solver.max_jumps = static_cast<int>(to_long(key, v));
  } else if (key == "solver.jump_tol") {
    c.solver.jump_tol = to_double(key, v);
  } else if (key == "solver.window_jumps") {
    c.solver.window_jumps = static_cast<int>(to_long(key, v));
  } else if (key == "solver.window_length") {
    c.solver.window_length = to_double(key, v);
  } else if (key == "solver.sample_stride") {
    c.solver.sample_stride = static_cast<int>(to_long(key, v));
  } else if (key == "solver.seed") {
    c.solver.seed = static_cast<std::uint64_t>(to_long(key, v));
  // [gains]
  } else if (key == "gains.gamma") {
    c.gains.gamma = to_double(key, v);
  } else if (key == "gains.kappa") {
    c.gains.kappa = to_double(key, v);
  } else if (key == "gains.eps") {
    c.gains.eps = to_double(key, v);
  } else if (key == "gains.delta") {
    c.delta = to_double(key, v);
  } else if (key == "gains.periods") {
    c.periods.clear();
    try {
      for (const auto& item : list_items(v)) c.periods.push_back(parse_rational(item));
    } catch (const PreconditionViolated& e) {
      throw ConfigInvalid(key + ": " + e.what());
    }
  // [automaton]
  } else if (key == "automaton.mode") {
    c.theta_mode = to_enum(key, v, {ThetaMode::Random, ThetaMode::Frozen, ThetaMode::Scripted});
  } else if (key == "automaton.t_circ") {
    c.automaton.t_circ = to_double(key, v);
  } else if (key == "automaton.chi1") {
    c.automaton.chi1 = to_double(key, v);
  } else if (key == "automaton.chi2") {
    c.automaton.chi2 = to_double(key, v);
  } else if (key == "automaton.dwell_rate") {
    c.automaton.dwell_rate = to_double(key, v);
  } else if (key == "automaton.script") {
    c.script_path = v;
  } else if (key == "automaton.initial_gains") {
    c.initial_gains.clear();
    for (const auto& item : list_items(v)) {
      long g = to_long(key, item);
      if (g < -1 || g > 1) throw ConfigInvalid(key + ": gains must be -1, 0 or 1");
      c.initial_gains.push_back(static_cast<int>(g));
    }
  // [perturbation]
  } else if (key == "perturbation.a") {
    c.perturbation.a = to_double(key, v);
  } else if (key == "perturbation.sigma") {
    c.perturbation.sigma = to_double(key, v);
  } else if (key == "perturbation.center") {
    c.perturbation.center = to_vec(key, v, static_cast<int>(c.bad_point.size()));
  } else {
    throw ConfigInvalid("unknown key '" + key + "'");
  }
}

ScenarioConfig parse_config_text(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigInvalid(e.message() + " at line " + std::to_string(e.line()));
  }
  std::vector<std::pair<std::string, std::string>> flat;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      flat.emplace_back(name, node.data());
      continue;
    }
    if (name != "solver" && name != "gains" && name != "automaton" && name != "perturbation") {
      throw ConfigInvalid("unknown section [" + name + "]");
    }
    for (const auto& [key, leaf] : node) flat.emplace_back(name + "." + key, leaf.data());
  }
  auto it = std::find_if(flat.begin(), flat.end(), [](const auto& kv) { return kv.first == "scenario"; });
  if (it == flat.end()) throw ConfigInvalid("missing key 'scenario'");
  ScenarioKind kind = to_enum("scenario", it->second,
                              {ScenarioKind::Circle, ScenarioKind::ObstacleHolonomic, ScenarioKind::Sphere,
                               ScenarioKind::SO3, ScenarioKind::ObstacleNonholonomic, ScenarioKind::Custom});
  if (kind == ScenarioKind::Custom) throw ConfigInvalid("custom scenarios are assembled in code, not from files");
  ScenarioConfig cfg = default_config(kind);
  for (const auto& [key, value] : flat) apply_setting(cfg, key, value);
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IOError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  ScenarioConfig cfg = parse_config_text(ss.str());
  // Relative script paths resolve against the config's directory.
  if (!cfg.script_path.empty() && cfg.script_path.is_relative()) {
    cfg.script_path = path.parent_path() / cfg.script_path;
  }
  return cfg;
}

std::string render_config(const ScenarioConfig& c) {
  std::ostringstream os;
  os << std::setprecision(17);
  auto list = [&](const Vec& v) {
    std::ostringstream is;
    is << std::setprecision(17);
    for (Eigen::Index i = 0; i < v.size(); ++i) is << (i ? ", " : "") << v[i];
    return is.str();
  };
  os << "scenario = " << to_string(c.kind) << '\n'
     << "controller = " << to_string(c.controller) << '\n'
     << "target = " << list(c.target) << '\n'
     << "perp = " << list(c.perp) << '\n'
     << "axis_weights = " << list(c.axis_weights) << '\n'
     << "obstacle_center = " << list(c.obstacle_center) << '\n'
     << "obstacle_radius = " << c.obstacle_radius << '\n'
     << "margin = " << c.margin << '\n'
     << "bad_point = " << list(c.bad_point) << '\n'
     << "initial = " << list(c.initial) << '\n'
     << "initial_mode = " << c.initial_mode << '\n'
     << "phases = " << list(Eigen::Map<const Vec>(c.phases.data(), static_cast<Eigen::Index>(c.phases.size())))
     << '\n';
  os << "\n[solver]\n"
     << "step = " << effective_step(c) << '\n'
     << "horizon = " << c.solver.horizon_t << '\n'
     << "max_jumps = " << c.solver.max_jumps << '\n'
     << "jump_tol = " << c.solver.jump_tol << '\n'
     << "window_jumps = " << c.solver.window_jumps << '\n'
     << "window_length = " << c.solver.window_length << '\n'
     << "sample_stride = " << c.solver.sample_stride << '\n'
     << "seed = " << c.solver.seed << '\n';
  os << "\n[gains]\n"
     << "gamma = " << c.gains.gamma << '\n'
     << "kappa = " << c.gains.kappa << '\n'
     << "eps = " << c.gains.eps << '\n'
     << "delta = " << c.delta << '\n'
     << "periods = ";
  for (std::size_t i = 0; i < c.periods.size(); ++i) {
    os << (i ? ", " : "") << c.periods[i].num << '/' << c.periods[i].den;
  }
  os << "\n\n[automaton]\n"
     << "mode = " << to_string(c.theta_mode) << '\n'
     << "t_circ = " << c.automaton.t_circ << '\n'
     << "chi1 = " << c.automaton.chi1 << '\n'
     << "chi2 = " << c.automaton.chi2 << '\n'
     << "dwell_rate = " << c.automaton.dwell_rate << '\n'
     << "script = " << c.script_path.string() << '\n'
     << "initial_gains = ";
  for (std::size_t i = 0; i < c.initial_gains.size(); ++i) os << (i ? ", " : "") << c.initial_gains[i];
  os << "\n\n[perturbation]\n"
     << "a = " << c.perturbation.a << '\n'
     << "sigma = " << c.perturbation.sigma << '\n'
     << "center = " << list(c.perturbation.center) << '\n';
  return os.str();
}

double effective_step(const ScenarioConfig& c) {
  if (c.solver.step > 0.0) return c.solver.step;
  double t_min = c.periods.empty() ? 1.0 : c.periods.front().value();
  for (const auto& p : c.periods) t_min = std::min(t_min, p.value());
  return c.gains.eps * c.gains.eps * t_min / 40.0;
}

}  // namespace hyseek
