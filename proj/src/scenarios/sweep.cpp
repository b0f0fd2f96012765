#include "hyseek/scenarios/sweep.hpp"

#include <atomic>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hyseek/errors.hpp"

namespace hyseek {

namespace {

std::vector<std::string> expand_values(const std::string& key, const std::string& text) {
  std::vector<std::string> items;
  boost::algorithm::split(items, text, boost::is_any_of(","));
  std::vector<std::string> out;
  for (auto& item : items) {
    boost::algorithm::trim(item);
    if (item.empty()) continue;
    auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(item);
      continue;
    }
    long lo = 0;
    long hi = 0;
    try {
      lo = std::stol(item.substr(0, dots));
      hi = std::stol(item.substr(dots + 2));
    } catch (const std::logic_error&) {
      throw ConfigInvalid(key + ": bad range '" + item + "'");
    }
    if (hi < lo) throw ConfigInvalid(key + ": empty range '" + item + "'");
    for (long v = lo; v <= hi; ++v) out.push_back(std::to_string(v));
  }
  if (out.empty()) throw ConfigInvalid(key + ": no values");
  return out;
}

}  // namespace

ParameterGrid parse_grid_text(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigInvalid(e.message() + " at line " + std::to_string(e.line()));
  }
  ParameterGrid grid;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      grid.emplace_back(name, expand_values(name, node.data()));
      continue;
    }
    for (const auto& [key, leaf] : node) {
      std::string full = name + "." + key;
      grid.emplace_back(full, expand_values(full, leaf.data()));
    }
  }
  for (const auto& [key, values] : grid) {
    if (key == "scenario") throw ConfigInvalid("a sweep cannot change the scenario");
  }
  if (grid.empty()) throw ConfigInvalid("parameter grid is empty");
  return grid;
}

ParameterGrid load_grid(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IOError("cannot read grid " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_grid_text(ss.str());
}

std::vector<std::vector<std::pair<std::string, std::string>>> expand_grid(const ParameterGrid& grid) {
  std::vector<std::vector<std::pair<std::string, std::string>>> out{{}};
  for (const auto& [key, values] : grid) {
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    for (const auto& prefix : out) {
      for (const auto& v : values) {
        auto row = prefix;
        row.emplace_back(key, v);
        next.push_back(std::move(row));
      }
    }
    out = std::move(next);
  }
  return out;
}

SweepResult sweep(const ScenarioConfig& base, const ParameterGrid& grid, double nu, unsigned threads) {
  auto points = expand_grid(grid);
  // Reject unknown keys and bad values up front, before any run starts.
  for (const auto& [key, values] : grid) {
    for (const auto& v : values) {
      ScenarioConfig probe = base;
      apply_setting(probe, key, v);
    }
  }
  SweepResult result;
  result.rows.resize(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      SweepRow& row = result.rows[i];
      row.index = i;
      row.overrides = points[i];
      try {
        ScenarioConfig cfg = base;
        for (const auto& [key, v] : points[i]) apply_setting(cfg, key, v);
        if (!base.out.empty()) {
          std::ostringstream name;
          name << "run_" << std::setw(4) << std::setfill('0') << i;
          cfg.out = base.out / name.str();
        }
        RunRecord rec = run(cfg);
        row.summary = rec.summary;
        row.ok = true;
        row.success = rec.summary.number("final_dist") <= nu;
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
    }
  };
  unsigned n = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, points.size()));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::size_t wins = 0;
  for (const auto& row : result.rows) {
    if (!row.ok) ++result.failures;
    if (row.success) ++wins;
  }
  result.success_rate = static_cast<double>(wins) / static_cast<double>(result.rows.size());
  return result;
}

}  // namespace hyseek
