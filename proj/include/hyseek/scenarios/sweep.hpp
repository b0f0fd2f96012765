#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hyseek/scenarios/runner.hpp"

namespace hyseek {

/// Cartesian grid over config keys. Values are comma lists or integer ranges "a..b".
using ParameterGrid = std::vector<std::pair<std::string, std::vector<std::string>>>;

/// Same INI layout as the config file, one list per key. Throws ConfigInvalid or IOError.
ParameterGrid load_grid(const std::filesystem::path& path);
ParameterGrid parse_grid_text(const std::string& text);

/// Every combination in key order, the last key varying fastest.
std::vector<std::vector<std::pair<std::string, std::string>>> expand_grid(const ParameterGrid& grid);

struct SweepRow {
  std::size_t index = 0;
  std::vector<std::pair<std::string, std::string>> overrides;
  bool ok = false;
  std::string error;
  Summary summary;
  bool success = false;  // ok and final distance <= nu
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double success_rate = 0.0;
  std::size_t failures = 0;
};

/// Runs every grid point of `base` concurrently on `threads` workers (0 picks
/// the hardware count). A failing run is reported in its row; the others are
/// kept. When base.out is set each run writes into out/run_NNNN.
SweepResult sweep(const ScenarioConfig& base, const ParameterGrid& grid, double nu = 0.15,
                  unsigned threads = 0);

}  // namespace hyseek
