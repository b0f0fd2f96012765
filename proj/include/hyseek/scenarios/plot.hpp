#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hyseek/scenarios/runner.hpp"

namespace hyseek {

enum class PlotKind { Trajectory, Potential, Theta, Distance };

std::string to_string(PlotKind k);
PlotKind parse_plot_kind(const std::string& name);  // throws ConfigInvalid

/// Figure layout per scenario: path and gains for the planar and sphere cases,
/// attitude potential and gains for SO(3).
std::vector<PlotKind> default_plots(ScenarioKind kind);

/// Writes one delimited file per requested kind into dir and returns their
/// paths. Every requested channel is checked before anything is written, so a
/// bad request leaves no files behind. Throws IOError.
std::vector<std::filesystem::path> emit_plot_data(const RunRecord& rec, ScenarioKind kind,
                                                  const std::vector<PlotKind>& kinds,
                                                  const std::filesystem::path& dir);

}  // namespace hyseek
