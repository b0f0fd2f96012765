#pragma once

#include <filesystem>

#include "hyseek/hybrid/arc.hpp"

namespace hyseek {

/// Writes `path` (header `t,j,x0..,<channels>`, one row per sample) and the
/// sibling `path.jumps` (header `t,j,pre0..,post0..,reason`). Throws IOError.
void write_arc(const HybridArc& arc, const std::filesystem::path& path);

/// Reads back what write_arc produced. The jumps file is optional; without it
/// the arc carries no jump records. Throws IOError on malformed input.
HybridArc read_arc(const std::filesystem::path& path);

std::filesystem::path jumps_path(const std::filesystem::path& arc_path);

}  // namespace hyseek
