#include "hyseek/scenarios/plot.hpp"

#include <fstream>
#include <functional>
#include <iomanip>

#include "hyseek/errors.hpp"
#include "hyseek/geometry.hpp"

namespace hyseek {

std::string to_string(PlotKind k) {
  switch (k) {
    case PlotKind::Trajectory: return "trajectory";
    case PlotKind::Potential: return "potential";
    case PlotKind::Theta: return "theta";
    case PlotKind::Distance: return "distance";
  }
  return "?";
}

PlotKind parse_plot_kind(const std::string& name) {
  for (PlotKind k : {PlotKind::Trajectory, PlotKind::Potential, PlotKind::Theta, PlotKind::Distance})
    if (to_string(k) == name) return k;
  throw ConfigInvalid("unknown plot kind '" + name + "'");
}

std::vector<PlotKind> default_plots(ScenarioKind kind) {
  if (kind == ScenarioKind::SO3) return {PlotKind::Potential, PlotKind::Theta};
  return {PlotKind::Trajectory, PlotKind::Theta};
}

namespace {

struct Column {
  std::string name;
  std::function<double(std::size_t)> at;
};

std::vector<Column> columns_for(const HybridArc& arc, ScenarioKind kind, PlotKind plot) {
  std::vector<Column> cols;
  auto channel = [&](const std::string& name) {
    const auto* values = &arc.channel(name);  // throws MissingChannel before any write
    cols.push_back({name, [values](std::size_t k) { return (*values)[k]; }});
  };
  switch (plot) {
    case PlotKind::Trajectory:
      if (kind == ScenarioKind::ObstacleHolonomic || kind == ScenarioKind::ObstacleNonholonomic) {
        channel("z1");
        channel("z2");
      } else if (kind == ScenarioKind::SO3) {
        // Row-major entries of R.
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            int idx = 3 * j + i;
            cols.push_back({"r" + std::to_string(i + 1) + std::to_string(j + 1),
                            [&arc, idx](std::size_t k) { return arc.state(k)[idx]; }});
          }
      } else {
        int dim = kind == ScenarioKind::Sphere ? 3 : 2;
        for (int i = 0; i < dim; ++i) {
          cols.push_back({"p" + std::to_string(i + 1), [&arc, i](std::size_t k) { return arc.state(k)[i]; }});
        }
      }
      break;
    case PlotKind::Potential:
      channel("V");
      channel("mu");
      channel("W");
      break;
    case PlotKind::Theta: {
      bool any = false;
      for (const auto& name : arc.channel_names()) {
        if (name.rfind("theta_", 0) == 0) {
          channel(name);
          any = true;
        }
      }
      if (!any) channel("theta_1");
      break;
    }
    case PlotKind::Distance:
      channel("dist_A");
      break;
  }
  return cols;
}

}  // namespace

std::vector<std::filesystem::path> emit_plot_data(const RunRecord& rec, ScenarioKind kind,
                                                  const std::vector<PlotKind>& kinds,
                                                  const std::filesystem::path& dir) {
  if (kinds.empty()) throw IOError("no plot kinds requested");
  const HybridArc& arc = rec.arc;
  std::vector<std::vector<Column>> tables;
  try {
    for (PlotKind k : kinds) tables.push_back(columns_for(arc, kind, k));
  } catch (const MissingChannel& e) {
    throw IOError(std::string("plot request needs a channel the run lacks: ") + e.what());
  }

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IOError("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  try {
    for (std::size_t n = 0; n < kinds.size(); ++n) {
      auto path = dir / (to_string(kinds[n]) + ".csv");
      std::ofstream os(path);
      if (!os) throw IOError("cannot write " + path.string());
      written.push_back(path);
      os << std::setprecision(12) << "t,j";
      for (const auto& c : tables[n]) os << ',' << c.name;
      os << '\n';
      for (std::size_t k = 0; k < arc.size(); ++k) {
        os << arc.time(k).t << ',' << arc.time(k).j;
        for (const auto& c : tables[n]) os << ',' << c.at(k);
        os << '\n';
      }
      if (!os) throw IOError("write failed for " + path.string());
    }
  } catch (...) {
    for (const auto& p : written) std::filesystem::remove(p, ec);
    throw;
  }
  return written;
}

}  // namespace hyseek
