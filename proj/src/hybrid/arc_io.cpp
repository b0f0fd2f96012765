#include "hyseek/hybrid/arc_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hyseek/errors.hpp"

namespace hyseek {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::filesystem::path& file, std::size_t row) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw IOError(file.string() + ":" + std::to_string(row) + ": bad number '" + s + "'");
  }
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IOError("cannot write " + path.string());
  os << std::setprecision(17);
  return os;
}

}  // namespace

std::filesystem::path jumps_path(const std::filesystem::path& arc_path) {
  return std::filesystem::path(arc_path.string() + ".jumps");
}

void write_arc(const HybridArc& arc, const std::filesystem::path& path) {
  const int dim = arc.dim();
  {
    std::ofstream os = open_out(path);
    os << "t,j";
    for (int i = 0; i < dim; ++i) os << ",x" << i;
    for (const auto& name : arc.channel_names()) os << ',' << name;
    os << '\n';
    std::vector<const std::vector<double>*> cols;
    for (const auto& name : arc.channel_names()) cols.push_back(&arc.channel(name));
    for (std::size_t k = 0; k < arc.size(); ++k) {
      os << arc.time(k).t << ',' << arc.time(k).j;
      for (int i = 0; i < dim; ++i) os << ',' << arc.state(k)[i];
      for (const auto* col : cols) os << ',' << (*col)[k];
      os << '\n';
    }
    if (!os) throw IOError("write failed for " + path.string());
  }
  std::ofstream os = open_out(jumps_path(path));
  os << "t,j";
  for (int i = 0; i < dim; ++i) os << ",pre" << i;
  for (int i = 0; i < dim; ++i) os << ",post" << i;
  os << ",reason\n";
  for (const auto& jr : arc.jumps()) {
    os << jr.time.t << ',' << jr.time.j;
    for (int i = 0; i < dim; ++i) os << ',' << jr.pre[i];
    for (int i = 0; i < dim; ++i) os << ',' << jr.post[i];
    os << ',' << jr.reason << '\n';
  }
  if (!os) throw IOError("write failed for " + jumps_path(path).string());
}

HybridArc read_arc(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IOError("cannot read " + path.string());
  std::string line;
  if (!std::getline(is, line)) throw IOError(path.string() + ": empty file");
  auto header = split(line, ',');
  if (header.size() < 2 || header[0] != "t" || header[1] != "j") {
    throw IOError(path.string() + ": header must start with t,j");
  }
  int dim = 0;
  while (2 + dim < static_cast<int>(header.size()) && header[2 + dim] == "x" + std::to_string(dim)) ++dim;
  std::vector<std::string> names(header.begin() + 2 + dim, header.end());
  HybridArc arc(dim, names);

  std::vector<double> values(names.size());
  Vec x(dim);
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (cells.size() != header.size()) {
      throw IOError(path.string() + ":" + std::to_string(row) + ": expected " +
                    std::to_string(header.size()) + " columns");
    }
    HybridTime ht{parse_double(cells[0], path, row),
                  static_cast<int>(parse_double(cells[1], path, row))};
    for (int i = 0; i < dim; ++i) x[i] = parse_double(cells[2 + i], path, row);
    for (std::size_t c = 0; c < names.size(); ++c) values[c] = parse_double(cells[2 + dim + c], path, row);
    arc.push_sample(ht, x, values);
  }

  auto jp = jumps_path(path);
  std::ifstream js(jp);
  if (!js) return arc;
  std::getline(js, line);
  row = 1;
  while (std::getline(js, line)) {
    ++row;
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (static_cast<int>(cells.size()) != 3 + 2 * dim) {
      throw IOError(jp.string() + ":" + std::to_string(row) + ": wrong column count");
    }
    JumpRecord jr;
    jr.time = {parse_double(cells[0], jp, row), static_cast<int>(parse_double(cells[1], jp, row))};
    jr.pre.resize(dim);
    jr.post.resize(dim);
    for (int i = 0; i < dim; ++i) {
      jr.pre[i] = parse_double(cells[2 + i], jp, row);
      jr.post[i] = parse_double(cells[2 + dim + i], jp, row);
    }
    jr.reason = cells.back();
    // Sample indices are recovered from the hybrid times.
    for (std::size_t k = 0; k < arc.size(); ++k) {
      if (arc.time(k) == jr.time) jr.pre_sample = k;
      if (arc.time(k).j == jr.time.j + 1) {
        jr.post_sample = k;
        break;
      }
    }
    arc.jumps().push_back(std::move(jr));
  }
  return arc;
}

}  // namespace hyseek
