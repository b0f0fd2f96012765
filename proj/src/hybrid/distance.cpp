#include <limits>

#include "hyseek/errors.hpp"
#include "hyseek/hybrid/checks.hpp"

namespace hyseek {

TargetSet TargetSet::points(std::vector<Vec> cloud) {
  TargetSet s;
  s.cloud_ = std::move(cloud);
  return s;
}

TargetSet TargetSet::analytic(std::function<double(const Vec&)> distance) {
  TargetSet s;
  s.analytic_ = std::move(distance);
  return s;
}

double TargetSet::distance(const Vec& x) const {
  if (analytic_) return analytic_(x);
  if (cloud_.empty()) throw EmptySet("target point cloud has no points");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : cloud_) {
    if (p.size() != x.size()) throw PreconditionViolated("target point dimension mismatch");
    best = std::min(best, (p - x).norm());
  }
  return best;
}

double distance_to_set(const TargetSet& set, const Vec& x) { return set.distance(x); }

}  // namespace hyseek
