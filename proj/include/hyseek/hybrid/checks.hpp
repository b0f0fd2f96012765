#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hyseek/hybrid/arc.hpp"

namespace hyseek {

struct JumpDecreaseViolation {
  std::size_t jump_index;
  double v_pre;
  double v_post;
};

/// Every jump whose reason mentions "synergy" must lower the named channel by
/// at least delta - tol. Requires the arc to carry `v_channel` and "mu".
/// Throws MissingChannel.
std::vector<JumpDecreaseViolation> check_jump_decrease(const HybridArc& arc,
                                                       const std::string& v_channel, double delta,
                                                       double tol = 1e-9);

/// Target set given either as a finite sample cloud or as an analytic distance.
class TargetSet {
 public:
  static TargetSet points(std::vector<Vec> cloud);
  static TargetSet analytic(std::function<double(const Vec&)> distance);

  /// Euclidean distance |x|_A. Throws EmptySet for an empty cloud.
  double distance(const Vec& x) const;

 private:
  std::vector<Vec> cloud_;
  std::function<double(const Vec&)> analytic_;
};

double distance_to_set(const TargetSet& set, const Vec& x);

}  // namespace hyseek
