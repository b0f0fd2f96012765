#pragma once

#include <functional>

#include "hyseek/hybrid/system.hpp"

namespace hyseek {

using FlowField = std::function<void(const Vec& x, Vec& dx)>;

/// Classical fixed-step RK4 with preallocated stage buffers.
class Rk4Stepper {
 public:
  explicit Rk4Stepper(int dim);

  /// out = x advanced by h along field. out may not alias x.
  /// Throws NonFiniteState if any stage or the result is not finite.
  void step(const FlowField& field, const Vec& x, double h, Vec& out);

 private:
  Vec k1_, k2_, k3_, k4_, tmp_;
};

/// One explicit RK4 step. Requires h > 0.
Vec step_flow(const FlowField& field, const Vec& x, double h);

}  // namespace hyseek
