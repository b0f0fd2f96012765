#include "hyseek/hybrid/integrator.hpp"

#include "hyseek/errors.hpp"

namespace hyseek {

Rk4Stepper::Rk4Stepper(int dim)
    : k1_(dim), k2_(dim), k3_(dim), k4_(dim), tmp_(dim) {}

void Rk4Stepper::step(const FlowField& field, const Vec& x, double h, Vec& out) {
  if (!(h > 0.0)) throw PreconditionViolated("step size must be positive");
  field(x, k1_);
  if (!k1_.allFinite()) throw NonFiniteState("flow field not finite at step start");
  tmp_.noalias() = x + 0.5 * h * k1_;
  field(tmp_, k2_);
  tmp_.noalias() = x + 0.5 * h * k2_;
  field(tmp_, k3_);
  tmp_.noalias() = x + h * k3_;
  field(tmp_, k4_);
  out.noalias() = x + (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  if (!out.allFinite()) throw NonFiniteState("state not finite after RK4 step");
}

Vec step_flow(const FlowField& field, const Vec& x, double h) {
  Rk4Stepper stepper(static_cast<int>(x.size()));
  Vec out(x.size());
  stepper.step(field, x, h, out);
  return out;
}

}  // namespace hyseek
