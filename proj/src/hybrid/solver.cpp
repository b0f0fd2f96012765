#include "hyseek/hybrid/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "hyseek/errors.hpp"
#include "hyseek/hybrid/integrator.hpp"

namespace hyseek {

void SolverConfig::validate() const {
  if (!(step > 0.0)) throw PreconditionViolated("solver step must be > 0");
  if (!(horizon_t >= 0.0)) throw PreconditionViolated("solver horizon must be >= 0");
  if (!(jump_tol > 0.0)) throw PreconditionViolated("jump_tol must be > 0");
  if (sample_stride < 1) throw PreconditionViolated("sample_stride must be >= 1");
  if (window_jumps < 1 || !(window_length > 0.0)) {
    throw PreconditionViolated("Zeno window must be positive");
  }
}

namespace {

class Recorder {
 public:
  Recorder(const HybridSystemDef& sys, HybridArc& arc)
      : sys_(sys), arc_(arc), values_(sys.channels.size()) {}

  std::size_t record(HybridTime time, const Vec& x) {
    for (std::size_t c = 0; c < sys_.channels.size(); ++c) values_[c] = sys_.channels[c].eval(x);
    arc_.push_sample(time, x, values_);
    return arc_.size() - 1;
  }

 private:
  const HybridSystemDef& sys_;
  HybridArc& arc_;
  std::vector<double> values_;
};

std::vector<std::string> channel_names(const HybridSystemDef& sys) {
  std::vector<std::string> names;
  names.reserve(sys.channels.size());
  for (const auto& c : sys.channels) names.push_back(c.name);
  return names;
}

std::string describe(const Vec& x) {
  std::ostringstream os;
  os << '(';
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

}  // namespace

HybridArc solve(const HybridSystemDef& sys, const Vec& x0, const SolverConfig& cfg) {
  cfg.validate();
  if (x0.size() != sys.dim) throw PreconditionViolated("initial state has wrong dimension");
  if (!x0.allFinite()) throw NonFiniteState("initial state " + describe(x0));

  HybridArc arc(sys.dim, channel_names(sys));
  Recorder recorder(sys, arc);
  RunContext ctx(cfg.seed);
  Rk4Stepper stepper(sys.dim);

  Vec x = x0;
  if (cfg.renormalize) cfg.renormalize(x);
  if (!sys.flow_set(x, cfg.jump_tol) && !sys.jump_set(x) && !sys.forced_jump_on_exit) {
    throw DeadlockState("initial state in neither C nor D: " + describe(x));
  }

  HybridTime now{0.0, 0};
  std::size_t last_index = recorder.record(now, x);
  std::deque<double> recent_jumps;
  long step_count = 0;
  Vec trial(sys.dim);

  auto do_jump = [&](const std::string& forced_reason) {
    JumpOutcome out = sys.jump_map(x, ctx);
    if (out.state.size() != sys.dim) throw PreconditionViolated("jump map changed dimension");
    if (cfg.renormalize) cfg.renormalize(out.state);
    if (!out.state.allFinite()) throw NonFiniteState("jump image " + describe(out.state));

    JumpRecord jr;
    jr.time = now;
    jr.pre = x;
    jr.post = out.state;
    jr.reason = forced_reason.empty() ? out.reason : forced_reason;
    jr.pre_sample = last_index;
    if (!sys.flow_set(out.state, cfg.jump_tol) || sys.jump_set(out.state)) ++arc.post_jump_violations;

    x = std::move(out.state);
    now.j += 1;
    jr.post_sample = recorder.record(now, x);
    last_index = jr.post_sample;
    arc.jumps().push_back(std::move(jr));

    recent_jumps.push_back(now.t);
    while (!recent_jumps.empty() && recent_jumps.front() < now.t - cfg.window_length) {
      recent_jumps.pop_front();
    }
    if (static_cast<int>(recent_jumps.size()) > cfg.window_jumps) {
      std::ostringstream os;
      os << recent_jumps.size() << " jumps within " << cfg.window_length << " s at t = " << now.t;
      throw ZenoGuardTripped(os.str());
    }
  };

  while (true) {
    if (sys.jump_set(x)) {
      if (now.j >= cfg.max_jumps) {
        arc.termination = Termination::MaxJumps;
        break;
      }
      do_jump({});
      continue;
    }
    if (now.t >= cfg.horizon_t) break;

    double h = std::min(cfg.step, cfg.horizon_t - now.t);
    bool final_step = h < cfg.step || now.t + h >= cfg.horizon_t;
    stepper.step(sys.flow_field, x, h, trial);

    if (sys.jump_set(trial)) {
      // The crossing lies in (lo, hi]; shrink to jump_tol and stop at hi.
      double lo = 0.0;
      double hi = h;
      Vec probe(sys.dim);
      while (hi - lo > cfg.jump_tol) {
        double mid = 0.5 * (lo + hi);
        stepper.step(sys.flow_field, x, mid, probe);
        if (sys.jump_set(probe)) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      if (hi < h) stepper.step(sys.flow_field, x, hi, trial);
      h = hi;
      final_step = now.t + h >= cfg.horizon_t;
    }
    if (cfg.renormalize) cfg.renormalize(trial);

    bool in_jump = sys.jump_set(trial);
    if (!in_jump && !sys.flow_set(trial, cfg.jump_tol)) {
      if (!sys.forced_jump_on_exit) {
        std::ostringstream os;
        os << "left the flow set at t = " << now.t + h << ", state " << describe(trial);
        throw DeadlockState(os.str());
      }
      now.t += h;
      x.swap(trial);
      last_index = recorder.record(now, x);
      if (now.j >= cfg.max_jumps) {
        arc.termination = Termination::MaxJumps;
        break;
      }
      do_jump("forced_exit");
      continue;
    }

    now.t += h;
    if (final_step) now.t = std::max(now.t, std::min(cfg.horizon_t, now.t));
    x.swap(trial);
    ++step_count;
    if (in_jump || final_step || step_count % cfg.sample_stride == 0) {
      last_index = recorder.record(now, x);
    }
    if (final_step && !in_jump) break;
  }
  if (arc.time(arc.size() - 1) != now) recorder.record(now, x);
  return arc;
}

}  // namespace hyseek
