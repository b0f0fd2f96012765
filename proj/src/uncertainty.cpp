#include "hyseek/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "hyseek/errors.hpp"

namespace hyseek {

namespace {

constexpr double kDwellSlack = 1e-6;

Gains gains_of(const Eigen::Ref<const Vec>& theta, int r) {
  Gains g(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) g[i] = static_cast<int>(std::lround(theta[i]));
  return g;
}

bool has_zero(const Gains& g) { return std::find(g.begin(), g.end(), 0) != g.end(); }

std::vector<Gains> alphabet(int r) {
  std::vector<Gains> out{Gains{}};
  for (int i = 0; i < r; ++i) {
    std::vector<Gains> next;
    for (const auto& prefix : out) {
      for (int v : {1, 0, -1}) {
        Gains g = prefix;
        g.push_back(v);
        next.push_back(std::move(g));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::string show(const Gains& g) {
  std::string s;
  for (int v : g) s += (s.empty() ? "" : " ") + std::to_string(v);
  return s;
}

}  // namespace

void AutomatonConfig::validate() const {
  if (r < 1) throw PreconditionViolated("automaton needs r >= 1");
  if (!(t_circ > 0.0)) throw PreconditionViolated("ratio ceiling must be > 0");
  if (!(chi1 > 0.0)) throw PreconditionViolated("chi1 must be > 0");
  if (!(chi2 > 0.0 && chi2 < 1.0)) throw PreconditionViolated("chi2 must lie in (0, 1)");
  if (dwell_rate < 0.0 || dwell_rate > chi1) throw PreconditionViolated("dwell rate must lie in (0, chi1]");
  if (policy == JumpPolicy::Scripted && script.empty()) throw PreconditionViolated("scripted policy without a script");
  if (policy == JumpPolicy::Adversarial && !adversary) throw PreconditionViolated("adversarial policy without a callback");
  for (const auto& g : script) {
    if (static_cast<int>(g.size()) != r) throw PreconditionViolated("script entry has wrong length");
    for (int v : g)
      if (v < -1 || v > 1) throw PreconditionViolated("script entry outside {-1, 0, 1}");
  }
}

bool has_zero_gain(const Eigen::Ref<const Vec>& theta, int r) {
  for (int i = 0; i < r; ++i)
    if (std::lround(theta[i]) == 0) return true;
  return false;
}

void theta_flow(const Eigen::Ref<const Vec>& theta, const AutomatonConfig& cfg, Eigen::Ref<Vec> dtheta) {
  const int r = cfg.r;
  dtheta.head(r).setZero();
  dtheta[r] = cfg.frozen ? 0.0 : cfg.rate();
  double ratio = theta[r + 1];
  double rate = cfg.chi2 - (has_zero_gain(theta, r) ? 1.0 : 0.0);
  if ((ratio >= cfg.t_circ && rate > 0.0) || (ratio <= 0.0 && rate < 0.0)) rate = 0.0;
  dtheta[r + 1] = rate;
}

bool theta_flow_set(const Eigen::Ref<const Vec>& theta, const AutomatonConfig& cfg, double tol) {
  const int r = cfg.r;
  double dwell = theta[r];
  double ratio = theta[r + 1];
  return dwell >= -tol && dwell <= 1.0 + tol && ratio >= -tol && ratio <= cfg.t_circ + tol;
}

void theta_clamp(Eigen::Ref<Vec> theta, const AutomatonConfig& cfg) {
  double& ratio = theta[cfg.r + 1];
  // Only the saturating edge; the lower edge is a jump trigger when a gain is zero.
  if (ratio > cfg.t_circ) ratio = cfg.t_circ;
  if (ratio < 0.0 && !has_zero_gain(theta, cfg.r)) ratio = 0.0;
}

bool theta_dwell_due(const Eigen::Ref<const Vec>& theta, const AutomatonConfig& cfg) {
  return !cfg.frozen && theta[cfg.r] >= 1.0;
}

bool theta_forced_due(const Eigen::Ref<const Vec>& theta, const AutomatonConfig& cfg) {
  return !cfg.frozen && theta[cfg.r + 1] <= 0.0 && has_zero_gain(theta, cfg.r);
}

std::vector<Gains> admissible_targets(const Eigen::Ref<const Vec>& theta, const AutomatonConfig& cfg,
                                      bool forced) {
  const Gains current = gains_of(theta, cfg.r);
  const double ratio = theta[cfg.r + 1];
  const bool afford_zero = ratio - (1.0 - cfg.chi2) / cfg.rate() >= -1e-9;
  std::vector<Gains> out;
  for (auto& g : alphabet(cfg.r)) {
    if (g == current) continue;
    if (has_zero(g) && (forced || !afford_zero)) continue;
    out.push_back(std::move(g));
  }
  return out;
}

std::string theta_jump(Eigen::Ref<Vec> theta, const AutomatonConfig& cfg, RunContext& ctx,
                       const Vec& state) {
  const int r = cfg.r;
  const bool dwell = !cfg.frozen && theta[r] >= 1.0 - kDwellSlack;
  const bool forced = theta_forced_due(theta, cfg);
  if (!dwell && !forced) throw PreconditionViolated("direction jump requested outside the jump set");

  std::vector<Gains> options = admissible_targets(theta, cfg, forced);
  if (options.empty()) throw PreconditionViolated("no admissible gain vector");

  Gains next;
  switch (cfg.policy) {
    case JumpPolicy::UniformRandom: {
      std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
      next = options[pick(ctx.rng)];
      break;
    }
    case JumpPolicy::Scripted: {
      for (std::size_t tries = 0; tries < cfg.script.size(); ++tries) {
        const Gains& cand = cfg.script[ctx.script_cursor % cfg.script.size()];
        ++ctx.script_cursor;
        if (std::find(options.begin(), options.end(), cand) != options.end()) {
          next = cand;
          break;
        }
      }
      if (next.empty()) throw PreconditionViolated("no admissible entry left in the gain script");
      break;
    }
    case JumpPolicy::Adversarial: {
      next = cfg.adversary(state, options);
      if (std::find(options.begin(), options.end(), next) == options.end()) {
        throw PreconditionViolated("adversary chose inadmissible gains (" + show(next) + ")");
      }
      break;
    }
  }
  for (int i = 0; i < r; ++i) theta[i] = next[i];
  if (dwell) theta[r] = 0.0;
  if (dwell && forced) return "dwell+forced";
  return dwell ? "dwell" : "forced";
}

Vec theta_initial(const AutomatonConfig& cfg) {
  Vec th = Vec::Ones(cfg.size());
  th[cfg.r] = 0.0;
  th[cfg.r + 1] = cfg.t_circ;
  return th;
}

HybridSystemDef automaton_system(const AutomatonConfig& cfg) {
  cfg.validate();
  HybridSystemDef sys;
  sys.dim = cfg.size();
  sys.flow_set = [cfg](const Vec& x, double tol) { return theta_flow_set(x, cfg, tol); };
  sys.jump_set = [cfg](const Vec& x) { return theta_jump_set(x, cfg); };
  sys.flow_field = [cfg](const Vec& x, Vec& dx) { theta_flow(x, cfg, dx); };
  sys.jump_map = [cfg](const Vec& x, RunContext& ctx) {
    JumpOutcome out{x, {}};
    out.reason = theta_jump(out.state, cfg, ctx, x);
    return out;
  };
  const int r = cfg.r;
  sys.channels.push_back({"in_Eb", [r](const Vec& x) { return has_zero_gain(x, r) ? 1.0 : 0.0; }});
  return sys;
}

std::vector<double> direction_jump_times(const HybridArc& arc) {
  std::vector<double> out;
  for (const auto& jr : arc.jumps()) {
    if (jr.reason.find("dwell") != std::string::npos || jr.reason.find("forced") != std::string::npos) {
      out.push_back(jr.time.t);
    }
  }
  return out;
}

bool verify_adt(const std::vector<double>& jump_times, double chi1, double tol) {
  // (k - i + 1) <= chi1 (t_k - t_i) + 1  <=>  h(k) <= h(i) with h(k) = k - chi1 t_k.
  double min_h = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < jump_times.size(); ++k) {
    double h = static_cast<double>(k) - chi1 * jump_times[k];
    min_h = std::min(min_h, h);
    if (h - min_h > tol) return false;
  }
  return true;
}

bool verify_adt(const HybridArc& arc, double chi1, double tol) {
  return verify_adt(direction_jump_times(arc), chi1, tol);
}

bool verify_att(const HybridArc& arc, double chi2, double t_circ, double tol) {
  const auto& ind = arc.channel("in_Eb");
  // g(k) = occupancy up to sample k - chi2 t_k; need g(b) - g(a) <= T for a <= b.
  double occ = 0.0;
  double min_g = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < arc.size(); ++k) {
    if (k > 0) occ += ind[k - 1] * (arc.time(k).t - arc.time(k - 1).t);
    double g = occ - chi2 * arc.time(k).t;
    min_g = std::min(min_g, g);
    if (g - min_g > t_circ + tol) return false;
  }
  return true;
}

double min_jump_gap(const std::vector<double>& jump_times) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < jump_times.size(); ++k) gap = std::min(gap, jump_times[k] - jump_times[k - 1]);
  return gap;
}

std::vector<Gains> load_sequence_file(const std::filesystem::path& path, int r) {
  std::ifstream is(path);
  if (!is) throw IOError("cannot read " + path.string());
  std::vector<Gains> out;
  std::string line;
  int row = 0;
  while (std::getline(is, line)) {
    ++row;
    std::istringstream ls(line);
    Gains g;
    std::string tok;
    while (ls >> tok) {
      if (tok == "1" || tok == "+1") {
        g.push_back(1);
      } else if (tok == "0") {
        g.push_back(0);
      } else if (tok == "-1") {
        g.push_back(-1);
      } else {
        throw IOError(path.string() + ":" + std::to_string(row) + ": bad gain '" + tok + "'");
      }
    }
    if (g.empty()) continue;
    if (static_cast<int>(g.size()) != r) {
      throw IOError(path.string() + ":" + std::to_string(row) + ": expected " + std::to_string(r) + " gains");
    }
    out.push_back(std::move(g));
  }
  if (out.empty()) throw IOError(path.string() + ": no gain vectors");
  return out;
}

}  // namespace hyseek
