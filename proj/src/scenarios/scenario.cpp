#include "hyseek/scenarios/scenario.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "hyseek/errors.hpp"

namespace hyseek {

using std::numbers::pi;

/// One control input: which gain scales it (-1 for a gain fixed at 1), which
/// rotor drives it, and whether it reads that rotor a quarter period late.
struct InputChannel {
  int gain = -1;
  int osc = 0;
  bool quarter = false;
};

struct ScenarioModel {
  ScenarioKind kind;
  ControllerKind controller;
  StateLayout lay;
  ManifoldKind manifold;
  FamilyPtr family;
  ESGains gains;
  OscillatorBank bank;
  AutomatonConfig automaton;
  Perturbation perturbation;  // center in manifold coordinates
  std::vector<InputChannel> inputs;
  Vec target_natural;
  Vec bad_natural;
  Vec2 obstacle_center = Vec2::Zero();
  double d_star = 1.0;
  double avg_scale = 1.0;
  std::shared_ptr<CustomPlant> custom;

  bool synergy_jumps() const { return controller != ControllerKind::Baseline; }

  Vec fam_point(const Vec& x) const { return x.head(lay.fam_dim); }
  int mode(const Vec& x) const { return static_cast<int>(std::lround(x[lay.q])); }
  double gain(const Vec& x, int g) const { return g < 0 ? 1.0 : x[lay.theta + g]; }
  Vec2 eta(const Vec& x, int k) const { return x.segment<2>(lay.eta + 2 * k); }

  /// Control fields of the plant at p, one per input.
  void fields(const Vec& p, std::vector<Vec>& out) const {
    out.resize(inputs.size());
    switch (kind) {
      case ScenarioKind::Circle:
        out[0] = circle_field(p.head<2>());
        break;
      case ScenarioKind::Sphere:
        for (int i = 0; i < 3; ++i) out[i] = sphere_field(i, p.head<3>());
        break;
      case ScenarioKind::SO3:
        for (int i = 0; i < 3; ++i) out[i] = so3_field(i, p);
        break;
      case ScenarioKind::ObstacleHolonomic: {
        PolarPoint pp{p[0], UnitVector2::normalized(p.tail<2>())};
        for (int i = 0; i < 2; ++i) out[i] = pushforward_field(obstacle_center, d_star, pp, Vec2::Unit(i));
        break;
      }
      case ScenarioKind::ObstacleNonholonomic: {
        PolarPoint pp{p[0], UnitVector2::normalized(p.segment<2>(1))};
        Vec f = Vec::Zero(5);
        f.head<3>() = pushforward_field(obstacle_center, d_star, pp, p.tail<2>());
        out[0] = f;
        break;
      }
      case ScenarioKind::Custom: {
        auto fs = custom->fields(p);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = fs[i];
        break;
      }
    }
  }

  /// Fields the averaged comparator uses. They differ from the input fields
  /// only for the unicycle, whose heading is averaged out.
  void averaged_fields(const Vec& p, std::vector<Vec>& out) const {
    if (kind != ScenarioKind::ObstacleNonholonomic) {
      fields(p, out);
      return;
    }
    PolarPoint pp{p[0], UnitVector2::normalized(p.segment<2>(1))};
    out.resize(2);
    for (int i = 0; i < 2; ++i) {
      Vec f = Vec::Zero(5);
      f.head<3>() = pushforward_field(obstacle_center, d_star, pp, Vec2::Unit(i));
      out[i] = f;
    }
  }

  double potential(const Vec& x) const { return family->eval(mode(x), fam_point(x)); }

  Vec grad_v(const Vec& x) const {
    Vec g = Vec::Zero(lay.p_dim);
    g.head(lay.fam_dim) = family->grad(mode(x), fam_point(x));
    return g;
  }

  std::vector<double> es_inputs(const Vec& x) const {
    double v = potential(x);
    std::vector<double> u(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const auto& ch = inputs[i];
      double period = bank.periods[static_cast<std::size_t>(ch.osc)].value();
      Vec2 e = eta(x, ch.osc);
      if (ch.quarter) e = planar_rot(pi / 2.0) * e;
      u[i] = es_input(v, e, period, gains);
    }
    return u;
  }

  std::vector<double> averaged_inputs(const Vec& x) const {
    std::vector<Vec> fs;
    averaged_fields(x.head(lay.p_dim), fs);
    std::vector<double> u = avg_feedback(grad_v(x), fs, gains.gamma * avg_scale);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] *= gain(x, averaged_gain(i));
    return u;
  }

  int averaged_gain(std::size_t i) const {
    return kind == ScenarioKind::ObstacleNonholonomic ? inputs[0].gain : inputs[i].gain;
  }

  void flow(const Vec& x, Vec& dx) const {
    dx.setZero(lay.dim);
    const Vec p = x.head(lay.p_dim);
    std::vector<Vec> fs;
    if (controller == ControllerKind::Averaged) {
      averaged_fields(p, fs);
      Vec g = grad_v(x);
      for (std::size_t i = 0; i < fs.size(); ++i) {
        double th = gain(x, averaged_gain(i));
        dx.head(lay.p_dim) -= (gains.gamma * avg_scale * th * th * g.dot(fs[i])) * fs[i];
      }
    } else {
      fields(p, fs);
      std::vector<double> u = es_inputs(x);
      for (std::size_t i = 0; i < fs.size(); ++i) {
        dx.head(lay.p_dim) += (gain(x, inputs[i].gain) * u[i]) * fs[i];
      }
      for (int k = 0; k < lay.n_osc; ++k) {
        dx.segment<2>(lay.eta + 2 * k) =
            oscillator_flow(eta(x, k), bank.periods[static_cast<std::size_t>(k)].value(), gains.eps);
      }
    }
    if (kind == ScenarioKind::ObstacleNonholonomic && controller != ControllerKind::Averaged) {
      // Heading spin u2 = 2 pi / eps.
      dx.segment<2>(3) += (2.0 * pi / gains.eps) * (planar_skew() * p.segment<2>(3));
    }
    if (perturbation.active()) {
      dx.head(lay.fam_dim) += perturbation.field(manifold, p.head(lay.fam_dim));
    }
    theta_flow(x.segment(lay.theta, lay.r + 2), automaton, dx.segment(lay.theta, lay.r + 2));
  }

  bool synergy_due(const Vec& x) const {
    return synergy_jumps() && synergy_mu(*family, fam_point(x), mode(x)) >= family->delta();
  }

  bool jump_set(const Vec& x) const {
    return synergy_due(x) || theta_jump_set(x.segment(lay.theta, lay.r + 2), automaton);
  }

  bool flow_set(const Vec& x, double tol) const {
    if (!theta_flow_set(x.segment(lay.theta, lay.r + 2), automaton, tol)) return false;
    if (synergy_jumps() && synergy_mu(*family, fam_point(x), mode(x)) > family->delta() + tol) return false;
    return true;
  }

  JumpOutcome jump(const Vec& x, RunContext& ctx) const {
    JumpOutcome out{x, {}};
    if (synergy_due(x)) {
      out.state[lay.q] = switch_jump(*family, fam_point(x), mode(x));
      out.reason = "synergy";
    }
    auto th = out.state.segment(lay.theta, lay.r + 2);
    if (theta_jump_set(th, automaton)) {
      std::string why = theta_jump(th, automaton, ctx, x);
      out.reason += (out.reason.empty() ? "" : "+") + why;
    }
    if (out.reason.empty()) throw PreconditionViolated("jump map applied outside the jump set");
    return out;
  }

  void renormalize(Vec& x) const {
    auto p = x.head(lay.fam_dim);
    project_to_manifold(manifold, p);
    if (kind == ScenarioKind::ObstacleNonholonomic) x.segment<2>(3).normalize();
    for (int k = 0; k < lay.n_osc; ++k) x.segment<2>(lay.eta + 2 * k).normalize();
    theta_clamp(x.segment(lay.theta, lay.r + 2), automaton);
  }

  // Natural coordinates and distances.
  Vec position(const Vec& x) const {
    if (kind == ScenarioKind::ObstacleHolonomic || kind == ScenarioKind::ObstacleNonholonomic) {
      PolarPoint pp{x[0], UnitVector2::normalized(x.segment<2>(1))};
      Vec z = obstacle_diffeo_inv(pp, obstacle_center, d_star);
      if (kind == ScenarioKind::ObstacleHolonomic) return z;
      Vec out(4);
      out << z, x.segment<2>(3);
      return out;
    }
    return x.head(lay.p_dim);
  }

  double target_distance(const Vec& x) const {
    Vec pos = position(x);
    return (pos.head(target_natural.size()) - target_natural).norm();
  }

  double bad_distance(const Vec& x) const {
    Vec pos = position(x);
    int n = static_cast<int>(std::min(pos.size(), bad_natural.size()));
    if (kind == ScenarioKind::ObstacleNonholonomic) n = 2;
    return (pos.head(n) - bad_natural.head(n)).norm();
  }

  double manifold_drift(const Vec& x) const {
    switch (manifold) {
      case ManifoldKind::Circle:
      case ManifoldKind::Sphere:
        return std::abs(x.head(lay.fam_dim).norm() - 1.0);
      case ManifoldKind::SO3: {
        Mat3 r = unvec_raw(x.head(9));
        return (r.transpose() * r - Mat3::Identity()).norm();
      }
      case ManifoldKind::Polar:
        return std::abs(x.segment<2>(1).norm() - 1.0);
    }
    return 0.0;
  }

  /// Manifold coordinates of a point given in natural coordinates.
  Vec to_manifold(const Vec& natural) const {
    switch (kind) {
      case ScenarioKind::ObstacleHolonomic: {
        PolarPoint pp = obstacle_diffeo(natural.head<2>(), obstacle_center, d_star);
        Vec out(3);
        out << pp.rho, pp.dir.value();
        return out;
      }
      case ScenarioKind::ObstacleNonholonomic: {
        PolarPoint pp = obstacle_diffeo(natural.head<2>(), obstacle_center, d_star);
        Vec out(5);
        out << pp.rho, pp.dir.value(), natural.segment<2>(2).normalized();
        return out;
      }
      default:
        return natural;
    }
  }
};

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigInvalid(what);
}

/// Rethrows precondition-style library errors as configuration errors.
template <typename F>
auto as_config_error(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigInvalid&) {
    throw;
  } catch (const Error& e) {
    throw ConfigInvalid(e.what());
  }
}

}  // namespace

Vec Scenario::position(const Vec& x) const { return model->position(x); }
double Scenario::target_distance(const Vec& x) const { return model->target_distance(x); }
double Scenario::bad_distance(const Vec& x) const { return model->bad_distance(x); }
int Scenario::mode(const Vec& x) const { return model->mode(x); }
double Scenario::potential(const Vec& x) const { return model->potential(x); }

Scenario build_scenario(const ScenarioConfig& cfg) {
  return as_config_error([&] {
    auto m = std::make_shared<ScenarioModel>();
    m->kind = cfg.kind;
    m->controller = cfg.controller;
    m->gains = cfg.gains;
    m->gains.validate();
    m->bank.periods = cfg.periods;
    m->bank.eps = cfg.gains.eps;
    m->bank.validate();
    m->target_natural = cfg.target;
    m->bad_natural = cfg.bad_point;
    m->custom = cfg.custom;

    const std::vector<double> base_warp{0.0};
    StateLayout& lay = m->lay;
    FamilyPtr syn;
    FamilyPtr base;
    switch (cfg.kind) {
      case ScenarioKind::Circle: {
        UnitVector2 t(cfg.target.head<2>());
        syn = circle_family(t, cfg.delta);
        base = circle_family(t, cfg.delta, base_warp);
        lay.p_dim = lay.fam_dim = 2;
        m->inputs = {{0, 0, false}};
        break;
      }
      case ScenarioKind::Sphere: {
        UnitVector3 t(cfg.target.head<3>());
        UnitVector3 perp(cfg.perp);
        syn = sphere_family(t, perp, cfg.delta);
        base = sphere_family(t, perp, cfg.delta, base_warp);
        lay.p_dim = lay.fam_dim = 3;
        m->inputs = {{0, 0, false}, {1, 1, false}, {2, 2, false}};
        break;
      }
      case ScenarioKind::SO3: {
        require(cfg.target.size() == 9 && (cfg.target - vec(Mat3::Identity())).norm() < 1e-12,
                "the attitude target is the identity");
        syn = so3_family(cfg.axis_weights, cfg.delta);
        base = so3_family(cfg.axis_weights, cfg.delta, base_warp);
        lay.p_dim = lay.fam_dim = 9;
        m->inputs = {{0, 0, false}, {1, 1, false}, {2, 2, false}};
        break;
      }
      case ScenarioKind::ObstacleHolonomic:
      case ScenarioKind::ObstacleNonholonomic: {
        require(cfg.obstacle_radius > 0.0, "obstacle_radius must be positive");
        require(cfg.margin > 1.0, "margin must exceed 1");
        m->obstacle_center = cfg.obstacle_center;
        m->d_star = cfg.margin * cfg.obstacle_radius;
        PolarPoint tp = obstacle_diffeo(cfg.target.head<2>(), cfg.obstacle_center, m->d_star);
        syn = obstacle_family(tp.rho, tp.dir, cfg.delta);
        base = obstacle_family(tp.rho, tp.dir, cfg.delta, base_warp);
        lay.fam_dim = 3;
        if (cfg.kind == ScenarioKind::ObstacleHolonomic) {
          lay.p_dim = 3;
          // The second input keeps a fixed unit gain and reads the rotor a quarter period late.
          m->inputs = {{0, 0, false}, {-1, 0, true}};
        } else {
          lay.p_dim = 5;
          m->inputs = {{0, 0, false}};
          m->avg_scale = 0.5;
        }
        break;
      }
      case ScenarioKind::Custom: {
        require(cfg.custom && cfg.custom->family && cfg.custom->fields, "custom scenario needs a plant");
        syn = cfg.custom->family;
        base = cfg.custom->family;
        lay.p_dim = lay.fam_dim = syn->dim();
        int r = static_cast<int>(cfg.periods.size());
        for (int i = 0; i < r; ++i) m->inputs.push_back({i, i, false});
        break;
      }
    }
    m->manifold = syn->manifold();
    m->family = cfg.controller == ControllerKind::Baseline ? base : syn;

    int r = 0;
    for (const auto& ch : m->inputs) r = std::max(r, ch.gain + 1);
    int n_osc = 0;
    for (const auto& ch : m->inputs) n_osc = std::max(n_osc, ch.osc + 1);
    require(static_cast<int>(cfg.periods.size()) == n_osc,
            to_string(cfg.kind) + " needs " + std::to_string(n_osc) + " oscillator periods");

    m->automaton = cfg.automaton;
    m->automaton.r = r;
    if (cfg.theta_mode == ThetaMode::Frozen) m->automaton.frozen = true;
    if (cfg.theta_mode == ThetaMode::Scripted) {
      require(!cfg.script_path.empty(), "scripted mode needs automaton.script");
      m->automaton.policy = JumpPolicy::Scripted;
      m->automaton.script = load_sequence_file(cfg.script_path, r);
    }
    m->automaton.validate();

    lay.q = lay.p_dim;
    lay.theta = lay.q + 1;
    lay.r = r;
    lay.eta = lay.theta + r + 2;
    lay.n_osc = n_osc;
    lay.dim = lay.eta + 2 * n_osc;

    if (cfg.perturbation.a != 0.0) {
      require(cfg.perturbation.sigma > 0.0, "perturbation.sigma must be positive");
      m->perturbation.a = cfg.perturbation.a;
      m->perturbation.sigma = cfg.perturbation.sigma;
      Vec c = cfg.perturbation.center.size() ? cfg.perturbation.center : cfg.bad_point;
      m->perturbation.center = m->to_manifold(c).head(lay.fam_dim);
    }

    // Initial state.
    Vec x0 = Vec::Zero(lay.dim);
    Vec start = cfg.initial.size() ? cfg.initial : cfg.bad_point;
    Vec p0 = m->to_manifold(start);
    require(p0.size() == lay.p_dim, "initial point has the wrong dimension");
    x0.head(lay.p_dim) = p0;
    {
      Vec probe = x0;
      m->renormalize(probe);
      require((probe.head(lay.fam_dim) - p0.head(lay.fam_dim)).norm() < 1e-6,
              "initial point is not on the manifold");
      x0 = probe;
    }
    require(cfg.initial_mode >= 1 && cfg.initial_mode <= m->family->modes(), "initial_mode out of range");
    x0[lay.q] = cfg.initial_mode;
    Vec th = theta_initial(m->automaton);
    if (!cfg.initial_gains.empty()) {
      require(static_cast<int>(cfg.initial_gains.size()) == r, "initial_gains needs " + std::to_string(r) + " entries");
      for (int i = 0; i < r; ++i) th[i] = cfg.initial_gains[i];
    }
    x0.segment(lay.theta, r + 2) = th;
    std::mt19937_64 phase_rng(cfg.solver.seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    for (int k = 0; k < n_osc; ++k) {
      double a = k < static_cast<int>(cfg.phases.size()) ? cfg.phases[k] : angle(phase_rng);
      x0.segment<2>(lay.eta + 2 * k) = Vec2(std::cos(a), std::sin(a));
    }

    Scenario sc;
    sc.cfg = cfg;
    sc.layout = lay;
    sc.family = m->family;
    sc.synergistic = syn;
    sc.x0 = x0;
    sc.solver = cfg.solver;
    sc.solver.step = effective_step(cfg);
    sc.solver.validate();

    std::shared_ptr<const ScenarioModel> cm = m;
    sc.model = cm;
    sc.solver.renormalize = [cm](Vec& x) { cm->renormalize(x); };

    HybridSystemDef& sys = sc.system;
    sys.dim = lay.dim;
    sys.flow_set = [cm](const Vec& x, double tol) { return cm->flow_set(x, tol); };
    sys.jump_set = [cm](const Vec& x) { return cm->jump_set(x); };
    sys.flow_field = [cm](const Vec& x, Vec& dx) { cm->flow(x, dx); };
    sys.jump_map = [cm](const Vec& x, RunContext& ctx) { return cm->jump(x, ctx); };

    auto& ch = sys.channels;
    ch.push_back({"V", [cm](const Vec& x) { return cm->potential(x); }});
    ch.push_back({"mu", [cm](const Vec& x) { return synergy_mu(*cm->family, cm->fam_point(x), cm->mode(x)); }});
    ch.push_back({"q", [cm](const Vec& x) { return static_cast<double>(cm->mode(x)); }});
    ch.push_back({"W", [cm](const Vec& x) { return cm->family->base(cm->fam_point(x)); }});
    for (int i = 0; i < r; ++i) {
      ch.push_back({"theta_" + std::to_string(i + 1), [cm, i](const Vec& x) { return x[cm->lay.theta + i]; }});
    }
    ch.push_back({"dwell", [cm](const Vec& x) { return x[cm->lay.theta + cm->lay.r]; }});
    ch.push_back({"ratio", [cm](const Vec& x) { return x[cm->lay.theta + cm->lay.r + 1]; }});
    ch.push_back({"in_Eb", [cm](const Vec& x) {
                    return has_zero_gain(x.segment(cm->lay.theta, cm->lay.r + 2), cm->lay.r) ? 1.0 : 0.0;
                  }});
    for (std::size_t i = 0; i < m->inputs.size(); ++i) {
      ch.push_back({"u_" + std::to_string(i + 1), [cm, i](const Vec& x) {
                      return cm->controller == ControllerKind::Averaged ? cm->averaged_inputs(x)[i]
                                                                        : cm->es_inputs(x)[i];
                    }});
    }
    ch.push_back({"dist_A", [cm](const Vec& x) { return cm->target_distance(x); }});
    ch.push_back({"dist_bad", [cm](const Vec& x) { return cm->bad_distance(x); }});
    ch.push_back({"drift", [cm](const Vec& x) { return cm->manifold_drift(x); }});
    ch.push_back({"eta_drift", [cm](const Vec& x) {
                    double d = 0.0;
                    for (int k = 0; k < cm->lay.n_osc; ++k) d = std::max(d, std::abs(cm->eta(x, k).norm() - 1.0));
                    return d;
                  }});
    if (cfg.kind == ScenarioKind::ObstacleHolonomic || cfg.kind == ScenarioKind::ObstacleNonholonomic) {
      ch.push_back({"z1", [cm](const Vec& x) { return cm->position(x)[0]; }});
      ch.push_back({"z2", [cm](const Vec& x) { return cm->position(x)[1]; }});
      ch.push_back({"clearance", [cm](const Vec& x) { return (cm->position(x).head<2>() - cm->obstacle_center).norm(); }});
    }
    return sc;
  });
}

}  // namespace hyseek
