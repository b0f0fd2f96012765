#include <cmath>
#include <functional>

#include "hyseek/errors.hpp"
#include "hyseek/synergistic/family.hpp"

namespace hyseek {

namespace {

void check_delta(double delta, double upper) {
  if (!(delta > 0.0 && delta < upper)) {
    throw BadDelta("delta = " + std::to_string(delta) + " outside (0, " + std::to_string(upper) + ")");
  }
}

void check_warps(const std::vector<double>& warps) {
  if (warps.empty()) throw PreconditionViolated("a family needs at least one mode");
}

/// Base potential W(p) = w0 - <b, p>, warped by p -> exp(c W(p) G) p with G skew.
class WarpedLinearFamily final : public PotentialFamily {
 public:
  using ExpApply = std::function<Vec(double a, const Vec& v)>;
  using GenApply = std::function<Vec(const Vec& v)>;

  WarpedLinearFamily(ManifoldKind kind, Vec target, double delta, double w0, Vec b,
                     std::vector<double> warps, ExpApply exp_apply, GenApply gen_apply)
      : PotentialFamily(kind, std::move(target), delta, static_cast<int>(warps.size())),
        w0_(w0),
        b_(std::move(b)),
        warps_(std::move(warps)),
        exp_apply_(std::move(exp_apply)),
        gen_apply_(std::move(gen_apply)) {}

  double base(const Vec& p) const override { return w0_ - b_.dot(p); }

  double eval(int q, const Vec& p) const override {
    double c = coef(q);
    if (c == 0.0) return base(p);
    return base(exp_apply_(c * base(p), p));
  }

  Vec grad(int q, const Vec& p) const override {
    double c = coef(q);
    if (c == 0.0) return -b_;
    double a = c * base(p);
    Vec warped = exp_apply_(a, p);
    // E^T = exp(-a G) because G is skew.
    return -exp_apply_(-a, b_) + (c * b_.dot(gen_apply_(warped))) * b_;
  }

 private:
  double coef(int q) const {
    if (q < 1 || q > modes()) throw PreconditionViolated("mode " + std::to_string(q) + " out of range");
    return warps_[static_cast<std::size_t>(q - 1)];
  }

  double w0_;
  Vec b_;
  std::vector<double> warps_;
  ExpApply exp_apply_;
  GenApply gen_apply_;
};

std::shared_ptr<WarpedLinearFamily> make_circle(const UnitVector2& target, double delta,
                                                std::vector<double> warps) {
  check_warps(warps);
  const Mat2 s = planar_skew();
  return std::make_shared<WarpedLinearFamily>(
      ManifoldKind::Circle, Vec(target.value()), delta, 1.0, Vec(target.value()), std::move(warps),
      [](double a, const Vec& v) -> Vec { return planar_rot(a) * v; },
      [s](const Vec& v) -> Vec { return s * v; });
}

class ObstacleFamily final : public PotentialFamily {
 public:
  ObstacleFamily(double rho_star, const UnitVector2& dir_star, double delta,
                 std::shared_ptr<WarpedLinearFamily> angular)
      : PotentialFamily(ManifoldKind::Polar, target_of(rho_star, dir_star), delta, angular->modes()),
        rho_star_(rho_star),
        angular_(std::move(angular)) {}

  double base(const Vec& p) const override { return radial(p[0]) + angular_->base(p.tail(2)); }

  double eval(int q, const Vec& p) const override {
    return radial(p[0]) + angular_->eval(q, p.tail(2));
  }

  Vec grad(int q, const Vec& p) const override {
    Vec g(3);
    double e = std::exp(p[0]);
    double es = std::exp(rho_star_);
    g[0] = (p[0] - rho_star_) + (e - es) * e / std::sqrt((e - es) * (e - es) + 1.0);
    g.tail(2) = angular_->grad(q, p.tail(2));
    return g;
  }

 private:
  static Vec target_of(double rho_star, const UnitVector2& dir) {
    Vec t(3);
    t << rho_star, dir[0], dir[1];
    return t;
  }

  double radial(double rho) const {
    double d = std::exp(rho) - std::exp(rho_star_);
    return 0.5 * (rho - rho_star_) * (rho - rho_star_) + std::sqrt(d * d + 1.0) - 1.0;
  }

  double rho_star_;
  std::shared_ptr<WarpedLinearFamily> angular_;
};

}  // namespace

Mat3 attitude_weights(const Vec3& omega_tilde) {
  return (3.0 / omega_tilde.sum()) * omega_tilde.asDiagonal().toDenseMatrix();
}

FamilyPtr circle_family(const UnitVector2& target, double delta, std::vector<double> warps) {
  check_delta(delta, 1.0);
  return make_circle(target, delta, std::move(warps));
}

FamilyPtr sphere_family(const UnitVector3& target, const UnitVector3& perp, double delta,
                        std::vector<double> warps) {
  check_delta(delta, 1.0);
  check_warps(warps);
  if (std::abs(target.value().dot(perp.value())) > 1e-10) {
    throw NotOrthogonal("<perp, target> = " + std::to_string(target.value().dot(perp.value())));
  }
  const Mat3 k = skew(perp.value());
  return std::make_shared<WarpedLinearFamily>(
      ManifoldKind::Sphere, Vec(target.value()), delta, 1.0, Vec(target.value()), std::move(warps),
      [k](double a, const Vec& v) -> Vec { return rodrigues(k, a) * v; },
      [k](const Vec& v) -> Vec { return k * v; });
}

FamilyPtr so3_family(const Vec3& omega_tilde, double delta, std::vector<double> warps) {
  check_delta(delta, 0.5);
  check_warps(warps);
  if (!(omega_tilde.minCoeff() > 0.0)) throw PreconditionViolated("axis weights must be positive");
  const Mat3 a = attitude_weights(omega_tilde);
  const Mat3 k = skew(omega_tilde.normalized());
  return std::make_shared<WarpedLinearFamily>(
      ManifoldKind::SO3, Vec(vec(Mat3::Identity())), delta, a.trace(), Vec(vec(a)), std::move(warps),
      [k](double ang, const Vec& v) -> Vec { return vec(rodrigues(k, ang) * unvec_raw(v)); },
      [k](const Vec& v) -> Vec { return vec(k * unvec_raw(v)); });
}

FamilyPtr obstacle_family(double rho_star, const UnitVector2& dir_star, double delta,
                          std::vector<double> warps) {
  check_delta(delta, 1.0);
  return std::make_shared<ObstacleFamily>(rho_star, dir_star, delta,
                                          make_circle(dir_star, delta, std::move(warps)));
}

}  // namespace hyseek
