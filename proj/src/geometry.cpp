#include "hyseek/geometry.hpp"

#include <cmath>

#include "hyseek/errors.hpp"

namespace hyseek {

namespace {
constexpr double kUnitTol = 1e-9;
constexpr double kProjectReach = 0.1;
}  // namespace

Mat2 planar_skew() {
  Mat2 s;
  s << 0.0, 1.0, -1.0, 0.0;
  return s;
}

Mat2 planar_rot(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat2 r;
  r << c, s, -s, c;
  return r;
}

Mat3 skew(const Vec3& x) {
  Mat3 m;
  m << 0.0, -x.z(), x.y(), x.z(), 0.0, -x.x(), -x.y(), x.x(), 0.0;
  return m;
}

UnitVector2::UnitVector2(const Vec2& v) : v_(v) {
  if (!(std::abs(v.norm() - 1.0) <= kUnitTol)) throw NotUnit("2-vector norm is " + std::to_string(v.norm()));
}

UnitVector2 UnitVector2::normalized(const Vec2& v) {
  double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw NotUnit("cannot normalize a zero 2-vector");
  return UnitVector2(v / n, Trusted{});
}

UnitVector3::UnitVector3(const Vec3& v) : v_(v) {
  if (!(std::abs(v.norm() - 1.0) <= kUnitTol)) throw NotUnit("3-vector norm is " + std::to_string(v.norm()));
}

UnitVector3 UnitVector3::normalized(const Vec3& v) {
  double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw NotUnit("cannot normalize a zero 3-vector");
  return UnitVector3(v / n, Trusted{});
}

RotationMatrix::RotationMatrix(const Mat3& r, double tol) : r_(r) {
  double err = (r.transpose() * r - Mat3::Identity()).norm();
  if (!(err <= tol) || !(r.determinant() > 0.0)) {
    throw NotARotation("orthogonality error " + std::to_string(err) + ", det " +
                       std::to_string(r.determinant()));
  }
}

Mat3 rodrigues(const Mat3& unit_skew, double angle) {
  return Mat3::Identity() + std::sin(angle) * unit_skew + (1.0 - std::cos(angle)) * unit_skew * unit_skew;
}

RotationMatrix rot_exp(const UnitVector3& axis, double angle) {
  return RotationMatrix(rodrigues(skew(axis.value()), angle));
}

Vec9 vec(const Mat3& r) { return Eigen::Map<const Vec9>(r.data()); }

Mat3 unvec_raw(const Eigen::Ref<const Eigen::VectorXd>& p) {
  if (p.size() != 9) throw PreconditionViolated("unvec needs a 9-vector");
  Mat3 r;
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 3; ++i) r(i, c) = p[3 * c + i];
  return r;
}

RotationMatrix unvec(const Eigen::Ref<const Eigen::VectorXd>& p, double tol) {
  return RotationMatrix(unvec_raw(p), tol);
}

Mat3 nearest_rotation(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
  return u * v.transpose();
}

PolarPoint obstacle_diffeo(const Vec2& z, const Vec2& zo, double d_star) {
  Vec2 rel = z - zo;
  double r = rel.norm();
  if (!(r > d_star)) {
    throw InsideObstacleMargin("|z - zo| = " + std::to_string(r) + " <= " + std::to_string(d_star));
  }
  return {std::log(r - d_star), UnitVector2::normalized(rel)};
}

Vec2 obstacle_diffeo_inv(const PolarPoint& p, const Vec2& zo, double d_star) {
  return zo + (d_star + std::exp(p.rho)) * p.dir.value();
}

Eigen::Matrix<double, 3, 2> obstacle_jacobian(const Vec2& z, const Vec2& zo, double d_star) {
  PolarPoint p = obstacle_diffeo(z, zo, d_star);
  double r = (z - zo).norm();
  const Vec2& u = p.dir.value();
  Eigen::Matrix<double, 3, 2> jac;
  jac.row(0) = u.transpose() / (r - d_star);
  jac.bottomRows<2>() = (Mat2::Identity() - u * u.transpose()) / r;
  return jac;
}

Vec3 pushforward_field(const Vec2& zo, double d_star, const PolarPoint& p, const Vec2& v) {
  (void)zo;
  if (!std::isfinite(p.rho)) throw InsideObstacleMargin("rho is not finite");
  const Vec2& u = p.dir.value();
  Vec3 out;
  out[0] = u.dot(v) * std::exp(-p.rho);
  out.tail<2>() = (v - u * u.dot(v)) / (d_star + std::exp(p.rho));
  return out;
}

void project_to_manifold(ManifoldKind kind, Eigen::Ref<Eigen::VectorXd> x) {
  auto too_far = [](double d) {
    if (!(d <= kProjectReach)) throw TooFarFromManifold("distance " + std::to_string(d));
  };
  switch (kind) {
    case ManifoldKind::Circle:
    case ManifoldKind::Sphere: {
      double n = x.norm();
      too_far(std::abs(n - 1.0));
      x /= n;
      return;
    }
    case ManifoldKind::SO3: {
      Mat3 m = unvec_raw(x);
      Mat3 r = nearest_rotation(m);
      too_far((m - r).norm());
      x = vec(r);
      return;
    }
    case ManifoldKind::Polar: {
      double n = x.tail<2>().norm();
      too_far(std::abs(n - 1.0));
      x.tail<2>() /= n;
      return;
    }
  }
}

Eigen::VectorXd tangent_project(ManifoldKind kind, const Eigen::Ref<const Eigen::VectorXd>& p,
                                const Eigen::Ref<const Eigen::VectorXd>& g) {
  switch (kind) {
    case ManifoldKind::Circle:
    case ManifoldKind::Sphere:
      return g - p * p.dot(g);
    case ManifoldKind::SO3: {
      Mat3 r = unvec_raw(p);
      Mat3 m = r.transpose() * unvec_raw(g);
      return vec(r * (0.5 * (m - m.transpose())));
    }
    case ManifoldKind::Polar: {
      Eigen::VectorXd out = g;
      Vec2 u = p.tail<2>();
      Vec2 gd = g.tail<2>();
      out.tail<2>() = gd - u * u.dot(gd);
      return out;
    }
  }
  return g;
}

Vec2 circle_field(const Vec2& p) { return planar_skew() * p; }

Vec3 sphere_field(int i, const Vec3& p) { return Vec3::Unit(i) - p[i] * p; }

Vec9 so3_field(int i, const Eigen::Ref<const Eigen::VectorXd>& p) {
  return vec(unvec_raw(p) * skew(Vec3::Unit(i)));
}

}  // namespace hyseek
