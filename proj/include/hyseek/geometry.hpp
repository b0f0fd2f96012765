#pragma once

#include <Eigen/Dense>

#include "hyseek/hybrid/system.hpp"

namespace hyseek {

using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec9 = Eigen::Matrix<double, 9, 1>;

/// The planar skew matrix S = [[0, 1], [-1, 0]].
Mat2 planar_skew();

/// exp(a S) = [[cos a, sin a], [-sin a, cos a]]. Note the clockwise sense:
/// planar_rot(pi/2) maps (1, 0) to (0, -1).
Mat2 planar_rot(double angle);

/// [x]_x, so that skew(x) * y == x.cross(y).
Mat3 skew(const Vec3& x);

class UnitVector2 {
 public:
  /// Throws NotUnit unless |v| = 1 within 1e-9.
  explicit UnitVector2(const Vec2& v);
  static UnitVector2 normalized(const Vec2& v);
  const Vec2& value() const { return v_; }
  double operator[](int i) const { return v_[i]; }

 private:
  struct Trusted {};
  UnitVector2(const Vec2& v, Trusted) : v_(v) {}
  Vec2 v_;
};

class UnitVector3 {
 public:
  explicit UnitVector3(const Vec3& v);
  static UnitVector3 normalized(const Vec3& v);
  const Vec3& value() const { return v_; }
  double operator[](int i) const { return v_[i]; }

 private:
  struct Trusted {};
  UnitVector3(const Vec3& v, Trusted) : v_(v) {}
  Vec3 v_;
};

class RotationMatrix {
 public:
  /// Throws NotARotation unless |R^T R - I|_F <= tol and det R > 0.
  explicit RotationMatrix(const Mat3& r, double tol = 1e-8);
  const Mat3& value() const { return r_; }

 private:
  Mat3 r_;
};

/// Log-radial coordinates around an obstacle: (rho, direction).
struct PolarPoint {
  double rho;
  UnitVector2 dir;
};

/// Rodrigues: I + sin(a)[w]x + (1 - cos a)[w]x^2.
RotationMatrix rot_exp(const UnitVector3& axis, double angle);
/// Same on a raw matrix, for callers that already hold [w]x of a unit w.
Mat3 rodrigues(const Mat3& unit_skew, double angle);

/// Column stacking. vec(R e^) = -(e^ kron I) vec(R) for every hat matrix e^.
Vec9 vec(const Mat3& r);
Mat3 unvec_raw(const Eigen::Ref<const Eigen::VectorXd>& p);
/// Throws NotARotation if the reshaped matrix is not a rotation within tol.
RotationMatrix unvec(const Eigen::Ref<const Eigen::VectorXd>& p, double tol = 1e-8);

/// Closest rotation in Frobenius norm (polar factor via SVD).
Mat3 nearest_rotation(const Mat3& m);

/// phi(z) = (log(|z - zo| - d_star), (z - zo) / |z - zo|).
/// Throws InsideObstacleMargin when |z - zo| <= d_star.
PolarPoint obstacle_diffeo(const Vec2& z, const Vec2& zo, double d_star);
Vec2 obstacle_diffeo_inv(const PolarPoint& p, const Vec2& zo, double d_star);
/// D phi at z, rows (rho, dir_x, dir_y).
Eigen::Matrix<double, 3, 2> obstacle_jacobian(const Vec2& z, const Vec2& zo, double d_star);
/// D phi(phi^{-1}(p)) v as (d rho, d dir_x, d dir_y).
Vec3 pushforward_field(const Vec2& zo, double d_star, const PolarPoint& p, const Vec2& v);

enum class ManifoldKind { Circle, Sphere, SO3, Polar };

/// Circle/Sphere: divide by the norm. SO3: nearest rotation of the 9-vector.
/// Polar (rho, dir_x, dir_y): normalize dir. Throws TooFarFromManifold if x
/// is farther than 0.1 from the manifold.
void project_to_manifold(ManifoldKind kind, Eigen::Ref<Eigen::VectorXd> x);

/// Orthogonal projection of an ambient vector g onto the tangent space at p.
Eigen::VectorXd tangent_project(ManifoldKind kind, const Eigen::Ref<const Eigen::VectorXd>& p,
                                const Eigen::Ref<const Eigen::VectorXd>& g);

/// Control vector fields. Circle: S p. Sphere: e_i - <p, e_i> p.
/// SO3 (vec embedded): -(e^_i kron I) p = vec(R e^_i).
Vec2 circle_field(const Vec2& p);
Vec3 sphere_field(int i, const Vec3& p);
Vec9 so3_field(int i, const Eigen::Ref<const Eigen::VectorXd>& p);

}  // namespace hyseek
