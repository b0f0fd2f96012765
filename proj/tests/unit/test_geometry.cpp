#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hyseek/errors.hpp"
#include "hyseek/geometry.hpp"

using namespace hyseek;
using std::numbers::pi;

namespace {

std::mt19937_64 rng(2024);
std::normal_distribution<double> gauss;

Vec3 random_vec3() { return Vec3(gauss(rng), gauss(rng), gauss(rng)); }

Mat3 random_rotation() {
  std::uniform_real_distribution<double> ang(-pi, pi);
  return rot_exp(UnitVector3::normalized(random_vec3()), ang(rng)).value();
}

Vec2 random_admissible(const Vec2& zo, double d_star) {
  std::uniform_real_distribution<double> r(d_star + 0.05, d_star + 5.0);
  std::uniform_real_distribution<double> a(-pi, pi);
  double ang = a(rng);
  return zo + r(rng) * Vec2(std::cos(ang), std::sin(ang));
}

}  // namespace

TEST_CASE("planar rotation") {
  CHECK((planar_rot(0.0) - Mat2::Identity()).norm() == 0.0);
  CHECK((planar_rot(pi / 2) * Vec2(1, 0) - Vec2(0, -1)).norm() < 1e-15);
  CHECK((planar_rot(0.7) * planar_rot(-1.9) - planar_rot(-1.2)).norm() < 1e-12);
  CHECK((planar_skew() - Mat2{{0, 1}, {-1, 0}}).norm() == 0.0);
}

TEST_CASE("skew matrix") {
  CHECK((skew(Vec3::UnitZ()) * Vec3::UnitX() - Vec3::UnitY()).norm() == 0.0);
  CHECK(skew(Vec3::Zero()).norm() == 0.0);
  for (int k = 0; k < 100; ++k) {
    Vec3 x = random_vec3();
    Vec3 y = random_vec3();
    CHECK((skew(x) * y + skew(y) * x).norm() < 1e-12);
    CHECK((skew(x) * y - x.cross(y)).norm() < 1e-12);
  }
}

TEST_CASE("rotation exponential") {
  UnitVector3 z(Vec3::UnitZ());
  CHECK((rot_exp(z, 0.0).value() - Mat3::Identity()).norm() == 0.0);
  CHECK((rot_exp(z, pi / 2).value() * Vec3::UnitX() - Vec3::UnitY()).norm() < 1e-12);
  for (int k = 0; k < 100; ++k) {
    UnitVector3 w = UnitVector3::normalized(random_vec3());
    double a = gauss(rng);
    CHECK((rot_exp(w, a).value() * rot_exp(w, -a).value() - Mat3::Identity()).norm() < 1e-12);
    Mat3 r = rot_exp(w, a).value();
    CHECK((r.transpose() * r - Mat3::Identity()).norm() <= 1e-8);
    CHECK(r.determinant() > 0.0);
    // Rodrigues agrees with the matrix exponential series.
    Mat3 wa = skew(w.value()) * a;
    Mat3 series = Mat3::Identity();
    Mat3 term = Mat3::Identity();
    for (int n = 1; n < 30; ++n) {
      term = term * wa / n;
      series += term;
    }
    CHECK((r - series).norm() < 1e-12);
  }
}

TEST_CASE("strong types reject bad input") {
  CHECK_THROWS_AS(UnitVector2(Vec2(2, 0)), NotUnit);
  CHECK_THROWS_AS(UnitVector3(Vec3(0, 0, 0.5)), NotUnit);
  CHECK_NOTHROW(UnitVector2(Vec2(0.6, 0.8)));
  CHECK_THROWS_AS(RotationMatrix(Vec3(1, 1, -1).asDiagonal().toDenseMatrix()), NotARotation);
  CHECK_THROWS_AS(RotationMatrix(2.0 * Mat3::Identity()), NotARotation);
}

TEST_CASE("vec and unvec") {
  Vec9 expect;
  expect << 1, 0, 0, 0, 1, 0, 0, 0, 1;
  CHECK((vec(Mat3::Identity()) - expect).norm() == 0.0);
  for (int k = 0; k < 50; ++k) {
    Mat3 r = random_rotation();
    CHECK((unvec(vec(r)).value() - r).norm() < 1e-15);
    for (int i = 0; i < 3; ++i) {
      Mat3 e = skew(Vec3::Unit(i));
      Eigen::Matrix<double, 9, 9> kron;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) kron.block<3, 3>(3 * a, 3 * b) = e(a, b) * Mat3::Identity();
      CHECK((vec(r * e) - (-kron * vec(r))).norm() < 1e-12);
      CHECK((so3_field(i, vec(r)) - vec(r * e)).norm() < 1e-12);
    }
  }
  Vec9 bad = vec(2.0 * Mat3::Identity());
  CHECK_THROWS_AS(unvec(bad), NotARotation);
}

TEST_CASE("obstacle diffeomorphism") {
  Vec2 zo(0.3, -0.2);
  double d_star = 1.05;
  PolarPoint p = obstacle_diffeo(zo + (d_star + 1.0) * Vec2::UnitX(), zo, d_star);
  CHECK(std::abs(p.rho) < 1e-15);
  CHECK((p.dir.value() - Vec2(1, 0)).norm() < 1e-15);

  CHECK_THROWS_AS(obstacle_diffeo(zo + Vec2(0.5, 0.0), zo, d_star), InsideObstacleMargin);

  for (int k = 0; k < 500; ++k) {
    Vec2 z = random_admissible(zo, d_star);
    CHECK((obstacle_diffeo_inv(obstacle_diffeo(z, zo, d_star), zo, d_star) - z).norm() < 1e-10);

    auto jac = obstacle_jacobian(z, zo, d_star);
    const double h = 1e-6;
    for (int c = 0; c < 2; ++c) {
      Vec2 dz = Vec2::Unit(c) * h;
      PolarPoint a = obstacle_diffeo(z + dz, zo, d_star);
      PolarPoint b = obstacle_diffeo(z - dz, zo, d_star);
      Vec3 fd((a.rho - b.rho) / (2 * h), (a.dir[0] - b.dir[0]) / (2 * h), (a.dir[1] - b.dir[1]) / (2 * h));
      CHECK((jac.col(c) - fd).norm() <= 1e-5 * std::max(1.0, fd.norm()));
    }
  }
}

TEST_CASE("pushforward of planar fields") {
  Vec2 zo = Vec2::Zero();
  PolarPoint p{0.0, UnitVector2(Vec2(1, 0))};
  CHECK(pushforward_field(zo, 1.0, p, Vec2::Zero()).norm() == 0.0);
  Vec3 radial = pushforward_field(zo, 1.0, p, Vec2::UnitX());
  CHECK((radial - Vec3(1, 0, 0)).norm() < 1e-15);

  for (int k = 0; k < 200; ++k) {
    Vec2 z = random_admissible(zo, 1.05);
    Vec2 v(gauss(rng), gauss(rng));
    PolarPoint pp = obstacle_diffeo(z, zo, 1.05);
    const double h = 1e-6;
    PolarPoint a = obstacle_diffeo(z + h * v, zo, 1.05);
    PolarPoint b = obstacle_diffeo(z - h * v, zo, 1.05);
    Vec3 fd((a.rho - b.rho) / (2 * h), (a.dir[0] - b.dir[0]) / (2 * h), (a.dir[1] - b.dir[1]) / (2 * h));
    CHECK((pushforward_field(zo, 1.05, pp, v) - fd).norm() <= 1e-5 * std::max(1.0, fd.norm()));
  }
}

TEST_CASE("projection onto the manifolds") {
  Vec u(2);
  u << 0.6, 0.8;
  Vec copy = u;
  project_to_manifold(ManifoldKind::Circle, copy);
  CHECK((copy - u).norm() < 1e-16);

  Vec off(2);
  off << 1.05, 0.0;
  project_to_manifold(ManifoldKind::Circle, off);
  CHECK((off - Vec2(1, 0)).norm() < 1e-15);

  Vec far(2);
  far << 2.0, 0.0;
  CHECK_THROWS_AS(project_to_manifold(ManifoldKind::Circle, far), TooFarFromManifold);

  for (int k = 0; k < 50; ++k) {
    Mat3 noisy = Mat3::Identity();
    for (int i = 0; i < 9; ++i) noisy.data()[i] += 1e-6 * gauss(rng);
    Vec p = vec(noisy);
    project_to_manifold(ManifoldKind::SO3, p);
    Mat3 r = unvec_raw(p);
    CHECK((r.transpose() * r - Mat3::Identity()).norm() <= 1e-12);
    CHECK(r.determinant() > 0.0);
    CHECK((nearest_rotation(noisy) - r).norm() < 1e-15);
  }

  Vec polar(3);
  polar << -0.4, 0.0, 1.02;
  project_to_manifold(ManifoldKind::Polar, polar);
  CHECK(polar[0] == -0.4);
  CHECK(std::abs(polar.tail<2>().norm() - 1.0) < 1e-15);
}

TEST_CASE("control fields are tangent") {
  for (int k = 0; k < 1000; ++k) {
    Vec2 c = Vec2(gauss(rng), gauss(rng)).normalized();
    CHECK(std::abs(c.dot(circle_field(c))) <= 1e-14);
    Vec3 p = random_vec3().normalized();
    for (int i = 0; i < 3; ++i) CHECK(std::abs(p.dot(sphere_field(i, p))) <= 1e-12);
    Vec9 r = vec(random_rotation());
    for (int i = 0; i < 3; ++i) {
      Vec9 f = so3_field(i, r);
      CHECK((tangent_project(ManifoldKind::SO3, r, f) - f).norm() < 1e-12);
    }
  }
}

TEST_CASE("sphere fields span the tangent space with constant one") {
  for (int k = 0; k < 10000; ++k) {
    Vec3 p = random_vec3().normalized();
    Vec3 v = random_vec3();
    v -= v.dot(p) * p;
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) sum += std::pow(sphere_field(i, p).dot(v), 2);
    CHECK(std::abs(sum - v.squaredNorm()) <= 1e-10);
  }
}

TEST_CASE("tangent projection") {
  Vec p(2);
  p << 0.0, 1.0;
  Vec g(2);
  g << 3.0, 4.0;
  Vec t = tangent_project(ManifoldKind::Circle, p, g);
  CHECK((t - Vec2(3.0, 0.0)).norm() < 1e-15);

  Vec9 r = vec(random_rotation());
  Vec9 n = vec(unvec_raw(r) * Mat3(Vec3(1, 2, 3).asDiagonal()));  // R times symmetric is normal
  CHECK(tangent_project(ManifoldKind::SO3, r, n).norm() < 1e-12);
}
