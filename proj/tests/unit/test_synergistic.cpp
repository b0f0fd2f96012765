#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hyseek/errors.hpp"
#include "hyseek/synergistic/family.hpp"
#include "hyseek/synergistic/gap.hpp"

using namespace hyseek;
using std::numbers::pi;

namespace {

std::mt19937_64 rng(7);
std::normal_distribution<double> gauss;

// Two constant potentials, for the switching arithmetic.
class FixedValues : public PotentialFamily {
 public:
  FixedValues(double a, double b)
      : PotentialFamily(ManifoldKind::Circle, Vec2(0, 1), 0.25, 2), a_(a), b_(b) {}
  double eval(int q, const Vec&) const override { return q == 1 ? a_ : b_; }
  Vec grad(int, const Vec&) const override { return Vec::Zero(2); }
  double base(const Vec&) const override { return a_; }

 private:
  double a_;
  double b_;
};

Vec point(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec on_circle(double angle) { return point(std::cos(angle), std::sin(angle)); }

Vec random_sphere() {
  Vec v(3);
  v << gauss(rng), gauss(rng), gauss(rng);
  return v.normalized();
}

Vec random_rotation() {
  std::uniform_real_distribution<double> ang(0.0, pi);
  return vec(rot_exp(UnitVector3::normalized(Vec3(gauss(rng), gauss(rng), gauss(rng))), ang(rng)).value());
}

Vec random_polar() {
  std::uniform_real_distribution<double> rho(-3.0, 2.0);
  Vec v(3);
  v << rho(rng), gauss(rng), gauss(rng);
  v.tail<2>().normalize();
  return v;
}

double gradient_mismatch(const PotentialFamily& fam, const Vec& p) {
  const double h = 1e-6;
  double worst = 0.0;
  for (int q = 1; q <= fam.modes(); ++q) {
    Vec g = fam.grad(q, p);
    Vec fd(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      Vec a = p;
      Vec b = p;
      a[i] += h;
      b[i] -= h;
      fd[i] = (fam.eval(q, a) - fam.eval(q, b)) / (2 * h);
    }
    worst = std::max(worst, (g - fd).norm() / std::max(g.norm(), 1e-3));
  }
  return worst;
}

FamilyPtr the_circle() { return circle_family(UnitVector2(Vec2(0, 1)), 0.25); }
FamilyPtr the_sphere() { return sphere_family(UnitVector3(Vec3(0, 0, 1)), UnitVector3(Vec3(0, 1, 0)), 0.2); }
FamilyPtr the_so3() { return so3_family(Vec3(11, 12, 13), 0.2); }
FamilyPtr the_obstacle() { return obstacle_family(std::log(2.0 - 1.05), UnitVector2(Vec2(0, 1)), 0.25); }

}  // namespace

TEST_CASE("synergy gap arithmetic and switching") {
  FixedValues fam(0.6, 0.2);
  Vec p = point(0, 1);
  CHECK(synergy_mu(fam, p, 1) == doctest::Approx(0.4));
  CHECK(synergy_mu(fam, p, 2) == 0.0);
  CHECK(argmin_mode(fam, p) == 2);
  CHECK(switch_jump(fam, p, 1) == 2);
  CHECK_THROWS_AS(switch_jump(fam, p, 2), PreconditionViolated);

  FixedValues big(0.9, 0.1);
  int next = switch_jump(big, p, 1);
  CHECK(next == 2);
  CHECK(big.eval(1, p) - big.eval(next, p) >= 0.25);

  FixedValues tie(0.5, 0.5);
  CHECK(argmin_mode(tie, p) == 1);
  CHECK(synergy_mu(tie, p, 2) == 0.0);
  CHECK_THROWS_AS(switch_jump(tie, p, 2), PreconditionViolated);
}

TEST_CASE("circle family values") {
  auto fam = the_circle();
  Vec target = point(0, 1);
  Vec antipode = point(0, -1);
  CHECK(fam->modes() == 2);
  CHECK(fam->eval(1, target) == 0.0);
  CHECK(fam->eval(2, target) == 0.0);
  CHECK(fam->base(antipode) == doctest::Approx(2.0));
  // Warping by +-1 rad from the antipode: both modes read 1 + cos(1), so mu = 0 there.
  CHECK(fam->eval(1, antipode) == doctest::Approx(1.0 + std::cos(1.0)).epsilon(1e-14));
  CHECK(fam->eval(2, antipode) == doctest::Approx(1.0 + std::cos(1.0)).epsilon(1e-14));
  CHECK(synergy_mu(*fam, antipode, 1) < 1e-14);
}

TEST_CASE("factories check their parameters") {
  CHECK_THROWS_AS(circle_family(UnitVector2(Vec2(0, 1)), 0.0), BadDelta);
  CHECK_THROWS_AS(circle_family(UnitVector2(Vec2(0, 1)), 1.0), BadDelta);
  CHECK_THROWS_AS(sphere_family(UnitVector3(Vec3(0, 0, 1)), UnitVector3(Vec3(0, 0.6, 0.8)), 0.2), NotOrthogonal);
  CHECK_THROWS_AS(so3_family(Vec3(11, 12, 13), 0.5), BadDelta);
  CHECK_NOTHROW(so3_family(Vec3(11, 12, 13), 0.49));
}

TEST_CASE("sphere family values") {
  auto fam = the_sphere();
  Vec target(3);
  target << 0, 0, 1;
  CHECK(fam->eval(1, target) == 0.0);
  CHECK(fam->eval(2, target) == 0.0);
  CHECK(fam->base(-target) == doctest::Approx(2.0));
}

TEST_CASE("attitude family values") {
  auto fam = the_so3();
  Vec id = vec(Mat3::Identity());
  CHECK(fam->base(id) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(fam->eval(1, id) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::abs(Vec3(11, 12, 13).norm() - std::sqrt(434.0)) < 1e-14);
  Mat3 a = attitude_weights(Vec3(11, 12, 13));
  CHECK((a - Mat3(Vec3(11, 12, 13).asDiagonal()) / 12.0).norm() < 1e-15);
  // W(diag(-1, 1, -1)) = tr(A (I - R)) = 2 (a11 + a33).
  Vec bad = vec(Mat3(Vec3(-1, 1, -1).asDiagonal()));
  CHECK(fam->base(bad) == doctest::Approx(2.0 * (11.0 + 13.0) / 12.0));
}

TEST_CASE("obstacle family values") {
  double rho_star = std::log(2.0 - 1.05);
  auto fam = the_obstacle();
  auto circle = the_circle();
  Vec at_target(3);
  at_target << rho_star, 0, 1;
  CHECK(std::abs(fam->eval(1, at_target)) < 1e-15);
  CHECK(std::abs(fam->eval(2, at_target)) < 1e-15);
  Vec behind(3);
  behind << rho_star, 0, -1;
  for (int q = 1; q <= 2; ++q) CHECK(fam->eval(q, behind) == doctest::Approx(circle->eval(q, point(0, -1))));
}

TEST_CASE("closed-form gradients match finite differences") {
  auto circle = the_circle();
  auto sphere = the_sphere();
  auto so3 = the_so3();
  auto obstacle = the_obstacle();
  std::uniform_real_distribution<double> ang(-pi, pi);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    worst = std::max(worst, gradient_mismatch(*circle, on_circle(ang(rng))));
    worst = std::max(worst, gradient_mismatch(*sphere, random_sphere()));
    worst = std::max(worst, gradient_mismatch(*so3, random_rotation()));
    worst = std::max(worst, gradient_mismatch(*obstacle, random_polar()));
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("potentials grow away from the target") {
  // Minimum of V_q over rings of growing distance from the target is positive and nondecreasing.
  auto circle = the_circle();
  auto sphere = the_sphere();
  for (int q = 1; q <= 2; ++q) {
    double last_circle = 0.0;
    double last_sphere = 0.0;
    for (int ring = 1; ring <= 40; ++ring) {
      double angle = pi * ring / 40.0;
      double c = std::min(circle->eval(q, on_circle(pi / 2 + angle)), circle->eval(q, on_circle(pi / 2 - angle)));
      double s = INFINITY;
      for (int m = 0; m < 256; ++m) {
        double az = 2 * pi * m / 256.0;
        Vec p(3);
        p << std::sin(angle) * std::cos(az), std::sin(angle) * std::sin(az), std::cos(angle);
        s = std::min(s, sphere->eval(q, p));
      }
      CHECK(c > 0.0);
      CHECK(s > 0.0);
      CHECK(c >= last_circle - 1e-12);
      CHECK(s >= last_sphere - 1e-12);
      last_circle = c;
      last_sphere = s;
    }
  }
}

TEST_CASE("mu is never negative and flow/jump predicates cover every point") {
  auto fam = the_sphere();
  for (int k = 0; k < 2000; ++k) {
    Vec p = random_sphere();
    for (int q = 1; q <= 2; ++q) {
      double mu = synergy_mu(*fam, p, q);
      CHECK(mu >= 0.0);
      CHECK((mu <= fam->delta() || mu >= fam->delta()));
      if (mu >= fam->delta()) CHECK(synergy_mu(*fam, p, switch_jump(*fam, p, q)) == 0.0);
    }
  }
}

TEST_CASE("circle gap agrees with a dense angle scan") {
  // Independent oracle: discrete extrema of V_q on a 10^5 point angle grid.
  auto fam = the_circle();
  const int n = 100000;
  double oracle = INFINITY;
  for (int q = 1; q <= 2; ++q) {
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = fam->eval(q, on_circle(2 * pi * k / n));
    for (int k = 0; k < n; ++k) {
      double prev = v[(k + n - 1) % n];
      double next = v[(k + 1) % n];
      bool extremum = (v[k] <= prev && v[k] <= next) || (v[k] >= prev && v[k] >= next);
      if (!extremum || v[k] < 1e-6) continue;  // skip the target
      // Parabolic vertex through the three samples; the raw grid point is off by
      // up to 2 pi / n, which the margin would feel at first order.
      double curv = prev - 2 * v[k] + next;
      double shift = curv != 0.0 ? 0.5 * (prev - next) / curv : 0.0;
      Vec p = on_circle(2 * pi * (k + shift) / n);
      oracle = std::min(oracle, fam->eval(q, p) - std::min(fam->eval(1, p), fam->eval(2, p)));
    }
  }
  GapReport rep = estimate_synergy_gap(*fam);
  CHECK(rep.gap >= 0.99);
  CHECK(rep.gap == doctest::Approx(oracle).epsilon(1e-6));
  for (const auto& cp : rep.points) {
    CHECK(cp.grad_norm < 1e-8);
    CHECK(cp.margin >= fam->delta());
  }
}

TEST_CASE("gap of the sphere and attitude families") {
  GapReport sphere = estimate_synergy_gap(*the_sphere());
  CHECK(sphere.gap > 0.2);
  // The warp rotates about an axis orthogonal to the target, which maps the
  // great circle normal to that axis onto itself; its critical points are the circle's.
  CHECK(sphere.gap == doctest::Approx(estimate_synergy_gap(*the_circle()).gap).epsilon(1e-6));
  GapReport so3 = estimate_synergy_gap(*the_so3());
  CHECK(so3.gap > 0.2);
}

TEST_CASE("duplicated potential has no gap") {
  auto twin = circle_family(UnitVector2(Vec2(0, 1)), 0.25, {0.0, 0.0});
  CHECK(estimate_synergy_gap(*twin).gap == 0.0);
}

TEST_CASE("Newton refinement finds the antipode of the plain potential") {
  auto plain = circle_family(UnitVector2(Vec2(0, 1)), 0.25, {0.0});
  Vec p = on_circle(-pi / 2 + 0.3);
  REQUIRE(refine_critical_point(*plain, 1, p, {}));
  CHECK((p - point(0, -1)).norm() < 1e-8);
}
