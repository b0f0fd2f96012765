#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "hyseek/controller.hpp"
#include "hyseek/errors.hpp"
#include "hyseek/hybrid/integrator.hpp"
#include "hyseek/synergistic/family.hpp"

using namespace hyseek;
using std::numbers::pi;

namespace {

std::mt19937_64 rng(99);
std::normal_distribution<double> gauss;

Vec2 random_unit2() { return Vec2(gauss(rng), gauss(rng)).normalized(); }

}  // namespace

TEST_CASE("seeking input values") {
  ESGains g{1.0, 4.0, 0.2};
  double amp = es_amplitude(g, 2.0);
  CHECK(amp == doctest::Approx(std::sqrt(4 * pi * 1.0 / (2.0 * 4.0)) / 0.2));
  CHECK(es_input(0.0, Vec2(1, 0), 2.0, g) == doctest::Approx(amp));
  CHECK(std::abs(es_input(pi / 8, Vec2(1, 0), 2.0, g)) < 1e-14 * amp);
  for (int k = 0; k < 1000; ++k) {
    double v = 3.0 * gauss(rng);
    CHECK(std::abs(es_input(v, random_unit2(), 2.0, g)) <= amp * (1 + 1e-15));
  }
}

TEST_CASE("amplitude and rotor speed scale with eps") {
  ESGains g{1.0, 4.0, 0.2};
  ESGains g2 = g;
  g2.eps = 0.4;
  CHECK(es_amplitude(g2, 1.0) == doctest::Approx(es_amplitude(g, 1.0) / 2));
  OscillatorBank fast{{{1, 1}}, 0.1};
  OscillatorBank slow{{{1, 1}}, 0.2};
  CHECK(fast.angular_speed(0) == doctest::Approx(4 * slow.angular_speed(0)));
  CHECK(slow.angular_speed(0) == doctest::Approx(2 * pi / 0.04));
}

TEST_CASE("rotor flow") {
  const double eps = 0.25;
  const double period = 3.0;
  Vec2 d = oscillator_flow(Vec2(1, 0), period, eps);
  CHECK(d[0] == 0.0);
  CHECK(d[1] == doctest::Approx(2 * pi / (period * eps * eps)));
  for (int k = 0; k < 100; ++k) {
    Vec2 eta = random_unit2();
    Vec2 d2 = oscillator_flow(eta, period, eps);
    CHECK(std::abs(eta.dot(d2)) < 1e-14 * d2.norm());
  }
  FlowField f = [&](const Vec& x, Vec& dx) { dx = oscillator_flow(x.head<2>(), period, eps); };
  Vec eta(2);
  eta << 0.6, 0.8;
  // Exact RK4 propagator for a rotation by a per step: 1 + z + z^2/2 + z^3/6 + z^4/24, z = i a.
  auto rk4_turn_error = [](int steps) {
    std::complex<double> z(0.0, 2 * pi / steps);
    std::complex<double> g = 1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0;
    return std::abs(std::pow(g, steps) - 1.0);
  };
  for (int steps : {40, 160}) {
    Vec x = eta;
    double h = eps * eps * period / steps;
    for (int i = 0; i < steps; ++i) x = step_flow(f, x, h);
    CHECK((x - eta).norm() == doctest::Approx(rk4_turn_error(steps)).epsilon(1e-6));
  }
  // 40 steps per turn leaves about 3e-5 of phase error; 160 steps gets under 1e-6.
  CHECK(rk4_turn_error(40) > 1e-6);
  CHECK(rk4_turn_error(160) < 1e-6);
}

TEST_CASE("model-based comparator") {
  std::vector<Vec> fields{Vec2(1, 0), Vec2(0, 1)};
  Vec zero = Vec::Zero(2);
  for (double u : avg_feedback(zero, fields, 1.0)) CHECK(u == 0.0);
  CHECK(averaged_field(zero, zero, fields, 1.0).norm() == 0.0);

  Vec grad(2);
  grad << 0.3, -0.7;
  std::vector<Vec> muted{Vec2(1, 0), Vec2::Zero()};
  auto u = avg_feedback(grad, muted, 2.0);
  CHECK(u[0] == doctest::Approx(-0.6));
  CHECK(u[1] == 0.0);

  for (int k = 0; k < 500; ++k) {
    Vec gv(3);
    gv << gauss(rng), gauss(rng), gauss(rng);
    std::vector<Vec> fs;
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
      Vec f(3);
      f << gauss(rng), gauss(rng), gauss(rng);
      sum += std::pow(gv.dot(f), 2);
      fs.push_back(f);
    }
    Vec fbar = averaged_field(Vec::Zero(3), gv, fs, 1.5);
    CHECK(gv.dot(fbar) == doctest::Approx(-1.5 * sum));
    CHECK(gv.dot(fbar) <= 0.0);
  }
}

TEST_CASE("comparator descends the warped circle potential") {
  auto fam = circle_family(UnitVector2(Vec2(0, 1)), 0.25);
  Vec p(2);
  p << std::sin(0.4), -std::cos(0.4);  // off the antipode
  for (int q = 1; q <= 2; ++q) {
    Vec f = circle_field(p.head<2>());
    double u = avg_feedback(fam->tangent_grad(q, p), {f}, 1.0)[0];
    // Finite difference of V_q along the flow of S p: derivative d/ds V_q(exp(-s S) ... ) via the field.
    const double h = 1e-6;
    Vec a = (p + h * f).normalized();
    Vec b = (p - h * f).normalized();
    double dv = (fam->eval(q, a) - fam->eval(q, b)) / (2 * h);
    CHECK(u == doctest::Approx(-dv).epsilon(1e-6));
    // Moving along u f lowers V_q.
    Vec next = (p + 1e-4 * u * f).normalized();
    CHECK(fam->eval(q, next) < fam->eval(q, p));
  }
}

TEST_CASE("unicycle inputs") {
  ESGains g{2.0, 4.0, 1.0 / std::sqrt(6 * pi)};
  auto [u1, u2] = nonholonomic_inputs(0.0, Vec2(1, 0), g);
  CHECK(u2 == doctest::Approx(2 * pi * std::sqrt(6 * pi)));
  CHECK(u1 == doctest::Approx(std::sqrt(4 * pi * 2.0 / 4.0) / g.eps));
  auto [w1, w2] = nonholonomic_inputs(1.3, random_unit2(), g);
  CHECK(w2 == u2);
  (void)w1;
}

TEST_CASE("quarter-period signal pair") {
  auto [a, b] = phase_shift_pair(0.0, Vec2(1, 0), 4.0);
  CHECK(a == doctest::Approx(1.0));
  CHECK(std::abs(b) < 1e-15);
  double v = 0.37;
  Vec2 r = planar_rot(4.0 * v) * Vec2(1, 0);
  auto [c, d] = phase_shift_pair(v, Vec2(1, 0), 4.0);
  CHECK(c == doctest::Approx(r.dot(Vec2(1, 0))));
  CHECK(d == doctest::Approx(r.dot(Vec2(0, -1))));
  // Over one rotor turn at frozen V the two signals are orthogonal.
  const int n = 4000;
  double inner = 0.0;
  for (int k = 0; k < n; ++k) {
    double ang = 2 * pi * k / n;
    auto [s1, s2] = phase_shift_pair(v, Vec2(std::cos(ang), std::sin(ang)), 4.0);
    inner += s1 * s2 / n;
  }
  CHECK(std::abs(inner) < 1e-6);
}

TEST_CASE("non-switching law is the seeking input on one potential") {
  ESGains g{1.0, 4.0, 0.2};
  OscillatorBank bank{{{3, 1}, {2, 1}, {1, 1}}, 0.2};
  std::vector<Vec2> etas{random_unit2(), random_unit2(), random_unit2()};
  auto u = baseline_nonhybrid(0.8, etas, bank, g);
  REQUIRE(u.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(u[i] == es_input(0.8, etas[i], bank.periods[i].value(), g));
}

TEST_CASE("rational periods") {
  CHECK(parse_rational("3") == Rational{3, 1});
  CHECK(parse_rational("1/2") == Rational{1, 2});
  CHECK(parse_rational("0.25") == Rational{1, 4});
  CHECK(parse_rational("4/6") == Rational{2, 3});
  CHECK_THROWS_AS(parse_rational("-1"), PreconditionViolated);
  CHECK_THROWS_AS(parse_rational("1/0"), PreconditionViolated);
  CHECK_THROWS_AS(parse_rational("abc"), PreconditionViolated);
  CHECK(common_period({{1, 1}, {2, 1}, {3, 1}}) == Rational{6, 1});
  CHECK(common_period({{1, 2}, {1, 3}}) == Rational{1, 1});
  CHECK(common_period({{3, 2}}) == Rational{3, 2});

  OscillatorBank dup{{{1, 1}, {2, 2}}, 0.2};
  CHECK_THROWS_AS(dup.validate(), PreconditionViolated);
  OscillatorBank ok{{{1, 1}, {2, 1}}, 0.2};
  CHECK_NOTHROW(ok.validate());
  ESGains bad{1.0, 0.0, 0.2};
  CHECK_THROWS_AS(bad.validate(), PreconditionViolated);
}

TEST_CASE("Gaussian well disturbance") {
  Perturbation d;
  CHECK_FALSE(d.active());
  d.a = 0.15;
  d.sigma = 0.35;
  d.center = Vec2(0, -1);
  CHECK(d.active());
  Vec p(2);
  p << std::sin(0.3), -std::cos(0.3);
  Vec f = d.field(ManifoldKind::Circle, p);
  CHECK(std::abs(f.dot(p)) < 1e-15);
  Vec c = d.center;
  Vec diff = c - p;
  Vec tangent = diff - diff.dot(p) * p;
  Vec expect = (2 * d.a / (d.sigma * d.sigma)) * std::exp(-diff.squaredNorm() / (d.sigma * d.sigma)) * tangent;
  CHECK((f - expect).norm() < 1e-15);
  // The well pulls towards its center.
  CHECK(f.dot(diff) > 0.0);
}
