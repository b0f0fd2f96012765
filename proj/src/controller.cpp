#include "hyseek/controller.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "hyseek/errors.hpp"

namespace hyseek {

using std::numbers::pi;

void ESGains::validate() const {
  if (!(gamma > 0.0 && kappa > 0.0 && eps > 0.0)) {
    throw PreconditionViolated("gamma, kappa and eps must all be positive");
  }
}

Rational parse_rational(const std::string& text) {
  auto fail = [&] { throw PreconditionViolated("not a positive rational: '" + text + "'"); };
  Rational r;
  try {
    std::size_t slash = text.find('/');
    if (slash != std::string::npos) {
      std::size_t used = 0;
      r.num = std::stol(text.substr(0, slash), &used);
      if (used != slash) fail();
      std::string den = text.substr(slash + 1);
      r.den = std::stol(den, &used);
      if (used != den.size()) fail();
    } else {
      std::size_t dot = text.find('.');
      std::string digits = text;
      long den = 1;
      if (dot != std::string::npos) {
        std::size_t places = text.size() - dot - 1;
        if (places > 9) fail();
        digits = text.substr(0, dot) + text.substr(dot + 1);
        for (std::size_t i = 0; i < places; ++i) den *= 10;
      }
      std::size_t used = 0;
      r.num = std::stol(digits, &used);
      if (used != digits.size()) fail();
      r.den = den;
    }
  } catch (const std::logic_error&) {
    fail();
  }
  if (r.num <= 0 || r.den <= 0) fail();
  long g = std::gcd(r.num, r.den);
  r.num /= g;
  r.den /= g;
  return r;
}

Rational common_period(const std::vector<Rational>& periods) {
  if (periods.empty()) throw PreconditionViolated("no periods");
  // lcm(a/b, c/d) = lcm(a, c) / gcd(b, d) for reduced fractions.
  Rational acc = periods.front();
  for (std::size_t i = 1; i < periods.size(); ++i) {
    acc.num = std::lcm(acc.num, periods[i].num);
    acc.den = std::gcd(acc.den, periods[i].den);
  }
  return acc;
}

void OscillatorBank::validate() const {
  if (!(eps > 0.0)) throw PreconditionViolated("eps must be positive");
  for (std::size_t i = 0; i < periods.size(); ++i) {
    if (periods[i].num <= 0 || periods[i].den <= 0) throw PreconditionViolated("periods must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (periods[i] == periods[j]) throw PreconditionViolated("oscillator periods must be distinct");
  }
}

double OscillatorBank::angular_speed(int i) const {
  return 2.0 * pi / (periods[static_cast<std::size_t>(i)].value() * eps * eps);
}

double es_amplitude(const ESGains& g, double period) {
  return std::sqrt(4.0 * pi * g.gamma / (period * g.kappa)) / g.eps;
}

double es_input(double v, const Vec2& eta, double period, const ESGains& g) {
  // exp(a S) e1 = (cos a, -sin a).
  double a = g.kappa * v;
  return es_amplitude(g, period) * (std::cos(a) * eta[0] - std::sin(a) * eta[1]);
}

Vec2 oscillator_flow(const Vec2& eta, double period, double eps) {
  double w = 2.0 * pi / (period * eps * eps);
  return Vec2(-w * eta[1], w * eta[0]);
}

std::vector<double> avg_feedback(const Vec& grad_v, const std::vector<Vec>& fields, double gamma) {
  std::vector<double> u;
  u.reserve(fields.size());
  for (const auto& f : fields) u.push_back(-gamma * grad_v.dot(f));
  return u;
}

Vec averaged_field(const Vec& f0, const Vec& grad_v, const std::vector<Vec>& fields, double gamma) {
  Vec out = f0;
  for (const auto& f : fields) out -= gamma * grad_v.dot(f) * f;
  return out;
}

std::pair<double, double> nonholonomic_inputs(double v, const Vec2& eta, const ESGains& g) {
  return {es_input(v, eta, 1.0, g), 2.0 * pi / g.eps};
}

std::pair<double, double> phase_shift_pair(double v, const Vec2& eta, double kappa) {
  Vec2 lead = planar_rot(kappa * v) * Vec2::UnitX();
  return {lead.dot(eta), lead.dot(planar_rot(pi / 2.0) * eta)};
}

std::vector<double> baseline_nonhybrid(double v_single, const std::vector<Vec2>& etas,
                                       const OscillatorBank& bank, const ESGains& g) {
  std::vector<double> u;
  for (int i = 0; i < bank.size(); ++i) {
    u.push_back(es_input(v_single, etas[static_cast<std::size_t>(i)], bank.periods[i].value(), g));
  }
  return u;
}

Vec Perturbation::field(ManifoldKind kind, const Vec& p) const {
  if (!active()) return Vec::Zero(p.size());
  Vec diff = center - p;
  double w = (2.0 * a / (sigma * sigma)) * std::exp(-diff.squaredNorm() / (sigma * sigma));
  return w * tangent_project(kind, p, diff);
}

}  // namespace hyseek
