#pragma once

#include <utility>
#include <vector>

#include "hyseek/geometry.hpp"

namespace hyseek {

struct ESGains {
  double gamma = 1.0;
  double kappa = 4.0;
  double eps = 0.2;

  /// Throws PreconditionViolated unless all three are positive.
  void validate() const;
};

/// Positive rational number num/den.
struct Rational {
  long num = 1;
  long den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational& a, const Rational& b) { return a.num * b.den == b.num * a.den; }
};

/// Parses "3", "1/2" or a finite decimal like "0.25". Throws PreconditionViolated.
Rational parse_rational(const std::string& text);
/// Least positive T that every period divides.
Rational common_period(const std::vector<Rational>& periods);

/// Oscillator bank: one planar rotor per period, all periods distinct.
struct OscillatorBank {
  std::vector<Rational> periods;
  double eps = 0.2;

  /// Throws PreconditionViolated on repeated or non-positive periods.
  void validate() const;
  int size() const { return static_cast<int>(periods.size()); }
  /// Angular speed 2 pi / (T_i eps^2).
  double angular_speed(int i) const;
};

/// Input amplitude eps^-1 sqrt(4 pi gamma / (T kappa)).
double es_amplitude(const ESGains& g, double period);

/// eps^-1 sqrt(4 pi gamma / (T kappa)) <exp(kappa V S) e1, eta>.
double es_input(double v, const Vec2& eta, double period, const ESGains& g);

/// d eta / dt. The rotor turns counter-clockwise, eta' = -(2 pi / (T eps^2)) S eta;
/// with the input above this direction makes the averaged flow descend V.
Vec2 oscillator_flow(const Vec2& eta, double period, double eps);

/// Model-based comparator u_i = -gamma <grad V, f_i>, where f_i already carries theta_i.
std::vector<double> avg_feedback(const Vec& grad_v, const std::vector<Vec>& fields, double gamma);

/// f0 - gamma sum_i <grad V, f_i> f_i.
Vec averaged_field(const Vec& f0, const Vec& grad_v, const std::vector<Vec>& fields, double gamma);

/// Unicycle inputs: the seeking input on the single rotor (T = 1) and the
/// constant heading spin 2 pi / eps.
std::pair<double, double> nonholonomic_inputs(double v, const Vec2& eta, const ESGains& g);

/// (<exp(kappa V S) e1, eta>, <exp(kappa V S) e1, rot(pi/2) eta>): the second
/// signal is the first one a quarter period later.
std::pair<double, double> phase_shift_pair(double v, const Vec2& eta, double kappa);

/// Inputs of the non-switching law: es_input driven by one fixed potential value.
std::vector<double> baseline_nonhybrid(double v_single, const std::vector<Vec2>& etas,
                                       const OscillatorBank& bank, const ESGains& g);

/// Additive tangent disturbance with a Gaussian well of depth a at `center`:
/// d(p) = (2a / sigma^2) P_p(center - p) exp(-|p - center|^2 / sigma^2).
struct Perturbation {
  double a = 0.0;
  double sigma = 0.5;
  Vec center;

  bool active() const { return a != 0.0 && center.size() > 0; }
  /// Ambient vector in the tangent space at p.
  Vec field(ManifoldKind kind, const Vec& p) const;
};

}  // namespace hyseek
