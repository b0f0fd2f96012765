#pragma once

#include <memory>
#include <vector>

#include "hyseek/geometry.hpp"

namespace hyseek {

/// Indexed family of potentials V_1..V_N on an embedded manifold, all vanishing
/// only at the target. Modes are numbered from 1.
class PotentialFamily {
 public:
  virtual ~PotentialFamily() = default;

  int modes() const { return modes_; }
  double delta() const { return delta_; }
  const Vec& target() const { return target_; }
  ManifoldKind manifold() const { return kind_; }
  int dim() const { return static_cast<int>(target_.size()); }

  virtual double eval(int q, const Vec& p) const = 0;
  /// Ambient gradient of an extension of V_q off the manifold.
  virtual Vec grad(int q, const Vec& p) const = 0;
  /// The unwarped potential the family is built from.
  virtual double base(const Vec& p) const = 0;

  Vec tangent_grad(int q, const Vec& p) const;

 protected:
  PotentialFamily(ManifoldKind kind, Vec target, double delta, int modes)
      : kind_(kind), target_(std::move(target)), delta_(delta), modes_(modes) {}

 private:
  ManifoldKind kind_;
  Vec target_;
  double delta_;
  int modes_;
};

using FamilyPtr = std::shared_ptr<const PotentialFamily>;

/// V_q(p) - min over modes. Never negative.
double synergy_mu(const PotentialFamily& fam, const Vec& p, int q);
/// Mode of least value; ties go to the smallest index.
int argmin_mode(const PotentialFamily& fam, const Vec& p);
/// Mode after a synergistic jump. Throws PreconditionViolated if mu < delta - tol.
int switch_jump(const PotentialFamily& fam, const Vec& p, int q, double tol = 1e-9);

// Concrete families. `warps` holds the per-mode warping coefficients; the
// defaults are the two-mode synergistic choice, {0} gives the plain base
// potential and {0, 0} a degenerate duplicated family.

/// W(p) = 1 - <target, p>, V_q = W(exp(c_q W(p) S) p). delta in (0, 1).
FamilyPtr circle_family(const UnitVector2& target, double delta,
                        std::vector<double> warps = {0.5, -0.5});

/// W(p) = 1 - <target, p>, V_q = W(exp(c_q W(p) [perp]x) p). delta in (0, 1).
/// Throws NotOrthogonal unless <perp, target> = 0 within 1e-10.
FamilyPtr sphere_family(const UnitVector3& target, const UnitVector3& perp, double delta,
                        std::vector<double> warps = {0.5, -0.5});

/// W(R) = tr(A (I - R)) with A = 3 diag(w) / sum(w), V_q = W(exp(c_q W(R) [w/|w|]x) R),
/// posed on vec(R). Target is the identity. delta in (0, 1/2).
FamilyPtr so3_family(const Vec3& omega_tilde, double delta,
                     std::vector<double> warps = {0.25, -0.25});

/// On (rho, dir) in R x S^1: 1/2 (rho - rho*)^2 + sqrt((e^rho - e^rho*)^2 + 1) - 1 + W_q(dir)
/// with W_q the circle family around dir*. delta in (0, 1).
FamilyPtr obstacle_family(double rho_star, const UnitVector2& dir_star, double delta,
                          std::vector<double> warps = {0.5, -0.5});

/// Weight matrix of the attitude potential, 3 diag(w) / sum(w).
Mat3 attitude_weights(const Vec3& omega_tilde);

}  // namespace hyseek
