#include "hyseek/synergistic/family.hpp"

#include <limits>

#include "hyseek/errors.hpp"

namespace hyseek {

Vec PotentialFamily::tangent_grad(int q, const Vec& p) const {
  return tangent_project(kind_, p, grad(q, p));
}

double synergy_mu(const PotentialFamily& fam, const Vec& p, int q) {
  double own = 0.0;
  double least = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= fam.modes(); ++m) {
    double v = fam.eval(m, p);
    if (m == q) own = v;
    least = std::min(least, v);
  }
  return own - least;
}

int argmin_mode(const PotentialFamily& fam, const Vec& p) {
  int best = 1;
  double best_v = fam.eval(1, p);
  for (int m = 2; m <= fam.modes(); ++m) {
    double v = fam.eval(m, p);
    if (v < best_v) {
      best_v = v;
      best = m;
    }
  }
  return best;
}

int switch_jump(const PotentialFamily& fam, const Vec& p, int q, double tol) {
  double mu = synergy_mu(fam, p, q);
  if (mu < fam.delta() - tol) {
    throw PreconditionViolated("mode switch requested with mu = " + std::to_string(mu) +
                               " below delta = " + std::to_string(fam.delta()));
  }
  return argmin_mode(fam, p);
}

}  // namespace hyseek
