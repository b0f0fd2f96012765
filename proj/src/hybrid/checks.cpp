#include "hyseek/hybrid/checks.hpp"

namespace hyseek {

std::vector<JumpDecreaseViolation> check_jump_decrease(const HybridArc& arc,
                                                       const std::string& v_channel, double delta,
                                                       double tol) {
  const auto& v = arc.channel(v_channel);
  arc.channel("mu");
  std::vector<JumpDecreaseViolation> out;
  for (std::size_t k = 0; k < arc.jumps().size(); ++k) {
    const auto& jr = arc.jumps()[k];
    if (jr.reason.find("synergy") == std::string::npos) continue;
    double pre = v[jr.pre_sample];
    double post = v[jr.post_sample];
    if (post > pre - delta + tol) out.push_back({k, pre, post});
  }
  return out;
}

}  // namespace hyseek
