#include "hyseek/hybrid/arc.hpp"

#include <algorithm>

#include "hyseek/errors.hpp"

namespace hyseek {

HybridArc::HybridArc(int dim, std::vector<std::string> channel_names)
    : dim_(dim),
      channel_names_(std::move(channel_names)),
      channel_values_(channel_names_.size()) {}

void HybridArc::push_sample(HybridTime time, const Vec& x,
                            std::span<const double> channel_values) {
  times_.push_back(time);
  states_.push_back(x);
  for (std::size_t c = 0; c < channel_values_.size(); ++c) {
    channel_values_[c].push_back(channel_values[c]);
  }
}

bool HybridArc::has_channel(std::string_view name) const {
  return std::find(channel_names_.begin(), channel_names_.end(), name) != channel_names_.end();
}

const std::vector<double>& HybridArc::channel(std::string_view name) const {
  auto it = std::find(channel_names_.begin(), channel_names_.end(), name);
  if (it == channel_names_.end()) throw MissingChannel(std::string(name));
  return channel_values_[static_cast<std::size_t>(it - channel_names_.begin())];
}

void HybridArc::add_channel(std::string name, std::vector<double> values) {
  if (values.size() != times_.size()) {
    throw PreconditionViolated("channel '" + name + "' length differs from sample count");
  }
  channel_names_.push_back(std::move(name));
  channel_values_.push_back(std::move(values));
}

std::uint64_t HybridArc::content_hash() const {
  Fnv1a h;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    h.value(times_[i].t);
    h.value(static_cast<std::int64_t>(times_[i].j));
    h.bytes(states_[i].data(), sizeof(double) * static_cast<std::size_t>(states_[i].size()));
  }
  for (std::size_t c = 0; c < channel_values_.size(); ++c) {
    h.text(channel_names_[c]);
    h.bytes(channel_values_[c].data(), sizeof(double) * channel_values_[c].size());
  }
  for (const auto& jr : jumps_) {
    h.value(jr.time.t);
    h.value(static_cast<std::int64_t>(jr.time.j));
    h.bytes(jr.pre.data(), sizeof(double) * static_cast<std::size_t>(jr.pre.size()));
    h.bytes(jr.post.data(), sizeof(double) * static_cast<std::size_t>(jr.post.size()));
    h.text(jr.reason);
  }
  return h.digest();
}

void Fnv1a::bytes(const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h_ ^= p[i];
    h_ *= 0x100000001b3ULL;
  }
}

}  // namespace hyseek
