#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hyseek/hybrid/system.hpp"

namespace hyseek {

struct JumpRecord {
  HybridTime time;  // (t, j) of the pre-jump state
  Vec pre;
  Vec post;
  std::string reason;
  std::size_t pre_sample = 0;   // index into HybridArc samples
  std::size_t post_sample = 0;
};

enum class Termination { Horizon, MaxJumps };

/// A solution trace on a hybrid time domain, sampled at integration steps.
/// Channels are stored column-wise, one value per sample.
class HybridArc {
 public:
  HybridArc() = default;
  HybridArc(int dim, std::vector<std::string> channel_names);

  void push_sample(HybridTime time, const Vec& x, std::span<const double> channel_values);

  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  int dim() const { return dim_; }

  const std::vector<HybridTime>& times() const { return times_; }
  const std::vector<Vec>& states() const { return states_; }
  const Vec& state(std::size_t i) const { return states_[i]; }
  HybridTime time(std::size_t i) const { return times_[i]; }

  const std::vector<std::string>& channel_names() const { return channel_names_; }
  bool has_channel(std::string_view name) const;
  /// Throws MissingChannel.
  const std::vector<double>& channel(std::string_view name) const;
  /// Appends a derived channel computed after the fact.
  void add_channel(std::string name, std::vector<double> values);

  std::vector<JumpRecord>& jumps() { return jumps_; }
  const std::vector<JumpRecord>& jumps() const { return jumps_; }

  Termination termination = Termination::Horizon;
  /// Jumps whose post-state was in the jump set or outside the flow set.
  int post_jump_violations = 0;

  /// 64-bit FNV-1a over the bit patterns of every sample, channel value and
  /// jump record. Equal arcs hash equally; used for determinism checks.
  std::uint64_t content_hash() const;

 private:
  int dim_ = 0;
  std::vector<HybridTime> times_;
  std::vector<Vec> states_;
  std::vector<std::string> channel_names_;
  std::vector<std::vector<double>> channel_values_;
  std::vector<JumpRecord> jumps_;
};

/// Incremental FNV-1a hasher.
class Fnv1a {
 public:
  void bytes(const void* data, std::size_t n);
  void value(double v) { bytes(&v, sizeof v); }
  void value(std::int64_t v) { bytes(&v, sizeof v); }
  void text(std::string_view s) { bytes(s.data(), s.size()); }
  std::uint64_t digest() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace hyseek
