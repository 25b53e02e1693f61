#pragma once

#include <compare>
#include <string>
#include <vector>

namespace tbh {

enum class TimeBin : unsigned char { none, early, late };

/// Identifies one bosonic mode: a spatial path plus an optional time bin.
/// Registers address modes exclusively through labels, never positions.
struct ModeLabel {
  std::string spatial;
  TimeBin bin = TimeBin::none;

  friend bool operator==(const ModeLabel&, const ModeLabel&) = default;
  friend std::strong_ordering operator<=>(const ModeLabel& a, const ModeLabel& b) {
    if (auto c = a.spatial <=> b.spatial; c != 0) return c;
    return a.bin <=> b.bin;
  }
};

inline ModeLabel mode(std::string spatial) { return {std::move(spatial), TimeBin::none}; }
inline ModeLabel early(std::string spatial) { return {std::move(spatial), TimeBin::early}; }
inline ModeLabel late(std::string spatial) { return {std::move(spatial), TimeBin::late}; }
inline ModeLabel in_bin(std::string spatial, TimeBin bin) { return {std::move(spatial), bin}; }

/// "A.e", "A.l" or "B".
std::string to_string(const ModeLabel& label);
std::string to_string(TimeBin bin);

/// Throws ModeError if a label appears twice.
void require_unique(const std::vector<ModeLabel>& labels);

}  // namespace tbh
