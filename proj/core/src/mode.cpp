#include "tbh/mode.hpp"

#include <algorithm>

#include "tbh/errors.hpp"

namespace tbh {

std::string to_string(TimeBin bin) {
  switch (bin) {
    case TimeBin::early: return "e";
    case TimeBin::late: return "l";
    case TimeBin::none: break;
  }
  return "";
}

std::string to_string(const ModeLabel& label) {
  if (label.bin == TimeBin::none) return label.spatial;
  return label.spatial + "." + to_string(label.bin);
}

void require_unique(const std::vector<ModeLabel>& labels) {
  std::vector<ModeLabel> sorted(labels);
  std::sort(sorted.begin(), sorted.end());
  auto dup = std::adjacent_find(sorted.begin(), sorted.end());
  if (dup != sorted.end()) throw ModeError("duplicate mode label " + to_string(*dup));
}

}  // namespace tbh
