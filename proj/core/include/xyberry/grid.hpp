#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace xyberry {

/// Sampling range `min:max:step`: includes min, excludes max unless max lies
/// within 1e-9 * step of a grid point, in which case max is included.
/// Points are generated as min + i * step (no accumulation drift).
struct Range {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  static Range parse(std::string_view text);
  std::vector<double> points() const;
  std::string to_string() const;
};

}  // namespace xyberry
