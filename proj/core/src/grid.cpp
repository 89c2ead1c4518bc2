#include "xyberry/grid.hpp"

#include <charconv>
#include <cmath>

#include "xyberry/errors.hpp"

namespace xyberry {

namespace {

double parse_number(std::string_view field, std::string_view whole) {
  // std::from_chars for double is available in libstdc++ 11.
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || field.empty()) {
    throw Error(ErrorKind::InvalidArgument,
                "malformed range '" + std::string(whole) + "': expected min:max:step");
  }
  return value;
}

}  // namespace

Range Range::parse(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c1 == std::string_view::npos) {
    // A single number is a one-point range.
    const double v = parse_number(text, text);
    return Range{v, v, 1.0};
  }
  if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos) {
    throw Error(ErrorKind::InvalidArgument,
                "malformed range '" + std::string(text) + "': expected min:max:step");
  }
  Range r{parse_number(text.substr(0, c1), text),
          parse_number(text.substr(c1 + 1, c2 - c1 - 1), text),
          parse_number(text.substr(c2 + 1), text)};
  if (!(r.step > 0.0) || !std::isfinite(r.step) || !std::isfinite(r.min) ||
      !std::isfinite(r.max)) {
    throw Error(ErrorKind::InvalidArgument,
                "range '" + std::string(text) + "' needs finite bounds and step > 0");
  }
  if (r.max < r.min) {
    throw Error(ErrorKind::InvalidArgument,
                "range '" + std::string(text) + "' has max < min");
  }
  return r;
}

std::vector<double> Range::points() const {
  const double tol = 1e-9 * step;
  const auto count = static_cast<long>(std::floor((max - min + tol) / step)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    out.push_back(min + static_cast<double>(i) * step);
  }
  return out;
}

std::string Range::to_string() const {
  return std::to_string(min) + ":" + std::to_string(max) + ":" + std::to_string(step);
}

}  // namespace xyberry
