#include "trk/time.hpp"

#include <charconv>
#include <stdexcept>

namespace trk {

Micros parse_duration(std::string_view text) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr == first || value < 0) {
    throw std::invalid_argument("bad duration '" + std::string(text) + "'");
  }
  const std::string_view unit(ptr, static_cast<std::size_t>(last - ptr));
  std::int64_t scale = 0;
  if (unit.empty() || unit == "s") {
    scale = 1'000'000;
  } else if (unit == "us") {
    scale = 1;
  } else if (unit == "ms") {
    scale = 1'000;
  } else if (unit == "m" || unit == "min") {
    scale = 60'000'000;
  } else if (unit == "h") {
    scale = 3'600'000'000;
  } else {
    throw std::invalid_argument("bad duration unit '" + std::string(unit) + "'");
  }
  return Micros{value * scale};
}

std::string format_hours_minutes(Micros d) {
  const auto total_s = std::chrono::duration_cast<std::chrono::seconds>(d).count();
  std::string out = std::to_string(total_s / 3600) + "h " + std::to_string(total_s % 3600 / 60) + "m";
  if (total_s % 60 != 0) out += " " + std::to_string(total_s % 60) + "s";
  return out;
}

}  // namespace trk
