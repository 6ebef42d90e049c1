#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace trk {

// Virtual time. Both timestamps and durations are integer microseconds.
using Micros = std::chrono::microseconds;

// 1 start + 8 data + 1 stop bit at 9600 bps is 1/960 s per byte (1041.67 us),
// rounded to the nearest whole microsecond.
inline constexpr std::int64_t kBaudRate = 9600;
inline constexpr std::int64_t kBitsPerUartFrame = 10;
inline constexpr Micros kUartByteTime{(1'000'000 * kBitsPerUartFrame + kBaudRate / 2) / kBaudRate};
static_assert(kUartByteTime.count() == 1042);

// Parses "250ms", "2m", "1h", "90s", "1500us". A bare integer is seconds.
Micros parse_duration(std::string_view text);

// "3h 10m", with " Ns" appended when seconds remain.
std::string format_hours_minutes(Micros d);

}  // namespace trk
