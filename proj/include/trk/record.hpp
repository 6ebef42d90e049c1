#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "trk/nmea.hpp"

namespace trk {

// Fixed-width ASCII packing of the five stored parameters:
//
//   [0,10) time  [10,19) latitude  [19] N/S  [20,30) longitude  [30] E/W
//   [31,37) speed, left-justified, space padded  [37,43) date
class TrackRecord {
 public:
  static constexpr std::size_t kSize = 43;
  static constexpr std::size_t kBits = kSize * 8;

  struct Layout {
    static constexpr std::size_t kTime = 0, kTimeLen = 10;
    static constexpr std::size_t kLat = 10, kLatLen = 9;
    static constexpr std::size_t kLatHemi = 19;
    static constexpr std::size_t kLon = 20, kLonLen = 10;
    static constexpr std::size_t kLonHemi = 30;
    static constexpr std::size_t kSpeed = 31, kSpeedLen = 6;
    static constexpr std::size_t kDate = 37, kDateLen = 6;
  };

  TrackRecord() { bytes_.fill(0); }
  explicit TrackRecord(std::span<const std::uint8_t, kSize> bytes);

  std::span<const std::uint8_t, kSize> bytes() const { return bytes_; }
  std::string_view text() const {
    return {reinterpret_cast<const char*>(bytes_.data()), kSize};
  }

  bool operator==(const TrackRecord&) const = default;

 private:
  friend TrackRecord encode(const nmea::GpsFix& fix);
  std::array<std::uint8_t, kSize> bytes_;
};

static_assert(TrackRecord::kBits == 344);
static_assert(TrackRecord::Layout::kDate + TrackRecord::Layout::kDateLen == TrackRecord::kSize);

TrackRecord encode(const nmea::GpsFix& fix);
nmea::GpsFix decode(const TrackRecord& record);

// What a fix looks like after a trip through storage: stored fixes are valid.
nmea::GpsFix normalize(nmea::GpsFix fix);

}  // namespace trk

namespace trk::csv {

// Column order: time,lat,lat_hemi,lon,lon_hemi,speed,date
std::string_view header();
std::string row(const nmea::GpsFix& fix);
// Inverse of row(); Errc::BadPattern on a malformed row.
nmea::GpsFix parse_row(std::string_view line);
std::string track(std::span<const TrackRecord> records);

}  // namespace trk::csv
