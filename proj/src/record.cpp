#include "trk/record.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "trk/error.hpp"

namespace trk {

namespace {

using L = TrackRecord::Layout;

void check_fix(const nmea::GpsFix& fix) {
  if (!nmea::is_time_text(fix.time_utc)) throw Error(Errc::BadPattern, "time '" + fix.time_utc + "'");
  if (!nmea::is_latitude_text(fix.latitude)) throw Error(Errc::BadPattern, "latitude '" + fix.latitude + "'");
  if (!nmea::is_longitude_text(fix.longitude)) throw Error(Errc::BadPattern, "longitude '" + fix.longitude + "'");
  if (!nmea::is_date_text(fix.date)) throw Error(Errc::BadPattern, "date '" + fix.date + "'");
  if (!nmea::is_speed_text(fix.speed_knots)) throw Error(Errc::BadPattern, "speed '" + fix.speed_knots + "'");
  if (fix.lat_hemi != 'N' && fix.lat_hemi != 'S') throw Error(Errc::BadHemisphere, "latitude hemisphere");
  if (fix.lon_hemi != 'E' && fix.lon_hemi != 'W') throw Error(Errc::BadHemisphere, "longitude hemisphere");
}

}  // namespace

TrackRecord::TrackRecord(std::span<const std::uint8_t, kSize> bytes) {
  std::copy(bytes.begin(), bytes.end(), bytes_.begin());
}

TrackRecord encode(const nmea::GpsFix& fix) {
  if (fix.speed_knots.size() > L::kSpeedLen) {
    throw Error(Errc::SpeedOverflow, "speed '" + fix.speed_knots + "' exceeds 6 characters");
  }
  check_fix(fix);

  TrackRecord rec;
  auto put = [&](std::size_t at, std::string_view s) {
    std::copy(s.begin(), s.end(), rec.bytes_.begin() + static_cast<std::ptrdiff_t>(at));
  };
  put(L::kTime, fix.time_utc);
  put(L::kLat, fix.latitude);
  rec.bytes_[L::kLatHemi] = static_cast<std::uint8_t>(fix.lat_hemi);
  put(L::kLon, fix.longitude);
  rec.bytes_[L::kLonHemi] = static_cast<std::uint8_t>(fix.lon_hemi);
  std::fill_n(rec.bytes_.begin() + L::kSpeed, L::kSpeedLen, std::uint8_t{' '});
  put(L::kSpeed, fix.speed_knots);
  put(L::kDate, fix.date);
  return rec;
}

nmea::GpsFix decode(const TrackRecord& record) {
  const std::string_view t = record.text();
  nmea::GpsFix fix;
  fix.time_utc = std::string(t.substr(L::kTime, L::kTimeLen));
  fix.latitude = std::string(t.substr(L::kLat, L::kLatLen));
  fix.lat_hemi = t[L::kLatHemi];
  fix.longitude = std::string(t.substr(L::kLon, L::kLonLen));
  fix.lon_hemi = t[L::kLonHemi];
  std::string_view speed = t.substr(L::kSpeed, L::kSpeedLen);
  speed = speed.substr(0, speed.find_last_not_of(' ') + 1);
  fix.speed_knots = std::string(speed);
  fix.date = std::string(t.substr(L::kDate, L::kDateLen));
  fix.valid = true;
  check_fix(fix);
  return fix;
}

nmea::GpsFix normalize(nmea::GpsFix fix) {
  fix.valid = true;
  return fix;
}

}  // namespace trk

namespace trk::csv {

std::string_view header() { return "time,lat,lat_hemi,lon,lon_hemi,speed,date"; }

std::string row(const nmea::GpsFix& fix) {
  std::string out;
  out.reserve(48);
  out += fix.time_utc;
  out += ',';
  out += fix.latitude;
  out += ',';
  out += fix.lat_hemi;
  out += ',';
  out += fix.longitude;
  out += ',';
  out += fix.lon_hemi;
  out += ',';
  out += fix.speed_knots;
  out += ',';
  out += fix.date;
  return out;
}

nmea::GpsFix parse_row(std::string_view line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cols.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (cols.size() != 7 || cols[2].size() != 1 || cols[4].size() != 1) {
    throw Error(Errc::BadPattern, "bad track row '" + std::string(line) + "'");
  }
  nmea::GpsFix fix{cols[0], cols[1], cols[2][0], cols[3], cols[4][0], cols[5], cols[6], true};
  check_fix(fix);
  return fix;
}

std::string track(std::span<const TrackRecord> records) {
  std::string out(header());
  out += '\n';
  for (const auto& r : records) {
    out += row(decode(r));
    out += '\n';
  }
  return out;
}

}  // namespace trk::csv
