#include <cmath>
#include <cstdio>

#include "trk/error.hpp"
#include "trk/nmea.hpp"
#include "trk/simkit.hpp"

namespace trk::sim {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string render_angle(Angle a, int degree_digits) {
  const std::int64_t u = a.units < 0 ? -a.units : a.units;
  const std::int64_t deg = u / Angle::kPerDegree;
  const std::int64_t rem = u % Angle::kPerDegree;
  char buf[24];
  std::snprintf(buf, sizeof buf, "%0*lld%02lld.%04lld", degree_digits, static_cast<long long>(deg),
                static_cast<long long>(rem / 10'000), static_cast<long long>(rem % 10'000));
  return buf;
}

std::int64_t lerp(std::int64_t a, std::int64_t b, double frac) {
  return a + std::llround(static_cast<double>(b - a) * frac);
}

// Course over ground from the segment direction, degrees true.
std::string course_between(const Waypoint& a, const Waypoint& b) {
  const double dlat = static_cast<double>(b.lat.units - a.lat.units);
  const double mid_lat = (a.lat.degrees() + b.lat.degrees()) / 2.0 * kPi / 180.0;
  const double dlon = static_cast<double>(b.lon.units - a.lon.units) * std::cos(mid_lat);
  if (dlat == 0.0 && dlon == 0.0) return "0.00";
  double deg = std::atan2(dlon, dlat) * 180.0 / kPi;
  if (deg < 0) deg += 360.0;
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.2f", deg);
  return buf;
}

}  // namespace

Angle Angle::from_degrees(double deg) { return Angle{std::llround(deg * kPerDegree)}; }

std::string render_latitude(Angle lat) { return render_angle(lat, 2); }
std::string render_longitude(Angle lon) { return render_angle(lon, 3); }

std::string render_speed(std::int64_t centiknots) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%lld.%02lld", static_cast<long long>(centiknots / 100),
                static_cast<long long>(centiknots % 100));
  return buf;
}

std::string render_time(UtcTime t) {
  using namespace std::chrono;
  const auto day = floor<days>(t);
  const hh_mm_ss hms{duration_cast<milliseconds>(t - day)};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d%02d%02d.%03d", static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()), static_cast<int>(hms.seconds().count()),
                static_cast<int>(hms.subseconds().count()));
  return buf;
}

std::string render_date(UtcTime t) {
  using namespace std::chrono;
  const year_month_day ymd{floor<days>(t)};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02u%02u%02d", static_cast<unsigned>(ymd.day()),
                static_cast<unsigned>(ymd.month()), static_cast<int>(ymd.year()) % 100);
  return buf;
}

UtcTime default_start_utc() {
  using namespace std::chrono;
  return sys_days{year{1998} / May / 12} + hours{16} + minutes{12} + seconds{29} + milliseconds{487};
}

std::vector<TimedSentence> gen_nmea(const Route& route, Micros sample_interval, UtcTime start_utc,
                                    Micros byte_time) {
  if (route.empty()) throw Error(Errc::BadRoute, "route has no waypoints");
  if (sample_interval <= Micros{0}) throw Error(Errc::BadRoute, "sample interval must be positive");
  for (std::size_t i = 1; i < route.size(); ++i) {
    if (route[i].t <= route[i - 1].t) {
      throw Error(Errc::BadRoute, "waypoint " + std::to_string(i) + " timestamp not increasing",
                  static_cast<int>(i));
    }
  }

  std::vector<TimedSentence> out;
  std::size_t seg = 0;
  for (Micros t = route.front().t; t <= route.back().t; t += sample_interval) {
    while (seg + 1 < route.size() && route[seg + 1].t <= t) ++seg;

    const Waypoint& a = route[seg];
    Waypoint here = a;
    std::string course = "0.00";
    if (seg + 1 < route.size()) {
      const Waypoint& b = route[seg + 1];
      const double frac = static_cast<double>((t - a.t).count()) / static_cast<double>((b.t - a.t).count());
      here.lat.units = lerp(a.lat.units, b.lat.units, frac);
      here.lon.units = lerp(a.lon.units, b.lon.units, frac);
      here.speed_centiknots = lerp(a.speed_centiknots, b.speed_centiknots, frac);
      course = course_between(a, b);
    } else if (seg > 0) {
      course = course_between(route[seg - 1], a);
    }

    const UtcTime when = start_utc + t;
    nmea::GpsFix fix;
    fix.time_utc = render_time(when);
    fix.latitude = render_latitude(here.lat);
    fix.lat_hemi = here.lat.units < 0 ? 'S' : 'N';
    fix.longitude = render_longitude(here.lon);
    fix.lon_hemi = here.lon.units < 0 ? 'W' : 'E';
    fix.speed_knots = render_speed(here.speed_centiknots);
    fix.date = render_date(when);
    fix.valid = a.valid;

    nmea::GgaInfo gga;
    gga.time_utc = fix.time_utc;
    gga.latitude = fix.latitude;
    gga.lat_hemi = fix.lat_hemi;
    gga.longitude = fix.longitude;
    gga.lon_hemi = fix.lon_hemi;
    gga.quality = fix.valid ? 1 : 0;
    gga.num_satellites = fix.valid ? 7 : 0;
    gga.hdop = "1.0";
    gga.altitude_m = "9.0";

    std::string rmc = nmea::render_rmc(fix, course) + "\r\n";
    const Micros gga_at = t + byte_time * static_cast<std::int64_t>(rmc.size());
    out.push_back({t, std::move(rmc)});
    out.push_back({gga_at, nmea::render_gga(gga) + "\r\n"});
  }
  return out;
}

}  // namespace trk::sim
