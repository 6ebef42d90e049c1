#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "trk/error.hpp"
#include "trk/simkit.hpp"
#include "trk/wire.hpp"

namespace trk::sim {

namespace {

// Longest generated RMC+GGA burst is well under this at 9600 bps.
constexpr Micros kMinSampleInterval{500'000};
// ID byte plus the 4-byte ack, with a byte of slack.
constexpr std::int64_t kGrantBytes = 6;

[[noreturn]] void config_error(const std::string& where, const std::string& what,
                               std::optional<int> line = std::nullopt) {
  throw Error(Errc::ConfigError, where + ": " + what, line);
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text, int line, std::string_view key) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    config_error("line " + std::to_string(line), "bad number '" + std::string(text) + "' for " + std::string(key),
                 line);
  }
  return value;
}

double parse_double(std::string_view text, int line, std::string_view key) {
  try {
    std::size_t used = 0;
    const std::string s(text);
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    config_error("line " + std::to_string(line), "bad number '" + std::string(text) + "' for " + std::string(key),
                 line);
  }
}

Micros parse_dur(std::string_view text, int line, std::string_view key) {
  try {
    return parse_duration(text);
  } catch (const std::exception& e) {
    config_error("line " + std::to_string(line), std::string(key) + ": " + e.what(), line);
  }
}

UtcTime parse_utc(std::string_view text, int line) {
  // YYYY-MM-DDThh:mm:ss[.fff]
  int y = 0;
  unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0;
  int used = 0;
  const std::string str(text);
  const int n = std::sscanf(str.c_str(), "%4d-%2u-%2uT%2u:%2u:%2u%n", &y, &mo, &d, &h, &mi, &s, &used);
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{mo}, day{d}};
  std::int64_t ms = 0;
  bool ok = n == 6 && ymd.ok() && h <= 23 && mi <= 59 && s <= 59;
  if (ok && static_cast<std::size_t>(used) < str.size()) {
    const std::string_view frac = std::string_view(str).substr(static_cast<std::size_t>(used));
    ok = frac.size() >= 2 && frac.size() <= 4 && frac[0] == '.' &&
         std::all_of(frac.begin() + 1, frac.end(), [](char c) { return c >= '0' && c <= '9'; });
    if (ok) {
      for (std::size_t i = 1; i < 4; ++i) ms = ms * 10 + (i < frac.size() ? frac[i] - '0' : 0);
    }
  }
  if (!ok) config_error("line " + std::to_string(line), "bad start_utc '" + str + "'", line);
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} + milliseconds{ms};
}

}  // namespace

void Scenario::validate() const {
  if (sample_interval < kMinSampleInterval) config_error("sample_interval", "must be at least 500ms");
  if (duration <= Micros{0}) config_error("duration", "must be positive");
  if (ack_timeout <= Micros{0}) config_error("ack_timeout", "must be positive");
  if (max_download_retries < 0) config_error("max_download_retries", "must be non-negative");
  if (bs.broadcast_period <= Micros{0}) config_error("broadcast_period", "must be positive");
  if (bs.grant_timeout <= ack_timeout) config_error("grant_timeout", "must exceed ack_timeout");
  try {
    channel.validate();
  } catch (const Error& e) {
    config_error("channel", e.what());
  }

  std::set<std::uint8_t> seen;
  for (std::size_t i = 0; i < units.size(); ++i) {
    const UnitSpec& u = units[i];
    const std::string where = "units[" + std::to_string(i) + "]";
    if (!wire::is_valid_unit_id(u.unit_id)) {
      config_error(where + ".unit_id", "id " + std::to_string(u.unit_id) + " is reserved (0 and ASCII digits)");
    }
    if (!seen.insert(u.unit_id).second) config_error(where + ".unit_id", "duplicate id " + std::to_string(u.unit_id));

    const Micros slot = Micros{10'000} * u.unit_id;
    if (slot + channel.byte_time * kGrantBytes >= bs.broadcast_period) {
      config_error(where + ".unit_id", "priority slot of id " + std::to_string(u.unit_id) +
                                           " does not fit in broadcast_period");
    }

    if (u.route.empty()) config_error(where + ".route", "needs at least one waypoint");
    for (std::size_t w = 0; w < u.route.size(); ++w) {
      const Waypoint& wp = u.route[w];
      const std::string wpath = where + ".route[" + std::to_string(w) + "]";
      if (w > 0 && wp.t <= u.route[w - 1].t) config_error(wpath + ".t", "timestamps must strictly increase");
      if (wp.t < Micros{0}) config_error(wpath + ".t", "must be non-negative");
      if (wp.lat.units < -90 * Angle::kPerDegree || wp.lat.units > 90 * Angle::kPerDegree) {
        config_error(wpath + ".lat", "out of range");
      }
      if (wp.lon.units < -180 * Angle::kPerDegree || wp.lon.units > 180 * Angle::kPerDegree) {
        config_error(wpath + ".lon", "out of range");
      }
      if (wp.speed_centiknots < 0 || wp.speed_centiknots >= 100'000) {
        config_error(wpath + ".speed", "must be within [0, 1000) knots");
      }
    }
    for (std::size_t w = 0; w < u.rendezvous.size(); ++w) {
      const std::string rpath = where + ".rendezvous[" + std::to_string(w) + "]";
      if (u.rendezvous[w].to <= u.rendezvous[w].from) config_error(rpath, "window end must follow its start");
      if (w > 0 && u.rendezvous[w].from < u.rendezvous[w - 1].to) {
        config_error(rpath, "windows must be ordered and disjoint");
      }
    }
    if (u.misreport_count_attempts < 0) config_error(where + ".fault", "count_mismatch must be non-negative");
  }
}

Scenario parse_scenario(std::string_view text) {
  Scenario sc;
  std::vector<int> unit_lines;
  std::set<int> seen_ids;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;

  auto require_unit = [&](std::string_view key) -> UnitSpec& {
    if (sc.units.empty()) {
      config_error("line " + std::to_string(line_no), std::string(key) + " outside a unit block", line_no);
    }
    return sc.units.back();
  };
  auto arity = [&](const std::vector<std::string_view>& tok, std::size_t lo, std::size_t hi) {
    if (tok.size() < lo || tok.size() > hi) {
      config_error("line " + std::to_string(line_no), "wrong number of values for " + std::string(tok[0]), line_no);
    }
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    const std::string_view key = tok[0];

    if (key == "duration") {
      arity(tok, 2, 2);
      sc.duration = parse_dur(tok[1], line_no, key);
    } else if (key == "sample_interval") {
      arity(tok, 2, 2);
      sc.sample_interval = parse_dur(tok[1], line_no, key);
    } else if (key == "start_utc") {
      arity(tok, 2, 2);
      sc.start_utc = parse_utc(tok[1], line_no);
    } else if (key == "seed") {
      arity(tok, 2, 2);
      sc.channel.rng_seed = parse_number<std::uint64_t>(tok[1], line_no, key);
    } else if (key == "corruption_rate") {
      arity(tok, 2, 2);
      sc.channel.corruption_rate = parse_double(tok[1], line_no, key);
    } else if (key == "broadcast_period") {
      arity(tok, 2, 2);
      sc.bs.broadcast_period = parse_dur(tok[1], line_no, key);
    } else if (key == "grant_timeout") {
      arity(tok, 2, 2);
      sc.bs.grant_timeout = parse_dur(tok[1], line_no, key);
    } else if (key == "ack_timeout") {
      arity(tok, 2, 2);
      sc.ack_timeout = parse_dur(tok[1], line_no, key);
    } else if (key == "max_download_retries") {
      arity(tok, 2, 2);
      sc.max_download_retries = parse_number<int>(tok[1], line_no, key);
    } else if (key == "unit") {
      arity(tok, 2, 2);
      const int id = parse_number<int>(tok[1], line_no, key);
      if (id < 1 || id > 255) config_error("line " + std::to_string(line_no), "unit id out of range", line_no);
      if (!seen_ids.insert(id).second) {
        config_error("line " + std::to_string(line_no), "duplicate unit id " + std::to_string(id), line_no);
      }
      sc.units.push_back(UnitSpec{static_cast<std::uint8_t>(id), {}, {}, 0, false});
      unit_lines.push_back(line_no);
    } else if (key == "waypoint") {
      arity(tok, 5, 6);
      UnitSpec& u = require_unit(key);
      Waypoint wp;
      wp.t = parse_dur(tok[1], line_no, key);
      wp.lat = Angle::from_degrees(parse_double(tok[2], line_no, "latitude"));
      wp.lon = Angle::from_degrees(parse_double(tok[3], line_no, "longitude"));
      wp.speed_centiknots = std::llround(parse_double(tok[4], line_no, "speed") * 100.0);
      if (tok.size() == 6) {
        if (tok[5] != "invalid") config_error("line " + std::to_string(line_no), "expected 'invalid'", line_no);
        wp.valid = false;
      }
      u.route.push_back(wp);
    } else if (key == "rendezvous") {
      arity(tok, 3, 3);
      require_unit(key).rendezvous.push_back({parse_dur(tok[1], line_no, key), parse_dur(tok[2], line_no, key)});
    } else if (key == "fault") {
      arity(tok, 2, 3);
      UnitSpec& u = require_unit(key);
      if (tok[1] == "count_mismatch") {
        u.misreport_count_attempts = tok.size() == 3 ? parse_number<int>(tok[2], line_no, key) : 1;
      } else if (tok[1] == "ack_loss" && tok.size() == 2) {
        u.drop_acks = true;
      } else {
        config_error("line " + std::to_string(line_no), "unknown fault '" + std::string(tok[1]) + "'", line_no);
      }
    } else {
      config_error("line " + std::to_string(line_no), "unknown key '" + std::string(key) + "'", line_no);
    }
  }

  try {
    sc.validate();
  } catch (const Error& e) {
    // Point at the unit block when the failing field belongs to one.
    const std::string msg = e.what();
    std::optional<int> line;
    if (msg.rfind("units[", 0) == 0) {
      const std::size_t idx = std::stoul(msg.substr(6));
      if (idx < unit_lines.size()) line = unit_lines[idx];
    }
    throw Error(Errc::ConfigError, line ? "line " + std::to_string(*line) + ": " + msg : msg, line);
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace trk::sim
