#include "trk/nmea.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "trk/error.hpp"

namespace trk::nmea {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Matches a template where 'd' is a digit and any other char is literal.
bool matches_shape(std::string_view s, std::string_view shape) {
  if (s.size() != shape.size()) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (shape[i] == 'd' ? !is_digit(s[i]) : s[i] != shape[i]) return false;
  }
  return true;
}

bool is_unsigned_decimal(std::string_view s) {
  bool seen_digit = false;
  bool seen_dot = false;
  for (char c : s) {
    if (is_digit(c)) {
      seen_digit = true;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      return false;
    }
  }
  return seen_digit;
}

bool is_signed_decimal(std::string_view s) {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  return is_unsigned_decimal(s);
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

[[noreturn]] void bad_pattern(int field, std::string_view what) {
  throw Error(Errc::BadPattern,
              "field " + std::to_string(field) + ": bad " + std::string(what), field);
}

char hemisphere(const std::string& text, int field, char a, char b) {
  if (text.size() != 1 || (text[0] != a && text[0] != b)) {
    throw Error(Errc::BadHemisphere,
                "field " + std::to_string(field) + ": hemisphere '" + text + "'", field);
  }
  return text[0];
}

int small_int(const std::string& text, int field, std::string_view what) {
  if (text.empty() || !std::all_of(text.begin(), text.end(), is_digit) || text.size() > 4) {
    bad_pattern(field, what);
  }
  int value = 0;
  std::from_chars(text.data(), text.data() + text.size(), value);
  return value;
}

const std::string& field_at(const Sentence& s, int index) {
  return s.fields[static_cast<std::size_t>(index - 1)];
}

}  // namespace

ScanStep Scanner::feed(std::uint8_t byte) {
  const char c = static_cast<char>(byte);
  if (c == '$') {
    line_.assign(1, '$');
    in_line_ = true;
    return {};
  }
  if (!in_line_) return {};

  if (c == '\r' || c == '\n') {
    std::string line = std::move(line_);
    reset();
    const std::string_view tag = peek_tag(line);
    std::optional<MatchKind> kind;
    if (tag_matches(tag, MatchKind::Rmc)) {
      kind = MatchKind::Rmc;
    } else if (tag_matches(tag, MatchKind::Gga)) {
      kind = MatchKind::Gga;
    }
    if (!kind) return {};
    try {
      return {ScanStatus::Match, MatchEvent{*kind, tokenize(line)}};
    } catch (const Error&) {
      return {ScanStatus::MalformedLine, std::nullopt};
    }
  }

  line_.push_back(c);
  if (line_.size() > kMaxLineBytes) {
    reset();
    return {ScanStatus::OversizeLine, std::nullopt};
  }
  return {};
}

std::string_view peek_tag(std::string_view line) {
  if (line.empty() || line.front() != '$') return {};
  line.remove_prefix(1);
  return line.substr(0, line.find_first_of(",*"));
}

bool tag_matches(std::string_view tag, MatchKind kind) {
  return tag.find(kind == MatchKind::Rmc ? "RMC" : "GGA") != std::string_view::npos;
}

Sentence tokenize(std::string_view line) {
  if (line.empty() || line.front() != '$') {
    throw Error(Errc::MalformedLine, "line does not start with '$'");
  }
  for (char c : line) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x20 || u > 0x7E) {
      throw Error(Errc::MalformedLine, "non-printable byte in line");
    }
  }
  if (std::count(line.begin(), line.end(), '*') > 1) {
    throw Error(Errc::MalformedLine, "more than one '*'");
  }

  Sentence out;
  out.raw = std::string(line);

  std::string_view body = line.substr(1);
  const auto star = body.find('*');
  if (star != std::string_view::npos) {
    const std::string_view sum = body.substr(star + 1);
    if (sum.size() != 2 || hex_value(sum[0]) < 0 || hex_value(sum[1]) < 0) {
      throw Error(Errc::MalformedLine, "checksum is not two hex digits");
    }
    out.checksum_claimed = static_cast<std::uint8_t>(hex_value(sum[0]) * 16 + hex_value(sum[1]));
    body = body.substr(0, star);
  }

  std::size_t start = 0;
  bool first = true;
  while (true) {
    const auto comma = body.find(',', start);
    std::string token(body.substr(start, comma == std::string_view::npos ? body.npos : comma - start));
    if (first) {
      out.type_tag = std::move(token);
      first = false;
    } else {
      out.fields.push_back(std::move(token));
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.type_tag.empty()) throw Error(Errc::MalformedLine, "empty type tag");
  return out;
}

std::uint8_t xor_fold(std::string_view payload) {
  std::uint8_t sum = 0;
  for (char c : payload) sum ^= static_cast<std::uint8_t>(c);
  return sum;
}

bool verify_checksum(const Sentence& sentence) {
  if (!sentence.checksum_claimed) return false;
  std::string_view body = sentence.raw;
  body.remove_prefix(1);
  body = body.substr(0, body.find('*'));
  return xor_fold(body) == *sentence.checksum_claimed;
}

bool is_time_text(std::string_view s) { return matches_shape(s, "dddddd.ddd"); }
bool is_latitude_text(std::string_view s) { return matches_shape(s, "dddd.dddd"); }
bool is_longitude_text(std::string_view s) { return matches_shape(s, "ddddd.dddd"); }
bool is_date_text(std::string_view s) { return matches_shape(s, "dddddd"); }
bool is_speed_text(std::string_view s) { return is_unsigned_decimal(s); }

GpsFix parse_rmc(const Sentence& sentence) {
  if (!ends_with(sentence.type_tag, "RMC")) bad_pattern(0, "type tag for RMC");
  if (sentence.fields.size() < 10) {
    throw Error(Errc::FieldCount,
                "RMC needs 10 data fields, got " + std::to_string(sentence.fields.size()));
  }
  GpsFix fix;
  fix.time_utc = field_at(sentence, 1);
  if (!is_time_text(fix.time_utc)) bad_pattern(1, "time");
  fix.valid = field_at(sentence, 2) == "A";
  fix.latitude = field_at(sentence, 3);
  if (!is_latitude_text(fix.latitude)) bad_pattern(3, "latitude");
  fix.lat_hemi = hemisphere(field_at(sentence, 4), 4, 'N', 'S');
  fix.longitude = field_at(sentence, 5);
  if (!is_longitude_text(fix.longitude)) bad_pattern(5, "longitude");
  fix.lon_hemi = hemisphere(field_at(sentence, 6), 6, 'E', 'W');
  fix.speed_knots = field_at(sentence, 7);
  if (!is_speed_text(fix.speed_knots)) bad_pattern(7, "speed");
  // 8 is course over ground; 10 and later are magnetic variation. Not stored.
  fix.date = field_at(sentence, 9);
  if (!is_date_text(fix.date)) bad_pattern(9, "date");
  return fix;
}

GgaInfo parse_gga(const Sentence& sentence) {
  if (!ends_with(sentence.type_tag, "GGA")) bad_pattern(0, "type tag for GGA");
  if (sentence.fields.size() < 9) {
    throw Error(Errc::FieldCount,
                "GGA needs 9 data fields, got " + std::to_string(sentence.fields.size()));
  }
  GgaInfo info;
  info.time_utc = field_at(sentence, 1);
  if (!is_time_text(info.time_utc)) bad_pattern(1, "time");
  info.latitude = field_at(sentence, 2);
  if (!is_latitude_text(info.latitude)) bad_pattern(2, "latitude");
  info.lat_hemi = hemisphere(field_at(sentence, 3), 3, 'N', 'S');
  info.longitude = field_at(sentence, 4);
  if (!is_longitude_text(info.longitude)) bad_pattern(4, "longitude");
  info.lon_hemi = hemisphere(field_at(sentence, 5), 5, 'E', 'W');
  info.quality = small_int(field_at(sentence, 6), 6, "fix quality");
  info.num_satellites = small_int(field_at(sentence, 7), 7, "satellite count");
  info.hdop = field_at(sentence, 8);
  if (!info.hdop.empty() && !is_unsigned_decimal(info.hdop)) bad_pattern(8, "hdop");
  info.altitude_m = field_at(sentence, 9);
  if (!info.altitude_m.empty() && !is_signed_decimal(info.altitude_m)) bad_pattern(9, "altitude");
  return info;
}

MessageClass classify(std::string_view type_tag) {
  if (type_tag.size() < 3) return MessageClass::Other;
  const std::string_view fmt = type_tag.substr(type_tag.size() - 3);
  if (fmt == "GGA") return MessageClass::FixData;
  if (fmt == "GLL") return MessageClass::GeographicPosition;
  if (fmt == "GSA") return MessageClass::DopActiveSatellites;
  if (fmt == "GSV") return MessageClass::SatellitesInView;
  if (fmt == "RMC") return MessageClass::RecommendedMinimum;
  if (fmt == "VTG") return MessageClass::CourseOverGround;
  if (fmt == "MSS") return MessageClass::BeaconSignal;
  if (fmt == "ZDA") return MessageClass::PpsTiming;
  return MessageClass::Other;
}

std::string_view to_string(MessageClass cls) {
  switch (cls) {
    case MessageClass::FixData: return "FixData";
    case MessageClass::GeographicPosition: return "GeographicPosition";
    case MessageClass::DopActiveSatellites: return "DopActiveSatellites";
    case MessageClass::SatellitesInView: return "SatellitesInView";
    case MessageClass::RecommendedMinimum: return "RecommendedMinimum";
    case MessageClass::CourseOverGround: return "CourseOverGround";
    case MessageClass::BeaconSignal: return "BeaconSignal";
    case MessageClass::PpsTiming: return "PpsTiming";
    case MessageClass::Other: return "Other";
  }
  return "Other";
}

std::string with_checksum(std::string_view body) {
  char sum[4];
  std::snprintf(sum, sizeof sum, "*%02X", xor_fold(body));
  std::string out;
  out.reserve(body.size() + 4);
  out += '$';
  out += body;
  out += sum;
  return out;
}

std::string render_rmc(const GpsFix& fix, std::string_view course) {
  std::string body = "GPRMC,";
  body += fix.time_utc;
  body += fix.valid ? ",A," : ",V,";
  body += fix.latitude;
  body += ',';
  body += fix.lat_hemi;
  body += ',';
  body += fix.longitude;
  body += ',';
  body += fix.lon_hemi;
  body += ',';
  body += fix.speed_knots;
  body += ',';
  body += course;
  body += ',';
  body += fix.date;
  body += ",,";  // magnetic variation and its direction, both empty
  return with_checksum(body);
}

std::string render_gga(const GgaInfo& info) {
  char sats[8];
  std::snprintf(sats, sizeof sats, "%02d", info.num_satellites);
  std::string body = "GPGGA,";
  body += info.time_utc;
  body += ',';
  body += info.latitude;
  body += ',';
  body += info.lat_hemi;
  body += ',';
  body += info.longitude;
  body += ',';
  body += info.lon_hemi;
  body += ',';
  body += std::to_string(info.quality);
  body += ',';
  body += sats;
  body += ',';
  body += info.hdop;
  body += ',';
  body += info.altitude_m;
  body += ",M,,,,0000";
  return with_checksum(body);
}

}  // namespace trk::nmea
