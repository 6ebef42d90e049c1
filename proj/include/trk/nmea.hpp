#pragma once

// NMEA 0183 ingestion: byte-at-a-time scanning for RMC/GGA lines, field
// tokenization, checksum verification and positional field extraction.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trk::nmea {

inline constexpr std::size_t kMaxLineBytes = 128;

struct Sentence {
  std::string raw;       // '$' through the last byte before the terminator
  std::string type_tag;  // "GPRMC"
  std::vector<std::string> fields;  // data fields after the tag; empties kept
  std::optional<std::uint8_t> checksum_claimed;

  bool operator==(const Sentence&) const = default;
};

struct GpsFix {
  std::string time_utc;   // hhmmss.sss
  std::string latitude;   // ddmm.mmmm
  char lat_hemi = 'N';
  std::string longitude;  // dddmm.mmmm
  char lon_hemi = 'E';
  std::string speed_knots;
  std::string date;       // ddmmyy
  bool valid = false;

  bool operator==(const GpsFix&) const = default;
};

struct GgaInfo {
  std::string time_utc;
  std::string latitude;
  char lat_hemi = 'N';
  std::string longitude;
  char lon_hemi = 'E';
  int quality = 0;
  int num_satellites = 0;
  std::string hdop;
  std::string altitude_m;

  bool operator==(const GgaInfo&) const = default;
};

enum class MatchKind { Rmc, Gga };

struct MatchEvent {
  MatchKind kind;
  Sentence sentence;
};

enum class ScanStatus { None, Match, OversizeLine, MalformedLine };

struct ScanStep {
  ScanStatus status = ScanStatus::None;
  std::optional<MatchEvent> match;
};

// Incremental scanner. Bytes outside a '$'-started line are ignored; a line
// ends at '\r' or '\n'. One byte in, at most one event out.
class Scanner {
 public:
  ScanStep feed(std::uint8_t byte);
  void reset() { line_.clear(); in_line_ = false; }

  bool in_line() const { return in_line_; }
  std::size_t pending_bytes() const { return line_.size(); }

 private:
  std::string line_;
  bool in_line_ = false;
};

// Tag (text up to the first ',' or '*') of a '$'-prefixed line, or empty.
std::string_view peek_tag(std::string_view line);
bool tag_matches(std::string_view tag, MatchKind kind);

Sentence tokenize(std::string_view line);
std::uint8_t xor_fold(std::string_view payload);
bool verify_checksum(const Sentence& sentence);

GpsFix parse_rmc(const Sentence& sentence);
GgaInfo parse_gga(const Sentence& sentence);

enum class MessageClass {
  FixData,             // GGA
  GeographicPosition,  // GLL
  DopActiveSatellites, // GSA
  SatellitesInView,    // GSV
  RecommendedMinimum,  // RMC
  CourseOverGround,    // VTG
  BeaconSignal,        // MSS
  PpsTiming,           // ZDA
  Other,
};

MessageClass classify(std::string_view type_tag);
std::string_view to_string(MessageClass cls);

// Field-level pattern checks shared with the record codec.
bool is_time_text(std::string_view s);       // hhmmss.sss
bool is_latitude_text(std::string_view s);   // ddmm.mmmm
bool is_longitude_text(std::string_view s);  // dddmm.mmmm
bool is_date_text(std::string_view s);       // ddmmyy
bool is_speed_text(std::string_view s);      // non-negative decimal

// "$<body>*HH" with the checksum computed over body.
std::string with_checksum(std::string_view body);
std::string render_rmc(const GpsFix& fix, std::string_view course = "");
std::string render_gga(const GgaInfo& info);

}  // namespace trk::nmea
