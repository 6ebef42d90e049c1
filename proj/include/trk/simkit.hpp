#pragma once

// Deterministic discrete-event simulation of one base station and a fleet of
// mobile units on a single virtual clock.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "trk/basestation.hpp"
#include "trk/channel.hpp"
#include "trk/memstore.hpp"
#include "trk/mobile.hpp"
#include "trk/time.hpp"

namespace trk::sim {

using UtcTime = std::chrono::sys_time<Micros>;

// Angle in units of 1e-4 arc-minute, the resolution of ddmm.mmmm.
struct Angle {
  std::int64_t units = 0;

  static constexpr std::int64_t kPerDegree = 600'000;
  static Angle from_degrees(double deg);
  double degrees() const { return static_cast<double>(units) / kPerDegree; }

  auto operator<=>(const Angle&) const = default;
};

std::string render_latitude(Angle lat);   // "3723.2475"
std::string render_longitude(Angle lon);  // "12158.3416"
std::string render_speed(std::int64_t centiknots);  // "0.13"
std::string render_time(UtcTime t);  // "161229.487"
std::string render_date(UtcTime t);  // "120598"

struct Waypoint {
  Micros t{0};
  Angle lat;
  Angle lon;
  std::int64_t speed_centiknots = 0;
  bool valid = true;
};

using Route = std::vector<Waypoint>;

struct Window {
  Micros from{0};
  Micros to{0};
};

struct UnitSpec {
  std::uint8_t unit_id = 1;
  Route route;
  std::vector<Window> rendezvous;
  int misreport_count_attempts = 0;
  bool drop_acks = false;
};

// 1998-05-12 16:12:29.487 UTC
UtcTime default_start_utc();

struct Scenario {
  std::vector<UnitSpec> units;
  Micros sample_interval{120'000'000};
  UtcTime start_utc = default_start_utc();
  ChannelConfig channel;
  BsConfig bs;
  Micros ack_timeout{500'000};
  int max_download_retries = 3;
  Micros duration{3'600'000'000};

  // Errc::ConfigError naming the offending field.
  void validate() const;
};

// Line-oriented "key value..." text; see docs/scenario-format.md.
// Errc::ConfigError with field() set to the 1-based line number.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

struct TimedSentence {
  Micros at{0};      // first byte on the GPS UART
  std::string text;  // including "\r\n"
};

// One RMC and one GGA sentence per sample tick from the first to the last
// waypoint time, linearly interpolated. Errc::BadRoute on an empty route or
// non-increasing timestamps.
std::vector<TimedSentence> gen_nmea(const Route& route, Micros sample_interval,
                                    UtcTime start_utc = default_start_utc(),
                                    Micros byte_time = kUartByteTime);

struct LogEntry {
  Micros time{0};
  EndpointId actor = kBaseStation;
  std::string kind;
  std::string detail;

  bool operator==(const LogEntry&) const = default;
};

struct EventLog {
  std::vector<LogEntry> entries;

  // One JSON object per line: t_us, actor, kind, detail.
  std::string to_jsonl() const;
  bool operator==(const EventLog&) const = default;
};

struct UnitSummary {
  std::uint8_t unit_id = 0;
  std::size_t logged = 0;
  int attempts = 0;
  DownloadOutcome outcome = DownloadOutcome::Pending;
};

// "unit 1: 3 logged, 1 attempt, success"
std::string format_summary(const UnitSummary& s);

struct RunResult {
  EventLog log;
  std::map<std::uint8_t, MemoryBank> banks;
  std::vector<PersistedTrack> tracks;
  std::vector<WireEvent> trace;
  std::vector<UnitSummary> summaries;
};

struct RunOptions {
  bool trace = false;
};

class Simulation {
 public:
  explicit Simulation(const Scenario& scenario, RunOptions options = {});
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  // Processes one event. False once the queue is drained or past the end.
  bool step();
  RunResult finish();

  Micros now() const { return now_; }
  const MobileUnit& unit(std::uint8_t id) const;
  const std::map<std::uint8_t, std::unique_ptr<MobileUnit>>& units() const { return units_; }
  const BaseStation& base_station() const { return bs_; }
  const EventLog& log() const { return log_; }

 private:
  enum class Kind : std::uint8_t { GpsByte, UnitTimer, BsTick, Uplink, Downlink, Range };

  struct Event {
    Micros time{0};
    EndpointId actor = kBaseStation;
    std::uint64_t seq = 0;
    Kind kind = Kind::GpsByte;
    std::uint64_t token = 0;  // timer token, or in-range flag for Range
    WireEvent wire;
    std::size_t trace_index = 0;
  };

  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.actor != b.actor) return a.actor > b.actor;
      return a.seq > b.seq;
    }
  };

  struct GpsFeed {
    std::vector<TimedSentence> sentences;
    std::size_t sentence = 0;
    std::size_t byte = 0;
  };

  void push(Event ev);
  void schedule_next_gps_byte(std::uint8_t unit);
  void apply(std::uint8_t unit, UnitEffects fx, Micros now);
  void apply(BsEffects fx, Micros now);
  void transmit(EndpointId source, const wire::Transmission& tx);
  void note(EndpointId actor, Micros t, std::string kind, std::string detail);

  Scenario scenario_;
  RunOptions options_;
  Channel channel_;
  BaseStation bs_;
  std::map<std::uint8_t, std::unique_ptr<MobileUnit>> units_;
  std::map<std::uint8_t, GpsFeed> feeds_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  EventLog log_;
  std::vector<WireEvent> trace_;

  Micros now_{0};
  std::uint64_t seq_ = 0;
  std::uint64_t bs_token_ = 0;
  std::optional<Micros> bs_tick_at_;
};

RunResult run(const Scenario& scenario, RunOptions options = {});

// events.jsonl, unit<N>.trkmem, track_unit<N>.csv and, when traced,
// wire_trace.txt. Contents depend only on the run result.
void write_outputs(const RunResult& result, const std::filesystem::path& dir);

}  // namespace trk::sim
