#include "doctest.h"

#include <algorithm>
#include <set>

#include "sample_sentences.hpp"
#include "scenario_builders.hpp"
#include "trk/error.hpp"
#include "trk/simkit.hpp"

using namespace trk;
using namespace trk::sim;
using namespace std::chrono_literals;

namespace {

int count_kind(const EventLog& log, std::string_view kind) {
  return static_cast<int>(
      std::count_if(log.entries.begin(), log.entries.end(), [&](const LogEntry& e) { return e.kind == kind; }));
}

std::optional<int> config_line(std::string_view text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ConfigError);
    return e.field().value_or(-1);
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("angle rendering") {
  CHECK(render_latitude(Angle::from_degrees(37.387458333)) == "3723.2475");
  CHECK(render_longitude(Angle::from_degrees(-121.972360)) == "12158.3416");
  CHECK(render_latitude(Angle::from_degrees(-5.5)) == "0530.0000");
  CHECK(render_speed(13) == "0.13");
  CHECK(render_speed(2500) == "25.00");
  CHECK(render_time(default_start_utc()) == "161229.487");
  CHECK(render_date(default_start_utc()) == "120598");
}

TEST_CASE("single waypoint at the reference position") {
  Waypoint w;
  w.lat = Angle::from_degrees(37.387458333);
  w.lon = Angle::from_degrees(-121.972360);
  w.speed_centiknots = 13;
  const auto out = gen_nmea({w}, 2min);
  REQUIRE(out.size() == 2);
  const auto rmc = nmea::parse_rmc(nmea::tokenize(out[0].text.substr(0, out[0].text.size() - 2)));
  CHECK(rmc == fixtures::reference_fix());
  const auto gga = nmea::parse_gga(nmea::tokenize(out[1].text.substr(0, out[1].text.size() - 2)));
  CHECK(gga.quality == 1);
  CHECK(gga.num_satellites == 7);
  CHECK(out[1].at == kUartByteTime * static_cast<std::int64_t>(out[0].text.size()));
}

TEST_CASE("every generated sentence checks out") {
  const auto route = builders::drive(50, 2min);
  for (const auto& s : gen_nmea(route, 2min)) {
    CHECK(s.text.ends_with("\r\n"));
    CHECK(s.text.size() <= nmea::kMaxLineBytes + 2);
    CHECK(nmea::verify_checksum(nmea::tokenize(s.text.substr(0, s.text.size() - 2))));
  }
}

TEST_CASE("190 minutes at 2-minute sampling is 96 ticks") {
  Route r = builders::drive(2, 190min);
  REQUIRE(r.back().t == 190min);
  const auto out = gen_nmea(r, 2min);
  CHECK(out.size() == 2 * 96);
}

TEST_CASE("interpolation is linear and hemispheres follow the sign") {
  Waypoint a, b;
  a.lat = Angle::from_degrees(-1.0);
  a.lon = Angle::from_degrees(1.0);
  b.t = 2min;
  b.lat = Angle::from_degrees(1.0);
  b.lon = Angle::from_degrees(-1.0);
  const auto out = gen_nmea({a, b}, 1min);
  REQUIRE(out.size() == 6);
  const auto first = nmea::parse_rmc(nmea::tokenize(out[0].text.substr(0, out[0].text.size() - 2)));
  const auto mid = nmea::parse_rmc(nmea::tokenize(out[2].text.substr(0, out[2].text.size() - 2)));
  const auto last = nmea::parse_rmc(nmea::tokenize(out[4].text.substr(0, out[4].text.size() - 2)));
  CHECK(first.lat_hemi == 'S');
  CHECK(first.lon_hemi == 'E');
  CHECK(mid.latitude == "0000.0000");
  CHECK(last.lat_hemi == 'N');
  CHECK(last.lon_hemi == 'W');
  CHECK(last.latitude == "0100.0000");
}

TEST_CASE("bad routes") {
  CHECK_THROWS_AS(gen_nmea({}, 2min), Error);
  Waypoint a, b;
  a.t = 1min;
  b.t = 1min;
  try {
    gen_nmea({a, b}, 2min);
    FAIL("expected BadRoute");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BadRoute);
  }
}

TEST_CASE("one unit, three samples: the base station track matches the route") {
  const Scenario sc = builders::single(3);
  const RunResult r = run(sc);
  REQUIRE(r.tracks.size() == 1);
  REQUIRE(r.tracks[0].records.size() == 3);

  std::vector<nmea::GpsFix> expected;
  for (const auto& s : gen_nmea(sc.units[0].route, sc.sample_interval)) {
    const auto sen = nmea::tokenize(s.text.substr(0, s.text.size() - 2));
    if (nmea::classify(sen.type_tag) == nmea::MessageClass::RecommendedMinimum) expected.push_back(nmea::parse_rmc(sen));
  }
  REQUIRE(expected.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(decode(r.tracks[0].records[i]) == expected[i]);

  REQUIRE(r.summaries.size() == 1);
  CHECK(format_summary(r.summaries[0]) == "unit 1: 3 logged, 1 attempt, success");
}

TEST_CASE("no units: only free broadcasts") {
  Scenario sc;
  sc.duration = 1s;
  const RunResult r = run(sc);
  CHECK(r.log.entries.size() == 11);  // 0, 100, ..., 1000 ms
  for (const auto& e : r.log.entries) CHECK(e.kind == "free");
}

TEST_CASE("two units with overlapping rendezvous are served one after the other") {
  Scenario sc;
  sc.sample_interval = 2min;
  sc.units.push_back(builders::unit(1, builders::drive(4, 2min), 10min, 20min));
  sc.units.push_back(builders::unit(2, builders::drive(5, 2min, 40.0, -80.0), 10min, 20min));
  sc.duration = 21min;
  const RunResult r = run(sc);
  REQUIRE(r.tracks.size() == 2);
  std::map<int, std::size_t> rows;
  for (const auto& t : r.tracks) rows[t.unit_id] += t.records.size();
  CHECK(rows[1] == 4);
  CHECK(rows[2] == 5);

  const auto grants = builders::grant_intervals(r.log);
  REQUIRE(grants.size() == 2);
  REQUIRE(grants[0].to);
  CHECK(*grants[0].to <= grants[1].from);
  CHECK(grants[0].unit == 1);
  CHECK(grants[1].unit == 2);
}

TEST_CASE("reruns are identical") {
  Scenario sc = builders::random_fleet(3);
  sc.channel.corruption_rate = 0.001;
  const RunResult a = run(sc, {true});
  const RunResult b = run(sc, {true});
  CHECK(a.log == b.log);
  CHECK(a.log.to_jsonl() == b.log.to_jsonl());
  CHECK(a.trace == b.trace);
  CHECK(a.banks == b.banks);
}

TEST_CASE("event log is time ordered") {
  const RunResult r = run(builders::random_fleet(8));
  CHECK(std::is_sorted(r.log.entries.begin(), r.log.entries.end(),
                       [](const LogEntry& x, const LogEntry& y) { return x.time < y.time; }));
}

TEST_CASE("jsonl has a fixed key order") {
  EventLog log;
  log.entries.push_back({1042us, 3, "tx_id", "1"});
  log.entries.push_back({0us, kBaseStation, "free", ""});
  CHECK(log.to_jsonl() ==
        "{\"t_us\":1042,\"actor\":\"unit3\",\"kind\":\"tx_id\",\"detail\":\"1\"}\n"
        "{\"t_us\":0,\"actor\":\"bs\",\"kind\":\"free\",\"detail\":\"\"}\n");
}

TEST_CASE("stepping exposes the simulation clock") {
  Simulation sim(builders::single(2));
  Micros last{0};
  int steps = 0;
  while (sim.step()) {
    CHECK(sim.now() >= last);
    last = sim.now();
    ++steps;
  }
  CHECK(steps > 0);
  CHECK(sim.unit(1).powered_down());
}

TEST_CASE("scenario text parses") {
  const Scenario sc = parse_scenario(R"(# demo
duration 15m
sample_interval 90s
start_utc 2001-02-03T04:05:06.5
seed 9
corruption_rate 0.01
broadcast_period 250ms
ack_timeout 400ms
grant_timeout 3s
max_download_retries 2

unit 12
waypoint 0s 37.5 -122.25 10
waypoint 3m 37.6 -122.20 12.5 invalid
rendezvous 5m 8m
fault count_mismatch 2
unit 13
waypoint 0 1 1 0
fault ack_loss
)");
  CHECK(sc.duration == 15min);
  CHECK(sc.sample_interval == 90s);
  CHECK(render_time(sc.start_utc) == "040506.500");
  CHECK(render_date(sc.start_utc) == "030201");
  CHECK(sc.channel.rng_seed == 9);
  CHECK(sc.channel.corruption_rate == doctest::Approx(0.01));
  CHECK(sc.bs.broadcast_period == 250ms);
  CHECK(sc.ack_timeout == 400ms);
  CHECK(sc.bs.grant_timeout == 3s);
  CHECK(sc.max_download_retries == 2);
  REQUIRE(sc.units.size() == 2);
  CHECK(sc.units[0].unit_id == 12);
  REQUIRE(sc.units[0].route.size() == 2);
  CHECK(sc.units[0].route[1].speed_centiknots == 1250);
  CHECK_FALSE(sc.units[0].route[1].valid);
  CHECK(sc.units[0].rendezvous.size() == 1);
  CHECK(sc.units[0].misreport_count_attempts == 2);
  CHECK(sc.units[1].drop_acks);
}

TEST_CASE("scenario errors carry the line number") {
  CHECK(config_line("duration 1m\nbogus 3\n") == 2);
  CHECK(config_line("unit 1\nwaypoint 0 0 0 0\nunit 1\nwaypoint 0 0 0 0\n") == 3);
  CHECK(config_line("waypoint 0 0 0 0\n") == 1);
  CHECK(config_line("unit 48\nwaypoint 0 0 0 0\n") == 1);             // ASCII '0'
  CHECK(config_line("unit 1\nwaypoint 1m 0 0 0\nwaypoint 1m 0 0 0\n") == 1);  // reported on the unit block
  CHECK(config_line("unit 1\nwaypoint 0 95 0 0\n") == 1);
  CHECK(config_line("unit 15\nwaypoint 0 0 0 0\n") == 1);              // slot does not fit 100 ms
  CHECK(config_line("sample_interval 100ms\n") == -1);
  CHECK(config_line("duration x\n") == 1);
  CHECK(config_line("unit 1\nwaypoint 0 0 0 0\nfault meltdown\n") == 3);
  CHECK_FALSE(config_line("broadcast_period 250ms\nunit 15\nwaypoint 0 0 0 0\n"));
}

TEST_CASE("outputs are written and deterministic") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "trk_simkit_outputs";
  fs::remove_all(dir);
  const RunResult r = run(builders::single(3), {true});
  write_outputs(r, dir);
  CHECK(fs::exists(dir / "events.jsonl"));
  CHECK(fs::exists(dir / "unit1.trkmem"));
  CHECK(fs::exists(dir / "track_unit1.csv"));
  CHECK(fs::exists(dir / "wire_trace.txt"));
  fs::remove_all(dir);
}
