#include "doctest.h"

#include "trk/channel.hpp"
#include "trk/wire.hpp"

using namespace trk;
using namespace std::chrono_literals;

TEST_CASE("byte time is 10 bits at 9600 bps, rounded") {
  // 10 / 9600 s = 1041.67 us
  CHECK(kUartByteTime == 1042us);
}

TEST_CASE("bytes go out back to back") {
  Channel ch({});
  const auto free = wire::bytes_of(wire::kFree);
  const auto r = ch.send(kBaseStation, free, 0us);
  REQUIRE(r.events.size() == 4);
  CHECK(r.events[0].time == 0us);
  CHECK(r.events[1].time == 1042us);
  CHECK(r.events[2].time == 2084us);
  CHECK(r.events[3].time == 3126us);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(r.events[i].byte == free[i]);
    CHECK(r.events[i].direction == Direction::Downlink);
    CHECK_FALSE(r.events[i].corrupted);
  }
}

TEST_CASE("lossless channel delivers bytes unchanged") {
  Channel ch({});
  std::vector<std::uint8_t> all(256);
  for (int i = 0; i < 256; ++i) all[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
  const auto r = ch.send(kBaseStation, all, 5ms);
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(r.events[i].byte == all[i]);
}

TEST_CASE("corruption is reproducible from the seed") {
  ChannelConfig cfg;
  cfg.corruption_rate = 0.5;
  cfg.rng_seed = 42;
  std::vector<std::uint8_t> msg(500, 'a');
  Channel a(cfg), b(cfg);
  const auto ra = a.send(kBaseStation, msg, 0us);
  const auto rb = b.send(kBaseStation, msg, 0us);
  CHECK(ra.events == rb.events);
  int damaged = 0;
  for (const auto& e : ra.events) {
    CHECK(e.corrupted == (e.byte != 'a'));
    damaged += e.corrupted;
  }
  CHECK(damaged > 150);
  CHECK(damaged < 350);

  cfg.rng_seed = 43;
  Channel c(cfg);
  CHECK(c.send(kBaseStation, msg, 0us).events != ra.events);
}

TEST_CASE("uplink from an out-of-range unit is void") {
  Channel ch({});
  const std::uint8_t id = 1;
  CHECK(ch.send(1, std::span(&id, 1), 0us).out_of_range);
  ch.set_in_range(1, true);
  CHECK_FALSE(ch.send(1, std::span(&id, 1), 0us).out_of_range);
}

TEST_CASE("priority slots separate the ids of units 1 and 2") {
  ChannelConfig cfg;
  const std::vector<Competitor> ids{{2, 20ms, 1}, {1, 10ms, 1}};
  const auto d = arbitrate(cfg, ids);
  REQUIRE(d.size() == 2);
  CHECK(d[0] == Delivery{1, 10ms, false});
  CHECK(d[1] == Delivery{2, 20ms, false});
}

TEST_CASE("equal slot times collide") {
  const std::vector<Competitor> ids{{3, 30ms, 1}, {4, 30ms, 1}};
  const auto d = arbitrate({}, ids);
  CHECK(d[0].collided);
  CHECK(d[1].collided);

  // Overlap inside the first byte also collides; back to back does not.
  const std::vector<Competitor> near{{3, 30ms, 1}, {4, 30ms + 1041us, 1}};
  CHECK(arbitrate({}, near)[1].collided);
  const std::vector<Competitor> apart{{3, 30ms, 1}, {4, 30ms + 1042us, 1}};
  CHECK_FALSE(arbitrate({}, apart)[1].collided);
}

TEST_CASE("single unit is never in collision") {
  const std::vector<Competitor> one{{1, 0us, 129}};
  CHECK_FALSE(arbitrate({}, one)[0].collided);
}

TEST_CASE("channel collision check matches the overlap rule") {
  Channel ch({});
  ch.set_in_range(3, true);
  ch.set_in_range(4, true);
  const std::uint8_t a = 3, b = 4;
  const auto ra = ch.send(3, std::span(&a, 1), 30ms);
  const auto rb = ch.send(4, std::span(&b, 1), 30ms + 500us);
  CHECK(ch.collides(ra.events[0]));
  CHECK(ch.collides(rb.events[0]));

  Channel clean({});
  clean.set_in_range(3, true);
  const auto rc = clean.send(3, std::span(&a, 1), 30ms);
  CHECK_FALSE(clean.collides(rc.events[0]));
}

TEST_CASE("trace format") {
  WireEvent ev;
  ev.time = 1042us;
  ev.source = kBaseStation;
  ev.byte = 'f';
  CHECK(format_trace(ev) == "t=1042 down bs 0x66");
  ev.direction = Direction::Uplink;
  ev.source = 12;
  ev.corrupted = true;
  CHECK(format_trace(ev) == "t=1042 up u12 0x66 corrupt");
}

TEST_CASE("corruption rate outside [0,1] is rejected") {
  ChannelConfig cfg;
  cfg.corruption_rate = 1.5;
  CHECK_THROWS(cfg.validate());
}
