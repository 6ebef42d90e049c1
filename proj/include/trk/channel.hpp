#pragma once

// Radio link between the base station and the fleet. The downlink is a
// broadcast from the base station; the uplink is shared, and overlapping
// uplink bytes from different units collide.

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "trk/time.hpp"

namespace trk {

enum class Direction { Downlink, Uplink };

// 0 is the base station; units use their unit id.
using EndpointId = int;
inline constexpr EndpointId kBaseStation = 0;

struct ChannelConfig {
  Micros byte_time = kUartByteTime;
  double corruption_rate = 0.0;
  std::uint64_t rng_seed = 0;
  std::map<std::uint8_t, bool> range_map;

  void validate() const;
};

struct WireEvent {
  Micros time{0};  // start of the byte on the air
  Direction direction = Direction::Downlink;
  EndpointId source = kBaseStation;
  std::uint8_t byte = 0;
  bool corrupted = false;  // random bit damage; invisible to the receiver
  bool collided = false;   // overlapped another uplink byte; receiver sees a framing error

  bool operator==(const WireEvent&) const = default;
};

// "t=<us> <dir> <src> 0x<byte>[ corrupt]"
std::string format_trace(const WireEvent& ev);

struct SendResult {
  std::vector<WireEvent> events;
  bool out_of_range = false;  // uplink from a unit the base station cannot hear
};

struct Competitor {
  std::uint8_t unit_id = 0;
  Micros at{0};
  std::size_t length = 1;
};

struct Delivery {
  std::uint8_t unit_id = 0;
  Micros at{0};
  bool collided = false;

  bool operator==(const Delivery&) const = default;
};

// Orders uplink transmissions by scheduled time (ties by unit id) and marks
// every transmission that overlaps another one in time.
std::vector<Delivery> arbitrate(const ChannelConfig& config, std::span<const Competitor> competing);

class Channel {
 public:
  explicit Channel(ChannelConfig config);

  // One event per byte at at + i * byte_time, each independently corrupted
  // with probability corruption_rate. Uplink bytes are remembered for
  // collision checks.
  SendResult send(EndpointId source, std::span<const std::uint8_t> bytes, Micros at);

  // True if another unit's uplink byte overlaps `ev` on the air.
  bool collides(const WireEvent& ev) const;
  // Drops remembered uplink bytes that can no longer overlap anything at or after `now`.
  void forget_before(Micros now);

  bool in_range(std::uint8_t unit) const;
  void set_in_range(std::uint8_t unit, bool in_range) { config_.range_map[unit] = in_range; }

  const ChannelConfig& config() const { return config_; }

 private:
  ChannelConfig config_;
  std::mt19937_64 rng_;
  std::multimap<Micros, EndpointId> uplink_;
};

}  // namespace trk
