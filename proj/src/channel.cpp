#include "trk/channel.hpp"

#include <algorithm>
#include <cstdio>

#include "trk/error.hpp"

namespace trk {

void ChannelConfig::validate() const {
  if (!(corruption_rate >= 0.0 && corruption_rate <= 1.0)) {
    throw Error(Errc::ConfigError, "corruption_rate must be within [0, 1]");
  }
  if (byte_time <= Micros{0}) throw Error(Errc::ConfigError, "byte_time must be positive");
}

std::string format_trace(const WireEvent& ev) {
  char buf[96];
  const std::string src = ev.source == kBaseStation ? "bs" : "u" + std::to_string(ev.source);
  std::snprintf(buf, sizeof buf, "t=%lld %s %s 0x%02x%s", static_cast<long long>(ev.time.count()),
                ev.direction == Direction::Downlink ? "down" : "up", src.c_str(), ev.byte,
                (ev.corrupted || ev.collided) ? " corrupt" : "");
  return buf;
}

std::vector<Delivery> arbitrate(const ChannelConfig& config, std::span<const Competitor> competing) {
  std::vector<Competitor> sorted(competing.begin(), competing.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const Competitor& a, const Competitor& b) {
    return a.at != b.at ? a.at < b.at : a.unit_id < b.unit_id;
  });

  std::vector<Delivery> out;
  out.reserve(sorted.size());
  for (const auto& c : sorted) out.push_back({c.unit_id, c.at, false});

  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Micros end_i = sorted[i].at + config.byte_time * static_cast<std::int64_t>(sorted[i].length);
    for (std::size_t j = i + 1; j < sorted.size() && sorted[j].at < end_i; ++j) {
      if (sorted[j].unit_id == sorted[i].unit_id) continue;
      out[i].collided = true;
      out[j].collided = true;
    }
  }
  return out;
}

Channel::Channel(ChannelConfig config) : config_(std::move(config)), rng_(config_.rng_seed) {
  config_.validate();
}

bool Channel::in_range(std::uint8_t unit) const {
  const auto it = config_.range_map.find(unit);
  return it != config_.range_map.end() && it->second;
}

SendResult Channel::send(EndpointId source, std::span<const std::uint8_t> bytes, Micros at) {
  SendResult result;
  const Direction dir = source == kBaseStation ? Direction::Downlink : Direction::Uplink;
  result.out_of_range = dir == Direction::Uplink && !in_range(static_cast<std::uint8_t>(source));
  result.events.reserve(bytes.size());

  for (std::size_t i = 0; i < bytes.size(); ++i) {
    WireEvent ev;
    ev.time = at + config_.byte_time * static_cast<std::int64_t>(i);
    ev.direction = dir;
    ev.source = source;
    ev.byte = bytes[i];
    if (config_.corruption_rate > 0.0) {
      // Raw engine output keeps the draw sequence identical across standard libraries.
      const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
      if (u < config_.corruption_rate) {
        ev.byte ^= static_cast<std::uint8_t>(1 + rng_() % 255);
        ev.corrupted = true;
      }
    }
    if (dir == Direction::Uplink && !result.out_of_range) uplink_.emplace(ev.time, source);
    result.events.push_back(ev);
  }
  return result;
}

bool Channel::collides(const WireEvent& ev) const {
  if (ev.direction != Direction::Uplink) return false;
  const Micros bt = config_.byte_time;
  for (auto it = uplink_.upper_bound(ev.time - bt); it != uplink_.end() && it->first < ev.time + bt; ++it) {
    if (it->second != ev.source) return true;
  }
  return false;
}

void Channel::forget_before(Micros now) {
  uplink_.erase(uplink_.begin(), uplink_.lower_bound(now - 2 * config_.byte_time));
}

}  // namespace trk
