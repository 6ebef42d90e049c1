#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "trk/record.hpp"
#include "trk/time.hpp"
#include "trk/wire.hpp"

namespace trk {

enum class BsMode { Broadcasting, Granted, Receiving, Verifying, Reporting };

std::string_view to_string(BsMode m);

struct BsConfig {
  Micros broadcast_period{100'000};
  Micros byte_time = kUartByteTime;
  // Silence after which a grant is withdrawn and broadcasting resumes.
  Micros grant_timeout{2'000'000};
  // Silence inside a download that marks the start of a fresh attempt.
  Micros resync_gap{50'000};
};

struct BaseState {
  BsMode mode = BsMode::Broadcasting;
  std::optional<std::uint8_t> granted_unit;
  std::vector<TrackRecord> received;
  std::optional<int> claimed_count;
};

struct PersistedTrack {
  std::uint8_t unit_id = 0;
  Micros at{0};
  std::vector<TrackRecord> records;
};

struct BsEffects {
  std::vector<wire::Transmission> tx;
  std::vector<wire::Note> notes;
};

class BaseStation {
 public:
  explicit BaseStation(BsConfig config = {});

  // Periodic work: "free" broadcasts, grant timeout, end of a report.
  BsEffects bs_tick(Micros now);
  BsEffects bs_on_byte(std::uint8_t rx, Micros now, bool framing_error = false);

  // Earliest time at which bs_tick has something to do.
  Micros next_wakeup() const;

  const BaseState& state() const { return state_; }
  const BsConfig& config() const { return config_; }
  const std::vector<PersistedTrack>& tracks() const { return tracks_; }

 private:
  void to_broadcasting(Micros now, BsEffects& fx);
  void handle_granted(std::uint8_t rx, Micros now, BsEffects& fx);
  void handle_receiving(std::uint8_t rx, Micros now, BsEffects& fx);
  void verify(Micros now, BsEffects& fx);
  void discard_attempt(BsEffects& fx);

  BsConfig config_;
  BaseState state_;
  std::vector<PersistedTrack> tracks_;

  std::vector<std::uint8_t> partial_;
  std::vector<std::uint8_t> count_bytes_;
  bool expecting_count_ = false;
  bool report_good_ = false;
  Micros next_free_{0};
  Micros last_rx_{0};
  Micros report_end_{0};
};

}  // namespace trk
