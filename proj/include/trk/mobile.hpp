#pragma once

// The in-vehicle unit. P1 scans the GPS UART and logs valid RMC fixes into
// the memory bank; P2 listens to the base station, acquires the channel and
// downloads the bank. Only one of the two runs at a time: an acknowledged
// channel grant interrupts P1 for the whole download.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "trk/memstore.hpp"
#include "trk/nmea.hpp"
#include "trk/time.hpp"
#include "trk/wire.hpp"

namespace trk {

enum class P1State { WaitForGps, Collecting, Storing, Suspended };

enum class P2State {
  Idle,
  AwaitFree,
  SendId,
  AwaitAck1,
  ResendId,
  AwaitAck2,
  Downloading,
  SendCount,
  AwaitResult,
  Done,
};

enum class ActiveProcess { P1, P2 };

enum class DownloadOutcome { Pending, Success, Aborted };

std::string_view to_string(P1State s);
std::string_view to_string(P2State s);
std::string_view to_string(DownloadOutcome o);

struct UnitConfig {
  std::uint8_t unit_id = 1;
  Micros ack_timeout{500'000};
  int max_download_retries = 3;
  Micros byte_time = kUartByteTime;

  // Fault injection: claim count+1 on the first N download attempts.
  int misreport_count_attempts = 0;
  // Fault injection: the receiver never hears "ack!".
  bool drop_acks = false;

  Micros priority_slot() const { return Micros{10'000} * unit_id; }
};

struct UnitState {
  P1State p1_state = P1State::WaitForGps;
  P2State p2_state = P2State::Idle;
  bool flag_c = false;
  ActiveProcess active = ActiveProcess::P1;
  std::uint8_t unit_id = 0;
  Micros priority_slot{0};
};

// P2 -> P1 interrupt. Cleared when P1 acknowledges by suspending.
struct InterruptLine {
  bool pending = false;
};

struct GpsStatus {
  int quality = 0;
  int num_satellites = 0;
};

struct TimerRequest {
  Micros at{0};
  std::uint64_t token = 0;
};

struct UnitEffects {
  std::vector<wire::Transmission> tx;
  std::optional<TimerRequest> timer;
  std::vector<wire::Note> notes;
  bool power_down = false;
};

class MobileUnit {
 public:
  explicit MobileUnit(UnitConfig config);

  // P1: one GPS UART byte.
  UnitEffects p1_feed(std::uint8_t gps_byte, Micros now);

  // P2: downlink bytes. Bytes flagged with a framing error are dropped.
  UnitEffects p2_on_channel_byte(std::uint8_t rx, Micros now, bool framing_error = false);
  UnitEffects p2_on_channel_bytes(std::span<const std::uint8_t> rx, Micros now);

  // Expiry of a timer previously requested through UnitEffects::timer.
  UnitEffects on_timer(std::uint64_t token, Micros now);

  UnitEffects set_in_range(bool in_range, Micros now);

  // Stops P1 and hands the unit to P2. A partially scanned sentence is lost.
  void interrupt_p1();

  UnitState state() const;
  const UnitConfig& config() const { return config_; }
  const MemoryBank& bank() const { return bank_; }
  const InterruptLine& interrupt_line() const { return interrupt_; }
  const std::optional<GpsStatus>& gps_status() const { return gps_status_; }
  bool memory_full_flag() const { return full_flag_; }
  bool powered_down() const { return powered_down_; }
  bool in_range() const { return in_range_; }

  std::size_t fixes_logged() const { return fixes_logged_; }
  int id_sends_this_acquisition() const { return id_sends_; }
  int download_attempts() const { return attempts_total_; }
  std::size_t record_count_at_interrupt() const { return count_at_interrupt_; }
  DownloadOutcome outcome() const { return outcome_; }
  std::uint64_t timer_token() const { return timer_token_; }

 private:
  void arm(UnitEffects& fx, Micros at);
  void disarm() { ++timer_token_; }
  void send(UnitEffects& fx, Micros at, std::vector<std::uint8_t> bytes);

  void handle_match(const nmea::MatchEvent& match, UnitEffects& fx);
  void log_fix(const nmea::GpsFix& fix, UnitEffects& fx);

  void on_ack(Micros now, UnitEffects& fx);
  void start_download(Micros now, UnitEffects& fx);
  void retry_or_abort(Micros now, UnitEffects& fx);
  void resume_p1();

  UnitConfig config_;
  MemoryBank bank_;
  nmea::Scanner scanner_;
  wire::WordMatcher words_;
  InterruptLine interrupt_;

  P1State p1_ = P1State::WaitForGps;
  P2State p2_ = P2State::Idle;
  ActiveProcess active_ = ActiveProcess::P1;
  bool flag_c_ = false;
  bool full_flag_ = false;
  bool powered_down_ = false;
  bool in_range_ = false;
  std::optional<GpsStatus> gps_status_;

  std::uint64_t timer_token_ = 0;
  int id_sends_ = 0;
  int attempts_ = 0;
  int attempts_total_ = 0;
  std::size_t fixes_logged_ = 0;
  std::size_t count_at_interrupt_ = 0;
  DownloadOutcome outcome_ = DownloadOutcome::Pending;
};

}  // namespace trk
