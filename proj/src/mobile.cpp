#include "trk/mobile.hpp"

#include "trk/error.hpp"
#include "trk/record.hpp"

namespace trk {

std::string_view to_string(P1State s) {
  switch (s) {
    case P1State::WaitForGps: return "WaitForGps";
    case P1State::Collecting: return "Collecting";
    case P1State::Storing: return "Storing";
    case P1State::Suspended: return "Suspended";
  }
  return "?";
}

std::string_view to_string(P2State s) {
  switch (s) {
    case P2State::Idle: return "Idle";
    case P2State::AwaitFree: return "AwaitFree";
    case P2State::SendId: return "SendId";
    case P2State::AwaitAck1: return "AwaitAck1";
    case P2State::ResendId: return "ResendId";
    case P2State::AwaitAck2: return "AwaitAck2";
    case P2State::Downloading: return "Downloading";
    case P2State::SendCount: return "SendCount";
    case P2State::AwaitResult: return "AwaitResult";
    case P2State::Done: return "Done";
  }
  return "?";
}

std::string_view to_string(DownloadOutcome o) {
  switch (o) {
    case DownloadOutcome::Pending: return "pending";
    case DownloadOutcome::Success: return "success";
    case DownloadOutcome::Aborted: return "aborted";
  }
  return "?";
}

MobileUnit::MobileUnit(UnitConfig config) : config_(config) {
  if (!wire::is_valid_unit_id(config_.unit_id)) {
    throw Error(Errc::ConfigError, "unit id " + std::to_string(config_.unit_id) + " is reserved");
  }
}

UnitState MobileUnit::state() const {
  return {p1_, p2_, flag_c_, active_, config_.unit_id, config_.priority_slot()};
}

void MobileUnit::arm(UnitEffects& fx, Micros at) {
  ++timer_token_;
  fx.timer = TimerRequest{at, timer_token_};
}

void MobileUnit::send(UnitEffects& fx, Micros at, std::vector<std::uint8_t> bytes) {
  fx.tx.push_back({at, std::move(bytes)});
}

// ---------------------------------------------------------------------------
// P1

UnitEffects MobileUnit::p1_feed(std::uint8_t gps_byte, Micros /*now*/) {
  UnitEffects fx;
  if (powered_down_ || active_ != ActiveProcess::P1) return fx;

  const nmea::ScanStep step = scanner_.feed(gps_byte);
  switch (step.status) {
    case nmea::ScanStatus::None:
      break;
    case nmea::ScanStatus::Match:
      handle_match(*step.match, fx);
      break;
    case nmea::ScanStatus::OversizeLine:
      fx.notes.push_back({"oversize_line", ""});
      break;
    case nmea::ScanStatus::MalformedLine:
      fx.notes.push_back({"malformed_line", ""});
      break;
  }
  p1_ = scanner_.in_line() ? P1State::Collecting : P1State::WaitForGps;
  return fx;
}

void MobileUnit::handle_match(const nmea::MatchEvent& match, UnitEffects& fx) {
  const nmea::Sentence& s = match.sentence;
  if (!nmea::verify_checksum(s)) {
    fx.notes.push_back({"checksum_drop", s.type_tag});
    return;
  }
  try {
    if (match.kind == nmea::MatchKind::Gga) {
      const nmea::GgaInfo gga = nmea::parse_gga(s);
      gps_status_ = GpsStatus{gga.quality, gga.num_satellites};
      return;
    }
    const nmea::GpsFix fix = nmea::parse_rmc(s);
    if (!fix.valid) {
      fx.notes.push_back({"fix_invalid", fix.time_utc});
      return;
    }
    log_fix(fix, fx);
  } catch (const Error& e) {
    fx.notes.push_back({"parse_error", s.type_tag + ": " + e.what()});
  }
}

void MobileUnit::log_fix(const nmea::GpsFix& fix, UnitEffects& fx) {
  flag_c_ = true;
  p1_ = P1State::Storing;

  TrackRecord record;
  try {
    record = encode(fix);
  } catch (const Error& e) {
    fx.notes.push_back({"encode_error", e.what()});
    flag_c_ = false;
    return;
  }

  if (bank_.full()) {
    if (!full_flag_) fx.notes.push_back({"memory_full", std::to_string(bank_.record_count())});
    full_flag_ = true;
    flag_c_ = false;
    return;
  }

  bank_.acquire(ProcessId::P1);  // BusBusy here is a protocol violation and propagates
  fx.notes.push_back({"bus_acquire", "P1"});
  bank_.store_record(ProcessId::P1, record);
  fx.notes.push_back({"bus_write", std::to_string(bank_.record_count() - 1)});
  bank_.release(ProcessId::P1);
  fx.notes.push_back({"bus_release", "P1"});
  ++fixes_logged_;
  flag_c_ = false;
}

// ---------------------------------------------------------------------------
// P2

void MobileUnit::interrupt_p1() {
  interrupt_.pending = true;
  active_ = ActiveProcess::P2;
  p1_ = P1State::Suspended;
  scanner_.reset();
  flag_c_ = false;
  interrupt_.pending = false;  // P1 acknowledged
}

void MobileUnit::resume_p1() {
  active_ = ActiveProcess::P1;
  p1_ = P1State::WaitForGps;
  scanner_.reset();
}

UnitEffects MobileUnit::set_in_range(bool in_range, Micros /*now*/) {
  UnitEffects fx;
  in_range_ = in_range;
  if (powered_down_) return fx;
  if (in_range && p2_ == P2State::Idle) {
    p2_ = P2State::AwaitFree;
  } else if (!in_range && p2_ == P2State::AwaitFree) {
    p2_ = P2State::Idle;
  }
  words_.reset();
  return fx;
}

UnitEffects MobileUnit::p2_on_channel_bytes(std::span<const std::uint8_t> rx, Micros now) {
  UnitEffects all;
  for (std::uint8_t b : rx) {
    UnitEffects fx = p2_on_channel_byte(b, now);
    for (auto& t : fx.tx) all.tx.push_back(std::move(t));
    for (auto& n : fx.notes) all.notes.push_back(std::move(n));
    if (fx.timer) all.timer = fx.timer;
    all.power_down = all.power_down || fx.power_down;
  }
  return all;
}

UnitEffects MobileUnit::p2_on_channel_byte(std::uint8_t rx, Micros now, bool framing_error) {
  UnitEffects fx;
  if (powered_down_) return fx;
  if (framing_error) {
    words_.reset();
    return fx;
  }
  const auto word = words_.push(rx);
  if (!word) return fx;

  switch (*word) {
    case wire::DownlinkWord::Free:
      // Idle covers "out of range" and "gave up"; only a fresh approach re-arms.
      if (p2_ == P2State::AwaitFree) {
        p2_ = P2State::SendId;
        id_sends_ = 0;
        arm(fx, now + config_.priority_slot());
        fx.notes.push_back({"rx_free", ""});
      }
      break;

    case wire::DownlinkWord::Ack:
      if (p2_ == P2State::SendId || p2_ == P2State::ResendId) {
        // Someone with an earlier slot got the channel.
        disarm();
        p2_ = P2State::AwaitFree;
        fx.notes.push_back({"channel_taken", ""});
      } else if (p2_ == P2State::AwaitAck1 || p2_ == P2State::AwaitAck2) {
        if (config_.drop_acks) {
          fx.notes.push_back({"ack_lost", ""});
        } else {
          on_ack(now, fx);
        }
      }
      break;

    case wire::DownlinkWord::Good:
      if (p2_ == P2State::AwaitResult) {
        disarm();
        fx.notes.push_back({"result_good", std::to_string(attempts_)});
        bank_.clear(ProcessId::P2);
        bank_.release(ProcessId::P2);
        fx.notes.push_back({"bus_release", "P2"});
        p2_ = P2State::Done;
        outcome_ = DownloadOutcome::Success;
        powered_down_ = true;
        fx.power_down = true;
        fx.notes.push_back({"power_down", ""});
      }
      break;

    case wire::DownlinkWord::Bad:
      if (p2_ == P2State::AwaitResult) {
        disarm();
        fx.notes.push_back({"result_bad", std::to_string(attempts_)});
        retry_or_abort(now, fx);
      }
      break;
  }
  return fx;
}

void MobileUnit::on_ack(Micros now, UnitEffects& fx) {
  disarm();
  fx.notes.push_back({"ack", ""});
  interrupt_p1();
  fx.notes.push_back({"interrupt", std::to_string(bank_.record_count())});
  bank_.acquire(ProcessId::P2);
  fx.notes.push_back({"bus_acquire", "P2"});
  count_at_interrupt_ = bank_.record_count();
  attempts_ = 0;
  start_download(now, fx);
}

void MobileUnit::start_download(Micros now, UnitEffects& fx) {
  ++attempts_;
  ++attempts_total_;
  p2_ = P2State::Downloading;

  const std::size_t n = bank_.record_count();
  std::vector<std::uint8_t> frames;
  frames.reserve(n * TrackRecord::kSize);
  for (std::size_t i = 0; i < n; ++i) {
    const TrackRecord rec = bank_.read_record(ProcessId::P2, i);
    frames.insert(frames.end(), rec.bytes().begin(), rec.bytes().end());
  }
  fx.notes.push_back({"bus_read", std::to_string(n)});
  fx.notes.push_back({"download_start", "attempt=" + std::to_string(attempts_) + " records=" + std::to_string(n)});
  const Micros end = now + config_.byte_time * static_cast<std::int64_t>(frames.size());
  if (!frames.empty()) send(fx, now, std::move(frames));
  arm(fx, end);
}

void MobileUnit::retry_or_abort(Micros now, UnitEffects& fx) {
  if (attempts_ <= config_.max_download_retries) {
    start_download(now, fx);
    return;
  }
  disarm();
  bank_.release(ProcessId::P2);
  fx.notes.push_back({"bus_release", "P2"});
  fx.notes.push_back({"download_abort", std::to_string(attempts_)});
  p2_ = P2State::Idle;
  outcome_ = DownloadOutcome::Aborted;
  resume_p1();
}

UnitEffects MobileUnit::on_timer(std::uint64_t token, Micros now) {
  UnitEffects fx;
  if (token != timer_token_ || powered_down_) return fx;

  switch (p2_) {
    case P2State::SendId:
    case P2State::ResendId:
      send(fx, now, {config_.unit_id});
      ++id_sends_;
      fx.notes.push_back({"tx_id", std::to_string(id_sends_)});
      p2_ = p2_ == P2State::SendId ? P2State::AwaitAck1 : P2State::AwaitAck2;
      arm(fx, now + config_.ack_timeout);
      break;

    case P2State::AwaitAck1:
      fx.notes.push_back({"ack_timeout", "1"});
      p2_ = P2State::ResendId;
      arm(fx, now + config_.priority_slot());
      break;

    case P2State::AwaitAck2:
      fx.notes.push_back({"ack_timeout", "2"});
      fx.notes.push_back({"acquire_abort", ""});
      p2_ = P2State::Idle;
      break;

    case P2State::Downloading: {
      const bool misreport = attempts_ <= config_.misreport_count_attempts;
      const std::size_t count = bank_.record_count() + (misreport ? 1 : 0);
      send(fx, now,
           {wire::kEndOfRecords, static_cast<std::uint8_t>(count >> 8), static_cast<std::uint8_t>(count & 0xFF)});
      fx.notes.push_back({"tx_count", std::to_string(count)});
      p2_ = P2State::SendCount;
      arm(fx, now + config_.byte_time * 3);
      break;
    }

    case P2State::SendCount:
      p2_ = P2State::AwaitResult;
      arm(fx, now + config_.ack_timeout);
      break;

    case P2State::AwaitResult:
      fx.notes.push_back({"result_timeout", std::to_string(attempts_)});
      retry_or_abort(now, fx);
      break;

    case P2State::Idle:
    case P2State::AwaitFree:
    case P2State::Done:
      break;
  }
  return fx;
}

}  // namespace trk
