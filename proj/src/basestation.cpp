#include "trk/basestation.hpp"

#include "trk/error.hpp"

namespace trk {

std::string_view to_string(BsMode m) {
  switch (m) {
    case BsMode::Broadcasting: return "Broadcasting";
    case BsMode::Granted: return "Granted";
    case BsMode::Receiving: return "Receiving";
    case BsMode::Verifying: return "Verifying";
    case BsMode::Reporting: return "Reporting";
  }
  return "?";
}

BaseStation::BaseStation(BsConfig config) : config_(config) {}

Micros BaseStation::next_wakeup() const {
  switch (state_.mode) {
    case BsMode::Broadcasting: return next_free_;
    case BsMode::Granted:
    case BsMode::Receiving: return last_rx_ + config_.grant_timeout;
    case BsMode::Reporting: return report_end_;
    case BsMode::Verifying: break;
  }
  return last_rx_;
}

void BaseStation::to_broadcasting(Micros now, BsEffects& fx) {
  state_.mode = BsMode::Broadcasting;
  state_.granted_unit.reset();
  state_.received.clear();
  state_.claimed_count.reset();
  partial_.clear();
  count_bytes_.clear();
  expecting_count_ = false;
  next_free_ = now;
  fx.tx.push_back({now, wire::bytes_of(wire::kFree)});
  fx.notes.push_back({"free", ""});
  next_free_ = now + config_.broadcast_period;
}

BsEffects BaseStation::bs_tick(Micros now) {
  BsEffects fx;
  switch (state_.mode) {
    case BsMode::Broadcasting:
      if (now >= next_free_) {
        fx.tx.push_back({now, wire::bytes_of(wire::kFree)});
        fx.notes.push_back({"free", ""});
        next_free_ = now + config_.broadcast_period;
      }
      break;
    case BsMode::Granted:
    case BsMode::Receiving:
      if (now - last_rx_ >= config_.grant_timeout) {
        fx.notes.push_back({"grant_timeout", std::to_string(*state_.granted_unit)});
        to_broadcasting(now, fx);
      }
      break;
    case BsMode::Reporting:
      if (now >= report_end_) {
        if (report_good_) {
          fx.notes.push_back({"release", std::to_string(*state_.granted_unit)});
          to_broadcasting(now, fx);
        } else {
          state_.mode = BsMode::Granted;
          last_rx_ = now;
        }
      }
      break;
    case BsMode::Verifying:
      break;
  }
  return fx;
}

BsEffects BaseStation::bs_on_byte(std::uint8_t rx, Micros now, bool framing_error) {
  BsEffects fx;
  if (framing_error) {
    fx.notes.push_back({"framing_error", ""});
    if (state_.mode == BsMode::Granted || state_.mode == BsMode::Receiving) last_rx_ = now;
    return fx;
  }

  switch (state_.mode) {
    case BsMode::Broadcasting:
      if (wire::is_valid_unit_id(rx)) {
        state_.mode = BsMode::Granted;
        state_.granted_unit = rx;
        state_.received.clear();
        last_rx_ = now;
        fx.tx.push_back({now, wire::bytes_of(wire::kAck)});
        fx.notes.push_back({"grant", std::to_string(rx)});
      }
      break;
    case BsMode::Reporting:
      if (report_good_) break;
      state_.mode = BsMode::Granted;
      handle_granted(rx, now, fx);
      break;
    case BsMode::Granted:
      handle_granted(rx, now, fx);
      break;
    case BsMode::Receiving:
      handle_receiving(rx, now, fx);
      break;
    case BsMode::Verifying:
      break;
  }
  return fx;
}

void BaseStation::handle_granted(std::uint8_t rx, Micros now, BsEffects& fx) {
  last_rx_ = now;
  if (rx == *state_.granted_unit) {
    // The unit resent its ID: our ack was lost.
    fx.tx.push_back({now, wire::bytes_of(wire::kAck)});
    fx.notes.push_back({"reack", std::to_string(rx)});
    return;
  }
  if (rx == wire::kEndOfRecords || (rx >= '0' && rx <= '9')) {
    state_.mode = BsMode::Receiving;
    state_.received.clear();
    partial_.clear();
    count_bytes_.clear();
    expecting_count_ = false;
    handle_receiving(rx, now, fx);
    return;
  }
  fx.notes.push_back({"ignore_id", std::to_string(rx)});
}

void BaseStation::discard_attempt(BsEffects& fx) {
  if (!partial_.empty() || !state_.received.empty() || expecting_count_) {
    fx.notes.push_back({"frame_residue", std::to_string(partial_.size())});
  }
  partial_.clear();
  count_bytes_.clear();
  expecting_count_ = false;
  state_.received.clear();
}

void BaseStation::handle_receiving(std::uint8_t rx, Micros now, BsEffects& fx) {
  if (now - last_rx_ > config_.resync_gap) {
    discard_attempt(fx);
    state_.mode = BsMode::Granted;
    handle_granted(rx, now, fx);
    return;
  }
  last_rx_ = now;

  if (expecting_count_) {
    count_bytes_.push_back(rx);
    if (count_bytes_.size() == 2) verify(now, fx);
    return;
  }
  if (partial_.empty() && rx == wire::kEndOfRecords) {
    expecting_count_ = true;
    return;
  }
  partial_.push_back(rx);
  if (partial_.size() < TrackRecord::kSize) return;

  TrackRecord rec(std::span<const std::uint8_t, TrackRecord::kSize>(partial_.data(), TrackRecord::kSize));
  partial_.clear();
  try {
    (void)decode(rec);
    state_.received.push_back(rec);
  } catch (const Error& e) {
    fx.notes.push_back({"bad_frame", std::string(to_string(e.code()))});
  }
}

void BaseStation::verify(Micros now, BsEffects& fx) {
  state_.mode = BsMode::Verifying;
  const int claimed = (count_bytes_[0] << 8) | count_bytes_[1];
  state_.claimed_count = claimed;
  count_bytes_.clear();
  expecting_count_ = false;

  const auto received = static_cast<int>(state_.received.size());
  const std::string detail = "claimed=" + std::to_string(claimed) + " received=" + std::to_string(received);
  if (claimed == received) {
    tracks_.push_back({*state_.granted_unit, now, state_.received});
    fx.tx.push_back({now, wire::bytes_of(wire::kGood)});
    fx.notes.push_back({"verify_good", detail});
    fx.notes.push_back({"persist", std::to_string(*state_.granted_unit) + " rows=" + std::to_string(received)});
    report_good_ = true;
  } else {
    fx.tx.push_back({now, wire::bytes_of(wire::kBad)});
    fx.notes.push_back({"verify_bad", detail});
    state_.received.clear();
    report_good_ = false;
  }
  state_.mode = BsMode::Reporting;
  report_end_ = now + config_.byte_time * 4;
}

}  // namespace trk
