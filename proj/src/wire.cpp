#include "trk/wire.hpp"

#include <algorithm>

namespace trk::wire {

std::optional<DownlinkWord> match_word(const Word& w) {
  if (w == kFree) return DownlinkWord::Free;
  if (w == kAck) return DownlinkWord::Ack;
  if (w == kGood) return DownlinkWord::Good;
  if (w == kBad) return DownlinkWord::Bad;
  return std::nullopt;
}

std::vector<std::uint8_t> bytes_of(const Word& w) { return {w.begin(), w.end()}; }

std::optional<DownlinkWord> WordMatcher::push(std::uint8_t byte) {
  if (filled_ < window_.size()) {
    window_[filled_++] = byte;
  } else {
    std::shift_left(window_.begin(), window_.end(), 1);
    window_.back() = byte;
  }
  if (filled_ < window_.size()) return std::nullopt;
  auto word = match_word(window_);
  if (word) filled_ = 0;
  return word;
}

}  // namespace trk::wire
