#pragma once

// Byte-exact messages exchanged between the base station and mobile units.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trk/time.hpp"

namespace trk::wire {

using Word = std::array<std::uint8_t, 4>;

inline constexpr Word kFree{'f', 'r', 'e', 'e'};
inline constexpr Word kAck{'a', 'c', 'k', '!'};
inline constexpr Word kGood{'g', 'o', 'o', 'd'};
inline constexpr Word kBad{'b', 'a', 'd', '!'};

// Sent by the unit between the last record frame and the 2-byte count.
// Never the first byte of a record, which is always an ASCII digit.
inline constexpr std::uint8_t kEndOfRecords = 0x00;

enum class DownlinkWord { Free, Ack, Good, Bad };

std::optional<DownlinkWord> match_word(const Word& w);
std::vector<std::uint8_t> bytes_of(const Word& w);

// Unit ids must be distinguishable from record bytes and the sentinel.
constexpr bool is_valid_unit_id(std::uint8_t id) {
  return id != kEndOfRecords && !(id >= '0' && id <= '9');
}

// Sliding 4-byte window over a byte stream; reports a word when the last
// four bytes spell one, then starts over.
class WordMatcher {
 public:
  std::optional<DownlinkWord> push(std::uint8_t byte);
  void reset() { filled_ = 0; }

 private:
  Word window_{};
  std::size_t filled_ = 0;
};

// Common effect types returned by the protocol actors.
struct Transmission {
  Micros at{0};
  std::vector<std::uint8_t> bytes;
};

struct Note {
  std::string kind;
  std::string detail;
};

}  // namespace trk::wire
