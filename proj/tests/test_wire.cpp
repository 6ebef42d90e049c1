#include "doctest.h"

#include <string>

#include "trk/wire.hpp"

using namespace trk::wire;

namespace {

std::vector<DownlinkWord> push_all(WordMatcher& m, std::string_view s) {
  std::vector<DownlinkWord> out;
  for (char c : s) {
    if (auto w = m.push(static_cast<std::uint8_t>(c))) out.push_back(*w);
  }
  return out;
}

}  // namespace

TEST_CASE("words are four ASCII bytes") {
  CHECK(bytes_of(kFree) == std::vector<std::uint8_t>{'f', 'r', 'e', 'e'});
  CHECK(bytes_of(kAck) == std::vector<std::uint8_t>{'a', 'c', 'k', '!'});
  CHECK(bytes_of(kGood) == std::vector<std::uint8_t>{'g', 'o', 'o', 'd'});
  CHECK(bytes_of(kBad) == std::vector<std::uint8_t>{'b', 'a', 'd', '!'});
  CHECK(match_word(kAck) == DownlinkWord::Ack);
  CHECK_FALSE(match_word(Word{'f', 'r', 'e', 'x'}));
}

TEST_CASE("matcher finds words in a stream") {
  WordMatcher m;
  CHECK(push_all(m, "free") == std::vector{DownlinkWord::Free});
  CHECK(push_all(m, "xxfreeack!") == std::vector{DownlinkWord::Free, DownlinkWord::Ack});
  CHECK(push_all(m, "gooxgood").size() == 1);
  CHECK(push_all(m, "fre").empty());
  m.reset();
  CHECK(push_all(m, "e").empty());
}

TEST_CASE("a matched word is not reused for an overlapping one") {
  WordMatcher m;
  // "freefree" is two words, not three.
  CHECK(push_all(m, "freefree").size() == 2);
}

TEST_CASE("unit id validity") {
  CHECK_FALSE(is_valid_unit_id(0));
  for (std::uint8_t c = '0'; c <= '9'; ++c) CHECK_FALSE(is_valid_unit_id(c));
  CHECK(is_valid_unit_id(1));
  CHECK(is_valid_unit_id(20));
  CHECK(is_valid_unit_id(255));
}
