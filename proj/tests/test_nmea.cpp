#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "sample_sentences.hpp"
#include "trk/error.hpp"
#include "trk/nmea.hpp"

using namespace trk;
using namespace trk::nmea;

namespace {

std::vector<ScanStep> feed_all(Scanner& s, std::string_view bytes) {
  std::vector<ScanStep> steps;
  for (char c : bytes) steps.push_back(s.feed(static_cast<std::uint8_t>(c)));
  return steps;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected trk::Error");
  return Errc::ConfigError;
}

}  // namespace

TEST_CASE("scanner emits one RMC match on the final terminator byte") {
  Scanner s;
  const std::string input = std::string(fixtures::kRmcValid) + "\r\n";
  const auto steps = feed_all(s, input);
  int matches = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].status == ScanStatus::Match) {
      ++matches;
      CHECK(i == input.size() - 2);  // the '\r'
      REQUIRE(steps[i].match);
      CHECK(steps[i].match->kind == MatchKind::Rmc);
      CHECK(steps[i].match->sentence.raw == fixtures::kRmcValid);
    }
  }
  CHECK(matches == 1);
  CHECK_FALSE(s.in_line());
}

TEST_CASE("scanner accepts CR, LF and CRLF terminators") {
  for (std::string term : {"\r", "\n", "\r\n"}) {
    Scanner s;
    int matches = 0;
    for (const auto& st : feed_all(s, std::string(fixtures::kGga) + term)) matches += st.status == ScanStatus::Match;
    CHECK(matches == 1);
  }
}

TEST_CASE("scanner ignores tags other than RMC and GGA") {
  Scanner s;
  for (const auto& st : feed_all(s, "$GPVTG,309.62,T,,M,0.13,N,0.2,K*6E\r\n$GPZDA,161229.487,12,05,1998,00,00*66\r\n")) {
    CHECK(st.status == ScanStatus::None);
  }
}

TEST_CASE("scanner matches any tag containing RMC or GGA") {
  Scanner s;
  const auto steps = feed_all(s, nmea::with_checksum("GNRMC,1") + "\n");
  CHECK(steps.back().status == ScanStatus::Match);
  CHECK(steps.back().match->kind == MatchKind::Rmc);
}

TEST_CASE("oversize line resets the scanner, which then parses a fresh sentence") {
  Scanner s;
  std::string junk = "$";
  junk += std::string(199, 'A');
  int oversize = 0;
  for (const auto& st : feed_all(s, junk)) oversize += st.status == ScanStatus::OversizeLine;
  CHECK(oversize == 1);
  CHECK_FALSE(s.in_line());

  const auto steps = feed_all(s, std::string(fixtures::kRmcValid) + "\r\n");
  REQUIRE(steps[steps.size() - 2].status == ScanStatus::Match);
  const GpsFix fix = parse_rmc(steps[steps.size() - 2].match->sentence);
  CHECK(fix == fixtures::reference_fix());
}

TEST_CASE("a 128-byte line is accepted, 129 is oversize") {
  const std::string body = "GPGGA," + std::string(128 - 7, '1');  // "$" + body = 128 bytes
  REQUIRE(body.size() + 1 == kMaxLineBytes);
  Scanner s;
  auto steps = feed_all(s, "$" + body + "\n");
  CHECK(steps.back().status == ScanStatus::Match);
  steps = feed_all(s, "$" + body + "1\n");
  CHECK(steps[steps.size() - 2].status == ScanStatus::OversizeLine);
  CHECK(steps.back().status == ScanStatus::None);
}

TEST_CASE("malformed matching line is reported, not matched") {
  Scanner s;
  const auto steps = feed_all(s, "$GPRMC,1*2*3\r\n");
  CHECK(steps[steps.size() - 2].status == ScanStatus::MalformedLine);
}

TEST_CASE("batch and byte-at-a-time scanning agree") {
  std::mt19937_64 rng(11);
  const std::vector<std::string> pool = {std::string(fixtures::kRmcValid), std::string(fixtures::kGga),
                                         std::string(fixtures::kGll), "$GPVTG,,T,,M*00", "garbage", "$GPRMC,short"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string stream;
    std::vector<std::string> expected;
    const int n = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) {
      const std::string& line = pool[rng() % pool.size()];
      stream += line;
      stream += (rng() % 2) ? "\r\n" : "\n";
      const auto tag = peek_tag(line);
      if (tag_matches(tag, MatchKind::Rmc) || tag_matches(tag, MatchKind::Gga)) expected.push_back(line);
    }
    Scanner s;
    std::vector<std::string> got;
    for (const auto& st : feed_all(s, stream)) {
      if (st.match) got.push_back(st.match->sentence.raw);
    }
    CHECK(got == expected);
  }
}

TEST_CASE("tokenize splits tag, data fields and checksum") {
  const Sentence gll = tokenize(fixtures::kGll);
  CHECK(gll.type_tag == "GPGLL");
  CHECK(gll.fields.size() == 6);
  REQUIRE(gll.checksum_claimed);
  CHECK(*gll.checksum_claimed == 0x2C);

  const Sentence x = tokenize("$X*00");
  CHECK(x.type_tag == "X");
  CHECK(x.fields.empty());
}

TEST_CASE("tokenize keeps empty fields in position") {
  const Sentence s = tokenize("$GPGGA,,a,,b,*00");
  REQUIRE(s.fields.size() == 5);
  CHECK(s.fields[0].empty());
  CHECK(s.fields[1] == "a");
  CHECK(s.fields[2].empty());
  CHECK(s.fields[3] == "b");
  CHECK(s.fields[4].empty());
}

TEST_CASE("tokenize rejects malformed lines") {
  CHECK(code_of([] { tokenize("$A,B*C*D"); }) == Errc::MalformedLine);
  CHECK(code_of([] { tokenize("GPRMC,1*00"); }) == Errc::MalformedLine);
  CHECK(code_of([] { tokenize("$GPRMC,1*0"); }) == Errc::MalformedLine);
  CHECK(code_of([] { tokenize("$GPRMC,1*ZZ"); }) == Errc::MalformedLine);
  CHECK(code_of([] { tokenize("$,1*00"); }) == Errc::MalformedLine);
  CHECK(code_of([] { tokenize(std::string("$GP\x01RMC*00")); }) == Errc::MalformedLine);
}

TEST_CASE("checksum verification") {
  CHECK(verify_checksum(tokenize("$A*41")));
  CHECK_FALSE(verify_checksum(tokenize("$A*42")));
  CHECK(verify_checksum(tokenize("$A*41")) == (fixtures::oracle_checksum("$A*41") == 0x41));

  // Oracle values computed outside the library.
  CHECK(fixtures::oracle_checksum(fixtures::kGll) == 0x2C);
  CHECK(verify_checksum(tokenize(fixtures::kGll)));
  CHECK(verify_checksum(tokenize(fixtures::kGga)));
  CHECK(verify_checksum(tokenize(fixtures::kRmcValid)));
  CHECK(fixtures::oracle_checksum(fixtures::kRmcQuoted) == 0x3C);
  CHECK_FALSE(verify_checksum(tokenize(fixtures::kRmcQuoted)));
  CHECK_FALSE(verify_checksum(tokenize("$GPRMC,1")));  // no checksum at all
}

TEST_CASE("checksum agrees with the oracle on random payloads") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    std::string payload = "GP";
    const int len = static_cast<int>(rng() % 70);
    for (int k = 0; k < len; ++k) {
      char c = static_cast<char>(0x20 + rng() % 95);
      if (c == '*' || c == '$') c = ',';
      payload += c;
    }
    const std::string line = with_checksum(payload);
    CHECK(xor_fold(payload) == fixtures::oracle_checksum(line));
    CHECK(verify_checksum(tokenize(line)));
  }
}

TEST_CASE("parse_rmc extracts the reference fix") {
  const GpsFix fix = parse_rmc(tokenize(fixtures::kRmcQuoted));
  CHECK(fix.time_utc == "161229.487");
  CHECK(fix.latitude == "3723.2475");
  CHECK(fix.lat_hemi == 'N');
  CHECK(fix.longitude == "12158.3416");
  CHECK(fix.lon_hemi == 'W');
  CHECK(fix.speed_knots == "0.13");
  CHECK(fix.date == "120598");
  CHECK(fix.valid);
  CHECK(parse_rmc(tokenize(fixtures::kRmcValid)) == fix);
}

TEST_CASE("parse_rmc with validity V still extracts every field") {
  const GpsFix fix = parse_rmc(tokenize("$GPRMC,161229.487,V,3723.2475,N,12158.3416,W,0.13,309.62,120598,,*00"));
  CHECK_FALSE(fix.valid);
  GpsFix expected = fixtures::reference_fix();
  expected.valid = false;
  CHECK(fix == expected);
}

TEST_CASE("parse_rmc errors") {
  CHECK(code_of([] { parse_rmc(tokenize("$GPRMC,161229.487,A,3723.2475,N,12158.3416*00")); }) == Errc::FieldCount);
  CHECK(code_of([] { parse_rmc(tokenize("$GPRMC,161229.487,A,3723.2475,X,12158.3416,W,0.13,,120598,,*00")); }) ==
        Errc::BadHemisphere);
  try {
    parse_rmc(tokenize("$GPRMC,161229.487,A,3723.247,N,12158.3416,W,0.13,,120598,,*00"));
    FAIL("expected BadPattern");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BadPattern);
    CHECK(e.field() == 3);
  }
}

TEST_CASE("parse_gga extracts quality, satellites and altitude") {
  const GgaInfo g = parse_gga(tokenize(fixtures::kGga));
  CHECK(g.time_utc == "161229.487");
  CHECK(g.latitude == "3723.2475");
  CHECK(g.lat_hemi == 'N');
  CHECK(g.longitude == "12158.3416");
  CHECK(g.lon_hemi == 'W');
  CHECK(g.quality == 1);
  CHECK(g.num_satellites == 7);
  CHECK(g.hdop == "1.0");
  CHECK(g.altitude_m == "9.0");

  CHECK(parse_gga(tokenize("$GPGGA,161229.487,3723.2475,N,12158.3416,W,0,00,,,M,,,,0000*00")).quality == 0);
}

TEST_CASE("parse_gga with an empty satellite field fails on field 7") {
  try {
    parse_gga(tokenize("$GPGGA,161229.487,3723.2475,N,12158.3416,W,1,,1.0,9.0,M,,,,0000*00"));
    FAIL("expected BadPattern");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BadPattern);
    CHECK(e.field() == 7);
  }
  CHECK(code_of([] { parse_gga(tokenize("$GPGGA,161229.487,3723.2475,N*00")); }) == Errc::FieldCount);
}

TEST_CASE("classify by the three-letter format code") {
  CHECK(classify("GPRMC") == MessageClass::RecommendedMinimum);
  CHECK(classify("GPGGA") == MessageClass::FixData);
  CHECK(classify("GPGLL") == MessageClass::GeographicPosition);
  CHECK(classify("GPGSA") == MessageClass::DopActiveSatellites);
  CHECK(classify("GPGSV") == MessageClass::SatellitesInView);
  CHECK(classify("GPVTG") == MessageClass::CourseOverGround);
  CHECK(classify("GPMSS") == MessageClass::BeaconSignal);
  CHECK(classify("GPZDA") == MessageClass::PpsTiming);
  CHECK(classify("GPXYZ") == MessageClass::Other);
  CHECK(classify("X") == MessageClass::Other);
}

TEST_CASE("rendered sentences parse back") {
  CHECK(render_rmc(fixtures::reference_fix(), "309.62") == fixtures::kRmcValid);
  CHECK(parse_gga(tokenize(fixtures::kGga)) == parse_gga(tokenize(render_gga(parse_gga(tokenize(fixtures::kGga))))));
  CHECK(render_gga(parse_gga(tokenize(fixtures::kGga))) == fixtures::kGga);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const GpsFix f = fixtures::random_fix(rng);
    const Sentence s = tokenize(render_rmc(f));
    CHECK(verify_checksum(s));
    CHECK(parse_rmc(s) == f);
  }
}

TEST_CASE("field pattern checks") {
  CHECK(is_time_text("161229.487"));
  CHECK_FALSE(is_time_text("161229.48"));
  CHECK(is_latitude_text("3723.2475"));
  CHECK_FALSE(is_latitude_text("37232475"));
  CHECK(is_longitude_text("12158.3416"));
  CHECK_FALSE(is_longitude_text("2158.3416"));
  CHECK(is_date_text("120598"));
  CHECK_FALSE(is_date_text("12059"));
  CHECK(is_speed_text("0.13"));
  CHECK(is_speed_text("12"));
  CHECK_FALSE(is_speed_text(""));
  CHECK_FALSE(is_speed_text("-1"));
  CHECK_FALSE(is_speed_text("1.2.3"));
}
