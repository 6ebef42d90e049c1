#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace trk {

enum class Errc {
  // nmea
  MalformedLine,
  OversizeLine,
  FieldCount,
  BadHemisphere,
  BadPattern,
  // record
  SpeedOverflow,
  // memstore
  BusBusy,
  NotOwner,
  MemoryFull,
  OutOfRange,
  ZeroRecordSize,
  BadMagic,
  BadCount,
  // simkit
  BadRoute,
  ConfigError,
};

std::string_view to_string(Errc code);

// Single exception type for the library. `field` carries the 1-based NMEA
// field index or the scenario line number, depending on the error source.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string what, std::optional<int> field = std::nullopt)
      : std::runtime_error(std::move(what)), code_(code), field_(field) {}

  Errc code() const noexcept { return code_; }
  std::optional<int> field() const noexcept { return field_; }

 private:
  Errc code_;
  std::optional<int> field_;
};

}  // namespace trk
