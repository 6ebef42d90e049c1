#include "trk/error.hpp"

namespace trk {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::OversizeLine: return "OversizeLine";
    case Errc::FieldCount: return "FieldCount";
    case Errc::BadHemisphere: return "BadHemisphere";
    case Errc::BadPattern: return "BadPattern";
    case Errc::SpeedOverflow: return "SpeedOverflow";
    case Errc::BusBusy: return "BusBusy";
    case Errc::NotOwner: return "NotOwner";
    case Errc::MemoryFull: return "MemoryFull";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::ZeroRecordSize: return "ZeroRecordSize";
    case Errc::BadMagic: return "BadMagic";
    case Errc::BadCount: return "BadCount";
    case Errc::BadRoute: return "BadRoute";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace trk
