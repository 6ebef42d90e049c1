#include "trk/memstore.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <numeric>
#include <string_view>

#include "trk/error.hpp"

namespace trk {

namespace {

constexpr std::string_view kMagic = "TRKMEM v1 count=";

BusOwner as_owner(ProcessId p) { return p == ProcessId::P1 ? BusOwner::P1 : BusOwner::P2; }

}  // namespace

std::string_view to_string(BusOwner owner) {
  switch (owner) {
    case BusOwner::None: return "none";
    case BusOwner::P1: return "P1";
    case BusOwner::P2: return "P2";
  }
  return "none";
}

void MemoryBank::acquire(ProcessId owner) {
  if (owner_ != BusOwner::None && owner_ != as_owner(owner)) {
    throw Error(Errc::BusBusy, std::string("bus held by ") + std::string(to_string(owner_)));
  }
  owner_ = as_owner(owner);
}

void MemoryBank::release(ProcessId owner) {
  if (owner_ != as_owner(owner)) {
    throw Error(Errc::NotOwner, std::string("release by non-holder ") + std::string(to_string(as_owner(owner))));
  }
  owner_ = BusOwner::None;
}

void MemoryBank::require_owner(ProcessId owner) const {
  if (owner_ != as_owner(owner)) {
    throw Error(Errc::BusBusy, std::string(to_string(as_owner(owner))) + " does not hold the bus");
  }
}

void MemoryBank::store_record(ProcessId owner, const TrackRecord& record) {
  require_owner(owner);
  if (full()) throw Error(Errc::MemoryFull, "memory holds " + std::to_string(kMaxRecords) + " records");
  const auto bytes = record.bytes();
  std::copy(bytes.begin(), bytes.end(), cells_.begin() + static_cast<std::ptrdiff_t>(write_cursor()));
  ++count_;
}

TrackRecord MemoryBank::read_record(ProcessId owner, std::size_t index) const {
  require_owner(owner);
  if (index >= count_) {
    throw Error(Errc::OutOfRange, "record " + std::to_string(index) + " of " + std::to_string(count_));
  }
  return TrackRecord(std::span<const std::uint8_t, TrackRecord::kSize>(
      cells_.data() + index * TrackRecord::kSize, TrackRecord::kSize));
}

void MemoryBank::clear(ProcessId owner) {
  require_owner(owner);
  cells_.fill(0);
  count_ = 0;
}

std::vector<std::uint8_t> MemoryBank::dump_image() const {
  const std::string header = std::string(kMagic) + std::to_string(count_) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), cells_.begin(), cells_.end());
  return out;
}

MemoryBank MemoryBank::load_image(std::span<const std::uint8_t> image) {
  const std::string_view text(reinterpret_cast<const char*>(image.data()), image.size());
  if (!text.starts_with(kMagic)) throw Error(Errc::BadMagic, "missing TRKMEM v1 header");
  const auto newline = text.find('\n');
  if (newline == std::string_view::npos) throw Error(Errc::BadMagic, "unterminated header");

  const std::string_view digits = text.substr(kMagic.size(), newline - kMagic.size());
  std::size_t count = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), count);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) {
    throw Error(Errc::BadMagic, "bad count field");
  }
  if (count > kMaxRecords) throw Error(Errc::BadCount, "count " + std::to_string(count) + " exceeds capacity");
  if (image.size() - newline - 1 != kMemoryCells) {
    throw Error(Errc::BadCount, "image body has " + std::to_string(image.size() - newline - 1) +
                                    " bytes, expected " + std::to_string(kMemoryCells));
  }

  MemoryBank bank;
  std::copy(image.begin() + static_cast<std::ptrdiff_t>(newline + 1), image.end(), bank.cells_.begin());
  bank.count_ = count;
  return bank;
}

CapacityReport capacity(std::int64_t mem_bytes, std::int64_t record_bytes, Micros sample_interval) {
  if (record_bytes <= 0) throw Error(Errc::ZeroRecordSize, "record size must be positive");
  CapacityReport r;
  r.record_size_bits = record_bytes * 8;
  const std::int64_t g = std::gcd(mem_bytes, record_bytes);
  r.exact_numerator = mem_bytes / g;
  r.exact_denominator = record_bytes / g;
  r.records_whole = mem_bytes / record_bytes;
  r.time_to_full = sample_interval * r.records_whole;
  return r;
}

std::string hexdump(std::span<const std::uint8_t> bytes) {
  std::string out;
  char buf[16];
  for (std::size_t line = 0; line < bytes.size(); line += 16) {
    std::snprintf(buf, sizeof buf, "%08zx ", line);
    out += buf;
    const std::size_t end = std::min(bytes.size(), line + 16);
    for (std::size_t i = line; i < line + 16; ++i) {
      if (i < end) {
        std::snprintf(buf, sizeof buf, " %02x", bytes[i]);
        out += buf;
      } else {
        out += "   ";
      }
    }
    out += "  |";
    for (std::size_t i = line; i < end; ++i) {
      const auto c = bytes[i];
      out += (c >= 0x20 && c < 0x7F) ? static_cast<char>(c) : '.';
    }
    out += "|\n";
  }
  return out;
}

}  // namespace trk
