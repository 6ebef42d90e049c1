#pragma once

// Shared track memory: 2^12 byte-wide cells behind an exclusive-owner bus.
// The owner check stands in for the two-wire bus arbitration between the
// logging and download processes.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trk/record.hpp"
#include "trk/time.hpp"

namespace trk {

enum class ProcessId { P1, P2 };
enum class BusOwner { None, P1, P2 };

std::string_view to_string(BusOwner owner);

inline constexpr unsigned kAddressBits = 12;
inline constexpr std::size_t kMemoryCells = std::size_t{1} << kAddressBits;
inline constexpr std::size_t kMaxRecords = kMemoryCells / TrackRecord::kSize;

static_assert(kMemoryCells == 4096);
static_assert(kMaxRecords == 95);
static_assert(kMaxRecords * TrackRecord::kSize == 4085);

class MemoryBank {
 public:
  MemoryBank() { cells_.fill(0); }

  // Errc::BusBusy if the other process holds the bus.
  void acquire(ProcessId owner);
  // Errc::NotOwner unless `owner` holds the bus.
  void release(ProcessId owner);

  void store_record(ProcessId owner, const TrackRecord& record);
  TrackRecord read_record(ProcessId owner, std::size_t index) const;
  // Zeroes the cells and rewinds the cursor.
  void clear(ProcessId owner);

  BusOwner bus_owner() const { return owner_; }
  std::size_t record_count() const { return count_; }
  std::size_t write_cursor() const { return count_ * TrackRecord::kSize; }
  bool full() const { return count_ == kMaxRecords; }
  std::span<const std::uint8_t, kMemoryCells> cells() const { return cells_; }

  bool operator==(const MemoryBank&) const = default;

  // "TRKMEM v1 count=<n>\n" followed by the raw cells.
  std::vector<std::uint8_t> dump_image() const;
  static MemoryBank load_image(std::span<const std::uint8_t> image);

 private:
  void require_owner(ProcessId owner) const;

  std::array<std::uint8_t, kMemoryCells> cells_;
  std::size_t count_ = 0;
  BusOwner owner_ = BusOwner::None;
};

struct CapacityReport {
  std::int64_t record_size_bits = 0;
  // exact capacity as the reduced fraction numerator / denominator
  std::int64_t exact_numerator = 0;
  std::int64_t exact_denominator = 1;
  std::int64_t records_whole = 0;
  Micros time_to_full{0};

  double records_exact() const {
    return static_cast<double>(exact_numerator) / static_cast<double>(exact_denominator);
  }
};

CapacityReport capacity(std::int64_t mem_bytes, std::int64_t record_bytes, Micros sample_interval);

// Renders 16 bytes per line: offset, hex bytes, printable ASCII.
std::string hexdump(std::span<const std::uint8_t> bytes);

}  // namespace trk
