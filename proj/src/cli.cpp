#include "trk/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "trk/error.hpp"
#include "trk/memstore.hpp"
#include "trk/nmea.hpp"
#include "trk/record.hpp"
#include "trk/simkit.hpp"

namespace trk::cli {

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return ss.str();
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\r' || text[i] == '\n') {
      lines.push_back(text.substr(start, i - start));
      if (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      start = i + 1;
    }
  }
  if (start < text.size()) lines.push_back(text.substr(start));
  return lines;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

int cmd_parse(const std::string& input, std::ostream& out, std::ostream& err) {
  const auto text = read_file(input);
  if (!text) {
    err << "trkctl: cannot read " << input << "\n";
    return kIoError;
  }

  std::vector<std::string> rows;
  const auto lines = split_lines(*text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    const std::size_t line_no = i + 1;
    if (line.empty()) continue;
    try {
      const nmea::Sentence s = nmea::tokenize(line);
      if (nmea::classify(s.type_tag) != nmea::MessageClass::RecommendedMinimum) continue;
      const nmea::GpsFix fix = nmea::parse_rmc(s);
      if (!nmea::verify_checksum(s)) err << input << ":" << line_no << ": warning: checksum mismatch\n";
      if (!fix.valid) err << input << ":" << line_no << ": warning: fix flagged invalid (V)\n";
      rows.push_back(csv::row(fix));
    } catch (const Error& e) {
      err << input << ":" << line_no << ": " << to_string(e.code()) << ": " << e.what() << "\n";
    }
  }

  if (rows.empty()) {
    err << "trkctl: no RMC fixes in " << input << "\n";
    return kNoFixes;
  }
  out << csv::header() << "\n";
  for (const auto& r : rows) out << r << "\n";
  return kOk;
}

int cmd_capacity(std::int64_t mem, std::int64_t record_bits, const std::string& interval_text, std::ostream& out,
                 std::ostream& err) {
  Micros interval{0};
  try {
    interval = parse_duration(interval_text);
  } catch (const std::exception& e) {
    err << "trkctl: --interval: " << e.what() << "\n";
    return kUsage;
  }
  if (mem <= 0 || record_bits <= 0 || interval <= Micros{0}) {
    err << "trkctl: --mem, --record-bits and --interval must be positive\n";
    return kUsage;
  }
  const std::int64_t record_bytes = (record_bits + 7) / 8;
  const CapacityReport r = capacity(mem, record_bytes, interval);
  char exact[32];
  std::snprintf(exact, sizeof exact, "%.2f", r.records_exact());
  out << "record: " << record_bits << " bits = " << record_bytes << " bytes\n";
  out << "memory: " << mem << " bytes\n";
  out << r.records_whole << " records (" << exact << " exact), full in " << format_hours_minutes(r.time_to_full)
      << "\n";
  return kOk;
}

struct SimulateFlags {
  std::string scenario;
  std::string out_dir = "sim_out";
  std::optional<std::uint64_t> seed;
  std::optional<double> corruption_rate;
  std::optional<std::string> interval;
  bool trace = false;
};

int cmd_simulate(const SimulateFlags& flags, std::ostream& out, std::ostream& err) {
  const auto text = read_file(flags.scenario);
  if (!text) {
    err << "trkctl: cannot read " << flags.scenario << "\n";
    return kIoError;
  }
  sim::Scenario sc;
  try {
    sc = sim::parse_scenario(*text);
    if (flags.seed) sc.channel.rng_seed = *flags.seed;
    if (flags.corruption_rate) sc.channel.corruption_rate = *flags.corruption_rate;
    if (flags.interval) {
      try {
        sc.sample_interval = parse_duration(*flags.interval);
      } catch (const std::exception& e) {
        throw Error(Errc::ConfigError, std::string("--interval: ") + e.what());
      }
    }
    sc.validate();
  } catch (const Error& e) {
    err << flags.scenario << ": " << e.what() << "\n";
    return kDataError;
  }

  const sim::RunResult result = sim::run(sc, {flags.trace});
  try {
    sim::write_outputs(result, flags.out_dir);
  } catch (const std::exception& e) {
    err << "trkctl: " << e.what() << "\n";
    return kIoError;
  }
  for (const auto& s : result.summaries) out << sim::format_summary(s) << "\n";
  err << "trkctl: " << result.log.entries.size() << " events written to " << flags.out_dir << "\n";
  return kOk;
}

std::optional<MemoryBank> load_bank(const std::string& path, std::ostream& err, int& code) {
  const auto text = read_file(path);
  if (!text) {
    err << "trkctl: cannot read " << path << "\n";
    code = kIoError;
    return std::nullopt;
  }
  try {
    return MemoryBank::load_image(
        std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text->data()), text->size()));
  } catch (const Error& e) {
    err << path << ": " << to_string(e.code()) << ": " << e.what() << "\n";
    code = kDataError;
    return std::nullopt;
  }
}

int cmd_dump_memory(const std::string& path, std::ostream& out, std::ostream& err) {
  int code = kOk;
  const auto bank = load_bank(path, err, code);
  if (!bank) return code;
  out << "TRKMEM v1 count=" << bank->record_count() << "\n";
  out << hexdump(bank->cells());
  return kOk;
}

int cmd_decode_track(const std::string& path, std::ostream& out, std::ostream& err) {
  int code = kOk;
  auto bank = load_bank(path, err, code);
  if (!bank) return code;
  bank->acquire(ProcessId::P2);
  out << csv::header() << "\n";
  for (std::size_t i = 0; i < bank->record_count(); ++i) {
    try {
      out << csv::row(decode(bank->read_record(ProcessId::P2, i))) << "\n";
    } catch (const Error& e) {
      err << path << ": record " << i << ": " << to_string(e.code()) << ": " << e.what() << "\n";
      code = kDataError;
    }
  }
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"GPS track logger toolkit: NMEA parsing, memory capacity, fleet simulation", "trkctl"};
  app.require_subcommand(1);

  std::string parse_input;
  auto* parse = app.add_subcommand("parse", "Extract RMC fixes from an NMEA file as CSV");
  parse->add_option("input", parse_input, "NMEA text file")->required();

  std::int64_t mem = static_cast<std::int64_t>(kMemoryCells);
  std::int64_t record_bits = static_cast<std::int64_t>(TrackRecord::kBits);
  std::string interval = "2m";
  auto* cap = app.add_subcommand("capacity", "Records that fit in memory and time until full");
  cap->add_option("--mem", mem, "Memory size in bytes")->capture_default_str();
  cap->add_option("--record-bits", record_bits, "Record size in bits")->capture_default_str();
  cap->add_option("--interval", interval, "Sampling interval, e.g. 2m, 90s")->capture_default_str();

  SimulateFlags sim_flags;
  auto* simulate = app.add_subcommand("simulate", "Run a fleet scenario");
  simulate->add_option("scenario", sim_flags.scenario, "Scenario file")->required();
  simulate->add_option("--out", sim_flags.out_dir, "Output directory")->capture_default_str();
  simulate->add_option("--seed", sim_flags.seed, "Override the channel RNG seed");
  simulate->add_option("--corruption-rate", sim_flags.corruption_rate, "Override the per-byte corruption rate");
  simulate->add_option("--interval", sim_flags.interval, "Override the sampling interval");
  simulate->add_flag("--trace", sim_flags.trace, "Write wire_trace.txt");

  std::string image_path;
  auto* dump = app.add_subcommand("dump-memory", "Hex dump of a memory image");
  dump->add_option("image", image_path, "TRKMEM image")->required();
  auto* decode_track = app.add_subcommand("decode-track", "Decode the records of a memory image as CSV");
  decode_track->add_option("image", image_path, "TRKMEM image")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "trkctl: " << e.what() << "\n";
    return kUsage;
  }

  if (*parse) return cmd_parse(parse_input, out, err);
  if (*cap) return cmd_capacity(mem, record_bits, interval, out, err);
  if (*simulate) return cmd_simulate(sim_flags, out, err);
  if (*dump) return cmd_dump_memory(image_path, out, err);
  if (*decode_track) return cmd_decode_track(image_path, out, err);
  return kUsage;
}

}  // namespace trk::cli
