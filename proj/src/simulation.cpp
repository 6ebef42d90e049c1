#include <algorithm>
#include <fstream>

#include "json.hpp"

#include "trk/error.hpp"
#include "trk/simkit.hpp"

namespace trk::sim {

std::string EventLog::to_jsonl() const {
  std::string out;
  out.reserve(entries.size() * 64);
  for (const auto& e : entries) {
    nlohmann::ordered_json j;
    j["t_us"] = e.time.count();
    j["actor"] = e.actor == kBaseStation ? std::string("bs") : "unit" + std::to_string(e.actor);
    j["kind"] = e.kind;
    j["detail"] = e.detail;
    out += j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

std::string format_summary(const UnitSummary& s) {
  return "unit " + std::to_string(s.unit_id) + ": " + std::to_string(s.logged) + " logged, " +
         std::to_string(s.attempts) + (s.attempts == 1 ? " attempt, " : " attempts, ") +
         std::string(to_string(s.outcome));
}

Simulation::Simulation(const Scenario& scenario, RunOptions options)
    : scenario_(scenario), options_(options), channel_(scenario.channel), bs_(scenario.bs) {
  scenario_.validate();

  for (const UnitSpec& spec : scenario_.units) {
    UnitConfig cfg;
    cfg.unit_id = spec.unit_id;
    cfg.ack_timeout = scenario_.ack_timeout;
    cfg.max_download_retries = scenario_.max_download_retries;
    cfg.byte_time = scenario_.channel.byte_time;
    cfg.misreport_count_attempts = spec.misreport_count_attempts;
    cfg.drop_acks = spec.drop_acks;
    units_.emplace(spec.unit_id, std::make_unique<MobileUnit>(cfg));

    if (channel_.in_range(spec.unit_id)) {
      Event ev;
      ev.time = Micros{0};
      ev.actor = spec.unit_id;
      ev.kind = Kind::Range;
      ev.token = 1;
      push(ev);
    }
    for (const Window& w : spec.rendezvous) {
      Event on;
      on.time = w.from;
      on.actor = spec.unit_id;
      on.kind = Kind::Range;
      on.token = 1;
      push(on);
      Event off = on;
      off.time = w.to;
      off.token = 0;
      push(off);
    }

    feeds_[spec.unit_id].sentences = gen_nmea(spec.route, scenario_.sample_interval, scenario_.start_utc,
                                              scenario_.channel.byte_time);
    schedule_next_gps_byte(spec.unit_id);
  }

  bs_tick_at_ = bs_.next_wakeup();
  Event tick;
  tick.time = *bs_tick_at_;
  tick.actor = kBaseStation;
  tick.kind = Kind::BsTick;
  tick.token = bs_token_;
  push(tick);
}

Simulation::~Simulation() = default;

const MobileUnit& Simulation::unit(std::uint8_t id) const { return *units_.at(id); }

void Simulation::push(Event ev) {
  ev.seq = seq_++;
  queue_.push(std::move(ev));
}

void Simulation::note(EndpointId actor, Micros t, std::string kind, std::string detail) {
  log_.entries.push_back({t, actor, std::move(kind), std::move(detail)});
}

void Simulation::schedule_next_gps_byte(std::uint8_t unit) {
  GpsFeed& feed = feeds_[unit];
  if (feed.sentence >= feed.sentences.size()) return;
  const TimedSentence& s = feed.sentences[feed.sentence];
  Event ev;
  // A UART byte is available once its stop bit has been received.
  ev.time = s.at + scenario_.channel.byte_time * static_cast<std::int64_t>(feed.byte + 1);
  ev.actor = unit;
  ev.kind = Kind::GpsByte;
  ev.wire.byte = static_cast<std::uint8_t>(s.text[feed.byte]);
  push(ev);
  if (++feed.byte == s.text.size()) {
    feed.byte = 0;
    ++feed.sentence;
  }
}

void Simulation::transmit(EndpointId source, const wire::Transmission& tx) {
  SendResult sent = channel_.send(source, tx.bytes, tx.at);
  const Micros bt = scenario_.channel.byte_time;

  if (source != kBaseStation && sent.out_of_range) {
    note(source, now_, "tx_void", std::to_string(tx.bytes.size()));
  }
  for (const WireEvent& w : sent.events) {
    const std::size_t trace_index = trace_.size();
    if (options_.trace) trace_.push_back(w);

    if (w.direction == Direction::Uplink) {
      if (sent.out_of_range) continue;
      Event ev;
      ev.time = w.time + bt;
      ev.actor = kBaseStation;
      ev.kind = Kind::Uplink;
      ev.wire = w;
      ev.trace_index = trace_index;
      push(ev);
    } else {
      for (const auto& [id, unit] : units_) {
        if (!channel_.in_range(id)) continue;
        Event ev;
        ev.time = w.time + bt;
        ev.actor = id;
        ev.kind = Kind::Downlink;
        ev.wire = w;
        push(ev);
      }
    }
  }
}

void Simulation::apply(std::uint8_t unit, UnitEffects fx, Micros now) {
  for (auto& n : fx.notes) note(unit, now, std::move(n.kind), std::move(n.detail));
  for (const auto& tx : fx.tx) transmit(unit, tx);
  if (fx.timer) {
    Event ev;
    ev.time = std::max(fx.timer->at, now);
    ev.actor = unit;
    ev.kind = Kind::UnitTimer;
    ev.token = fx.timer->token;
    push(ev);
  }
}

void Simulation::apply(BsEffects fx, Micros now) {
  for (auto& n : fx.notes) note(kBaseStation, now, std::move(n.kind), std::move(n.detail));
  for (const auto& tx : fx.tx) transmit(kBaseStation, tx);

  // A tick that fires early is harmless, so only ever move the wakeup earlier.
  const Micros wake = std::max(bs_.next_wakeup(), now);
  if (!bs_tick_at_ || wake < *bs_tick_at_) {
    bs_tick_at_ = wake;
    Event ev;
    ev.time = wake;
    ev.actor = kBaseStation;
    ev.kind = Kind::BsTick;
    ev.token = ++bs_token_;
    push(ev);
  }
}

bool Simulation::step() {
  if (queue_.empty() || queue_.top().time > scenario_.duration) return false;
  const Event ev = queue_.top();
  queue_.pop();
  now_ = ev.time;

  switch (ev.kind) {
    case Kind::GpsByte: {
      const auto id = static_cast<std::uint8_t>(ev.actor);
      apply(id, units_.at(id)->p1_feed(ev.wire.byte, now_), now_);
      schedule_next_gps_byte(id);
      break;
    }
    case Kind::UnitTimer: {
      const auto id = static_cast<std::uint8_t>(ev.actor);
      apply(id, units_.at(id)->on_timer(ev.token, now_), now_);
      break;
    }
    case Kind::Range: {
      const auto id = static_cast<std::uint8_t>(ev.actor);
      const bool in = ev.token != 0;
      channel_.set_in_range(id, in);
      if (units_.at(id)->in_range() != in) note(id, now_, in ? "in_range" : "out_of_range", "");
      apply(id, units_.at(id)->set_in_range(in, now_), now_);
      break;
    }
    case Kind::Downlink: {
      const auto id = static_cast<std::uint8_t>(ev.actor);
      if (channel_.in_range(id)) apply(id, units_.at(id)->p2_on_channel_byte(ev.wire.byte, now_), now_);
      break;
    }
    case Kind::Uplink: {
      const auto src = static_cast<std::uint8_t>(ev.wire.source);
      if (!channel_.in_range(src)) break;
      const bool collided = channel_.collides(ev.wire);
      if (collided && options_.trace) trace_[ev.trace_index].collided = true;
      channel_.forget_before(now_);
      apply(bs_.bs_on_byte(ev.wire.byte, now_, collided), now_);
      break;
    }
    case Kind::BsTick:
      if (ev.token != bs_token_) break;
      bs_tick_at_.reset();
      apply(bs_.bs_tick(now_), now_);
      break;
  }
  return true;
}

RunResult Simulation::finish() {
  while (step()) {
  }
  RunResult r;
  r.log = log_;
  for (const auto& [id, unit] : units_) {
    r.banks.emplace(id, unit->bank());
    r.summaries.push_back({id, unit->fixes_logged(), unit->download_attempts(), unit->outcome()});
  }
  r.tracks = bs_.tracks();
  r.trace = trace_;
  std::stable_sort(r.trace.begin(), r.trace.end(), [](const WireEvent& a, const WireEvent& b) {
    return a.time != b.time ? a.time < b.time : a.source < b.source;
  });
  return r;
}

RunResult run(const Scenario& scenario, RunOptions options) {
  Simulation sim(scenario, options);
  return sim.finish();
}

void write_outputs(const RunResult& result, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto write = [&](const fs::path& name, std::string_view data) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
  };

  write("events.jsonl", result.log.to_jsonl());

  for (const auto& [id, bank] : result.banks) {
    const auto image = bank.dump_image();
    write("unit" + std::to_string(id) + ".trkmem",
          std::string_view(reinterpret_cast<const char*>(image.data()), image.size()));
  }

  std::map<std::uint8_t, std::vector<TrackRecord>> by_unit;
  for (const auto& t : result.tracks) {
    auto& rows = by_unit[t.unit_id];
    rows.insert(rows.end(), t.records.begin(), t.records.end());
  }
  for (const auto& [id, records] : by_unit) {
    write("track_unit" + std::to_string(id) + ".csv", csv::track(records));
  }

  if (!result.trace.empty()) {
    std::string lines;
    for (const auto& w : result.trace) {
      lines += format_trace(w);
      lines += '\n';
    }
    write("wire_trace.txt", lines);
  }
}

}  // namespace trk::sim
