#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <sstream>

#include "v2vlab/errors.hpp"
#include "v2vlab/rng.hpp"
#include "v2vlab/simulator.hpp"
#include "v2vlab/text.hpp"

namespace v2vlab {

void SimConfig::validate() const {
  if (!(duration_s >= 0.0) || !std::isfinite(duration_s)) throw ValidationError("duration must be >= 0");
  if (warmup_frames < 0) throw ValidationError("warm-up frames must be >= 0");
  if (!(offered_rate_hz >= 0.0) || !std::isfinite(offered_rate_hz))
    throw ValidationError("offered rate must be >= 0");
  if (queue_capacity < 1) throw ValidationError("queue capacity must be >= 1");
  if (!(edge_exclusion_fraction >= 0.0 && edge_exclusion_fraction < 0.5))
    throw ValidationError("edge exclusion fraction must lie in [0, 0.5)");
}

void BackoffConfig::validate() const {
  if (window < 1) throw ValidationError("backoff window must be >= 1 slot");
}

namespace {

constexpr std::int64_t kMinTdmaFrames = 100;
constexpr std::int64_t kMinContentionSlots = 10000;

enum EventKind : int { kArrival = 0, kAttempt = 1 };

struct Event {
  std::int64_t slot;
  int kind;
  int vehicle;
  double time;  // generation time of an arrival

  bool operator>(const Event& o) const {
    if (slot != o.slot) return slot > o.slot;
    if (kind != o.kind) return kind > o.kind;
    return vehicle > o.vehicle;
  }
};

// Channel access policy plugged into the shared slot loop.
class Mac {
 public:
  virtual ~Mac() = default;
  // Slot of v's first attempt when it starts backlogged.
  virtual std::int64_t first_attempt(int v) = 0;
  // Slot of v's next attempt after an attempt (or idle slot) at `slot`.
  virtual std::int64_t next_attempt(int v, std::int64_t slot) = 0;
  // Whether v keeps its attempt schedule while its queue is empty.
  virtual bool polls_when_idle() const = 0;
};

class TdmaMac final : public Mac {
 public:
  explicit TdmaMac(const TdmaSchedule& s) : schedule_(s) {}
  std::int64_t first_attempt(int v) override { return schedule_.slot_of[v]; }
  std::int64_t next_attempt(int, std::int64_t slot) override { return slot + schedule_.frame_length; }
  bool polls_when_idle() const override { return true; }

 private:
  const TdmaSchedule& schedule_;
};

class ContentionMac final : public Mac {
 public:
  ContentionMac(int window, Rng& rng) : window_(window), rng_(rng) {}
  std::int64_t first_attempt(int) override { return draw(); }
  std::int64_t next_attempt(int, std::int64_t slot) override { return slot + 1 + draw(); }
  bool polls_when_idle() const override { return false; }

 private:
  std::int64_t draw() { return static_cast<std::int64_t>(rng_.below(window_)); }
  int window_;
  Rng& rng_;
};

struct RunSetup {
  std::string mac;
  double airtime_s = 0.0;
  double slot_s = 0.0;
  std::int64_t total_slots = 0;
  std::int64_t warmup_slots = 0;
  int frame_length = 0;
  int packet_bits = 0;
};

double percentile_nearest_rank(std::vector<double>& samples, double q) {
  if (samples.empty()) return 0.0;
  const auto rank = static_cast<std::size_t>(std::ceil(q * samples.size()));
  const std::size_t idx = rank == 0 ? 0 : rank - 1;
  std::nth_element(samples.begin(), samples.begin() + idx, samples.end());
  return samples[idx];
}

SimOutcome simulate(std::span<const Vehicle> vehicles, const ConflictGraph& graph, const RunSetup& setup,
                    const SimConfig& config, Mac& mac, Rng& rng) {
  const int n = graph.size();
  SimOutcome out;
  out.mac = setup.mac;
  out.seed = config.seed;
  out.frame_length = setup.frame_length;
  out.slot_duration_s = setup.slot_s;
  out.slots = setup.total_slots;
  out.per_vehicle.assign(n, {});

  // Reporting population: the central part of the corridor.
  std::vector<char> reporting(n, 0);
  if (n > 0) {
    const double lo = graph.positions().front();
    const double hi = graph.positions().back();
    const double margin = (hi - lo) * config.edge_exclusion_fraction;
    for (int v = 0; v < n; ++v) {
      const double x = vehicles[v].position_m;
      reporting[v] = x >= lo + margin - 1e-9 && x <= hi - margin + 1e-9;
      out.reporting_vehicles += reporting[v];
    }
  }
  if (setup.total_slots == 0 || n == 0) return out;

  const bool saturated = config.offered_rate_hz == 0.0;
  std::vector<std::deque<double>> queues(n);
  std::vector<char> scheduled(n, 0);
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;

  const auto push_attempt = [&](int v, std::int64_t slot) {
    if (slot < setup.total_slots) events.push({slot, kAttempt, v, 0.0});
    scheduled[v] = 1;
  };
  const auto push_arrival = [&](int v, double t) {
    const double slot_f = std::ceil(t / setup.slot_s - 1e-9);
    if (slot_f < static_cast<double>(setup.total_slots))
      events.push({static_cast<std::int64_t>(slot_f), kArrival, v, t});
  };

  for (int v = 0; v < n; ++v) {
    if (saturated) {
      queues[v].push_back(0.0);
      ++out.per_vehicle[v].generated;
      push_attempt(v, mac.first_attempt(v));
    } else {
      push_arrival(v, rng.unit() / config.offered_rate_hz);
      if (mac.polls_when_idle()) push_attempt(v, mac.first_attempt(v));
    }
  }

  std::vector<std::uint64_t> window_success(n, 0);
  std::vector<std::uint64_t> window_attempts(n, 0);
  std::vector<std::int64_t> clean_diff(n + 1, 0);
  std::vector<double> delays_ms;
  std::vector<int> attempts;
  std::vector<int> transmitters;

  while (!events.empty()) {
    const std::int64_t slot = events.top().slot;
    attempts.clear();
    while (!events.empty() && events.top().slot == slot) {
      const Event e = events.top();
      events.pop();
      ++out.event_count;
      if (e.kind == kAttempt) {
        attempts.push_back(e.vehicle);
        continue;
      }
      VehicleCounters& c = out.per_vehicle[e.vehicle];
      ++c.generated;
      if (static_cast<int>(queues[e.vehicle].size()) >= config.queue_capacity) {
        ++c.dropped_overflow;
      } else {
        queues[e.vehicle].push_back(e.time);
        if (!scheduled[e.vehicle]) push_attempt(e.vehicle, slot + mac.first_attempt(e.vehicle));
      }
      push_arrival(e.vehicle, e.time + 1.0 / config.offered_rate_hz);
    }

    transmitters.clear();
    for (int v : attempts) {
      scheduled[v] = 0;
      if (!queues[v].empty()) {
        transmitters.push_back(v);
      } else if (mac.polls_when_idle()) {
        push_attempt(v, mac.next_attempt(v, slot));
      }
    }
    std::sort(transmitters.begin(), transmitters.end());

    const bool in_window = slot >= setup.warmup_slots;
    const double slot_start = static_cast<double>(slot) * setup.slot_s;
    const double tx_end = slot_start + setup.airtime_s;
    for (std::size_t i = 0; i < transmitters.size(); ++i) {
      const int v = transmitters[i];
      const auto [first, last] = graph.closed_neighborhood(v);
      const bool has_prev = i > 0;
      const bool has_next = i + 1 < transmitters.size();
      const int prev = has_prev ? transmitters[i - 1] : -1;
      const int next = has_next ? transmitters[i + 1] : -1;
      const bool success = !(has_prev && prev >= first) && !(has_next && next < last);

      ++out.transmissions;
      VehicleCounters& c = out.per_vehicle[v];
      const double generated_at = queues[v].front();
      queues[v].pop_front();
      if (success) {
        ++c.delivered;
      } else {
        ++c.dropped_collision;
        ++out.collisions;
      }
      if (in_window) {
        if (reporting[v]) {
          ++window_attempts[v];
          if (success) {
            ++window_success[v];
            delays_ms.push_back((tx_end - generated_at) * 1000.0);
          }
        }
        if (success) {
          // Vehicles whose neighborhood hears this transmission and no other.
          const int lo = has_prev ? std::max(first, graph.closed_neighborhood(prev).second) : first;
          const int hi = has_next ? std::min(last, graph.closed_neighborhood(next).first) : last;
          if (lo < hi) {
            ++clean_diff[lo];
            --clean_diff[hi];
          }
        }
      }
      if (saturated) {
        queues[v].push_back(tx_end);
        ++c.generated;
      }
      if (saturated || !queues[v].empty() || mac.polls_when_idle()) push_attempt(v, mac.next_attempt(v, slot));
    }
  }

  for (int v = 0; v < n; ++v) {
    VehicleCounters& c = out.per_vehicle[v];
    c.queued = queues[v].size();
    out.totals.generated += c.generated;
    out.totals.delivered += c.delivered;
    out.totals.dropped_collision += c.dropped_collision;
    out.totals.dropped_overflow += c.dropped_overflow;
    out.totals.queued += c.queued;
  }

  const std::int64_t window_slots = std::max<std::int64_t>(0, setup.total_slots - setup.warmup_slots);
  out.window_s = static_cast<double>(window_slots) * setup.slot_s;
  if (out.window_s <= 0.0 || out.reporting_vehicles == 0) return out;

  double throughput_sum = 0.0;
  double utilization_sum = 0.0;
  std::uint64_t success_sum = 0;
  std::uint64_t attempt_sum = 0;
  std::int64_t clean = 0;
  for (int v = 0; v < n; ++v) {
    clean += clean_diff[v];
    if (!reporting[v]) continue;
    throughput_sum += static_cast<double>(window_success[v]) * setup.packet_bits / out.window_s / 1e6;
    utilization_sum += static_cast<double>(clean) * setup.airtime_s / out.window_s;
    success_sum += window_success[v];
    attempt_sum += window_attempts[v];
  }
  out.per_vehicle_throughput_mbps = throughput_sum / out.reporting_vehicles;
  out.utilization = std::min(1.0, utilization_sum / out.reporting_vehicles);
  out.delivery_ratio = attempt_sum == 0 ? 1.0 : static_cast<double>(success_sum) / attempt_sum;

  out.delay.samples = delays_ms.size();
  if (!delays_ms.empty()) {
    double sum = 0.0;
    for (double d : delays_ms) sum += d;
    out.delay.mean_ms = sum / delays_ms.size();
    out.delay.max_ms = *std::max_element(delays_ms.begin(), delays_ms.end());
    out.delay.p95_ms = percentile_nearest_rank(delays_ms, 0.95);
  }
  return out;
}

std::int64_t slots_in(double duration_s, double slot_s) {
  return static_cast<std::int64_t>(std::floor(duration_s / slot_s + 1e-9));
}

}  // namespace

SimOutcome run_tdma(std::span<const Vehicle> vehicles, const TdmaSchedule& schedule, const RadioConfig& radio,
                    const SimConfig& config) {
  radio.validate();
  config.validate();
  const ConflictGraph graph = build_conflict_graph(vehicles, radio);
  if (schedule.frame_length < 1 || !is_proper(schedule, graph))
    throw ValidationError("TDMA schedule is not a proper coloring of the conflict graph");
  if (!(schedule.slot_duration_s >= schedule.payload_airtime_s) || !(schedule.payload_airtime_s > 0.0))
    throw ValidationError("TDMA slot shorter than the packet airtime");

  RunSetup setup;
  setup.mac = "tdma";
  setup.airtime_s = schedule.payload_airtime_s;
  setup.slot_s = schedule.slot_duration_s;
  setup.total_slots = slots_in(config.duration_s, setup.slot_s);
  setup.frame_length = schedule.frame_length;
  setup.warmup_slots = static_cast<std::int64_t>(config.warmup_frames) * schedule.frame_length;
  setup.packet_bits = 8 * radio.packet_length_bytes;
  if (setup.total_slots > 0 && setup.total_slots < kMinTdmaFrames * schedule.frame_length)
    throw ValidationError("TDMA duration must cover at least 100 frames");

  TdmaMac mac(schedule);
  Rng rng(config.seed);
  return simulate(vehicles, graph, setup, config, mac, rng);
}

SimOutcome run_contention(std::span<const Vehicle> vehicles, const RadioConfig& radio, const SimConfig& config,
                          const BackoffConfig& backoff) {
  radio.validate();
  config.validate();
  backoff.validate();
  const ConflictGraph graph = build_conflict_graph(vehicles, radio);

  RunSetup setup;
  setup.mac = "contention";
  setup.airtime_s = radio.packet_airtime_s();
  setup.slot_s = setup.airtime_s;
  setup.total_slots = slots_in(config.duration_s, setup.slot_s);
  setup.frame_length = backoff.window;
  setup.warmup_slots = static_cast<std::int64_t>(config.warmup_frames) * backoff.window;
  setup.packet_bits = 8 * radio.packet_length_bytes;
  if (setup.total_slots > 0 && setup.total_slots < kMinContentionSlots)
    throw ValidationError("contention duration must cover at least 10^4 packet times");

  Rng rng(config.seed);
  ContentionMac mac(backoff.window, rng);
  return simulate(vehicles, graph, setup, config, mac, rng);
}

Discrepancy compare(const AnalyticResult& analytic, const SimOutcome& sim, double tolerance) {
  Discrepancy d;
  d.tolerance = tolerance;
  if (sim.window_s <= 0.0 || !(analytic.per_vehicle_capacity_mbps > 0.0)) {
    d.comparable = false;
    d.flagged = true;
    d.note = "incomparable: empty measurement window";
    return d;
  }
  d.comparable = true;
  d.throughput_rel_error =
      (sim.per_vehicle_throughput_mbps - analytic.per_vehicle_capacity_mbps) / analytic.per_vehicle_capacity_mbps;
  if (sim.delay.samples == 0) {
    // Nothing was delivered, so there is no delay to compare against.
    d.flagged = true;
    d.note = "exceeds tolerance: no delivered packets";
    return d;
  }
  d.delay_rel_error = (sim.delay.mean_ms - analytic.per_packet_delay_ms) / analytic.per_packet_delay_ms;
  d.flagged = std::fabs(d.throughput_rel_error) > tolerance || std::fabs(d.delay_rel_error) > tolerance;
  d.note = d.flagged ? "exceeds tolerance" : "within tolerance";
  return d;
}

nlohmann::json to_json(const SimOutcome& o) {
  return {
      {"mac", o.mac},
      {"seed", o.seed},
      {"per_vehicle_throughput_mbps", o.per_vehicle_throughput_mbps},
      {"delay_ms",
       {{"mean", o.delay.mean_ms}, {"p95", o.delay.p95_ms}, {"max", o.delay.max_ms}, {"samples", o.delay.samples}}},
      {"delivery_ratio", o.delivery_ratio},
      {"utilization", o.utilization},
      {"reporting_vehicles", o.reporting_vehicles},
      {"window_s", o.window_s},
      {"event_count", o.event_count},
      {"transmissions", o.transmissions},
      {"collisions", o.collisions},
      {"packets",
       {{"generated", o.totals.generated},
        {"delivered", o.totals.delivered},
        {"dropped_collision", o.totals.dropped_collision},
        {"dropped_overflow", o.totals.dropped_overflow},
        {"queued", o.totals.queued}}},
      {"frame_length_slots", o.frame_length},
      {"slot_duration_s", o.slot_duration_s},
      {"slots", o.slots},
  };
}

nlohmann::json to_json(const Discrepancy& d) {
  return {{"comparable", d.comparable},
          {"throughput_rel_error", d.throughput_rel_error},
          {"delay_rel_error", d.delay_rel_error},
          {"tolerance", d.tolerance},
          {"flagged", d.flagged},
          {"note", d.note}};
}

std::string sim_csv_row(const SimOutcome& o) {
  std::ostringstream out;
  out << o.mac << ',' << o.seed << ',' << format_shortest(o.per_vehicle_throughput_mbps) << ','
      << format_shortest(o.delay.mean_ms) << ',' << format_shortest(o.delay.p95_ms) << ','
      << format_shortest(o.delay.max_ms) << ',' << format_shortest(o.delivery_ratio) << ','
      << format_shortest(o.utilization) << ',' << o.totals.generated << ',' << o.totals.delivered << ','
      << (o.totals.dropped_collision + o.totals.dropped_overflow) << ',' << o.totals.queued << ','
      << o.collisions << ',' << o.event_count;
  return out.str();
}

}  // namespace v2vlab
