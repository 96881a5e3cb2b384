#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "skillmatch/errors.hpp"
#include "skillmatch/event_stream.hpp"
#include "skillmatch/model.hpp"
#include "skillmatch/states.hpp"
#include "skillmatch/stats.hpp"
#include "skillmatch/transitions.hpp"

namespace skillmatch {

enum class ChainKind { alis, redundancy, matching };

inline const char* to_string(ChainKind k) {
  switch (k) {
    case ChainKind::alis: return "alis";
    case ChainKind::redundancy: return "redundancy";
    case ChainKind::matching: return "matching";
  }
  return "?";
}

inline ChainKind parse_chain_kind(const std::string& s) {
  if (s == "alis") return ChainKind::alis;
  if (s == "redundancy") return ChainKind::redundancy;
  if (s == "matching") return ChainKind::matching;
  throw InputError("unknown chain kind " + s);
}

inline constexpr std::size_t kMaxKeyLength = 64;

struct SimOptions {
  ChainKind kind = ChainKind::matching;
  std::int64_t events = 0;   ///< total, warmup included
  std::int64_t warmup = -1;  ///< negative means 10% of events
  std::uint64_t seed = 1;
  bool record_departures = false;
  bool record_arrivals = false;
  bool record_series = false;
  bool check_invariants = false;
  EventStream::TimeSource times;  ///< empty means exponential holding times
};

struct DepartureRecord {
  std::int64_t event_index = 0;
  double time = 0.0;
  int customer_type = 0;
  std::int64_t sojourn_events = 0;
  double sojourn_time = 0.0;
};

struct SimSummary {
  ChainKind kind = ChainKind::matching;
  std::int64_t events = 0;
  std::int64_t warmup = 0;
  bool stable = true;
  OccupancyTable time_occupancy;      ///< state held between events, post warmup
  OccupancyTable embedded_occupancy;  ///< state after each post-warmup event
  DepartureLog departures;
  std::vector<DepartureRecord> departure_records;
  std::vector<std::vector<double>> arrivals;  ///< per type arrival times, post warmup
  StepSeries in_system;                       ///< customers present, post warmup
  double window_start = 0.0;
  double window_end = 0.0;
  double mean_in_system = 0.0;  ///< time average
  double mean_waiting = 0.0;    ///< time average of customers not in service (equals mean_in_system except ALIS)
  std::int64_t server_marks = 0;
  std::int64_t lost_servers = 0;  ///< matching: server marks finding no compatible customer
  std::int64_t truncated_keys = 0;
};

namespace detail {

struct Tag {
  std::int64_t event = 0;
  double time = 0.0;
};

class SimCollector {
 public:
  SimCollector(const CompatibilityModel& m, const SimOptions& o, SimSummary& s) : opt_(o), sum_(s) {
    sum_.departures = DepartureLog(m.customer_count());
    if (o.record_arrivals) sum_.arrivals.assign(m.customer_count(), {});
  }

  void hold(const std::string& key, bool too_long, double dt, double in_system, double waiting) {
    if (too_long) {
      sum_.time_occupancy.add_overflow(dt);
    } else {
      sum_.time_occupancy.add(key, dt);
    }
    area_ += in_system * dt;
    waiting_area_ += waiting * dt;
  }
  void after(const Event& e, const std::string& key, bool too_long, double in_system) {
    if (too_long) {
      sum_.embedded_occupancy.add_overflow(1.0);
      ++sum_.truncated_keys;
    } else {
      sum_.embedded_occupancy.add(key, 1.0);
    }
    if (opt_.record_series) sum_.in_system.push(e.time, in_system);
  }
  void departure(const Event& e, int type, const Tag& tag) {
    if (!opt_.record_departures) return;
    sum_.departures.add(type, e.time);
    sum_.departure_records.push_back({e.index, e.time, type, e.index - tag.event, e.time - tag.time});
  }
  void arrival(const Event& e, int type) {
    if (opt_.record_arrivals) sum_.arrivals[type].push_back(e.time);
  }
  void finish() {
    const double span = sum_.window_end - sum_.window_start;
    sum_.mean_in_system = span > 0 ? area_ / span : 0.0;
    sum_.mean_waiting = span > 0 ? waiting_area_ / span : 0.0;
    sum_.departures.start = sum_.window_start;
    sum_.departures.end = sum_.window_end;
  }

 private:
  const SimOptions& opt_;
  SimSummary& sum_;
  double area_ = 0.0;
  double waiting_area_ = 0.0;
};

}  // namespace detail

/// Runs one chain driven by a uniformized event stream and collects
/// post-warmup statistics. Deterministic for a given seed.
inline SimSummary simulate(const CompatibilityModel& m, const SimOptions& opt) {
  if (opt.events < 0) throw InputError("event count must be nonnegative");
  SimSummary sum;
  sum.kind = opt.kind;
  sum.stable = is_stable(m);
  sum.departures = DepartureLog(m.customer_count());
  if (opt.events == 0) return sum;
  const std::int64_t warmup = opt.warmup < 0 ? opt.events / 10 : opt.warmup;
  if (warmup >= opt.events) throw InputError("warmup must be shorter than the run");
  sum.events = opt.events;
  sum.warmup = warmup;

  EventStream stream = opt.times ? EventStream(m, opt.seed, opt.times) : EventStream(m, opt.seed);
  detail::SimCollector col(m, opt, sum);

  SequenceState seq;
  std::deque<detail::Tag> seq_tags;
  RedundancyState red(m);
  std::unordered_map<std::int64_t, detail::Tag> red_tags;
  AlisState alis = AlisState::all_idle(m);
  std::vector<detail::Tag> service_tag(m.server_count());
  std::vector<int> service_type(m.server_count(), -1);

  auto key_of = [&](bool& too_long) -> std::string {
    switch (opt.kind) {
      case ChainKind::matching:
        too_long = seq.size() > kMaxKeyLength;
        return too_long ? std::string{} : sequence_key(seq);
      case ChainKind::redundancy: {
        too_long = red.size() > kMaxKeyLength;
        return too_long ? std::string{} : sequence_key(red.projection());
      }
      case ChainKind::alis:
        too_long = alis.waiting.size() > kMaxKeyLength;
        return too_long ? std::string{} : alis_key(alis);
    }
    return {};
  };
  auto counts = [&](double& in_system, double& waiting) {
    switch (opt.kind) {
      case ChainKind::matching: in_system = waiting = static_cast<double>(seq.size()); break;
      case ChainKind::redundancy: in_system = waiting = static_cast<double>(red.size()); break;
      case ChainKind::alis:
        waiting = static_cast<double>(alis.waiting.size());
        in_system = waiting + static_cast<double>(m.server_count() - static_cast<int>(alis.idle.size()));
        break;
    }
  };

  double prev_time = 0.0;
  for (std::int64_t k = 1; k <= opt.events; ++k) {
    const Event e = stream.next();
    const bool observed = k > warmup;
    double in_system = 0.0, waiting = 0.0;
    if (observed) {
      if (k == warmup + 1) {
        sum.window_start = prev_time;
        if (opt.record_series) {
          counts(in_system, waiting);
          sum.in_system.push(prev_time, in_system);
        }
      }
      bool too_long = false;
      const auto key = key_of(too_long);
      counts(in_system, waiting);
      col.hold(key, too_long, e.time - prev_time, in_system, waiting);
    }
    if (e.mark.is_server() && observed) ++sum.server_marks;
    if (e.mark.is_customer() && observed) col.arrival(e, e.mark.type);

    switch (opt.kind) {
      case ChainKind::matching: {
        const auto em = transition_matching(m, seq, e.mark);
        if (em.kind == MatchingEmission::Kind::arrival) {
          seq_tags.push_back({e.index, e.time});
        } else if (em.kind == MatchingEmission::Kind::departure) {
          const auto tag = seq_tags[static_cast<std::size_t>(em.position)];
          seq_tags.erase(seq_tags.begin() + em.position);
          if (observed) col.departure(e, em.type, tag);
        } else if (observed) {
          ++sum.lost_servers;
        }
        break;
      }
      case ChainKind::redundancy: {
        const auto em = red.step(m, e.mark);
        if (em.kind == RedundancyEmission::Kind::arrival) {
          red_tags.emplace(em.id, detail::Tag{e.index, e.time});
        } else if (em.kind == RedundancyEmission::Kind::departure) {
          const auto it = red_tags.find(em.id);
          if (observed) col.departure(e, em.type, it->second);
          red_tags.erase(it);
        }
        if (opt.check_invariants) red.check_invariants(m);
        break;
      }
      case ChainKind::alis: {
        const auto em = transition_alis(m, alis, e.mark);
        switch (em.kind) {
          case AlisEmission::Kind::assigned:
            service_tag[em.server] = {e.index, e.time};
            service_type[em.server] = em.type;
            break;
          case AlisEmission::Kind::queued:
            seq_tags.push_back({e.index, e.time});
            break;
          case AlisEmission::Kind::picked:
          case AlisEmission::Kind::idled: {
            if (observed) col.departure(e, service_type[em.server], service_tag[em.server]);
            if (em.kind == AlisEmission::Kind::picked) {
              service_tag[em.server] = seq_tags[static_cast<std::size_t>(em.position)];
              service_type[em.server] = em.type;
              seq_tags.erase(seq_tags.begin() + em.position);
            } else {
              service_type[em.server] = -1;
            }
            break;
          }
          case AlisEmission::Kind::noop: break;
        }
        if (opt.check_invariants) {
          if (auto why = alis_state_problem(m, alis); !why.empty()) throw InvariantError("ALIS state broke: " + why);
        }
        break;
      }
    }
    if (observed) {
      bool too_long = false;
      const auto key = key_of(too_long);
      counts(in_system, waiting);
      col.after(e, key, too_long, in_system);
    }
    prev_time = e.time;
  }
  sum.window_end = prev_time;
  col.finish();
  return sum;
}

}  // namespace skillmatch
