#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "skillmatch/errors.hpp"
#include "skillmatch/event_stream.hpp"
#include "skillmatch/model.hpp"
#include "skillmatch/stats.hpp"
#include "skillmatch/transitions.hpp"

namespace skillmatch {

struct EquivalenceReport {
  bool equivalent = true;
  std::int64_t first_divergence = -1;  ///< 1-based event index, -1 if none
  std::int64_t events = 0;
};

/// Drives the detailed redundancy system and the matching queue from one
/// event stream and compares the customer-type sequences after each event.
inline EquivalenceReport couple_redundancy_matching(const CompatibilityModel& m, std::uint64_t seed, std::int64_t n_events,
                                                    CopyService rule = CopyService::head) {
  EquivalenceReport out;
  EventStream stream(m, seed);
  RedundancyState red(m);
  SequenceState seq;
  for (std::int64_t k = 1; k <= n_events; ++k) {
    const Mark z = stream.next_mark();
    red.step(m, z, rule);
    transition_matching(m, seq, z);
    out.events = k;
    if (red.size() != seq.size() || red.projection() != seq) {
      out.equivalent = false;
      out.first_divergence = k;
      return out;
    }
  }
  return out;
}

enum class NsystemFault { none, lifo_server2 };

/// Both coupled N-systems with explicit customer identities. Customer ids
/// are the 1-based indices of their arrival events; 0 marks an idle server.
///   q: FCFS-ALIS. server[0] serves type 1 only, server[1] both types.
///   r: redundancy. Server 1 works on the oldest present type 1 customer,
///      server 2 on the oldest present customer; both may share one.
struct CoupledNState {
  struct Customer {
    std::int64_t id = 0;
    int type = 0;
  };
  std::vector<Customer> q_waiting;
  std::int64_t q_server[2] = {0, 0};
  std::vector<int> q_idle = {0, 1};  ///< longest idle first
  std::vector<Customer> r_present;   ///< arrival order

  std::int64_t q_total() const {
    return static_cast<std::int64_t>(q_waiting.size()) + (q_server[0] != 0) + (q_server[1] != 0);
  }
  std::int64_t r_total() const { return static_cast<std::int64_t>(r_present.size()); }
  std::int64_t r_server1() const {
    for (const auto& c : r_present)
      if (c.type == 0) return c.id;
    return 0;
  }
  std::int64_t r_server2() const { return r_present.empty() ? 0 : r_present.front().id; }
  std::int64_t r_waiting() const {
    const std::int64_t s1 = r_server1(), s2 = r_server2();
    const std::int64_t busy = (s2 != 0) + (s1 != 0 && s1 != s2);
    return r_total() - busy;
  }
  std::int64_t q_waiting_count() const { return static_cast<std::int64_t>(q_waiting.size()); }

  std::string dump() const {
    std::ostringstream os;
    os << "q: s1=" << q_server[0] << " s2=" << q_server[1] << " waiting=[";
    for (std::size_t k = 0; k < q_waiting.size(); ++k) os << (k ? " " : "") << q_waiting[k].id << ":c" << q_waiting[k].type + 1;
    os << "] idle=[";
    for (std::size_t k = 0; k < q_idle.size(); ++k) os << (k ? " " : "") << "s" << q_idle[k] + 1;
    os << "]; r: s1=" << r_server1() << " s2=" << r_server2() << " present=[";
    for (std::size_t k = 0; k < r_present.size(); ++k) os << (k ? " " : "") << r_present[k].id << ":c" << r_present[k].type + 1;
    os << "]";
    return os.str();
  }
};

namespace detail {

inline void nsystem_q_step(CoupledNState& s, const Event& e, NsystemFault fault) {
  auto take_idle = [&](int server, std::int64_t id) {
    s.q_idle.erase(std::find(s.q_idle.begin(), s.q_idle.end(), server));
    s.q_server[server] = id;
  };
  if (e.mark.is_customer()) {
    const int type = e.mark.type;
    for (int j : s.q_idle) {
      if (type == 1 && j == 0) continue;
      take_idle(j, e.index);
      return;
    }
    s.q_waiting.push_back({e.index, type});
    return;
  }
  const int j = e.mark.type;
  if (s.q_server[j] == 0) return;
  s.q_server[j] = 0;
  auto& w = s.q_waiting;
  if (j == 1 && fault == NsystemFault::lifo_server2) {
    if (!w.empty()) {
      s.q_server[1] = w.back().id;
      w.pop_back();
      return;
    }
  } else {
    for (auto it = w.begin(); it != w.end(); ++it) {
      if (j == 0 && it->type != 0) continue;
      s.q_server[j] = it->id;
      w.erase(it);
      return;
    }
  }
  s.q_idle.push_back(j);
}

inline void nsystem_r_step(CoupledNState& s, const Event& e) {
  if (e.mark.is_customer()) {
    s.r_present.push_back({e.index, e.mark.type});
    return;
  }
  auto& p = s.r_present;
  if (e.mark.type == 1) {
    if (!p.empty()) p.erase(p.begin());
    return;
  }
  for (auto it = p.begin(); it != p.end(); ++it) {
    if (it->type == 0) {
      p.erase(it);
      return;
    }
  }
}

/// Every type 2 customer waiting in q at queue position j >= 1 must have
/// location at least j - 1 in r (departed is -1, in service at server 2 is 0).
inline bool type2_location_holds(const CoupledNState& s) {
  const std::int64_t s1 = s.r_server1(), s2 = s.r_server2();
  std::size_t rp = 0;
  std::int64_t r_queue_pos = 0;  // queue position of r_present[rp - 1]
  for (std::size_t qp = 0; qp < s.q_waiting.size(); ++qp) {
    const auto& c = s.q_waiting[qp];
    if (c.type != 1) continue;
    const auto jq = static_cast<std::int64_t>(qp) + 1;
    std::int64_t jr = -1;
    while (rp < s.r_present.size() && s.r_present[rp].id <= c.id) {
      const auto& rc = s.r_present[rp];
      const bool in_service = rc.id == s1 || rc.id == s2;
      if (!in_service) ++r_queue_pos;
      if (rc.id == c.id) jr = in_service ? 0 : r_queue_pos;
      ++rp;
    }
    if (jr < jq - 1) return false;
  }
  return true;
}

}  // namespace detail

struct NsystemCouplingOptions {
  std::uint64_t seed = 1;
  std::int64_t events = 0;
  NsystemFault fault = NsystemFault::none;
  std::int64_t trace_stride = 0;  ///< record N^r - N^q every this many events; 0 disables
};

struct NsystemCouplingReport {
  bool passed = true;
  std::int64_t events = 0;
  std::optional<MonitorViolation> violation;
  double mean_difference = 0.0;     ///< time average of N^r - N^q
  double fraction_minus_one = 0.0;  ///< fraction of time with N^r - N^q = -1
  std::int64_t max_difference = 0;
  std::int64_t min_difference = 0;
  std::vector<std::pair<double, std::int64_t>> trace;  ///< (time, N^r - N^q)
};

inline constexpr const char* kMonitorTotals = "total_r_ge_total_q_minus_1";
inline constexpr const char* kMonitorLocations = "type2_location_r_ge_q_minus_1";
inline constexpr const char* kMonitorWaiting = "waiting_q_le_waiting_r_plus_1";

/// Coupled FCFS-ALIS and redundancy N-systems from empty, checking the
/// three pathwise monitors after every event.
inline NsystemCouplingReport couple_nsystem(double l1, double l2, double m1, double m2,
                                            const NsystemCouplingOptions& opt) {
  const auto model = n_model(l1, l2, m1, m2);
  NsystemCouplingReport out;
  TrajectoryMonitor<CoupledNState> monitor([](const CoupledNState& s) { return s.dump(); });
  monitor.add(kMonitorTotals, [](const CoupledNState& s) { return s.r_total() >= s.q_total() - 1; });
  monitor.add(kMonitorLocations, [](const CoupledNState& s) { return detail::type2_location_holds(s); });
  monitor.add(kMonitorWaiting, [](const CoupledNState& s) { return s.q_waiting_count() <= s.r_waiting() + 1; });

  EventStream stream(model, opt.seed);
  CoupledNState s;
  double prev_time = 0.0, area = 0.0, minus_one = 0.0;
  for (std::int64_t k = 1; k <= opt.events; ++k) {
    const Event e = stream.next();
    const std::int64_t before = s.r_total() - s.q_total();
    area += static_cast<double>(before) * (e.time - prev_time);
    if (before == -1) minus_one += e.time - prev_time;
    prev_time = e.time;
    detail::nsystem_q_step(s, e, opt.fault);
    detail::nsystem_r_step(s, e);
    out.events = k;
    const std::int64_t diff = s.r_total() - s.q_total();
    out.max_difference = std::max(out.max_difference, diff);
    out.min_difference = std::min(out.min_difference, diff);
    if (opt.trace_stride > 0 && k % opt.trace_stride == 0) out.trace.emplace_back(e.time, diff);
    if (!monitor.observe(k, s)) {
      out.passed = false;
      out.violation = monitor.violation();
      break;
    }
  }
  if (prev_time > 0) {
    out.mean_difference = area / prev_time;
    out.fraction_minus_one = minus_one / prev_time;
  }
  return out;
}

}  // namespace skillmatch
