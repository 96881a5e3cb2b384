#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "skillmatch/errors.hpp"
#include "skillmatch/model.hpp"
#include "skillmatch/states.hpp"

namespace skillmatch {

// Transitions mutate the state in place and return what happened.

struct MatchingEmission {
  enum class Kind { arrival, departure, lost_server };
  Kind kind = Kind::arrival;
  int type = 0;      ///< customer type for arrival/departure, server type for lost_server
  int position = 0;  ///< 0-based queue position of the departing customer
};

/// Matching queue step: customers join the tail; a server takes the oldest
/// compatible customer or leaves unmatched.
inline MatchingEmission transition_matching(const CompatibilityModel& m, SequenceState& s, Mark z) {
  if (z.is_customer()) {
    s.customers.push_back(z.type);
    return {MatchingEmission::Kind::arrival, z.type, static_cast<int>(s.customers.size()) - 1};
  }
  const CustomerSet ok = m.customers_of(z.type);
  for (std::size_t p = 0; p < s.customers.size(); ++p) {
    const int c = s.customers[p];
    if (ok.contains(c)) {
      s.customers.erase(s.customers.begin() + static_cast<std::ptrdiff_t>(p));
      return {MatchingEmission::Kind::departure, c, static_cast<int>(p)};
    }
  }
  return {MatchingEmission::Kind::lost_server, z.type, -1};
}

enum class CopyService { head, tail };

struct RedundancyEmission {
  enum class Kind { arrival, departure, noop };
  Kind kind = Kind::noop;
  int type = 0;
  std::int64_t id = 0;
  int position = 0;  ///< 0-based arrival-order position of the departing customer
};

/// Redundancy service with explicit copies: one FCFS copy queue per server
/// and a registry of present customers keyed by arrival id.
class RedundancyState {
 public:
  explicit RedundancyState(const CompatibilityModel& m) : queues_(m.server_count()) {}

  /// `rule` selects which copy a completing server finishes; anything but
  /// head is a deliberate fault.
  RedundancyEmission step(const CompatibilityModel& m, Mark z, CopyService rule = CopyService::head) {
    if (z.is_customer()) {
      const std::int64_t id = ++next_id_;
      registry_.emplace(id, z.type);
      m.servers_of(z.type).for_each([&](int j) { queues_[j].push_back(id); });
      return {RedundancyEmission::Kind::arrival, z.type, id, static_cast<int>(registry_.size()) - 1};
    }
    auto& q = queues_[z.type];
    if (q.empty()) return {RedundancyEmission::Kind::noop, z.type, 0, -1};
    const std::int64_t id = rule == CopyService::head ? q.front() : q.back();
    const auto it = registry_.find(id);
    if (it == registry_.end()) throw InvariantError("copy of a departed customer left in a queue");
    const int type = it->second;
    const int position = static_cast<int>(std::distance(registry_.begin(), it));
    m.servers_of(type).for_each([&](int j) {
      auto& qj = queues_[j];
      const auto pos = std::find(qj.begin(), qj.end(), id);
      if (pos == qj.end()) throw InvariantError("customer missing a copy at a compatible server");
      qj.erase(pos);
    });
    registry_.erase(it);
    return {RedundancyEmission::Kind::departure, type, id, position};
  }

  /// Types of present customers, oldest first.
  SequenceState projection() const {
    SequenceState s;
    s.customers.reserve(registry_.size());
    for (const auto& [id, type] : registry_) s.customers.push_back(type);
    return s;
  }

  std::size_t size() const { return registry_.size(); }
  const std::deque<std::int64_t>& queue(int server) const { return queues_.at(server); }
  const std::map<std::int64_t, int>& registry() const { return registry_; }

  /// Throws InvariantError unless every present customer has exactly one
  /// copy in each compatible queue, none elsewhere, and queues are FCFS.
  void check_invariants(const CompatibilityModel& m) const {
    std::map<std::int64_t, ServerSet> seen;
    for (int j = 0; j < static_cast<int>(queues_.size()); ++j) {
      std::int64_t prev = 0;
      for (std::int64_t id : queues_[j]) {
        if (id <= prev) throw InvariantError("copy queue out of arrival order at server " + std::to_string(j));
        prev = id;
        if (!registry_.count(id)) throw InvariantError("queue holds a copy of an unknown customer");
        if (seen[id].contains(j)) throw InvariantError("duplicate copy in one queue");
        seen[id].insert(j);
      }
    }
    for (const auto& [id, type] : registry_) {
      if (seen[id] != m.servers_of(type)) throw InvariantError("copy locations differ from compatible servers");
    }
  }

 private:
  std::vector<std::deque<std::int64_t>> queues_;
  std::map<std::int64_t, int> registry_;
  std::int64_t next_id_ = 0;
};

inline RedundancyEmission transition_redundancy_detailed(const CompatibilityModel& m, RedundancyState& s, Mark z,
                                                         CopyService rule = CopyService::head) {
  return s.step(m, z, rule);
}

struct AlisEmission {
  enum class Kind {
    assigned,  ///< arriving customer started service at `server`
    queued,    ///< arriving customer joined the waiting line
    picked,    ///< completing server took the waiting customer at `position`
    idled,     ///< completing server found nobody and joined the idle list
    noop       ///< mark of an idle server
  };
  Kind kind = Kind::noop;
  int type = 0;      ///< customer type for assigned/queued/picked
  int server = 0;
  int position = 0;
};

/// FCFS-ALIS step. The idle list head is the longest idle server.
inline AlisEmission transition_alis(const CompatibilityModel& m, AlisState& s, Mark z) {
  if (z.is_customer()) {
    const ServerSet ok = m.servers_of(z.type);
    for (std::size_t k = 0; k < s.idle.size(); ++k) {
      const int j = s.idle[k];
      if (ok.contains(j)) {
        s.idle.erase(s.idle.begin() + static_cast<std::ptrdiff_t>(k));
        return {AlisEmission::Kind::assigned, z.type, j, static_cast<int>(k)};
      }
    }
    s.waiting.customers.push_back(z.type);
    return {AlisEmission::Kind::queued, z.type, -1, static_cast<int>(s.waiting.customers.size()) - 1};
  }
  const int j = z.type;
  if (std::find(s.idle.begin(), s.idle.end(), j) != s.idle.end()) return {AlisEmission::Kind::noop, 0, j, -1};
  const CustomerSet ok = m.customers_of(j);
  auto& w = s.waiting.customers;
  for (std::size_t p = 0; p < w.size(); ++p) {
    if (ok.contains(w[p])) {
      const int c = w[p];
      w.erase(w.begin() + static_cast<std::ptrdiff_t>(p));
      return {AlisEmission::Kind::picked, c, j, static_cast<int>(p)};
    }
  }
  s.idle.push_back(j);
  return {AlisEmission::Kind::idled, 0, j, static_cast<int>(s.idle.size()) - 1};
}

}  // namespace skillmatch
