#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skillmatch/errors.hpp"
#include "skillmatch/model.hpp"

namespace skillmatch {

/// One item of the event stream or of a matching window: a customer type or
/// a server type.
struct Mark {
  Side side = Side::customer;
  int type = 0;

  static constexpr Mark customer(int i) { return {Side::customer, i}; }
  static constexpr Mark server(int j) { return {Side::server, j}; }
  constexpr bool is_customer() const { return side == Side::customer; }
  constexpr bool is_server() const { return side == Side::server; }
  friend constexpr bool operator==(Mark, Mark) = default;
};

/// Customer types in the system (or waiting), oldest first.
struct SequenceState {
  std::vector<int> customers;

  std::size_t size() const { return customers.size(); }
  bool empty() const { return customers.empty(); }
  friend bool operator==(const SequenceState&, const SequenceState&) = default;
};

/// FCFS-ALIS state: waiting customers oldest first, idle servers longest
/// idle first. An empty idle list means every server is busy.
struct AlisState {
  SequenceState waiting;
  std::vector<int> idle;

  static AlisState all_idle(const CompatibilityModel& model) {
    AlisState s;
    for (int j = 0; j < model.server_count(); ++j) s.idle.push_back(j);
    return s;
  }

  friend bool operator==(const AlisState&, const AlisState&) = default;
};

/// Why `state` is not a reachable ALIS state, or empty when it is.
inline std::string alis_state_problem(const CompatibilityModel& model, const AlisState& state) {
  ServerSet idle;
  for (int j : state.idle) {
    if (j < 0 || j >= model.server_count()) return "idle server index out of range";
    if (idle.contains(j)) return "idle list repeats a server";
    idle.insert(j);
  }
  for (int c : state.waiting.customers) {
    if (c < 0 || c >= model.customer_count()) return "waiting customer index out of range";
    if (model.servers_of(c).intersects(idle)) return "waiting customer is compatible with an idle server";
  }
  return {};
}

/// Adan-Weiss permutation state: `order` lists every server, the first
/// `busy` are busy with order[0] serving the oldest customer, and
/// skips[k] customers wait between order[k] and order[k+1]. Idle servers
/// order[busy..] are listed with the longest idle last.
struct PermutationState {
  std::vector<int> order;
  int busy = 0;
  std::vector<std::int64_t> skips;
};

// State keys: compact byte strings used by occupancy tables and exact laws.
// Customer type i is the byte 'A'+i; ALIS keys append '|' then one byte per
// idle server.

inline std::string sequence_key(std::span<const int> customers) {
  std::string key;
  key.reserve(customers.size());
  for (int c : customers) key.push_back(static_cast<char>('A' + c));
  return key;
}

inline std::string sequence_key(const SequenceState& s) { return sequence_key(s.customers); }

inline std::string alis_key(const AlisState& s) {
  std::string key = sequence_key(s.waiting);
  key.push_back('|');
  for (int j : s.idle) key.push_back(static_cast<char>('A' + j));
  return key;
}

inline SequenceState decode_sequence_key(std::string_view key) {
  SequenceState s;
  for (char ch : key) s.customers.push_back(ch - 'A');
  return s;
}

inline AlisState decode_alis_key(std::string_view key) {
  const auto bar = key.find('|');
  if (bar == std::string_view::npos) throw InputError("ALIS key lacks '|' separator");
  AlisState s;
  s.waiting = decode_sequence_key(key.substr(0, bar));
  for (char ch : key.substr(bar + 1)) s.idle.push_back(ch - 'A');
  return s;
}

/// Human-readable form of a key using model labels, e.g. "c2,c3|s1".
inline std::string format_key(const CompatibilityModel& model, std::string_view key) {
  std::string out;
  bool server_side = false;
  bool first = true;
  for (char ch : key) {
    if (ch == '|') {
      out += '|';
      server_side = true;
      first = true;
      continue;
    }
    if (!first) out += ',';
    first = false;
    const int idx = ch - 'A';
    out += server_side ? model.server_label(idx) : model.customer_label(idx);
  }
  return out;
}

}  // namespace skillmatch
