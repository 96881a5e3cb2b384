#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "skillmatch/errors.hpp"
#include "skillmatch/model.hpp"
#include "skillmatch/states.hpp"

namespace skillmatch {

/// Contiguous window of marks; marks[k] sits at absolute position start + k.
struct MarkSequence {
  std::int64_t start = 0;
  std::vector<Mark> marks;

  std::int64_t size() const { return static_cast<std::int64_t>(marks.size()); }
  std::int64_t end() const { return start + size(); }
  const Mark& at(std::int64_t pos) const {
    if (pos < start || pos >= end()) throw InputError("position outside window");
    return marks[static_cast<std::size_t>(pos - start)];
  }
  friend bool operator==(const MarkSequence&, const MarkSequence&) = default;
};

struct MatchRecord {
  std::vector<std::pair<std::int64_t, std::int64_t>> links;  ///< (customer position, server position)
  std::vector<std::int64_t> unmatched_customers;
  std::vector<std::int64_t> unmatched_servers;
  std::vector<std::int64_t> pending_servers;  ///< ALIS variant: lookahead runs past the window

  void sort() {
    std::sort(links.begin(), links.end());
    std::sort(unmatched_customers.begin(), unmatched_customers.end());
    std::sort(unmatched_servers.begin(), unmatched_servers.end());
    std::sort(pending_servers.begin(), pending_servers.end());
  }
};

/// Unmatched customers and the unmatched servers that follow the first of
/// them, in sequence order. Empty means every customer so far is matched.
using UState = std::vector<Mark>;

inline std::string ustate_key(const UState& u) {
  std::string key;
  for (const Mark& z : u) {
    key.push_back(z.is_customer() ? 'c' : 's');
    key.push_back(static_cast<char>('A' + z.type));
  }
  return key;
}

/// Why `rec` is not a valid record for `seq`, or empty when it is.
/// Checks partial matching, compatibility and, if `directed`, customer
/// before server in every link.
inline std::string match_record_problem(const CompatibilityModel& m, const MarkSequence& seq, const MatchRecord& rec,
                                        bool directed) {
  std::set<std::int64_t> used;
  for (auto [c, s] : rec.links) {
    if (c < seq.start || c >= seq.end() || s < seq.start || s >= seq.end()) return "link outside window";
    const Mark zc = seq.at(c), zs = seq.at(s);
    if (!zc.is_customer() || !zs.is_server()) return "link does not join a customer to a server";
    if (!m.compatible(zc.type, zs.type)) return "link joins incompatible types";
    if (directed && !(c < s)) return "link matches a server to a later customer";
    if (!used.insert(c).second || !used.insert(s).second) return "position in more than one link";
  }
  return {};
}

/// Incremental FCFS directed matching: each server takes the earliest
/// unmatched compatible customer before it.
class DirectedMatcher {
 public:
  explicit DirectedMatcher(const CompatibilityModel& m, std::int64_t start = 0)
      : model_(&m), by_type_(m.customer_count()), next_pos_(start) {}

  struct Step {
    std::int64_t position = 0;
    bool matched = false;
    std::int64_t partner = -1;  ///< customer position matched by this server
  };

  Step push(Mark z) {
    Step st;
    st.position = next_pos_++;
    if (z.is_customer()) {
      by_type_[z.type].push_back(st.position);
      unmatched_.emplace(st.position, z.type);
      return st;
    }
    int best = -1;
    std::int64_t best_pos = 0;
    model_->customers_of(z.type).for_each([&](int i) {
      if (!by_type_[i].empty() && (best < 0 || by_type_[i].front() < best_pos)) {
        best = i;
        best_pos = by_type_[i].front();
      }
    });
    if (best >= 0) {
      by_type_[best].pop_front();
      unmatched_.erase(best_pos);
      st.matched = true;
      st.partner = best_pos;
      trim_servers();
    } else {
      ++unmatched_server_count_;
      if (!unmatched_.empty()) servers_.emplace_back(st.position, z.type);
    }
    return st;
  }

  /// Customer types still unmatched, oldest first.
  SequenceState unmatched_customers() const {
    SequenceState s;
    for (const auto& [pos, type] : unmatched_) s.customers.push_back(type);
    return s;
  }
  std::string customers_key() const {
    std::string key;
    for (const auto& [pos, type] : unmatched_) key.push_back(static_cast<char>('A' + type));
    return key;
  }
  std::size_t customer_count() const { return unmatched_.size(); }
  bool perfect() const { return unmatched_.empty(); }
  std::int64_t unmatched_server_count() const { return unmatched_server_count_; }
  std::int64_t next_position() const { return next_pos_; }

  UState ustate() const {
    UState u;
    auto s = servers_.begin();
    for (const auto& [pos, type] : unmatched_) {
      for (; s != servers_.end() && s->first < pos; ++s) u.push_back(Mark::server(s->second));
      u.push_back(Mark::customer(type));
    }
    for (; s != servers_.end(); ++s) u.push_back(Mark::server(s->second));
    return u;
  }

  const std::map<std::int64_t, int>& unmatched_positions() const { return unmatched_; }

 private:
  void trim_servers() {
    if (unmatched_.empty()) {
      servers_.clear();
      return;
    }
    const std::int64_t first = unmatched_.begin()->first;
    while (!servers_.empty() && servers_.front().first < first) servers_.pop_front();
  }

  const CompatibilityModel* model_;
  std::vector<std::deque<std::int64_t>> by_type_;
  std::map<std::int64_t, int> unmatched_;
  std::deque<std::pair<std::int64_t, int>> servers_;  // unmatched servers after the first unmatched customer
  std::int64_t next_pos_;
  std::int64_t unmatched_server_count_ = 0;
};

struct DirectedMatchResult {
  MatchRecord record;
  std::vector<SequenceState> x_trace;  ///< unmatched customers after each position
  std::vector<UState> u_trace;
};

inline DirectedMatchResult directed_match_window(const CompatibilityModel& m, const MarkSequence& seq,
                                                 bool with_traces = true) {
  DirectedMatchResult out;
  DirectedMatcher dm(m, seq.start);
  for (const Mark& z : seq.marks) {
    const auto st = dm.push(z);
    if (z.is_server()) {
      if (st.matched) {
        out.record.links.emplace_back(st.partner, st.position);
      } else {
        out.record.unmatched_servers.push_back(st.position);
      }
    }
    if (with_traces) {
      out.x_trace.push_back(dm.unmatched_customers());
      out.u_trace.push_back(dm.ustate());
    }
  }
  for (const auto& [pos, type] : dm.unmatched_positions()) out.record.unmatched_customers.push_back(pos);
  out.record.sort();
  return out;
}

struct AlisVariantResult {
  MatchRecord record;
  std::vector<AlisState> trace;  ///< state after each position
};

/// Each server occurrence z^n = s_j takes the earliest unmatched compatible
/// customer at a position before the next occurrence of s_j, processing
/// servers in position order.
inline AlisVariantResult alis_variant_match(const CompatibilityModel& m, const MarkSequence& seq,
                                            bool with_trace = true) {
  const std::int64_t n = seq.size();
  const std::int64_t none = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> next(static_cast<std::size_t>(n), none);
  {
    std::vector<std::int64_t> last(m.server_count(), none);
    for (std::int64_t k = n - 1; k >= 0; --k) {
      const Mark z = seq.marks[static_cast<std::size_t>(k)];
      if (!z.is_server()) continue;
      next[static_cast<std::size_t>(k)] = last[z.type];
      last[z.type] = k;
    }
  }
  std::vector<std::set<std::int64_t>> free(m.customer_count());
  for (std::int64_t k = 0; k < n; ++k) {
    const Mark z = seq.marks[static_cast<std::size_t>(k)];
    if (z.is_customer()) free[z.type].insert(k);
  }
  std::vector<std::int64_t> partner(static_cast<std::size_t>(n), -1);
  AlisVariantResult out;
  for (std::int64_t k = 0; k < n; ++k) {
    const Mark z = seq.marks[static_cast<std::size_t>(k)];
    if (!z.is_server()) continue;
    const std::int64_t limit = next[static_cast<std::size_t>(k)];
    int best = -1;
    std::int64_t best_pos = 0;
    m.customers_of(z.type).for_each([&](int i) {
      if (free[i].empty()) return;
      const std::int64_t p = *free[i].begin();
      if (p < limit && (best < 0 || p < best_pos)) {
        best = i;
        best_pos = p;
      }
    });
    if (best >= 0) {
      free[best].erase(free[best].begin());
      partner[static_cast<std::size_t>(k)] = best_pos;
      partner[static_cast<std::size_t>(best_pos)] = k;
      out.record.links.emplace_back(seq.start + best_pos, seq.start + k);
    } else if (limit == none) {
      out.record.pending_servers.push_back(seq.start + k);
    } else {
      out.record.unmatched_servers.push_back(seq.start + k);
    }
  }
  for (std::int64_t k = 0; k < n; ++k)
    if (seq.marks[static_cast<std::size_t>(k)].is_customer() && partner[static_cast<std::size_t>(k)] < 0)
      out.record.unmatched_customers.push_back(seq.start + k);
  out.record.sort();

  if (with_trace) {
    // Each item is present on [enter, leave): customers until their server
    // has occurred, servers until matched or until their next occurrence.
    std::vector<std::vector<std::int64_t>> leaving(static_cast<std::size_t>(n) + 1);
    std::map<std::int64_t, int> customers, servers;
    for (std::int64_t k = 0; k < n; ++k) {
      const Mark z = seq.marks[static_cast<std::size_t>(k)];
      const std::int64_t p = partner[static_cast<std::size_t>(k)];
      for (std::int64_t pos : leaving[static_cast<std::size_t>(k)]) {
        if (seq.marks[static_cast<std::size_t>(pos)].is_customer()) {
          customers.erase(pos);
        } else {
          servers.erase(pos);
        }
      }
      if (z.is_customer()) {
        if (p >= 0 && p < k) {
          // matched to a server that was already waiting for it
          servers.erase(p);
        } else {
          customers.emplace(k, z.type);
          if (p > k) leaving[static_cast<std::size_t>(p)].push_back(k);
        }
      } else {
        if (p >= 0 && p < k) {
          // took a customer that was already waiting
          customers.erase(p);
        } else {
          servers.emplace(k, z.type);
          const std::int64_t nk = next[static_cast<std::size_t>(k)];
          if (nk != none) leaving[static_cast<std::size_t>(nk)].push_back(k);
        }
      }
      AlisState st;
      for (const auto& [pos, type] : customers) st.waiting.customers.push_back(type);
      for (const auto& [pos, type] : servers) st.idle.push_back(type);
      out.trace.push_back(std::move(st));
    }
  }
  return out;
}

struct BipartiteMatchResult {
  MatchRecord record;  ///< positions index the customer and server sequences separately
  std::vector<std::string> trace;  ///< unmatched (customers | servers) key after each step
};

/// FCFS matching of two sequences from an empty origin. Step n adds
/// customer n, which takes the earliest unmatched compatible server, then
/// server n, which takes the earliest unmatched compatible customer.
inline BipartiteMatchResult bipartite_match_fcfs(const CompatibilityModel& m, const std::vector<int>& customers,
                                                 const std::vector<int>& servers, bool with_trace = true) {
  if (customers.size() != servers.size()) throw InputError("customer and server sequences must have equal length");
  const std::int64_t n = static_cast<std::int64_t>(customers.size());
  std::vector<std::deque<std::int64_t>> free_c(m.customer_count()), free_s(m.server_count());
  std::map<std::int64_t, int> open_c, open_s;
  BipartiteMatchResult out;
  for (std::int64_t k = 0; k < n; ++k) {
    const int c = customers[static_cast<std::size_t>(k)];
    const int s = servers[static_cast<std::size_t>(k)];
    if (c < 0 || c >= m.customer_count() || s < 0 || s >= m.server_count()) throw InputError("type out of range");
    int best = -1;
    std::int64_t best_pos = 0;
    m.servers_of(c).for_each([&](int j) {
      if (!free_s[j].empty() && (best < 0 || free_s[j].front() < best_pos)) {
        best = j;
        best_pos = free_s[j].front();
      }
    });
    if (best >= 0) {
      free_s[best].pop_front();
      open_s.erase(best_pos);
      out.record.links.emplace_back(k, best_pos);
    } else {
      free_c[c].push_back(k);
      open_c.emplace(k, c);
    }
    best = -1;
    m.customers_of(s).for_each([&](int i) {
      if (!free_c[i].empty() && (best < 0 || free_c[i].front() < best_pos)) {
        best = i;
        best_pos = free_c[i].front();
      }
    });
    if (best >= 0) {
      free_c[best].pop_front();
      open_c.erase(best_pos);
      out.record.links.emplace_back(best_pos, k);
    } else {
      free_s[s].push_back(k);
      open_s.emplace(k, s);
    }
    if (with_trace) {
      std::vector<int> cs, ss;
      for (const auto& [pos, t] : open_c) cs.push_back(t);
      for (const auto& [pos, t] : open_s) ss.push_back(t);
      std::string key = sequence_key(cs);
      key.push_back('|');
      for (int t : ss) key.push_back(static_cast<char>('A' + t));
      out.trace.push_back(std::move(key));
    }
  }
  for (const auto& [pos, t] : open_c) out.record.unmatched_customers.push_back(pos);
  for (const auto& [pos, t] : open_s) out.record.unmatched_servers.push_back(pos);
  out.record.sort();
  return out;
}

struct ExchangeResult {
  MarkSequence seq;
  MatchRecord record;  ///< links of the exchanged sequence
};

/// Swaps the two marks of every link. The returned record holds the same
/// pairs of positions with customer and server roles exchanged.
inline ExchangeResult exchange_transform(const MarkSequence& seq, const MatchRecord& rec) {
  ExchangeResult out;
  out.seq = seq;
  std::set<std::int64_t> used;
  for (auto [c, s] : rec.links) {
    if (c < seq.start || c >= seq.end() || s < seq.start || s >= seq.end())
      throw InputError("link references a position outside the window");
    if (!used.insert(c).second || !used.insert(s).second) throw InputError("position in more than one link");
    std::swap(out.seq.marks[static_cast<std::size_t>(c - seq.start)], out.seq.marks[static_cast<std::size_t>(s - seq.start)]);
    out.record.links.emplace_back(s, c);
  }
  out.record.unmatched_customers = rec.unmatched_customers;
  out.record.unmatched_servers = rec.unmatched_servers;
  out.record.sort();
  return out;
}

struct BipartiteExchangeResult {
  std::vector<int> customers;
  std::vector<int> servers;
  MatchRecord record;
};

/// Two-sequence exchange: if server n was matched to customer m, the new
/// customer sequence has that customer's type at n and the new server
/// sequence has that server's type at m.
inline BipartiteExchangeResult exchange_transform(const std::vector<int>& customers, const std::vector<int>& servers,
                                                  const MatchRecord& rec) {
  std::set<std::int64_t> cpos, spos;
  const auto n = static_cast<std::int64_t>(customers.size());
  for (auto [c, s] : rec.links) {
    if (c < 0 || c >= n || s < 0 || s >= static_cast<std::int64_t>(servers.size()))
      throw InputError("link references a position outside the window");
    if (!cpos.insert(c).second || !spos.insert(s).second) throw InputError("position in more than one link");
  }
  if (cpos != spos) throw InputError("linked customer and server positions differ; exchange would leave gaps");
  BipartiteExchangeResult out{customers, servers, {}};
  for (auto [c, s] : rec.links) {
    out.customers[static_cast<std::size_t>(s)] = customers[static_cast<std::size_t>(c)];
    out.servers[static_cast<std::size_t>(c)] = servers[static_cast<std::size_t>(s)];
    out.record.links.emplace_back(s, c);
  }
  out.record.unmatched_customers = rec.unmatched_customers;
  out.record.unmatched_servers = rec.unmatched_servers;
  out.record.sort();
  return out;
}

struct ReversalReport {
  bool ok = true;
  std::vector<std::int64_t> mismatches;  ///< positions whose link differs
};

namespace detail {

inline ReversalReport compare_links(const std::vector<std::pair<std::int64_t, std::int64_t>>& expected,
                                    const std::vector<std::pair<std::int64_t, std::int64_t>>& got) {
  ReversalReport r;
  std::map<std::int64_t, std::int64_t> a, b;
  for (auto [c, s] : expected) a[c] = s;
  for (auto [c, s] : got) b[c] = s;
  std::set<std::int64_t> keys;
  for (const auto& [k, v] : a) keys.insert(k);
  for (const auto& [k, v] : b) keys.insert(k);
  for (std::int64_t k : keys) {
    const auto ia = a.find(k), ib = b.find(k);
    if (ia == a.end() || ib == b.end() || ia->second != ib->second) r.mismatches.push_back(k);
  }
  r.ok = r.mismatches.empty();
  return r;
}

}  // namespace detail

/// Exchanges a block-aligned window, matches it in reversed time, and checks
/// that the reversed matching links exactly the exchanged pairs.
inline ReversalReport verify_reversal(const CompatibilityModel& m, const MarkSequence& seq) {
  const auto fwd = directed_match_window(m, seq, false);
  if (!fwd.record.unmatched_customers.empty())
    throw InputError("boundary-unsafe window: some customers are unmatched inside it");
  const auto ex = exchange_transform(seq, fwd.record);
  MarkSequence rev;
  rev.start = 0;
  rev.marks.assign(ex.seq.marks.rbegin(), ex.seq.marks.rend());
  const auto back = directed_match_window(m, rev, false);
  const std::int64_t last = seq.start + seq.size() - 1;
  std::vector<std::pair<std::int64_t, std::int64_t>> mirrored;
  for (auto [c, s] : back.record.links) mirrored.emplace_back(last - c, last - s);
  return detail::compare_links(ex.record.links, mirrored);
}

inline ReversalReport verify_reversal(const CompatibilityModel& m, const std::vector<int>& customers,
                                      const std::vector<int>& servers) {
  const auto fwd = bipartite_match_fcfs(m, customers, servers, false);
  if (!fwd.record.unmatched_customers.empty() || !fwd.record.unmatched_servers.empty())
    throw InputError("boundary-unsafe window: the two sequences are not perfectly matched");
  const auto ex = exchange_transform(customers, servers, fwd.record);
  const std::vector<int> rc(ex.customers.rbegin(), ex.customers.rend());
  const std::vector<int> rs(ex.servers.rbegin(), ex.servers.rend());
  const auto back = bipartite_match_fcfs(m, rc, rs, false);
  const auto last = static_cast<std::int64_t>(customers.size()) - 1;
  std::vector<std::pair<std::int64_t, std::int64_t>> mirrored;
  for (auto [c, s] : back.record.links) mirrored.emplace_back(last - c, last - s);
  return detail::compare_links(ex.record.links, mirrored);
}

struct PerfectBlock {
  std::int64_t start = 0;     ///< first position (a customer)
  std::int64_t core_end = 0;  ///< one past the position where all customers became matched
  std::int64_t end = 0;       ///< one past the last trailing lone server
};

struct BlockSplit {
  std::vector<PerfectBlock> blocks;
  std::int64_t leading_end = 0;   ///< servers in [seq.start, leading_end) precede the first block
  MarkSequence leftover;          ///< incomplete final block, empty if none
};

/// Minimal perfect blocks of a window matched from empty. A block opens at
/// a customer arriving while every earlier customer is matched and its
/// core closes when that holds again; lone servers that follow are kept
/// with the preceding block.
inline BlockSplit perfect_block_split(const CompatibilityModel& m, const MarkSequence& seq) {
  BlockSplit out;
  DirectedMatcher dm(m, seq.start);
  out.leading_end = seq.start;
  bool open = false;
  PerfectBlock cur;
  for (std::int64_t k = 0; k < seq.size(); ++k) {
    const std::int64_t pos = seq.start + k;
    const Mark z = seq.marks[static_cast<std::size_t>(k)];
    const bool was_perfect = dm.perfect();
    dm.push(z);
    if (was_perfect && z.is_customer()) {
      open = true;
      cur = {pos, 0, 0};
    } else if (was_perfect) {
      if (out.blocks.empty()) {
        out.leading_end = pos + 1;
      } else {
        out.blocks.back().end = pos + 1;
      }
    }
    if (open && dm.perfect()) {
      cur.core_end = cur.end = pos + 1;
      out.blocks.push_back(cur);
      open = false;
    }
  }
  if (open) {
    out.leftover.start = cur.start;
    out.leftover.marks.assign(seq.marks.begin() + (cur.start - seq.start), seq.marks.end());
  } else {
    out.leftover.start = seq.end();
  }
  return out;
}

/// Marks of [from, to) as a window.
inline MarkSequence slice(const MarkSequence& seq, std::int64_t from, std::int64_t to) {
  MarkSequence out;
  out.start = from;
  out.marks.assign(seq.marks.begin() + (from - seq.start), seq.marks.begin() + (to - seq.start));
  return out;
}

}  // namespace skillmatch
