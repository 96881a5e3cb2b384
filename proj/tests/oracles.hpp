#pragma once

// Independent reference implementations for tests. They use plain vectors
// and loops and share no code with the library beyond the model accessors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "skillmatch/model.hpp"
#include "skillmatch/states.hpp"

namespace oracle {

using skillmatch::CompatibilityModel;
using skillmatch::Mark;

inline std::vector<bool> servers_of(const CompatibilityModel& m, int c) {
  std::vector<bool> out(static_cast<std::size_t>(m.server_count()), false);
  for (int s = 0; s < m.server_count(); ++s) out[s] = m.compatible(c, s);
  return out;
}

inline double mu_sum(const CompatibilityModel& m, const std::vector<bool>& servers) {
  double acc = 0.0;
  for (int s = 0; s < m.server_count(); ++s)
    if (servers[s]) acc += m.mu(s);
  return acc;
}

/// lambda_C < mu_{S(C)} for every nonempty C, by explicit enumeration.
inline bool stable(const CompatibilityModel& m) {
  const int ni = m.customer_count();
  for (int mask = 1; mask < (1 << ni); ++mask) {
    double l = 0.0;
    std::vector<bool> srv(static_cast<std::size_t>(m.server_count()), false);
    for (int c = 0; c < ni; ++c) {
      if (!((mask >> c) & 1)) continue;
      l += m.lambda(c);
      for (int s = 0; s < m.server_count(); ++s)
        if (m.compatible(c, s)) srv[s] = true;
    }
    if (!(l < mu_sum(m, srv) - 1e-12)) return false;
  }
  return true;
}

/// Product over prefixes of lambda_c / mu_{S(prefix)}.
inline double sequence_weight(const CompatibilityModel& m, const std::vector<int>& seq) {
  std::vector<bool> srv(static_cast<std::size_t>(m.server_count()), false);
  double w = 1.0;
  for (int c : seq) {
    for (int s = 0; s < m.server_count(); ++s)
      if (m.compatible(c, s)) srv[s] = true;
    w *= m.lambda(c) / mu_sum(m, srv);
  }
  return w;
}

/// Product over idle prefixes of mu_s / lambda_{C(prefix)}.
inline double idle_weight(const CompatibilityModel& m, const std::vector<int>& idle) {
  std::vector<bool> cus(static_cast<std::size_t>(m.customer_count()), false);
  double w = 1.0;
  for (int s : idle) {
    double l = 0.0;
    for (int c = 0; c < m.customer_count(); ++c) {
      if (m.compatible(c, s)) cus[c] = true;
      if (cus[c]) l += m.lambda(c);
    }
    w *= m.mu(s) / l;
  }
  return w;
}

/// Sum of sequence_weight over all sequences of length <= max_len, by
/// explicit enumeration. `allowed[c]` restricts the customer types.
inline double brute_sequence_sum(const CompatibilityModel& m, int max_len, const std::vector<bool>& allowed) {
  double total = 0.0;
  std::vector<bool> srv(static_cast<std::size_t>(m.server_count()), false);
  std::function<void(int, double)> rec = [&](int depth, double w) {
    total += w;
    if (depth == max_len) return;
    for (int c = 0; c < m.customer_count(); ++c) {
      if (!allowed[c]) continue;
      const auto saved = srv;
      for (int s = 0; s < m.server_count(); ++s)
        if (m.compatible(c, s)) srv[s] = true;
      rec(depth + 1, w * m.lambda(c) / mu_sum(m, srv));
      srv = saved;
    }
  };
  rec(0, 1.0);
  return total;
}

/// sum_c lambda_c / mu_{S(c)}. When below 1 the total weight of sequences
/// of length k is at most this to the power k.
inline double first_step_ratio(const CompatibilityModel& m) {
  double r = 0.0;
  for (int c = 0; c < m.customer_count(); ++c) r += m.lambda(c) / mu_sum(m, servers_of(m, c));
  return r;
}

/// Mass of all sequences grouped by length and server union, stepped
/// max_len times (no closed-form geometric sums). Returns the partial sum
/// and the mass at the last level in `last`.
inline double length_dp_sum(const CompatibilityModel& m, int max_len, double& last) {
  const int nj = m.server_count();
  std::vector<double> level(static_cast<std::size_t>(1) << nj, 0.0);
  level[0] = 1.0;
  double total = 1.0;
  std::vector<int> smask(static_cast<std::size_t>(m.customer_count()), 0);
  for (int c = 0; c < m.customer_count(); ++c)
    for (int s = 0; s < nj; ++s)
      if (m.compatible(c, s)) smask[c] |= 1 << s;
  std::vector<double> mu_of(level.size(), 0.0);
  for (std::size_t t = 0; t < level.size(); ++t)
    for (int s = 0; s < nj; ++s)
      if ((t >> s) & 1) mu_of[t] += m.mu(s);
  last = 1.0;
  for (int k = 1; k <= max_len; ++k) {
    std::vector<double> next(level.size(), 0.0);
    for (std::size_t t = 0; t < level.size(); ++t) {
      if (level[t] == 0.0) continue;
      for (int c = 0; c < m.customer_count(); ++c) {
        const std::size_t u = t | static_cast<std::size_t>(smask[c]);
        next[u] += level[t] * m.lambda(c) / mu_of[u];
      }
    }
    level = std::move(next);
    last = 0.0;
    for (double x : level) last += x;
    total += last;
  }
  return total;
}

/// FCFS-ALIS normalizing constant by explicit enumeration of ordered idle
/// lists and of waiting sequences up to max_len (customers incompatible
/// with the idle list only).
inline double brute_alis_sum(const CompatibilityModel& m, int max_len) {
  double total = 0.0;
  std::vector<int> idle;
  std::vector<bool> used(static_cast<std::size_t>(m.server_count()), false);
  std::function<void()> rec = [&] {
    std::vector<bool> allowed(static_cast<std::size_t>(m.customer_count()), true);
    for (int s : idle)
      for (int c = 0; c < m.customer_count(); ++c)
        if (m.compatible(c, s)) allowed[c] = false;
    total += idle_weight(m, idle) * brute_sequence_sum(m, max_len, allowed);
    for (int s = 0; s < m.server_count(); ++s) {
      if (used[s]) continue;
      used[s] = true;
      idle.push_back(s);
      rec();
      idle.pop_back();
      used[s] = false;
    }
  };
  rec();
  return total;
}

/// Quadratic directed FCFS matching: each server scans every earlier
/// position for the first unmatched compatible customer.
inline std::vector<std::pair<std::int64_t, std::int64_t>> naive_directed_links(const CompatibilityModel& m,
                                                                             const std::vector<Mark>& marks) {
  std::vector<bool> matched(marks.size(), false);
  std::vector<std::pair<std::int64_t, std::int64_t>> links;
  for (std::size_t n = 0; n < marks.size(); ++n) {
    if (!marks[n].is_server()) continue;
    for (std::size_t k = 0; k < n; ++k) {
      if (marks[k].is_customer() && !matched[k] && m.compatible(marks[k].type, marks[n].type)) {
        matched[k] = true;
        links.emplace_back(static_cast<std::int64_t>(k), static_cast<std::int64_t>(n));
        break;
      }
    }
  }
  std::sort(links.begin(), links.end());
  return links;
}

/// Counts of unmatched customers and servers in a directed FCFS matching.
inline std::pair<int, int> unmatched_counts(const CompatibilityModel& m, const std::vector<Mark>& marks) {
  std::vector<bool> matched(marks.size(), false);
  int servers = 0;
  for (std::size_t n = 0; n < marks.size(); ++n) {
    if (!marks[n].is_server()) continue;
    bool found = false;
    for (std::size_t k = 0; k < n && !found; ++k) {
      if (marks[k].is_customer() && !matched[k] && m.compatible(marks[k].type, marks[n].type)) {
        matched[k] = true;
        found = true;
      }
    }
    if (!found) ++servers;
  }
  int customers = 0;
  for (std::size_t k = 0; k < marks.size(); ++k) customers += marks[k].is_customer() && !matched[k];
  return {customers, servers};
}

/// FCFS-ALIS where a mark of an idle server moves it to the idle tail
/// instead of being ignored. The lookahead variant follows these dynamics.
inline void requeue_alis_step(const CompatibilityModel& m, skillmatch::AlisState& s, Mark z) {
  if (z.is_customer()) {
    for (std::size_t k = 0; k < s.idle.size(); ++k) {
      if (m.compatible(z.type, s.idle[k])) {
        s.idle.erase(s.idle.begin() + static_cast<std::ptrdiff_t>(k));
        return;
      }
    }
    s.waiting.customers.push_back(z.type);
    return;
  }
  const auto it = std::find(s.idle.begin(), s.idle.end(), z.type);
  if (it != s.idle.end()) {
    s.idle.erase(it);
    s.idle.push_back(z.type);
    return;
  }
  auto& w = s.waiting.customers;
  for (std::size_t p = 0; p < w.size(); ++p) {
    if (m.compatible(w[p], z.type)) {
      w.erase(w.begin() + static_cast<std::ptrdiff_t>(p));
      return;
    }
  }
  s.idle.push_back(z.type);
}

/// Random graph without isolated vertices and random rates scaled so the
/// model is stable with lambda_bar / mu_bar near `load`.
inline CompatibilityModel random_model(std::mt19937_64& rng, int ni, int nj, double load) {
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::bernoulli_distribution edge(0.5);
  for (;;) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(ni));
    std::vector<bool> covered(static_cast<std::size_t>(nj), false);
    for (int c = 0; c < ni; ++c)
      for (int s = 0; s < nj; ++s)
        if (edge(rng)) {
          adj[c].push_back(s);
          covered[s] = true;
        }
    bool ok = std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
    for (const auto& a : adj) ok = ok && !a.empty();
    if (!ok) continue;
    std::vector<double> lambda(static_cast<std::size_t>(ni)), mu(static_cast<std::size_t>(nj));
    for (auto& x : lambda) x = u(rng);
    for (auto& x : mu) x = u(rng);
    double lb = 0, mb = 0;
    for (double x : lambda) lb += x;
    for (double x : mu) mb += x;
    for (auto& x : lambda) x *= load * mb / lb;
    auto m = CompatibilityModel::from_adjacency(adj, lambda, mu);
    if (stable(m)) return m;
  }
}

}  // namespace oracle
