#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "skillmatch/errors.hpp"
#include "skillmatch/model.hpp"
#include "skillmatch/states.hpp"

namespace skillmatch {

inline constexpr int kMaxChainServers = 10;
inline constexpr int kMaxPermutationServers = 8;

namespace detail {

inline bool extreme_factor(double f) { return f > 1e6 || f < 1e-6; }

/// Product of factors; falls back to a sum of logs when any factor is extreme.
inline double stable_product(const std::vector<double>& factors) {
  if (std::none_of(factors.begin(), factors.end(), extreme_factor)) {
    double w = 1.0;
    for (double f : factors) w *= f;
    return w;
  }
  double lw = 0.0;
  for (double f : factors) lw += std::log(f);
  return std::exp(lw);
}

inline double log_product(const std::vector<double>& factors) {
  double lw = 0.0;
  for (double f : factors) lw += std::log(f);
  return lw;
}

inline std::vector<double> sequence_factors(const CompatibilityModel& m, std::span<const int> seq) {
  std::vector<double> out;
  out.reserve(seq.size());
  ServerSet t;
  for (int c : seq) {
    if (c < 0 || c >= m.customer_count()) throw InputError("customer index out of range");
    t |= m.servers_of(c);
    out.push_back(m.lambda(c) / m.mu(t));
  }
  return out;
}

inline std::vector<double> idle_factors(const CompatibilityModel& m, std::span<const int> idle) {
  std::vector<double> out;
  out.reserve(idle.size());
  ServerSet k;
  for (int s : idle) {
    k.insert(s);
    out.push_back(m.mu(s) / m.lambda(m.compatible_customers(k)));
  }
  return out;
}

inline void require_stable(const CompatibilityModel& m) {
  const auto report = check_stability(m);
  if (report.stable) return;
  std::string msg = "stability condition fails for customer subset(s):";
  for (CustomerSet c : report.violations) {
    msg += " {";
    bool first = true;
    c.for_each([&](int i) {
      msg += (first ? "" : ",") + m.customer_label(i);
      first = false;
    });
    msg += "}";
  }
  throw DivergenceError(msg);
}

/// Unnormalized sums over all customer sequences drawn from `allowed`:
/// Z, per-type count moments, and (if n_max >= 0) the per-length weights.
struct ChainSums {
  double z = 0.0;
  std::vector<double> moments;
  std::vector<double> by_length;
};

// Sequences are grouped by their increasing chain of running server unions.
// g[T] collects sequences whose union first becomes T at their last entry;
// f[T] extends them by any number of entries that leave the union at T.
inline ChainSums chain_sums(const CompatibilityModel& m, CustomerSet allowed, int n_max) {
  const int nj = m.server_count();
  const int ni = m.customer_count();
  if (nj > kMaxChainServers) throw InputError("chain enumeration limited to 10 server types");
  const std::uint32_t full = std::uint32_t{1} << nj;
  std::vector<double> g(full, 0.0);
  std::vector<std::vector<double>> gm(full, std::vector<double>(ni, 0.0));
  const bool want_pmf = n_max >= 0;
  std::vector<std::vector<double>> h;
  if (want_pmf) h.assign(full, std::vector<double>(n_max + 1, 0.0));
  g[0] = 1.0;
  if (want_pmf) h[0][0] = 1.0;
  ChainSums out;
  out.moments.assign(ni, 0.0);
  if (want_pmf) out.by_length.assign(n_max + 1, 0.0);
  const auto customers = allowed.indices();

  for (std::uint32_t bits = 0; bits < full; ++bits) {
    if (g[bits] == 0.0) continue;
    const ServerSet t = ServerSet::from_bits(bits);
    double mu_t = 0.0, lam_u = 0.0, rho = 0.0;
    CustomerSet stay;
    if (bits != 0) {
      stay = m.uniquely_served(t) & allowed;
      mu_t = m.mu(t);
      lam_u = m.lambda(stay);
      if (!strictly_less(lam_u, mu_t))
        throw DivergenceError("geometric sum diverges: arrival rate of uniquely served customers reaches service capacity");
      rho = lam_u / mu_t;
    }
    const double geo = 1.0 / (1.0 - rho);
    const double f = g[bits] * geo;
    std::vector<double> mom(ni);
    for (int i = 0; i < ni; ++i) {
      mom[i] = gm[bits][i] * geo;
      if (stay.contains(i)) mom[i] += f / (1.0 - rho) * m.lambda(i) / mu_t;
    }
    out.z += f;
    for (int i = 0; i < ni; ++i) out.moments[i] += mom[i];

    if (want_pmf) {
      auto& hb = h[bits];
      for (int n = 0; n <= n_max; ++n) {
        if (bits != 0 && n < n_max) hb[n + 1] += hb[n] * rho;
        out.by_length[n] += hb[n];
      }
    }

    for (int c : customers) {
      const ServerSet sc = m.servers_of(c);
      if (sc.subset_of(t)) continue;
      const ServerSet t2 = t | sc;
      const double a = m.lambda(c) / m.mu(t2);
      g[t2.bits()] += a * f;
      for (int i = 0; i < ni; ++i) gm[t2.bits()][i] += a * (mom[i] + (i == c ? f : 0.0));
      if (want_pmf) {
        auto& hb = h[bits];
        auto& h2 = h[t2.bits()];
        for (int n = 0; n < n_max; ++n) h2[n + 1] += hb[n] * a;
      }
    }
  }
  return out;
}

}  // namespace detail

/// Product over the sequence of lambda_{c^l} / mu_{S(c^1..c^l)}.
inline double sequence_weight(const CompatibilityModel& m, std::span<const int> seq) {
  return detail::stable_product(detail::sequence_factors(m, seq));
}
inline double sequence_weight(const CompatibilityModel& m, const SequenceState& s) {
  return sequence_weight(m, s.customers);
}
inline double log_sequence_weight(const CompatibilityModel& m, std::span<const int> seq) {
  return detail::log_product(detail::sequence_factors(m, seq));
}

/// Sequence weight of the waiting customers times the product over idle
/// servers of mu_{s^k} / lambda_{C(s^1..s^k)}.
inline double alis_weight(const CompatibilityModel& m, const AlisState& s) {
  if (auto why = alis_state_problem(m, s); !why.empty()) throw InputError("unreachable ALIS state: " + why);
  auto factors = detail::sequence_factors(m, s.waiting.customers);
  const auto idle = detail::idle_factors(m, s.idle);
  factors.insert(factors.end(), idle.begin(), idle.end());
  return detail::stable_product(factors);
}
inline double log_alis_weight(const CompatibilityModel& m, const AlisState& s) {
  if (auto why = alis_state_problem(m, s); !why.empty()) throw InputError("unreachable ALIS state: " + why);
  return detail::log_product(detail::sequence_factors(m, s.waiting.customers)) +
         detail::log_product(detail::idle_factors(m, s.idle));
}

namespace detail {

inline void require_permutation(const CompatibilityModel& m, const std::vector<int>& order, int busy) {
  const int nj = m.server_count();
  if (static_cast<int>(order.size()) != nj) throw InputError("order must list every server once");
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (int j = 0; j < nj; ++j)
    if (sorted[j] != j) throw InputError("order is not a permutation of the servers");
  if (busy < 0 || busy > nj) throw InputError("busy count out of range");
}

}  // namespace detail

/// Point weight of a permutation state.
inline double permutation_weight(const CompatibilityModel& m, const PermutationState& s) {
  detail::require_permutation(m, s.order, s.busy);
  if (static_cast<int>(s.skips.size()) != s.busy) throw InputError("one skip count per busy server");
  double lw = 0.0;
  ServerSet prefix;
  for (int j = 0; j < s.busy; ++j) {
    prefix.insert(s.order[j]);
    const double lam_u = m.lambda(m.uniquely_served(prefix));
    const auto n = s.skips[j];
    if (n < 0) throw InputError("skip counts are nonnegative");
    if (n > 0 && lam_u == 0.0) return 0.0;
    lw += static_cast<double>(n) * (n > 0 ? std::log(lam_u) : 0.0) - static_cast<double>(n + 1) * std::log(m.mu(prefix));
  }
  ServerSet suffix;
  for (int j = m.server_count() - 1; j >= s.busy; --j) {
    suffix.insert(s.order[j]);
    lw -= std::log(m.lambda(m.compatible_customers(suffix)));
  }
  return std::exp(lw);
}

/// Permutation weight summed over all skip counts.
inline double permutation_macro_weight(const CompatibilityModel& m, const std::vector<int>& order, int busy) {
  detail::require_permutation(m, order, busy);
  double w = 1.0;
  ServerSet prefix;
  for (int j = 0; j < busy; ++j) {
    prefix.insert(order[j]);
    const double mu_p = m.mu(prefix);
    const double lam_u = m.lambda(m.uniquely_served(prefix));
    if (!strictly_less(lam_u, mu_p)) throw DivergenceError("skip-count series diverges");
    w /= mu_p - lam_u;
  }
  ServerSet suffix;
  for (int j = m.server_count() - 1; j >= busy; --j) {
    suffix.insert(order[j]);
    w /= m.lambda(m.compatible_customers(suffix));
  }
  return w;
}

struct PermutationNormalization {
  double z = 0.0;
  double all_busy_prob = 0.0;
  double mean_waiting = 0.0;
  std::vector<double> busy_prob;  ///< per server
};

/// Sums the macro weights over all J! orders and busy counts.
inline PermutationNormalization normalize_permutation_chain(const CompatibilityModel& m) {
  detail::require_stable(m);
  const int nj = m.server_count();
  if (nj > kMaxPermutationServers) throw InputError("permutation route limited to 8 server types");
  PermutationNormalization out;
  out.busy_prob.assign(nj, 0.0);
  std::vector<int> order(nj);
  std::iota(order.begin(), order.end(), 0);
  do {
    std::vector<double> expected_skips(nj);
    ServerSet prefix;
    for (int j = 0; j < nj; ++j) {
      prefix.insert(order[j]);
      const double x = m.lambda(m.uniquely_served(prefix)) / m.mu(prefix);
      expected_skips[j] = x / (1.0 - x);
    }
    for (int busy = 0; busy <= nj; ++busy) {
      const double w = permutation_macro_weight(m, order, busy);
      out.z += w;
      if (busy == nj) out.all_busy_prob += w;
      for (int j = 0; j < busy; ++j) {
        out.mean_waiting += w * expected_skips[j];
        out.busy_prob[order[j]] += w;
      }
    }
  } while (std::next_permutation(order.begin(), order.end()));
  out.all_busy_prob /= out.z;
  out.mean_waiting /= out.z;
  for (double& b : out.busy_prob) b /= out.z;
  return out;
}

struct SequenceNormalization {
  double z = 0.0;
  double mean_length = 0.0;
  std::vector<double> mean_per_type;
  std::vector<double> pmf;  ///< P(L=n) for n = 0..n_max
  double tail_bound = 0.0;  ///< P(L > n_max) is at most this
};

/// Exact normalization of the sequence product form over customers in
/// `allowed` (all customers by default).
inline SequenceNormalization normalize_sequence_chain(const CompatibilityModel& m, int n_max = 64) {
  detail::require_stable(m);
  if (n_max < 0) throw InputError("n_max must be nonnegative");
  const auto sums = detail::chain_sums(m, CustomerSet::all(m.customer_count()), n_max);
  SequenceNormalization out;
  out.z = sums.z;
  out.mean_per_type.resize(sums.moments.size());
  for (std::size_t i = 0; i < sums.moments.size(); ++i) {
    out.mean_per_type[i] = sums.moments[i] / sums.z;
    out.mean_length += out.mean_per_type[i];
  }
  out.pmf.resize(sums.by_length.size());
  double covered = 0.0;
  for (std::size_t n = 0; n < sums.by_length.size(); ++n) {
    out.pmf[n] = sums.by_length[n] / sums.z;
    covered += out.pmf[n];
  }
  out.tail_bound = std::max(0.0, 1.0 - covered) + 1e-13;
  return out;
}

struct AlisNormalization {
  double z = 0.0;
  double all_busy_prob = 0.0;
  double mean_waiting = 0.0;
  std::vector<double> mean_waiting_per_type;
  std::vector<double> idle_prob;        ///< per server
  std::vector<double> idle_count_pmf;   ///< P(K = k), k = 0..J
};

namespace detail {

/// Sum over ordered idle lists whose member set is exactly K.
inline std::vector<double> idle_set_sums(const CompatibilityModel& m) {
  const int nj = m.server_count();
  const std::uint32_t full = std::uint32_t{1} << nj;
  std::vector<double> h(full, 0.0);
  h[0] = 1.0;
  for (std::uint32_t bits = 1; bits < full; ++bits) {
    const ServerSet k = ServerSet::from_bits(bits);
    const double lam_c = m.lambda(m.compatible_customers(k));
    double acc = 0.0;
    k.for_each([&](int s) { acc += h[bits & ~(std::uint32_t{1} << s)] * m.mu(s); });
    h[bits] = acc / lam_c;
  }
  return h;
}

}  // namespace detail

inline AlisNormalization normalize_alis(const CompatibilityModel& m) {
  detail::require_stable(m);
  const int nj = m.server_count();
  const int ni = m.customer_count();
  if (nj > kMaxChainServers) throw InputError("chain enumeration limited to 10 server types");
  const auto h = detail::idle_set_sums(m);
  AlisNormalization out;
  out.mean_waiting_per_type.assign(ni, 0.0);
  out.idle_prob.assign(nj, 0.0);
  out.idle_count_pmf.assign(nj + 1, 0.0);
  const CustomerSet everyone = CustomerSet::all(ni);
  for (std::uint32_t bits = 0; bits < h.size(); ++bits) {
    const ServerSet k = ServerSet::from_bits(bits);
    const CustomerSet allowed = everyone - m.compatible_customers(k);
    const auto inner = detail::chain_sums(m, allowed, -1);
    const double w = h[bits] * inner.z;
    out.z += w;
    if (bits == 0) out.all_busy_prob = w;
    for (int i = 0; i < ni; ++i) out.mean_waiting_per_type[i] += h[bits] * inner.moments[i];
    k.for_each([&](int s) { out.idle_prob[s] += w; });
    out.idle_count_pmf[k.size()] += w;
  }
  out.all_busy_prob /= out.z;
  for (double& x : out.mean_waiting_per_type) {
    x /= out.z;
    out.mean_waiting += x;
  }
  for (double& x : out.idle_prob) x /= out.z;
  for (double& x : out.idle_count_pmf) x /= out.z;
  return out;
}

struct SequenceMetrics {
  SequenceNormalization normalization;
  double unmatched_fraction = 0.0;               ///< 1 - lambda_bar / mu_bar
  std::vector<double> per_type_unmatched;        ///< P(an s_j mark finds no compatible customer)
  double weighted_unmatched = 0.0;               ///< sum_j beta_j * per_type_unmatched[j]
};

inline SequenceMetrics exact_sequence_metrics(const CompatibilityModel& m, int n_max = 64) {
  SequenceMetrics out;
  out.normalization = normalize_sequence_chain(m, n_max);
  out.unmatched_fraction = 1.0 - m.lambda_bar() / m.mu_bar();
  const CustomerSet everyone = CustomerSet::all(m.customer_count());
  for (int j = 0; j < m.server_count(); ++j) {
    const auto sums = detail::chain_sums(m, everyone - m.customers_of(j), -1);
    const double p = sums.z / out.normalization.z;
    out.per_type_unmatched.push_back(p);
    out.weighted_unmatched += m.mu(j) / m.mu_bar() * p;
  }
  return out;
}

inline AlisNormalization exact_alis_metrics(const CompatibilityModel& m) { return normalize_alis(m); }

/// Exact stationary law restricted to states above a probability threshold.
/// `probability` evaluates any state key, inside the support or not.
struct ExactLaw {
  std::unordered_map<std::string, double> support;
  double covered = 0.0;    ///< total probability of the support
  double threshold = 0.0;
  std::function<double(std::string_view)> probability;
};

// Every factor appended to a waiting sequence is below 1 under stability,
// so pruning a branch once its probability drops below the threshold is exact.

inline ExactLaw exact_sequence_law(const CompatibilityModel& m, double threshold = 1e-8) {
  const double z = normalize_sequence_chain(m, 0).z;
  ExactLaw law;
  law.threshold = threshold;
  std::vector<int> seq;
  std::function<void(ServerSet, double)> dfs = [&](ServerSet t, double p) {
    law.support.emplace(sequence_key(seq), p);
    law.covered += p;
    for (int c = 0; c < m.customer_count(); ++c) {
      const ServerSet t2 = t | m.servers_of(c);
      const double q = p * m.lambda(c) / m.mu(t2);
      if (q <= threshold) continue;
      seq.push_back(c);
      dfs(t2, q);
      seq.pop_back();
    }
  };
  dfs(ServerSet{}, 1.0 / z);
  law.probability = [m, z](std::string_view key) {
    const auto s = decode_sequence_key(key);
    return sequence_weight(m, s) / z;
  };
  return law;
}

inline ExactLaw exact_alis_law(const CompatibilityModel& m, double threshold = 1e-8) {
  const double z = normalize_alis(m).z;
  ExactLaw law;
  law.threshold = threshold;
  const int nj = m.server_count();
  std::vector<int> idle, seq;
  std::vector<bool> used(nj, false);
  CustomerSet allowed;
  std::string idle_suffix;
  std::function<void(ServerSet, double)> waiting_dfs = [&](ServerSet t, double p) {
    law.support.emplace(sequence_key(seq) + idle_suffix, p);
    law.covered += p;
    allowed.for_each([&](int c) {
      const ServerSet t2 = t | m.servers_of(c);
      const double q = p * m.lambda(c) / m.mu(t2);
      if (q <= threshold) return;
      seq.push_back(c);
      waiting_dfs(t2, q);
      seq.pop_back();
    });
  };
  std::function<void(ServerSet, double)> idle_dfs = [&](ServerSet k, double w) {
    idle_suffix = "|";
    for (int s : idle) idle_suffix.push_back(static_cast<char>('A' + s));
    allowed = CustomerSet::all(m.customer_count()) - m.compatible_customers(k);
    if (w / z > threshold) waiting_dfs(ServerSet{}, w / z);
    for (int s = 0; s < nj; ++s) {
      if (used[s]) continue;
      ServerSet k2 = k;
      k2.insert(s);
      used[s] = true;
      idle.push_back(s);
      idle_dfs(k2, w * m.mu(s) / m.lambda(m.compatible_customers(k2)));
      idle.pop_back();
      used[s] = false;
    }
  };
  idle_dfs(ServerSet{}, 1.0);
  law.probability = [m, z](std::string_view key) { return alis_weight(m, decode_alis_key(key)) / z; };
  return law;
}

/// Unnormalized weight of an unmatched (customers | servers) configuration of
/// the two-sequence matching chain under laws alpha and beta.
inline double bipartite_weight(const CompatibilityModel& m, const std::vector<double>& alpha,
                               const std::vector<double>& beta, std::span<const int> customers,
                               std::span<const int> servers) {
  double w = 1.0;
  ServerSet t;
  for (int c : customers) {
    t |= m.servers_of(c);
    double b = 0.0;
    t.for_each([&](int j) { b += beta[j]; });
    w *= alpha[c] / b;
  }
  ServerSet k;
  for (int s : servers) {
    k.insert(s);
    double a = 0.0;
    m.compatible_customers(k).for_each([&](int i) { a += alpha[i]; });
    w *= beta[s] / a;
  }
  return w;
}

/// Key of a two-sequence state: customer bytes, '|', server bytes.
inline std::string bipartite_key(std::span<const int> customers, std::span<const int> servers) {
  std::string key = sequence_key(customers);
  key.push_back('|');
  for (int s : servers) key.push_back(static_cast<char>('A' + s));
  return key;
}

/// Two-sequence law normalized over every configuration whose unnormalized
/// weight exceeds `weight_floor`; the truncated mass is not certified.
/// Requires the pooling condition, under which every prefix factor is
/// below one and deeper sequences weigh less.
inline ExactLaw bipartite_law(const CompatibilityModel& m, const std::vector<double>& alpha,
                              const std::vector<double>& beta, double weight_floor = 1e-9) {
  if (!check_resource_pooling(m, alpha, beta).holds)
    throw DivergenceError("two-sequence law needs the resource pooling condition");
  const int ni = m.customer_count(), nj = m.server_count();
  const ServerSet all_s = ServerSet::all(nj);
  const CustomerSet all_c = CustomerSet::all(ni);
  auto beta_of = [&](ServerSet t) {
    double b = 0.0;
    t.for_each([&](int j) { b += beta[j]; });
    return b;
  };
  auto alpha_of = [&](CustomerSet c) {
    double a = 0.0;
    c.for_each([&](int i) { a += alpha[i]; });
    return a;
  };

  // Largest weight of any server sequence (resp. customer sequence) of each
  // length, by a max-product pass over the reachable sets.
  auto side_max = [&](bool servers_side) {
    std::vector<double> best = {1.0};
    std::unordered_map<std::uint32_t, double> level = {{0u, 1.0}};
    while (!level.empty()) {
      std::unordered_map<std::uint32_t, double> next;
      double top = 0.0;
      for (const auto& [bits, w] : level) {
        const int n = servers_side ? nj : ni;
        for (int x = 0; x < n; ++x) {
          double w2;
          std::uint32_t b2;
          if (servers_side) {
            ServerSet k = ServerSet::from_bits(bits);
            k.insert(x);
            const CustomerSet ck = m.compatible_customers(k);
            if (ck == all_c) continue;
            w2 = w * beta[x] / alpha_of(ck);
            b2 = k.bits();
          } else {
            const ServerSet t = ServerSet::from_bits(bits) | m.servers_of(x);
            if (t == all_s) continue;
            w2 = w * alpha[x] / beta_of(t);
            b2 = t.bits();
          }
          if (w2 <= weight_floor) continue;
          auto& slot = next[b2];
          slot = std::max(slot, w2);
          top = std::max(top, w2);
        }
      }
      if (next.empty()) break;
      best.push_back(top);
      level = std::move(next);
    }
    return best;
  };
  const auto smax = side_max(true);
  const auto cmax = side_max(false);
  const std::size_t depth = std::min(smax.size(), cmax.size());

  using Item = std::pair<std::vector<int>, double>;
  std::vector<std::vector<Item>> cust(depth), serv(depth);
  std::vector<int> cur;
  std::function<void(ServerSet, double)> cdfs = [&](ServerSet t, double w) {
    cust[cur.size()].emplace_back(cur, w);
    if (cur.size() + 1 >= depth) return;
    for (int c = 0; c < ni; ++c) {
      const ServerSet t2 = t | m.servers_of(c);
      if (t2 == all_s) continue;
      const double w2 = w * alpha[c] / beta_of(t2);
      if (w2 * smax[cur.size() + 1] <= weight_floor) continue;
      cur.push_back(c);
      cdfs(t2, w2);
      cur.pop_back();
    }
  };
  std::function<void(ServerSet, double)> sdfs = [&](ServerSet k, double w) {
    serv[cur.size()].emplace_back(cur, w);
    if (cur.size() + 1 >= depth) return;
    for (int s = 0; s < nj; ++s) {
      ServerSet k2 = k;
      k2.insert(s);
      const CustomerSet ck = m.compatible_customers(k2);
      if (ck == all_c) continue;
      const double w2 = w * beta[s] / alpha_of(ck);
      if (w2 * cmax[cur.size() + 1] <= weight_floor) continue;
      cur.push_back(s);
      sdfs(k2, w2);
      cur.pop_back();
    }
  };
  cdfs(ServerSet{}, 1.0);
  sdfs(ServerSet{}, 1.0);

  ExactLaw law;
  law.threshold = weight_floor;
  double z = 0.0;
  auto heavier = [](const Item& a, const Item& b) { return a.second > b.second; };
  for (std::size_t len = 0; len < depth; ++len) {
    std::sort(cust[len].begin(), cust[len].end(), heavier);
    std::sort(serv[len].begin(), serv[len].end(), heavier);
    for (const auto& [cs, cw] : cust[len]) {
      if (serv[len].empty() || cw * serv[len].front().second <= weight_floor) break;
      ServerSet t;
      for (int c : cs) t |= m.servers_of(c);
      for (const auto& [ss, sw] : serv[len]) {
        if (cw * sw <= weight_floor) break;
        bool clash = false;
        for (int s : ss) clash = clash || t.contains(s);
        if (clash) continue;
        law.support.emplace(bipartite_key(cs, ss), cw * sw);
        z += cw * sw;
      }
    }
  }
  for (auto& [key, w] : law.support) w /= z;
  law.covered = 1.0;
  law.probability = [m, alpha, beta, z](std::string_view key) {
    const auto bar = key.find('|');
    std::vector<int> cs, ss;
    for (char ch : key.substr(0, bar)) cs.push_back(ch - 'A');
    for (char ch : key.substr(bar + 1)) ss.push_back(ch - 'A');
    return bipartite_weight(m, alpha, beta, cs, ss) / z;
  };
  return law;
}

}  // namespace skillmatch
