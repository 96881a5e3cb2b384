#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "skillmatch/errors.hpp"
#include "skillmatch/model.hpp"
#include "skillmatch/product_form.hpp"
#include "skillmatch/states.hpp"

namespace skillmatch {

struct PartialBalanceReport {
  double max_residual = 0.0;
  // Worst relative residual per grouping.
  double last_customer = 0.0;     ///< servers of waiting customers vs arrival of the last one
  double last_idle = 0.0;         ///< arrivals taking an idle server vs the last server going idle
  double queueing_arrival = 0.0;  ///< arrival joining the queue vs a completion that picks it up
  double free_completion = 0.0;   ///< completion finding no waiting customer vs arrivals to a newly idle server
};

namespace detail {

inline double relative_gap(double lhs, double rhs) {
  const double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
  return std::fabs(lhs - rhs) / scale;
}

}  // namespace detail

/// Evaluates the four partial-balance groupings at `x` for weights `w`
/// (any callable AlisState -> double).
template <typename Weight>
PartialBalanceReport verify_partial_balance(const CompatibilityModel& m, const AlisState& x, Weight&& w) {
  if (auto why = alis_state_problem(m, x); !why.empty()) throw InputError("unreachable ALIS state: " + why);
  PartialBalanceReport r;
  const double px = w(x);
  const auto& seq = x.waiting.customers;
  ServerSet waiting_servers;
  for (int c : seq) waiting_servers |= m.servers_of(c);
  ServerSet idle;
  for (int s : x.idle) idle.insert(s);
  const CustomerSet idle_customers = m.compatible_customers(idle);

  if (!seq.empty()) {
    AlisState y = x;
    const int last = y.waiting.customers.back();
    y.waiting.customers.pop_back();
    r.last_customer = detail::relative_gap(px * m.mu(waiting_servers), w(y) * m.lambda(last));
  }
  if (!x.idle.empty()) {
    AlisState y = x;
    const int last = y.idle.back();
    y.idle.pop_back();
    r.last_idle = detail::relative_gap(px * m.lambda(idle_customers), w(y) * m.mu(last));
  }
  for (int c = 0; c < m.customer_count(); ++c) {
    if (idle_customers.contains(c)) continue;
    double rhs = 0.0;
    ServerSet prefix;
    for (std::size_t pos = 0; pos <= seq.size(); ++pos) {
      AlisState y = x;
      y.waiting.customers.insert(y.waiting.customers.begin() + static_cast<std::ptrdiff_t>(pos), c);
      rhs += w(y) * m.mu(m.servers_of(c) - prefix);
      if (pos < seq.size()) prefix |= m.servers_of(seq[pos]);
    }
    r.queueing_arrival = std::max(r.queueing_arrival, detail::relative_gap(px * m.lambda(c), rhs));
  }
  for (int s = 0; s < m.server_count(); ++s) {
    if (idle.contains(s) || waiting_servers.contains(s)) continue;
    double rhs = 0.0;
    ServerSet prefix;
    for (std::size_t pos = 0; pos <= x.idle.size(); ++pos) {
      AlisState y = x;
      y.idle.insert(y.idle.begin() + static_cast<std::ptrdiff_t>(pos), s);
      rhs += w(y) * m.lambda(m.customers_of(s) - m.compatible_customers(prefix));
      if (pos < x.idle.size()) prefix.insert(x.idle[pos]);
    }
    r.free_completion = std::max(r.free_completion, detail::relative_gap(px * m.mu(s), rhs));
  }
  r.max_residual = std::max({r.last_customer, r.last_idle, r.queueing_arrival, r.free_completion});
  return r;
}

inline PartialBalanceReport verify_partial_balance(const CompatibilityModel& m, const AlisState& x) {
  return verify_partial_balance(m, x, [&m](const AlisState& y) { return alis_weight(m, y); });
}

}  // namespace skillmatch
