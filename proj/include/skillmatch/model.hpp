#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skillmatch/errors.hpp"
#include "skillmatch/type_set.hpp"

namespace skillmatch {

/// Nonnegative rational with positive denominator, always reduced.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static std::optional<Rational> make(std::int64_t n, std::int64_t d) {
    if (d == 0) return std::nullopt;
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    return Rational{n / (g == 0 ? 1 : g), d / (g == 0 ? 1 : g)};
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Sum of two rationals, or nullopt when an intermediate leaves int64 range.
inline std::optional<Rational> checked_add(Rational a, Rational b) {
  const std::int64_t g = std::gcd(a.den, b.den);
  std::int64_t lhs = 0, rhs = 0, den = 0, num = 0;
  if (__builtin_mul_overflow(a.num, b.den / g, &lhs)) return std::nullopt;
  if (__builtin_mul_overflow(b.num, a.den / g, &rhs)) return std::nullopt;
  if (__builtin_mul_overflow(a.den / g, b.den, &den)) return std::nullopt;
  if (__builtin_add_overflow(lhs, rhs, &num)) return std::nullopt;
  return Rational::make(num, den);
}

/// -1, 0, +1 for a < b, a == b, a > b. Exact via 128-bit cross products.
inline int compare(Rational a, Rational b) {
  const __int128 l = static_cast<__int128>(a.num) * b.den;
  const __int128 r = static_cast<__int128>(b.num) * a.den;
  return l < r ? -1 : (l > r ? 1 : 0);
}

/// A rate. `exact` is present when the rate was given as an integer or as a
/// ratio of integers; stability checks then compare exactly.
struct Rate {
  double value = 0.0;
  std::optional<Rational> exact;

  Rate() = default;
  Rate(double v) : value(v) {}  // NOLINT(google-explicit-constructor)
  static Rate ratio(std::int64_t num, std::int64_t den) {
    auto r = Rational::make(num, den);
    if (!r) throw InputError("rate has zero denominator");
    Rate out(r->value());
    out.exact = r;
    return out;
  }
  static Rate integer(std::int64_t v) { return ratio(v, 1); }
};

/// Relative tolerance used for strict inequalities between floating rates.
inline constexpr double kStrictTolerance = 1e-12;

inline bool strictly_less(double a, double b) {
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return b - a > kStrictTolerance * scale;
}

/// Bipartite compatibility graph between customer types and server types,
/// with Poisson arrival rates per customer type and exponential service (or
/// server arrival) rates per server type. Immutable after construction.
class CompatibilityModel {
 public:
  CompatibilityModel(std::vector<std::string> customer_types, std::vector<std::string> server_types,
                     std::vector<std::pair<int, int>> edges, std::vector<Rate> lambda,
                     std::vector<Rate> mu)
      : customer_labels_(std::move(customer_types)),
        server_labels_(std::move(server_types)),
        lambda_rates_(std::move(lambda)),
        mu_rates_(std::move(mu)) {
    const int ni = static_cast<int>(customer_labels_.size());
    const int nj = static_cast<int>(server_labels_.size());
    if (ni == 0 || nj == 0) throw InputError("model needs at least one customer and one server type");
    if (ni > kMaxTypes || nj > kMaxTypes) throw InputError("at most 32 types per side");
    if (static_cast<int>(lambda_rates_.size()) != ni) throw InputError("lambda length differs from customer_types");
    if (static_cast<int>(mu_rates_.size()) != nj) throw InputError("mu length differs from server_types");
    servers_of_.assign(ni, ServerSet{});
    customers_of_.assign(nj, CustomerSet{});
    for (auto [c, s] : edges) {
      if (c < 0 || c >= ni || s < 0 || s >= nj) throw InputError("edge index out of range");
      servers_of_[c].insert(s);
      customers_of_[s].insert(c);
    }
    for (int i = 0; i < ni; ++i) {
      if (servers_of_[i].empty()) throw InputError("customer type " + customer_labels_[i] + " has no compatible server");
      if (!(lambda_rates_[i].value > 0.0) || !std::isfinite(lambda_rates_[i].value))
        throw InputError("lambda must be strictly positive");
    }
    for (int j = 0; j < nj; ++j) {
      if (customers_of_[j].empty()) throw InputError("server type " + server_labels_[j] + " has no compatible customer");
      if (!(mu_rates_[j].value > 0.0) || !std::isfinite(mu_rates_[j].value))
        throw InputError("mu must be strictly positive");
    }
    for (const auto& r : lambda_rates_) lambda_bar_ += r.value;
    for (const auto& r : mu_rates_) mu_bar_ += r.value;
  }

  /// Labels c1..cI / s1..sJ; `servers_of_customer[i]` lists the server
  /// indices compatible with customer type i.
  static CompatibilityModel from_adjacency(const std::vector<std::vector<int>>& servers_of_customer,
                                           const std::vector<double>& lambda, const std::vector<double>& mu) {
    std::vector<std::string> cl, sl;
    for (std::size_t i = 0; i < lambda.size(); ++i) cl.push_back("c" + std::to_string(i + 1));
    for (std::size_t j = 0; j < mu.size(); ++j) sl.push_back("s" + std::to_string(j + 1));
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < servers_of_customer.size(); ++i)
      for (int s : servers_of_customer[i]) edges.emplace_back(static_cast<int>(i), s);
    return CompatibilityModel(cl, sl, edges, {lambda.begin(), lambda.end()}, {mu.begin(), mu.end()});
  }

  int customer_count() const { return static_cast<int>(customer_labels_.size()); }
  int server_count() const { return static_cast<int>(server_labels_.size()); }
  const std::string& customer_label(int i) const { return customer_labels_.at(i); }
  const std::string& server_label(int j) const { return server_labels_.at(j); }
  const std::vector<std::string>& customer_labels() const { return customer_labels_; }
  const std::vector<std::string>& server_labels() const { return server_labels_; }

  double lambda(int i) const { return lambda_rates_[i].value; }
  double mu(int j) const { return mu_rates_[j].value; }
  const Rate& lambda_rate(int i) const { return lambda_rates_.at(i); }
  const Rate& mu_rate(int j) const { return mu_rates_.at(j); }
  double lambda_bar() const { return lambda_bar_; }
  double mu_bar() const { return mu_bar_; }
  double total_rate() const { return lambda_bar_ + mu_bar_; }

  double lambda(CustomerSet c) const {
    double s = 0.0;
    c.for_each([&](int i) { s += lambda_rates_[i].value; });
    return s;
  }
  double mu(ServerSet t) const {
    double s = 0.0;
    t.for_each([&](int j) { s += mu_rates_[j].value; });
    return s;
  }

  ServerSet servers_of(int i) const { return servers_of_[i]; }
  CustomerSet customers_of(int j) const { return customers_of_[j]; }
  bool compatible(int customer, int server) const { return servers_of_[customer].contains(server); }

  bool all_rates_exact() const {
    for (const auto& r : lambda_rates_)
      if (!r.exact) return false;
    for (const auto& r : mu_rates_)
      if (!r.exact) return false;
    return true;
  }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < customer_count(); ++i) servers_of_[i].for_each([&](int j) { out.emplace_back(i, j); });
    return out;
  }

  /// S(C): union of the server types compatible with the customer types in C.
  ServerSet compatible_servers(CustomerSet c) const {
    require_within(c);
    ServerSet out;
    c.for_each([&](int i) { out |= servers_of_[i]; });
    return out;
  }

  /// C(S): union of the customer types compatible with the server types in S.
  CustomerSet compatible_customers(ServerSet s) const {
    require_within(s);
    CustomerSet out;
    s.for_each([&](int j) { out |= customers_of_[j]; });
    return out;
  }

  /// U(S): customer types whose every compatible server lies in S.
  CustomerSet uniquely_served(ServerSet s) const {
    require_within(s);
    CustomerSet out;
    for (int i = 0; i < customer_count(); ++i)
      if (servers_of_[i].subset_of(s)) out.insert(i);
    return out;
  }

  friend bool operator==(const CompatibilityModel& a, const CompatibilityModel& b) {
    if (a.customer_labels_ != b.customer_labels_ || a.server_labels_ != b.server_labels_) return false;
    if (a.servers_of_ != b.servers_of_) return false;
    for (int i = 0; i < a.customer_count(); ++i)
      if (a.lambda(i) != b.lambda(i)) return false;
    for (int j = 0; j < a.server_count(); ++j)
      if (a.mu(j) != b.mu(j)) return false;
    return true;
  }

 private:
  void require_within(CustomerSet c) const {
    if (!c.within(customer_count())) throw InputError("customer subset index out of range");
  }
  void require_within(ServerSet s) const {
    if (!s.within(server_count())) throw InputError("server subset index out of range");
  }

  std::vector<std::string> customer_labels_;
  std::vector<std::string> server_labels_;
  std::vector<Rate> lambda_rates_;
  std::vector<Rate> mu_rates_;
  std::vector<ServerSet> servers_of_;
  std::vector<CustomerSet> customers_of_;
  double lambda_bar_ = 0.0;
  double mu_bar_ = 0.0;
};

struct StabilityReport {
  bool stable = true;
  bool exact = false;  ///< comparisons were done in rational arithmetic
  std::vector<CustomerSet> violations;  ///< every C with lambda_C >= mu_S(C), by cardinality
};

namespace detail {

template <typename Set, typename RateOf>
std::optional<Rational> exact_sum(Set set, RateOf rate_of) {
  Rational acc{0, 1};
  bool ok = true;
  set.for_each([&](int k) {
    if (!ok) return;
    auto next = checked_add(acc, *rate_of(k).exact);
    if (!next) {
      ok = false;
      return;
    }
    acc = *next;
  });
  if (!ok) return std::nullopt;
  return acc;
}

}  // namespace detail

/// Checks lambda_C < mu_{S(C)} for every nonempty customer subset C.
inline StabilityReport check_stability(const CompatibilityModel& model) {
  StabilityReport report;
  const auto subsets = subsets_by_cardinality<Side::customer>(model.customer_count());
  bool exact = model.all_rates_exact();
  auto lambda_of = [&](int i) -> const Rate& { return model.lambda_rate(i); };
  auto mu_of = [&](int j) -> const Rate& { return model.mu_rate(j); };
  if (exact) {
    std::vector<CustomerSet> violations;
    for (CustomerSet c : subsets) {
      auto l = detail::exact_sum(c, lambda_of);
      auto m = detail::exact_sum(model.compatible_servers(c), mu_of);
      if (!l || !m) {
        exact = false;
        break;
      }
      if (compare(*l, *m) >= 0) violations.push_back(c);
    }
    if (exact) {
      report.exact = true;
      report.violations = std::move(violations);
    }
  }
  if (!exact) {
    for (CustomerSet c : subsets)
      if (!strictly_less(model.lambda(c), model.mu(model.compatible_servers(c)))) report.violations.push_back(c);
  }
  report.stable = report.violations.empty();
  return report;
}

inline bool is_stable(const CompatibilityModel& model) { return check_stability(model).stable; }

struct PoolingReport {
  bool holds = true;
  std::vector<std::string> violations;  ///< human-readable failing conditions
};

/// Complete resource pooling for customer law alpha and server law beta:
/// alpha_C < beta_S(C), beta_S < alpha_C(S), alpha_U(S) < beta_S over proper
/// nonempty subsets.
inline PoolingReport check_resource_pooling(const CompatibilityModel& model, const std::vector<double>& alpha,
                                            const std::vector<double>& beta) {
  auto validate = [](const std::vector<double>& p, int n, const char* name) {
    if (static_cast<int>(p.size()) != n) throw InputError(std::string(name) + " has wrong length");
    double s = 0.0;
    for (double x : p) {
      if (!(x >= 0.0)) throw InputError(std::string(name) + " has a negative entry");
      s += x;
    }
    if (std::fabs(s - 1.0) > 1e-9) throw InputError(std::string(name) + " does not sum to 1");
  };
  validate(alpha, model.customer_count(), "alpha");
  validate(beta, model.server_count(), "beta");
  auto a = [&](CustomerSet c) {
    double s = 0.0;
    c.for_each([&](int i) { s += alpha[i]; });
    return s;
  };
  auto b = [&](ServerSet t) {
    double s = 0.0;
    t.for_each([&](int j) { s += beta[j]; });
    return s;
  };
  auto fmt = [](auto set) {
    std::string out = "{";
    for (int k : set.indices()) out += (out.size() > 1 ? "," : "") + std::to_string(k);
    return out + "}";
  };
  PoolingReport report;
  for (CustomerSet c : subsets_by_cardinality<Side::customer>(model.customer_count(), false)) {
    if (!strictly_less(a(c), b(model.compatible_servers(c))))
      report.violations.push_back("alpha_C < beta_S(C) fails for C=" + fmt(c));
  }
  for (ServerSet s : subsets_by_cardinality<Side::server>(model.server_count(), false)) {
    if (!strictly_less(b(s), a(model.compatible_customers(s))))
      report.violations.push_back("beta_S < alpha_C(S) fails for S=" + fmt(s));
    if (!strictly_less(a(model.uniquely_served(s)), b(s)))
      report.violations.push_back("alpha_U(S) < beta_S fails for S=" + fmt(s));
  }
  report.holds = report.violations.empty();
  return report;
}

/// alpha = lambda / lambda_bar and beta = mu / mu_bar.
inline std::pair<std::vector<double>, std::vector<double>> rate_laws(const CompatibilityModel& model) {
  std::vector<double> alpha(model.customer_count()), beta(model.server_count());
  for (int i = 0; i < model.customer_count(); ++i) alpha[i] = model.lambda(i) / model.lambda_bar();
  for (int j = 0; j < model.server_count(); ++j) beta[j] = model.mu(j) / model.mu_bar();
  return {alpha, beta};
}

/// Exchanges the customer and server sides: servers become the queueing
/// side. Involution.
inline CompatibilityModel swap_roles(const CompatibilityModel& model) {
  std::vector<std::pair<int, int>> edges;
  for (auto [c, s] : model.edges()) edges.emplace_back(s, c);
  std::vector<Rate> lambda, mu;
  for (int j = 0; j < model.server_count(); ++j) lambda.push_back(model.mu_rate(j));
  for (int i = 0; i < model.customer_count(); ++i) mu.push_back(model.lambda_rate(i));
  return CompatibilityModel(model.server_labels(), model.customer_labels(), edges, lambda, mu);
}

// Named graphs used throughout the tests and the CLI.

/// c1 ~ {s1,s2,s3}, c2 ~ {s2}, c3 ~ {s3}.
inline CompatibilityModel w_model(std::vector<double> lambda = {1, 1, 1}, std::vector<double> mu = {2, 2, 2}) {
  return CompatibilityModel::from_adjacency({{0, 1, 2}, {1}, {2}}, lambda, mu);
}

/// c1 ~ {s1,s2}, c2 ~ {s2}.
inline CompatibilityModel n_model(double lambda1, double lambda2, double mu1, double mu2) {
  return CompatibilityModel::from_adjacency({{0, 1}, {1}}, {lambda1, lambda2}, {mu1, mu2});
}

inline CompatibilityModel complete_model(const std::vector<double>& lambda, const std::vector<double>& mu) {
  std::vector<int> all(mu.size());
  std::iota(all.begin(), all.end(), 0);
  return CompatibilityModel::from_adjacency(std::vector<std::vector<int>>(lambda.size(), all), lambda, mu);
}

}  // namespace skillmatch
