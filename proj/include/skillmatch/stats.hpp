#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "skillmatch/errors.hpp"
#include "skillmatch/product_form.hpp"

namespace skillmatch {

struct OccupancyEntry {
  double time = 0.0;
  std::int64_t visits = 0;
};

enum class Weighting { time, visits };

/// Time and visit counts per state key. States too long to key are pooled
/// into an overflow bucket.
class OccupancyTable {
 public:
  void add(const std::string& key, double dt) {
    auto& e = entries_[key];
    e.time += dt;
    ++e.visits;
    total_time_ += dt;
    ++total_visits_;
  }
  void add_overflow(double dt) {
    overflow_.time += dt;
    ++overflow_.visits;
    total_time_ += dt;
    ++total_visits_;
  }

  const std::unordered_map<std::string, OccupancyEntry>& entries() const { return entries_; }
  const OccupancyEntry& overflow() const { return overflow_; }
  double total_time() const { return total_time_; }
  std::int64_t total_visits() const { return total_visits_; }
  bool empty() const { return total_visits_ == 0; }

  double mass(const OccupancyEntry& e, Weighting w) const {
    return w == Weighting::time ? e.time / total_time_ : static_cast<double>(e.visits) / static_cast<double>(total_visits_);
  }
  double probability(const std::string& key, Weighting w = Weighting::time) const {
    const auto it = entries_.find(key);
    return it == entries_.end() || empty() ? 0.0 : mass(it->second, w);
  }

  /// Keeps states satisfying `keep`, with keys rewritten by `rekey`.
  template <typename Keep, typename Rekey>
  OccupancyTable restrict(Keep&& keep, Rekey&& rekey) const {
    OccupancyTable out;
    for (const auto& [key, e] : entries_) {
      if (!keep(key)) continue;
      auto& o = out.entries_[rekey(key)];
      o.time += e.time;
      o.visits += e.visits;
      out.total_time_ += e.time;
      out.total_visits_ += e.visits;
    }
    return out;
  }

  void merge(const OccupancyTable& other) {
    for (const auto& [key, e] : other.entries_) {
      auto& o = entries_[key];
      o.time += e.time;
      o.visits += e.visits;
    }
    overflow_.time += other.overflow_.time;
    overflow_.visits += other.overflow_.visits;
    total_time_ += other.total_time_;
    total_visits_ += other.total_visits_;
  }

 private:
  std::unordered_map<std::string, OccupancyEntry> entries_;
  OccupancyEntry overflow_;
  double total_time_ = 0.0;
  std::int64_t total_visits_ = 0;
};

struct DistributionComparison {
  double tv = 0.0;                ///< over exact support union visited states, plus overflow mass
  double max_ratio_error = 0.0;   ///< over visited states with at least min_visits visits
  std::size_t ratio_states = 0;   ///< states entering the ratio test
  std::size_t support_size = 0;
  double exact_tail = 0.0;        ///< exact mass outside the compared support
};

inline DistributionComparison compare_distributions(const OccupancyTable& empirical, const ExactLaw& exact,
                                                    Weighting w = Weighting::time, std::int64_t min_visits = 1) {
  if (empirical.empty()) throw InputError("empirical occupancy table is empty");
  DistributionComparison out;
  double sum = 0.0, exact_mass = 0.0;
  for (const auto& [key, p] : exact.support) {
    const double q = empirical.probability(key, w);
    sum += std::fabs(q - p);
    exact_mass += p;
  }
  std::size_t extra = 0;
  for (const auto& [key, e] : empirical.entries()) {
    const double q = empirical.mass(e, w);
    double p;
    const auto it = exact.support.find(key);
    if (it != exact.support.end()) {
      p = it->second;
    } else {
      p = exact.probability(key);
      sum += std::fabs(q - p);
      exact_mass += p;
      ++extra;
    }
    if (e.visits >= min_visits && p > 0.0) {
      out.max_ratio_error = std::max(out.max_ratio_error, std::fabs(q / p - 1.0));
      ++out.ratio_states;
    }
  }
  sum += empirical.mass(empirical.overflow(), w);
  out.tv = 0.5 * sum;
  out.support_size = exact.support.size() + extra;
  out.exact_tail = std::max(0.0, 1.0 - exact_mass);
  return out;
}

/// Departure times per customer type over an observation window.
struct DepartureLog {
  std::vector<std::vector<double>> times;
  double start = 0.0;
  double end = 0.0;

  explicit DepartureLog(int types = 0) : times(types) {}
  void add(int type, double t) {
    auto& v = times.at(type);
    if (!v.empty() && !(t > v.back())) throw InvariantError("departure times must increase within a type");
    v.push_back(t);
  }
  std::vector<double> gaps(int type) const {
    std::vector<double> g;
    const auto& v = times.at(type);
    for (std::size_t k = 1; k < v.size(); ++k) g.push_back(v[k] - v[k - 1]);
    return g;
  }
  std::vector<double> merged() const {
    std::vector<double> all;
    for (const auto& v : times) all.insert(all.end(), v.begin(), v.end());
    std::sort(all.begin(), all.end());
    return all;
  }
};

inline constexpr double kKsCriticalCoefficient = 1.628;  // alpha = 0.01, asymptotic
inline constexpr double kExpectedPerWindow = 20.0;

/// Counts of `times` in consecutive windows of width `w` starting at `start`.
inline std::vector<double> window_counts(const std::vector<double>& times, double start, double end, double w) {
  const auto bins = static_cast<std::size_t>(std::floor((end - start) / w));
  std::vector<double> counts(bins, 0.0);
  for (double t : times) {
    if (t < start) continue;
    const auto b = static_cast<std::size_t>((t - start) / w);
    if (b < bins) counts[b] += 1.0;
  }
  return counts;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

/// Kolmogorov-Smirnov distance between a sample and Exp(rate).
inline double ks_exponential(std::vector<double> sample, double rate) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    const double f = 1.0 - std::exp(-rate * sample[k]);
    d = std::max({d, static_cast<double>(k + 1) / n - f, f - static_cast<double>(k) / n});
  }
  return d;
}

struct PoissonTypeReport {
  int type = 0;
  std::int64_t count = 0;
  double claimed_rate = 0.0;
  double rate = 0.0;
  double rate_z = 0.0;
  bool rate_ok = false;
  double dispersion = 0.0;
  double dispersion_tolerance = 0.0;
  std::size_t windows = 0;
  bool dispersion_ok = false;
  double ks = 0.0;
  double ks_critical = 0.0;
  bool ks_ok = false;
  bool low_power = false;
  bool passed() const { return rate_ok && dispersion_ok && ks_ok; }
};

struct CrossCorrelation {
  int a = 0, b = 0;
  double r = 0.0;
  double limit = 0.0;
  bool ok = false;
};

struct PoissonReport {
  std::vector<PoissonTypeReport> types;
  std::vector<CrossCorrelation> cross;
  bool passed = true;
  bool low_power = false;
};

/// Rate within 3 sigma, index of dispersion of windowed counts within
/// 3 sigma of 1, KS of gaps against Exp(rate) at alpha 0.01, and pairwise
/// windowed-count correlation within 3/sqrt(windows).
inline PoissonReport poisson_diagnostics(const DepartureLog& log, const std::vector<double>& rates) {
  if (rates.size() != log.times.size()) throw InputError("one claimed rate per customer type");
  const double span = log.end - log.start;
  if (!(span > 0.0)) throw InputError("departure log has an empty observation window");
  PoissonReport report;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    PoissonTypeReport r;
    r.type = static_cast<int>(i);
    r.claimed_rate = rates[i];
    r.count = static_cast<std::int64_t>(log.times[i].size());
    r.low_power = r.count < 1000;
    const double expected = rates[i] * span;
    r.rate = static_cast<double>(r.count) / span;
    r.rate_z = (static_cast<double>(r.count) - expected) / std::sqrt(expected);
    r.rate_ok = std::fabs(r.rate_z) <= 3.0;
    const auto counts = window_counts(log.times[i], log.start, log.end, kExpectedPerWindow / rates[i]);
    r.windows = counts.size();
    if (counts.size() >= 2) {
      const double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / static_cast<double>(counts.size());
      double var = 0.0;
      for (double c : counts) var += (c - mean) * (c - mean);
      var /= static_cast<double>(counts.size() - 1);
      r.dispersion = mean > 0 ? var / mean : 0.0;
      r.dispersion_tolerance = 3.0 * std::sqrt(2.0 / static_cast<double>(counts.size() - 1));
      r.dispersion_ok = std::fabs(r.dispersion - 1.0) <= r.dispersion_tolerance;
    }
    const auto gaps = log.gaps(static_cast<int>(i));
    if (!gaps.empty()) {
      r.ks = ks_exponential(gaps, rates[i]);
      r.ks_critical = kKsCriticalCoefficient / std::sqrt(static_cast<double>(gaps.size()));
      r.ks_ok = r.ks <= r.ks_critical;
    }
    report.low_power = report.low_power || r.low_power;
    report.passed = report.passed && r.passed();
    report.types.push_back(r);
  }
  for (std::size_t a = 0; a < rates.size(); ++a) {
    for (std::size_t b = a + 1; b < rates.size(); ++b) {
      const double w = kExpectedPerWindow / std::min(rates[a], rates[b]);
      const auto ca = window_counts(log.times[a], log.start, log.end, w);
      const auto cb = window_counts(log.times[b], log.start, log.end, w);
      CrossCorrelation cc;
      cc.a = static_cast<int>(a);
      cc.b = static_cast<int>(b);
      cc.r = pearson(ca, cb);
      cc.limit = ca.empty() ? 0.0 : 3.0 / std::sqrt(static_cast<double>(ca.size()));
      cc.ok = std::fabs(cc.r) <= cc.limit;
      report.passed = report.passed && cc.ok;
      report.cross.push_back(cc);
    }
  }
  return report;
}

/// Piecewise-constant trajectory: values[k] holds on [times[k], times[k+1]).
struct StepSeries {
  std::vector<double> times;
  std::vector<double> values;

  void push(double t, double v) {
    times.push_back(t);
    values.push_back(v);
  }
  double at(double t) const {
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) throw InputError("trajectory queried before its first point");
    return values[static_cast<std::size_t>(it - times.begin()) - 1];
  }
  double start() const { return times.empty() ? 0.0 : times.front(); }
  double end() const { return times.empty() ? 0.0 : times.back(); }
};

enum class WindowSide { past, future };

struct WindowCorrelation {
  double window = 0.0;
  std::size_t samples = 0;
  double r = 0.0;
  double limit = 0.0;  ///< 3 / sqrt(samples)
  bool ok = false;
};

/// Correlation between the trajectory value at sample times spaced by the
/// window width and the number of `events` in the adjacent window.
inline WindowCorrelation windowed_count_correlation(const StepSeries& traj, const std::vector<double>& events,
                                                    double window, WindowSide side) {
  if (!(window > 0.0)) throw InputError("window width must be positive");
  WindowCorrelation out;
  out.window = window;
  std::vector<double> x, y;
  const double lo = traj.start() + window;
  const double hi = traj.end() - window;
  for (double t = lo; t <= hi; t += window) {
    x.push_back(traj.at(t));
    double a = side == WindowSide::past ? t - window : t;
    double b = side == WindowSide::past ? t : t + window;
    const auto first = std::upper_bound(events.begin(), events.end(), a);
    const auto last = std::upper_bound(events.begin(), events.end(), b);
    y.push_back(static_cast<double>(last - first));
  }
  out.samples = x.size();
  out.r = pearson(x, y);
  out.limit = out.samples ? 3.0 / std::sqrt(static_cast<double>(out.samples)) : 0.0;
  out.ok = std::fabs(out.r) <= out.limit;
  return out;
}

struct IndependenceReport {
  std::vector<WindowCorrelation> windows;
  bool passed = true;
};

/// Current state against departure counts in preceding windows.
inline IndependenceReport state_departure_independence(const StepSeries& traj, const DepartureLog& log,
                                                       const std::vector<double>& windows) {
  IndependenceReport out;
  const auto departures = log.merged();
  for (double w : windows) {
    auto c = windowed_count_correlation(traj, departures, w, WindowSide::past);
    out.passed = out.passed && c.ok;
    out.windows.push_back(c);
  }
  return out;
}

struct BatchMeans {
  double mean = 0.0;
  double half_width = 0.0;
  std::size_t batch_size = 0;
};

/// Nonoverlapping batch means with a normal-approximation interval. A
/// leading remainder that does not fill a batch is dropped.
inline BatchMeans batch_means(const std::vector<double>& series, std::size_t n_batches = 30, double confidence = 0.95) {
  if (n_batches < 2 || series.size() < 2 * n_batches) throw InputError("series too short for batch means");
  BatchMeans out;
  out.batch_size = series.size() / n_batches;
  const std::size_t skip = series.size() - out.batch_size * n_batches;
  std::vector<double> means(n_batches, 0.0);
  for (std::size_t b = 0; b < n_batches; ++b) {
    const auto first = series.begin() + static_cast<std::ptrdiff_t>(skip + b * out.batch_size);
    means[b] = std::accumulate(first, first + static_cast<std::ptrdiff_t>(out.batch_size), 0.0) /
               static_cast<double>(out.batch_size);
  }
  out.mean = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(n_batches);
  double var = 0.0;
  for (double m : means) var += (m - out.mean) * (m - out.mean);
  var /= static_cast<double>(n_batches - 1);
  const double z = boost::math::quantile(boost::math::normal(), 0.5 + confidence / 2.0);
  out.half_width = z * std::sqrt(var / static_cast<double>(n_batches));
  return out;
}

struct ChiSquareResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
};

/// Pearson goodness of fit of counts against probabilities. Cells with
/// zero expected probability must have zero count.
inline ChiSquareResult chi_square_test(const std::vector<double>& observed, const std::vector<double>& probs) {
  if (observed.size() != probs.size() || observed.size() < 2) throw InputError("chi-square needs matching cells");
  const double n = std::accumulate(observed.begin(), observed.end(), 0.0);
  ChiSquareResult r;
  int cells = 0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const double e = n * probs[k];
    if (e == 0.0) {
      if (observed[k] != 0.0) throw InputError("count in a zero-probability cell");
      continue;
    }
    r.statistic += (observed[k] - e) * (observed[k] - e) / e;
    ++cells;
  }
  r.df = cells - 1;
  if (r.df < 1) return r;
  r.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(r.df), r.statistic));
  return r;
}

struct MonitorViolation {
  std::int64_t event = 0;
  std::string predicate;
  std::string state;
};

/// Named per-event predicates; stops at the first violation and keeps a
/// dump of the offending state.
template <typename State>
class TrajectoryMonitor {
 public:
  using Predicate = std::function<bool(const State&)>;
  using Dump = std::function<std::string(const State&)>;

  explicit TrajectoryMonitor(Dump dump = {}) : dump_(std::move(dump)) {}

  void add(std::string name, Predicate p) { predicates_.emplace_back(std::move(name), std::move(p)); }

  /// False once any predicate has failed.
  bool observe(std::int64_t event, const State& s) {
    if (violation_) return false;
    ++checked_;
    for (const auto& [name, p] : predicates_) {
      if (!p(s)) {
        violation_ = MonitorViolation{event, name, dump_ ? dump_(s) : std::string{}};
        return false;
      }
    }
    return true;
  }

  bool passed() const { return !violation_.has_value(); }
  const std::optional<MonitorViolation>& violation() const { return violation_; }
  std::int64_t checked() const { return checked_; }

 private:
  Dump dump_;
  std::vector<std::pair<std::string, Predicate>> predicates_;
  std::optional<MonitorViolation> violation_;
  std::int64_t checked_ = 0;
};

/// Runs `monitor` over a recorded trajectory, indices starting at 1.
template <typename State>
bool trajectory_monitor(TrajectoryMonitor<State>& monitor, const std::vector<State>& trajectory) {
  for (std::size_t k = 0; k < trajectory.size(); ++k)
    if (!monitor.observe(static_cast<std::int64_t>(k + 1), trajectory[k])) return false;
  return true;
}

}  // namespace skillmatch
