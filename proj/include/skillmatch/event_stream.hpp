#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "skillmatch/errors.hpp"
#include "skillmatch/model.hpp"
#include "skillmatch/states.hpp"

namespace skillmatch {

/// Uniform double in [0, 1) from the top 53 bits of one 64-bit draw. Used
/// instead of std::uniform_real_distribution so streams are identical across
/// standard libraries.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double exponential_draw(std::mt19937_64& rng, double rate) { return -std::log1p(-unit_uniform(rng)) / rate; }

/// Categorical sampler over the I customer marks followed by the J server
/// marks, with probabilities proportional to lambda then mu.
class MarkSampler {
 public:
  explicit MarkSampler(const CompatibilityModel& m) : customers_(m.customer_count()) {
    double acc = 0.0;
    const double total = m.total_rate();
    for (int i = 0; i < m.customer_count(); ++i) cumulative_.push_back(acc += m.lambda(i) / total);
    for (int j = 0; j < m.server_count(); ++j) cumulative_.push_back(acc += m.mu(j) / total);
    cumulative_.back() = 1.0;
  }

  Mark draw(std::mt19937_64& rng) const {
    const double u = unit_uniform(rng);
    const auto k = static_cast<int>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
    const int idx = std::min(k, static_cast<int>(cumulative_.size()) - 1);
    return idx < customers_ ? Mark::customer(idx) : Mark::server(idx - customers_);
  }

  /// Probability of each mark in the same order as the cumulative table.
  std::vector<double> probabilities() const {
    std::vector<double> p(cumulative_.size());
    double prev = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      p[k] = cumulative_[k] - prev;
      prev = cumulative_[k];
    }
    return p;
  }

 private:
  int customers_;
  std::vector<double> cumulative_;
};

struct Event {
  std::int64_t index = 0;  ///< 1-based position in the stream
  double time = 0.0;
  Mark mark;
};

/// i.i.d. marks with holding times, either exponential at rate
/// lambda_bar + mu_bar or taken from an external strictly increasing
/// sequence. Marks and times come from separate generators so the mark
/// sequence for a seed does not depend on the time mode.
class EventStream {
 public:
  using TimeSource = std::function<double()>;

  EventStream(const CompatibilityModel& m, std::uint64_t seed)
      : sampler_(m), mark_rng_(seed), time_rng_(seed ^ 0x9e3779b97f4a7c15ULL), rate_(m.total_rate()) {}

  /// `next_time` must return strictly increasing times.
  EventStream(const CompatibilityModel& m, std::uint64_t seed, TimeSource next_time)
      : EventStream(m, seed) {
    external_ = std::move(next_time);
  }

  Event next() {
    Event e;
    e.index = ++count_;
    e.mark = sampler_.draw(mark_rng_);
    if (external_) {
      const double t = external_();
      if (!(t > time_)) throw InputError("external event times must be strictly increasing");
      time_ = t;
    } else {
      time_ += exponential_draw(time_rng_, rate_);
    }
    e.time = time_;
    return e;
  }

  Mark next_mark() { return next().mark; }

  std::int64_t count() const { return count_; }
  double time() const { return time_; }
  const MarkSampler& sampler() const { return sampler_; }

 private:
  MarkSampler sampler_;
  std::mt19937_64 mark_rng_;
  std::mt19937_64 time_rng_;
  double rate_;
  TimeSource external_;
  std::int64_t count_ = 0;
  double time_ = 0.0;
};

inline EventStream make_event_stream(const CompatibilityModel& m, std::uint64_t seed) { return EventStream(m, seed); }

inline EventStream make_event_stream(const CompatibilityModel& m, std::uint64_t seed, EventStream::TimeSource times) {
  return EventStream(m, seed, std::move(times));
}

/// Times 1, 2, 3, ...
inline EventStream::TimeSource unit_spacing() {
  return [t = 0.0]() mutable { return t += 1.0; };
}

/// First `n` marks of a fresh stream.
inline std::vector<Mark> draw_marks(const CompatibilityModel& m, std::uint64_t seed, std::int64_t n) {
  MarkSampler sampler(m);
  std::mt19937_64 rng(seed);
  std::vector<Mark> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(n, 0)));
  for (std::int64_t k = 0; k < n; ++k) out.push_back(sampler.draw(rng));
  return out;
}

}  // namespace skillmatch
