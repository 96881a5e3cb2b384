// Acceptance runner: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria (capped at 1). Pass criterion ids (AC1 ... AC12,
// FIG6) as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "skillmatch/skillmatch.hpp"

using namespace skillmatch;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double round_to(double x, int digits) {
  const double s = std::pow(10.0, digits);
  return std::round(x * s) / s;
}

Outcome ac1() {
  const auto a = nsystem_closed_forms(3, 2, 6, 6);
  const auto b = nsystem_closed_forms(2, 145, 3, 150);
  const auto [d1, d2] = nsystem_dedicated(2, 145, 3, 150);
  const bool ok = round_to(a.ENr_total, 3) == 1.014 && round_to(a.ENq_total, 3) == 1.194 &&
                  round_to(b.ENr_total, 3) == 35.375 && round_to(b.ENq_total, 4) == 32.4993 && d1 == 2.0 && d2 == 29.0;
  return {ok, fmt("ex1 ENr=%.6f ENq=%.6f; ex2 ENr=%.6f ENq=%.6f; dedicated EN1=%g EN2=%g", a.ENr_total, a.ENq_total,
                  b.ENr_total, b.ENq_total, d1, d2)};
}

SimSummary run_sim(const CompatibilityModel& m, ChainKind kind, std::int64_t events, std::int64_t warmup, std::uint64_t seed) {
  SimOptions o;
  o.kind = kind;
  o.events = events;
  o.warmup = warmup;
  o.seed = seed;
  return simulate(m, o);
}

Outcome ac2() {
  const auto w = w_model();
  const auto t0 = std::chrono::steady_clock::now();
  const auto law = exact_sequence_law(w);
  const auto a = run_sim(w, ChainKind::matching, 1000000, 100000, 1);
  const auto b = run_sim(w, ChainKind::redundancy, 1000000, 100000, 1);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double tva = compare_distributions(a.time_occupancy, law).tv;
  const double tvb = compare_distributions(b.time_occupancy, law).tv;
  return {tva < 0.02 && tvb < 0.02 && secs < 60.0,
          fmt("TV matching=%.4f redundancy=%.4f (limit 0.02), support covers %.5f, %.1f s", tva, tvb, law.covered, secs)};
}

Outcome ac3() {
  const auto w = w_model();
  const auto s = run_sim(w, ChainKind::alis, 1000000, 100000, 1);
  const auto law = exact_alis_law(w);
  const double tv = compare_distributions(s.time_occupancy, law).tv;
  // All-busy states end with the separator; their waiting sequences follow
  // the sequence-chain weights.
  const auto busy = s.time_occupancy.restrict([](const std::string& k) { return k.back() == '|'; },
                                              [](const std::string& k) { return k.substr(0, k.size() - 1); });
  const auto seq = exact_sequence_law(w);
  const auto cond = compare_distributions(busy, seq, Weighting::time, 500);
  return {tv < 0.03 && cond.max_ratio_error < 0.05,
          fmt("TV=%.4f (limit 0.03); all-busy conditional max ratio error %.4f over %zu states with >=500 visits (limit 0.05)",
              tv, cond.max_ratio_error, cond.ratio_states)};
}

std::vector<CompatibilityModel> three_models() {
  return {w_model(), n_model(3, 2, 6, 6), complete_model({0.5, 1, 1.5}, {2, 2.5})};
}

Outcome ac4() {
  int runs = 0, ok = 0;
  std::string first;
  const char* names[] = {"W", "N", "complete"};
  const auto models = three_models();
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto r = couple_redundancy_matching(models[mi], seed, 1000000);
      ++runs;
      ok += r.equivalent && r.events == 1000000;
      if (!r.equivalent && first.empty())
        first = fmt(" first divergence %s seed %llu event %lld", names[mi], static_cast<unsigned long long>(seed),
                    static_cast<long long>(r.first_divergence));
    }
  }
  return {ok == runs, fmt("%d/%d runs of 10^6 events identical%s", ok, runs, first.c_str())};
}

Outcome ac5() {
  int runs = 0, ok = 0;
  std::string first;
  for (auto [l1, l2, m1, m2] : {std::array<double, 4>{3, 2, 6, 6}, std::array<double, 4>{2, 145, 3, 150}}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      NsystemCouplingOptions o;
      o.seed = seed;
      o.events = 1000000;
      const auto r = couple_nsystem(l1, l2, m1, m2, o);
      ++runs;
      ok += r.passed && r.events == 1000000;
      if (!r.passed && first.empty() && r.violation)
        first = " violation " + r.violation->predicate + " at event " + std::to_string(r.violation->event);
    }
  }
  return {ok == runs, fmt("%d/%d coupled runs kept all three monitors for 10^6 events%s", ok, runs, first.c_str())};
}

Outcome ac6() {
  const auto w = w_model();
  const std::int64_t n = 1000000, warmup = 100000;
  const MarkSequence seq{0, draw_marks(w, 1, n)};
  const auto r = directed_match_window(w, seq, true);
  double customers = 0, servers = 0;
  for (const Mark& z : seq.marks) (z.is_customer() ? customers : servers) += 1;
  const double frac = static_cast<double>(r.record.unmatched_servers.size()) / servers;
  const double target = 1.0 - w.lambda_bar() / w.mu_bar();
  // frac ~ 1 - C/S; C - r S has per-mark second moment p_c + r^2 p_s.
  const double rr = w.lambda_bar() / w.mu_bar();
  const double pc = w.lambda_bar() / w.total_rate(), ps = 1.0 - pc;
  const double sigma = std::sqrt(static_cast<double>(n) * (pc + rr * rr * ps)) / servers;
  OccupancyTable emb;
  for (std::int64_t k = warmup; k < n; ++k) {
    const auto& x = r.x_trace[static_cast<std::size_t>(k)];
    if (x.size() > kMaxKeyLength) {
      emb.add_overflow(1.0);
    } else {
      emb.add(sequence_key(x), 1.0);
    }
  }
  const double tv = compare_distributions(emb, exact_sequence_law(w), Weighting::visits).tv;
  const bool frac_ok = std::fabs(frac - target) <= 3 * sigma;
  return {frac_ok && tv < 0.02, fmt("unmatched fraction %.5f vs %.5f (3 sigma %.5f); embedded TV %.4f (limit 0.02)", frac,
                                    target, 3 * sigma, tv)};
}

Outcome ac7() {
  int blocks = 0, ok = 0, involutions = 0;
  const auto models = three_models();
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const auto& m = models[mi];
    for (std::uint64_t seed = 1; blocks < 1000 * static_cast<int>(mi + 1); ++seed) {
      const MarkSequence seq{0, draw_marks(m, 1000 + seed, 20000)};
      const auto split = perfect_block_split(m, seq);
      for (const auto& b : split.blocks) {
        if (blocks >= 1000 * static_cast<int>(mi + 1)) break;
        const auto block = slice(seq, b.start, b.end);
        const auto rec = directed_match_window(m, block, false).record;
        const auto ex = exchange_transform(block, rec);
        const auto back = exchange_transform(ex.seq, ex.record);
        auto links = back.record;
        links.sort();
        involutions += back.seq == block && links.links == rec.links;
        ok += verify_reversal(m, block).ok;
        ++blocks;
      }
    }
  }
  return {ok == blocks && involutions == blocks,
          fmt("reversal verified on %d/%d blocks; exchange involution exact on %d/%d", ok, blocks, involutions, blocks)};
}

Outcome ac8() {
  const auto w = w_model();
  SimOptions o;
  o.kind = ChainKind::matching;
  o.events = 1200000;
  o.warmup = 100000;
  o.seed = 1;
  o.record_departures = true;
  o.record_series = true;
  const auto s = simulate(w, o);
  std::vector<double> rates;
  for (int i = 0; i < w.customer_count(); ++i) rates.push_back(w.lambda(i));
  const auto p = poisson_diagnostics(s.departures, rates);
  const auto ind = state_departure_independence(s.in_system, s.departures, {1.0, 5.0, 20.0});
  std::string d;
  std::size_t fewest = SIZE_MAX;
  for (const auto& t : p.types) {
    fewest = std::min<std::size_t>(fewest, static_cast<std::size_t>(t.count));
    d += fmt("%s rate_z=%.2f D=%.3f(+-%.3f) KS=%.4f/%.4f; ", w.customer_label(t.type).c_str(), t.rate_z, t.dispersion,
             t.dispersion_tolerance, t.ks, t.ks_critical);
  }
  for (const auto& c : p.cross) d += fmt("r%d%d=%.4f/%.4f; ", c.a + 1, c.b + 1, c.r, c.limit);
  for (const auto& c : ind.windows) d += fmt("indep w=%g r=%.4f/%.4f; ", c.window, c.r, c.limit);
  d += fmt("min departures per type %zu", fewest);
  return {p.passed && ind.passed && fewest >= 100000, d};
}

std::vector<AlisState> reachable_alis_states(const CompatibilityModel& m, std::uint64_t seed, int count, int stride) {
  std::vector<AlisState> out;
  AlisState s = AlisState::all_idle(m);
  std::mt19937_64 rng(seed);
  MarkSampler sampler(m);
  for (int k = 0; static_cast<int>(out.size()) < count; ++k) {
    transition_alis(m, s, sampler.draw(rng));
    if (k % stride == 0) out.push_back(s);
  }
  return out;
}

Outcome ac9() {
  double worst = 0.0;
  int states = 0;
  for (const auto& m : three_models()) {
    for (const auto& x : reachable_alis_states(m, 99, 200, 11)) {
      worst = std::max(worst, verify_partial_balance(m, x).max_residual);
      ++states;
    }
  }
  return {worst < 1e-9, fmt("max residual %.3g over %d states (limit 1e-9)", worst, states)};
}

// Rates for a graph: mu_j = 1 + j/4, lambda_i proportional to 1 + 3i/10 and
// scaled so the tightest subset constraint sits at 0.8.
CompatibilityModel graph_model(int ni, int nj, std::uint32_t edges) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(ni));
  for (int c = 0; c < ni; ++c)
    for (int s = 0; s < nj; ++s)
      if ((edges >> (c * nj + s)) & 1u) adj[c].push_back(s);
  std::vector<double> lambda(static_cast<std::size_t>(ni)), mu(static_cast<std::size_t>(nj));
  for (int s = 0; s < nj; ++s) mu[s] = 1.0 + 0.25 * s;
  double worst = 0.0;
  for (int mask = 1; mask < (1 << ni); ++mask) {
    double l = 0.0;
    std::uint32_t srv = 0;
    for (int c = 0; c < ni; ++c) {
      if (!((mask >> c) & 1)) continue;
      l += 1.0 + 0.3 * c;
      for (int s : adj[c]) srv |= 1u << s;
    }
    double u = 0.0;
    for (int s = 0; s < nj; ++s)
      if ((srv >> s) & 1u) u += mu[s];
    worst = std::max(worst, l / u);
  }
  for (int c = 0; c < ni; ++c) lambda[c] = (1.0 + 0.3 * c) * 0.8 / worst;
  return CompatibilityModel::from_adjacency(adj, lambda, mu);
}

Outcome ac10() {
  int models = 0, z_ok = 0, route_ok = 0;
  double worst_z = 0.0, worst_route = 0.0;
  for (int ni = 1; ni <= 4; ++ni) {
    for (int nj = 1; nj <= 4; ++nj) {
      const std::uint32_t total = 1u << (ni * nj);
      for (std::uint32_t e = 1; e < total; ++e) {
        bool ok = true;
        for (int c = 0; c < ni && ok; ++c) ok = ((e >> (c * nj)) & ((1u << nj) - 1)) != 0;
        for (int s = 0; s < nj && ok; ++s) {
          bool hit = false;
          for (int c = 0; c < ni; ++c) hit = hit || ((e >> (c * nj + s)) & 1u);
          ok = hit;
        }
        if (!ok) continue;
        const auto m = graph_model(ni, nj, e);
        ++models;
        // Brute route: level-by-level enumeration grouped by server union,
        // run until the level mass is negligible.
        const double z = normalize_sequence_chain(m, 0).z;
        double brute = 1.0, last = 1.0;
        for (int len = 50;; len *= 2) {
          brute = oracle::length_dp_sum(m, len, last);
          if (last < 1e-14 * brute || len > 20000) break;
        }
        const double rel = std::fabs(z - brute) / z;
        worst_z = std::max(worst_z, rel);
        z_ok += rel <= 1e-8;
        const auto a = normalize_alis(m);
        const auto p = normalize_permutation_chain(m);
        double gap = std::max(std::fabs(a.all_busy_prob - p.all_busy_prob),
                              std::fabs(a.mean_waiting - p.mean_waiting) / std::max(1.0, a.mean_waiting));
        for (int s = 0; s < nj; ++s) gap = std::max(gap, std::fabs(1.0 - a.idle_prob[s] - p.busy_prob[s]));
        worst_route = std::max(worst_route, gap);
        route_ok += gap <= 1e-10;
      }
    }
  }
  return {z_ok == models && route_ok == models,
          fmt("%d graphs with I,J<=4: Z within 1e-8 on %d (worst %.2g); permutation vs ALIS route within 1e-10 on %d "
              "(worst %.2g)",
              models, z_ok, worst_z, route_ok, worst_route)};
}

std::pair<std::size_t, std::size_t> unmatched(const CompatibilityModel& m, const std::vector<Mark>& marks) {
  const auto r = directed_match_window(m, MarkSequence{0, marks}, false).record;
  return {r.unmatched_customers.size(), r.unmatched_servers.size()};
}

Outcome ac11() {
  std::mt19937_64 rng(2024);
  std::vector<CompatibilityModel> models = three_models();
  for (int k = 0; k < 5; ++k) models.push_back(oracle::random_model(rng, 3, 3, 0.8));
  std::uniform_int_distribution<int> len(0, 200);
  int mono_bad = 0, sub_bad = 0, oracle_bad = 0;
  const int windows = 10000;
  for (int t = 0; t < windows; ++t) {
    const auto& m = models[static_cast<std::size_t>(t) % models.size()];
    const auto marks = draw_marks(m, 5000 + t, len(rng));
    const auto [k, l] = unmatched(m, marks);
    const auto [ok_, ol_] = oracle::unmatched_counts(m, marks);
    oracle_bad += static_cast<int>(k) != ok_ || static_cast<int>(l) != ol_;
    // Monotonicity: prepend one customer or one server.
    std::uniform_int_distribution<int> ci(0, m.customer_count() - 1), sj(0, m.server_count() - 1);
    auto with_c = marks;
    with_c.insert(with_c.begin(), Mark::customer(ci(rng)));
    const auto [kc, lc] = unmatched(m, with_c);
    auto with_s = marks;
    with_s.insert(with_s.begin(), Mark::server(sj(rng)));
    const auto [ks, ls] = unmatched(m, with_s);
    mono_bad += !(lc <= l && kc <= k + 1 && kc >= k) || !(ls == l + 1 && ks == k);
    // Subadditivity over a random split.
    std::uniform_int_distribution<std::size_t> cut(0, marks.size());
    const auto at = cut(rng);
    const auto [k1, l1] = unmatched(m, std::vector<Mark>(marks.begin(), marks.begin() + static_cast<std::ptrdiff_t>(at)));
    const auto [k2, l2] = unmatched(m, std::vector<Mark>(marks.begin() + static_cast<std::ptrdiff_t>(at), marks.end()));
    sub_bad += !(k <= k1 + k2 && l <= l1 + l2);
  }
  return {mono_bad == 0 && sub_bad == 0 && oracle_bad == 0,
          fmt("%d windows: monotonicity violations %d, subadditivity violations %d, oracle count mismatches %d", windows,
              mono_bad, sub_bad, oracle_bad)};
}

Outcome ac12() {
  const auto w = w_model();
  SimOptions o;
  o.kind = ChainKind::matching;
  o.events = 1100000;
  o.warmup = 100000;
  o.seed = 1;
  o.times = unit_spacing();
  const auto s = simulate(w, o);
  const double tv = compare_distributions(s.embedded_occupancy, exact_sequence_law(w), Weighting::visits).tv;
  return {tv < 0.03, fmt("embedded TV %.4f over %lld transitions (limit 0.03)", tv,
                         static_cast<long long>(s.embedded_occupancy.total_visits()))};
}

Outcome fig6() {
  const auto grid = nsystem_default_sweep();
  int pos = 0, neg = 0;
  for (const auto& g : grid) {
    pos += g.difference > 0;
    neg += g.difference < 0;
  }
  return {pos > 0 && neg > 0, fmt("%zu grid points: %d with ENr>ENq, %d with ENr<ENq", grid.size(), pos, neg)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> all = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},   {"AC5", ac5},   {"AC6", ac6},  {"AC7", ac7},
      {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}, {"AC11", ac11}, {"AC12", ac12}, {"FIG6", fig6}};
  std::set<std::string> only(argv + 1, argv + argc);
  int failed = 0;
  for (const auto& [id, fn] : all) {
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%-5s %s  %s [%.1f s]\n", id, o.passed ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.passed;
  }
  std::printf("%d criteria failed\n", failed);
  return failed ? 1 : 0;
}
