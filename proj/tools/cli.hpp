#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "skillmatch/skillmatch.hpp"

namespace skillmatch::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitInput = 2;

/// Verbosity from SKILLMATCH_LOG: 0 quiet (default), 1 info, 2 debug.
/// Accepts the numbers or the words.
inline int log_level() {
  const char* v = std::getenv("SKILLMATCH_LOG");
  if (!v) return 0;
  const std::string s(v);
  if (s == "info" || s == "1") return 1;
  if (s == "debug" || s == "2") return 2;
  return 0;
}

class Logger {
 public:
  explicit Logger(std::ostream& err) : err_(err), level_(log_level()) {}
  void info(const std::string& msg) const {
    if (level_ >= 1) err_ << "[info] " << msg << "\n";
  }
  void debug(const std::string& msg) const {
    if (level_ >= 2) err_ << "[debug] " << msg << "\n";
  }

 private:
  std::ostream& err_;
  int level_;
};

namespace detail {

inline Json header(const std::string& command) {
  Json j;
  j["schema"] = 1;
  j["command"] = command;
  return j;
}

inline std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

inline void emit_json(const Json& j, const std::string& path, std::ostream& out) { emit(j.dump(2) + "\n", path, out); }

template <typename Set>
Json labels(const CompatibilityModel& m, Set set) {
  Json a = Json::array();
  set.for_each([&](int k) {
    if constexpr (std::is_same_v<Set, CustomerSet>) {
      a.push_back(m.customer_label(k));
    } else {
      a.push_back(m.server_label(k));
    }
  });
  return a;
}

inline Json poisson_json(const CompatibilityModel& m, const PoissonReport& r) {
  Json j;
  j["passed"] = r.passed;
  j["low_power"] = r.low_power;
  Json types = Json::array();
  for (const auto& t : r.types) {
    Json e;
    e["type"] = m.customer_label(t.type);
    e["count"] = t.count;
    e["claimed_rate"] = t.claimed_rate;
    e["rate"] = t.rate;
    e["rate_z"] = t.rate_z;
    e["rate_ok"] = t.rate_ok;
    e["dispersion"] = t.dispersion;
    e["dispersion_tolerance"] = t.dispersion_tolerance;
    e["dispersion_ok"] = t.dispersion_ok;
    e["ks"] = t.ks;
    e["ks_critical"] = t.ks_critical;
    e["ks_ok"] = t.ks_ok;
    types.push_back(e);
  }
  j["types"] = types;
  Json cross = Json::array();
  for (const auto& c : r.cross) {
    cross.push_back({{"a", m.customer_label(c.a)}, {"b", m.customer_label(c.b)}, {"r", c.r}, {"limit", c.limit}, {"ok", c.ok}});
  }
  j["cross"] = cross;
  return j;
}

}  // namespace detail

inline int cmd_check(const std::string& model_path, const std::string& output, std::ostream& out) {
  const auto m = load_model(model_path);
  const auto st = check_stability(m);
  const auto [alpha, beta] = rate_laws(m);
  const auto pool = check_resource_pooling(m, alpha, beta);
  Json j = detail::header("check");
  j["model"] = model_to_json(m);
  j["lambda_bar"] = m.lambda_bar();
  j["mu_bar"] = m.mu_bar();
  j["stable"] = st.stable;
  j["exact_arithmetic"] = st.exact;
  Json v = Json::array();
  for (CustomerSet c : st.violations) v.push_back(detail::labels(m, c));
  j["violations"] = v;
  j["resource_pooling"] = {{"alpha", alpha}, {"beta", beta}, {"holds", pool.holds}, {"violations", pool.violations}};
  detail::emit_json(j, output, out);
  return kExitOk;
}

inline int cmd_exact(const std::string& model_path, int n_max, const std::string& output, std::ostream& out) {
  const auto m = load_model(model_path);
  const auto seq = exact_sequence_metrics(m, n_max);
  const auto alis = normalize_alis(m);
  Json j = detail::header("exact");
  j["Z"] = seq.normalization.z;
  j["E_L"] = seq.normalization.mean_length;
  j["P_L"] = seq.normalization.pmf;
  j["tail_bound"] = seq.normalization.tail_bound;
  Json per_type_len;
  for (int i = 0; i < m.customer_count(); ++i) per_type_len[m.customer_label(i)] = seq.normalization.mean_per_type[i];
  j["E_L_per_type"] = per_type_len;
  j["unmatched_fraction"] = seq.unmatched_fraction;
  Json per;
  for (int s = 0; s < m.server_count(); ++s) per[m.server_label(s)] = seq.per_type_unmatched[s];
  j["per_type_unmatched"] = per;
  j["Z_alis"] = alis.z;
  j["all_busy_prob"] = alis.all_busy_prob;
  j["mean_waiting_alis"] = alis.mean_waiting;
  Json idle;
  for (int s = 0; s < m.server_count(); ++s) idle[m.server_label(s)] = alis.idle_prob[s];
  j["idle_prob"] = idle;
  j["idle_count_pmf"] = alis.idle_count_pmf;
  if (m.server_count() <= kMaxPermutationServers) {
    const auto perm = normalize_permutation_chain(m);
    j["permutation_route"] = {{"Z", perm.z}, {"all_busy_prob", perm.all_busy_prob}, {"mean_waiting", perm.mean_waiting}};
  }
  detail::emit_json(j, output, out);
  return kExitOk;
}

struct SimulateArgs {
  std::string model;
  std::string kind = "matching";
  std::int64_t events = 100000;
  std::int64_t warmup = -1;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string departures;
  int replications = 1;
  bool compare = false;
  bool poisson = false;
  std::string output;
};

inline int cmd_simulate(const SimulateArgs& a, std::ostream& out, const Logger& log) {
  const auto m = load_model(a.model);
  if (a.replications < 1) throw InputError("replications must be at least 1");
  const ChainKind kind = parse_chain_kind(a.kind);
  if (!is_stable(m)) log.info("model is unstable; occupancy statistics will not settle");
  std::optional<ExactLaw> law;
  if (a.compare) {
    log.info("enumerating exact law");
    law = kind == ChainKind::alis ? exact_alis_law(m) : exact_sequence_law(m);
  }
  Json reps = Json::array();
  std::ostringstream csv;
  csv << "replication,seed,events,warmup,mean_in_system,mean_waiting,server_marks,lost_servers,truncated_keys";
  if (law) csv << ",tv_time,tv_embedded";
  csv << "\n";
  std::ostringstream dep_csv;
  dep_csv << "replication,event_index,time,customer_type,sojourn_events,sojourn_time\n";
  bool all_passed = true;
  for (int r = 0; r < a.replications; ++r) {
    SimOptions opt;
    opt.kind = kind;
    opt.events = a.events;
    opt.warmup = a.warmup;
    opt.seed = a.seed + static_cast<std::uint64_t>(r);
    opt.record_departures = a.poisson || !a.departures.empty();
    log.info("replication " + std::to_string(r) + " seed " + std::to_string(opt.seed));
    const auto s = simulate(m, opt);
    Json j;
    j["replication"] = r;
    j["seed"] = opt.seed;
    j["events"] = s.events;
    j["warmup"] = s.warmup;
    j["stable"] = s.stable;
    j["mean_in_system"] = s.mean_in_system;
    j["mean_waiting"] = s.mean_waiting;
    j["server_marks"] = s.server_marks;
    j["lost_servers"] = s.lost_servers;
    j["truncated_keys"] = s.truncated_keys;
    j["visited_states"] = s.time_occupancy.entries().size();
    csv << r << "," << opt.seed << "," << s.events << "," << s.warmup << "," << detail::fmt(s.mean_in_system) << ","
        << detail::fmt(s.mean_waiting) << "," << s.server_marks << "," << s.lost_servers << "," << s.truncated_keys;
    if (law && s.events > 0) {
      const auto ct = compare_distributions(s.time_occupancy, *law, Weighting::time);
      const auto ce = compare_distributions(s.embedded_occupancy, *law, Weighting::visits);
      j["comparison"] = {{"tv_time", ct.tv},
                         {"tv_embedded", ce.tv},
                         {"max_ratio_error", ct.max_ratio_error},
                         {"support", "exact probability > " + detail::fmt(law->threshold) + " plus visited states"},
                         {"support_size", ct.support_size},
                         {"exact_tail", ct.exact_tail}};
      csv << "," << detail::fmt(ct.tv) << "," << detail::fmt(ce.tv);
    }
    csv << "\n";
    if (a.poisson && s.events > 0) {
      std::vector<double> rates;
      for (int i = 0; i < m.customer_count(); ++i) rates.push_back(m.lambda(i));
      const auto pr = poisson_diagnostics(s.departures, rates);
      j["poisson"] = detail::poisson_json(m, pr);
      all_passed = all_passed && pr.passed;
    }
    for (const auto& d : s.departure_records) {
      dep_csv << r << "," << d.event_index << "," << detail::fmt(d.time) << "," << m.customer_label(d.customer_type) << ","
              << d.sojourn_events << "," << detail::fmt(d.sojourn_time) << "\n";
    }
    reps.push_back(j);
  }
  if (!a.departures.empty()) detail::emit(dep_csv.str(), a.departures, out);
  if (a.format == "csv") {
    detail::emit(csv.str(), a.output, out);
  } else if (a.format == "json") {
    Json j = detail::header("simulate");
    j["kind"] = to_string(kind);
    j["replications"] = reps;
    detail::emit_json(j, a.output, out);
  } else {
    throw InputError("--out must be csv or json");
  }
  return all_passed ? kExitOk : kExitFailed;
}

struct CoupleArgs {
  std::string variant = "nsystem";
  std::string model;
  double l1 = 3, l2 = 2, m1 = 6, m2 = 6;
  std::int64_t events = 100000;
  std::uint64_t seed = 1;
  int seeds = 1;
  std::string fault = "none";
  std::string trace;
  std::int64_t trace_stride = 1000;
  std::string output;
};

inline int cmd_couple(const CoupleArgs& a, std::ostream& out, const Logger& log) {
  if (a.seeds < 1) throw InputError("--seeds must be at least 1");
  Json j = detail::header("couple");
  j["variant"] = a.variant;
  j["events"] = a.events;
  Json runs = Json::array();
  bool passed = true;
  std::ostringstream trace;
  trace << "seed,time,difference\n";
  if (a.variant == "redundancy-matching") {
    const auto m = load_model(a.model);
    CopyService rule;
    if (a.fault == "none") {
      rule = CopyService::head;
    } else if (a.fault == "tail-copy") {
      rule = CopyService::tail;
    } else {
      throw InputError("redundancy-matching faults: none, tail-copy");
    }
    for (int k = 0; k < a.seeds; ++k) {
      const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(k);
      log.info("coupling seed " + std::to_string(seed));
      const auto r = couple_redundancy_matching(m, seed, a.events, rule);
      runs.push_back({{"seed", seed}, {"equivalent", r.equivalent}, {"first_divergence", r.first_divergence}, {"events", r.events}});
      passed = passed && r.equivalent;
    }
  } else if (a.variant == "nsystem") {
    NsystemCouplingOptions opt;
    opt.events = a.events;
    opt.trace_stride = a.trace.empty() ? 0 : a.trace_stride;
    if (a.fault == "none") {
      opt.fault = NsystemFault::none;
    } else if (a.fault == "lifo-server2") {
      opt.fault = NsystemFault::lifo_server2;
    } else {
      throw InputError("nsystem faults: none, lifo-server2");
    }
    if (!is_stable(n_model(a.l1, a.l2, a.m1, a.m2))) throw DivergenceError("N-system rates are unstable");
    for (int k = 0; k < a.seeds; ++k) {
      opt.seed = a.seed + static_cast<std::uint64_t>(k);
      log.info("coupling seed " + std::to_string(opt.seed));
      const auto r = couple_nsystem(a.l1, a.l2, a.m1, a.m2, opt);
      Json e;
      e["seed"] = opt.seed;
      e["passed"] = r.passed;
      e["events"] = r.events;
      e["monitors"] = Json::array({kMonitorTotals, kMonitorLocations, kMonitorWaiting});
      e["mean_difference"] = r.mean_difference;
      e["fraction_minus_one"] = r.fraction_minus_one;
      e["max_difference"] = r.max_difference;
      e["min_difference"] = r.min_difference;
      if (r.violation) {
        e["violation"] = {{"event", r.violation->event}, {"predicate", r.violation->predicate}, {"state", r.violation->state}};
      }
      for (const auto& [t, d] : r.trace) trace << opt.seed << "," << detail::fmt(t) << "," << d << "\n";
      runs.push_back(e);
      passed = passed && r.passed;
    }
    j["rates"] = {{"l1", a.l1}, {"l2", a.l2}, {"m1", a.m1}, {"m2", a.m2}};
  } else {
    throw InputError("--variant must be redundancy-matching or nsystem");
  }
  j["fault"] = a.fault;
  j["runs"] = runs;
  j["passed"] = passed;
  if (!a.trace.empty()) detail::emit(trace.str(), a.trace, out);
  detail::emit_json(j, a.output, out);
  return passed ? kExitOk : kExitFailed;
}

struct MatchflowArgs {
  std::string model;
  std::int64_t marks = 10000;
  std::uint64_t seed = 1;
  std::string mode = "directed";
  bool verify = false;
  std::string links;
  std::string output;
};

inline int cmd_matchflow(const MatchflowArgs& a, std::ostream& out, const Logger& log) {
  const auto m = load_model(a.model);
  if (a.marks < 0) throw InputError("--marks must be nonnegative");
  Json j = detail::header("matchflow");
  j["mode"] = a.mode;
  j["marks"] = a.marks;
  j["seed"] = a.seed;
  bool passed = true;
  std::ostringstream csv;
  csv << "customer_pos,server_pos,customer_type,server_type\n";
  auto write_links = [&](const MatchRecord& rec, auto customer_type, auto server_type) {
    for (auto [c, s] : rec.links)
      csv << c << "," << s << "," << m.customer_label(customer_type(c)) << "," << m.server_label(server_type(s)) << "\n";
  };

  if (a.mode == "directed" || a.mode == "alis-variant") {
    MarkSequence seq;
    seq.marks = draw_marks(m, a.seed, a.marks);
    MatchRecord rec;
    if (a.mode == "directed") {
      rec = directed_match_window(m, seq, false).record;
    } else {
      rec = alis_variant_match(m, seq, false).record;
      j["pending_servers"] = rec.pending_servers.size();
    }
    std::int64_t servers = 0;
    for (const Mark& z : seq.marks) servers += z.is_server();
    j["links"] = rec.links.size();
    j["server_marks"] = servers;
    j["unmatched_servers"] = rec.unmatched_servers.size();
    j["unmatched_customers"] = rec.unmatched_customers.size();
    j["unmatched_server_fraction"] = servers ? static_cast<double>(rec.unmatched_servers.size()) / static_cast<double>(servers) : 0.0;
    j["expected_unmatched_fraction"] = 1.0 - m.lambda_bar() / m.mu_bar();
    const auto problem = match_record_problem(m, seq, rec, a.mode == "directed");
    j["record_valid"] = problem.empty();
    passed = passed && problem.empty();
    write_links(rec, [&](std::int64_t p) { return seq.at(p).type; }, [&](std::int64_t p) { return seq.at(p).type; });
    if (a.verify) {
      if (a.mode != "directed") throw InputError("--verify-reversal supports directed and bipartite modes");
      const auto split = perfect_block_split(m, seq);
      std::int64_t ok = 0;
      for (const auto& b : split.blocks) {
        const auto block = slice(seq, b.start, b.end);
        const auto ex = exchange_transform(block, directed_match_window(m, block, false).record);
        ok += verify_reversal(m, block).ok && exchange_transform(ex.seq, ex.record).seq == block;
      }
      log.info("verified " + std::to_string(split.blocks.size()) + " blocks");
      j["reversal"] = {{"blocks", split.blocks.size()}, {"verified", ok}, {"leftover_marks", split.leftover.size()}};
      passed = passed && ok == static_cast<std::int64_t>(split.blocks.size());
    }
  } else if (a.mode == "bipartite") {
    const auto [alpha, beta] = rate_laws(m);
    const auto pool = check_resource_pooling(m, alpha, beta);
    if (!pool.holds) log.info("complete resource pooling fails for the rate laws; the FCFS matching need not be unique");
    std::mt19937_64 rng(a.seed);
    std::discrete_distribution<int> dc(alpha.begin(), alpha.end()), ds(beta.begin(), beta.end());
    std::vector<int> cs, ss;
    for (std::int64_t k = 0; k < a.marks; ++k) {
      cs.push_back(dc(rng));
      ss.push_back(ds(rng));
    }
    const auto res = bipartite_match_fcfs(m, cs, ss, true);
    j["resource_pooling"] = pool.holds;
    j["links"] = res.record.links.size();
    j["unmatched_customers"] = res.record.unmatched_customers.size();
    j["unmatched_servers"] = res.record.unmatched_servers.size();
    write_links(res.record, [&](std::int64_t p) { return cs[static_cast<std::size_t>(p)]; },
                [&](std::int64_t p) { return ss[static_cast<std::size_t>(p)]; });
    if (a.verify) {
      std::int64_t last_perfect = 0;
      for (std::size_t k = 0; k < res.trace.size(); ++k)
        if (res.trace[k] == "|") last_perfect = static_cast<std::int64_t>(k) + 1;
      const std::vector<int> pc(cs.begin(), cs.begin() + last_perfect), ps(ss.begin(), ss.begin() + last_perfect);
      const auto r = verify_reversal(m, pc, ps);
      j["reversal"] = {{"prefix", last_perfect}, {"ok", r.ok}, {"mismatches", r.mismatches.size()}};
      passed = passed && r.ok;
    }
  } else {
    throw InputError("--mode must be directed, bipartite or alis-variant");
  }
  j["passed"] = passed;
  if (!a.links.empty()) detail::emit(csv.str(), a.links, out);
  detail::emit_json(j, a.output, out);
  return passed ? kExitOk : kExitFailed;
}

struct NsystemArgs {
  double l1 = 3, l2 = 2, m1 = 6, m2 = 6;
  bool sweep = false;
  std::string grid;
  std::string output;
};

inline int cmd_nsystem(const NsystemArgs& a, std::ostream& out) {
  Json j = detail::header("nsystem");
  if (a.sweep) {
    const auto grid = nsystem_default_sweep();
    std::ostringstream csv;
    csv << "rho1,rho2,theta,lambda1,lambda2,mu1,mu2,ENr_total,ENq_total,difference\n";
    bool pos = false, neg = false;
    for (const auto& g : grid) {
      csv << detail::fmt(g.rho1) << "," << detail::fmt(g.rho2) << "," << detail::fmt(g.theta) << "," << detail::fmt(g.l1) << ","
          << detail::fmt(g.l2) << "," << detail::fmt(g.m1) << "," << detail::fmt(g.m2) << "," << detail::fmt(g.ENr_total) << ","
          << detail::fmt(g.ENq_total) << "," << detail::fmt(g.difference) << "\n";
      pos = pos || g.difference > 0;
      neg = neg || g.difference < 0;
    }
    if (!a.grid.empty()) {
      detail::emit(csv.str(), a.grid, out);
    } else if (a.output.empty()) {
      out << csv.str();
      return pos && neg ? kExitOk : kExitFailed;
    }
    j["grid_points"] = grid.size();
    j["positive_region"] = pos;
    j["negative_region"] = neg;
    j["sign_change"] = pos && neg;
    detail::emit_json(j, a.output, out);
    return pos && neg ? kExitOk : kExitFailed;
  }
  const auto r = nsystem_closed_forms(a.l1, a.l2, a.m1, a.m2);
  j["rates"] = {{"l1", a.l1}, {"l2", a.l2}, {"m1", a.m1}, {"m2", a.m2}};
  j["EW1r"] = r.EW1r;
  j["EW2r"] = r.EW2r;
  j["B"] = r.B;
  j["EV1q"] = r.EV1q;
  j["EV2q"] = r.EV2q;
  j["b1q"] = r.b1q;
  j["b2q"] = r.b2q;
  j["ES1q"] = r.ES1q;
  j["ES2q"] = r.ES2q;
  j["ENr_total"] = r.ENr_total;
  j["ENq_total"] = r.ENq_total;
  if (a.l1 < a.m1 && a.l2 < a.m2) {
    const auto [d1, d2] = nsystem_dedicated(a.l1, a.l2, a.m1, a.m2);
    j["dedicated"] = {{"EN1", d1}, {"EN2", d2}};
  }
  detail::emit_json(j, a.output, out);
  return kExitOk;
}

/// Parses argv and runs one subcommand. Exit codes: 0 success, 1 a monitor
/// or check failed, 2 bad input (flags, config, unstable where required).
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const Logger log(err);
  CLI::App app{"Skill-based service and matching models: exact product forms, simulation, couplings"};
  app.require_subcommand(1);

  std::string check_model, check_out;
  auto* check = app.add_subcommand("check", "stability and complete resource pooling");
  check->add_option("--model", check_model, "model JSON file")->required();
  check->add_option("-o,--output", check_out, "write the report here instead of stdout");

  std::string exact_model, exact_out;
  int n_max = 64;
  auto* exact = app.add_subcommand("exact", "exact normalizing constants and metrics");
  exact->add_option("--model", exact_model, "model JSON file")->required();
  exact->add_option("--n-max", n_max, "largest queue length in P_L")->check(CLI::NonNegativeNumber);
  exact->add_option("-o,--output", exact_out, "write the report here instead of stdout");

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "uniformized simulation of one chain");
  sim->add_option("--model", sa.model, "model JSON file")->required();
  sim->add_option("--kind", sa.kind, "alis | redundancy | matching")->check(CLI::IsMember({"alis", "redundancy", "matching"}));
  sim->add_option("--events", sa.events, "events including warmup")->check(CLI::NonNegativeNumber);
  sim->add_option("--warmup", sa.warmup, "warmup events (default 10%)");
  sim->add_option("--seed", sa.seed, "base seed; replication r uses seed + r");
  sim->add_option("--out", sa.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  sim->add_option("--departures", sa.departures, "departure log CSV path");
  sim->add_option("--replications", sa.replications, "independent replications")->check(CLI::PositiveNumber);
  sim->add_flag("--compare", sa.compare, "compare occupancy with the exact law");
  sim->add_flag("--poisson", sa.poisson, "run departure Poisson diagnostics");
  sim->add_option("-o,--output", sa.output, "write the summary here instead of stdout");

  CoupleArgs ca;
  auto* couple = app.add_subcommand("couple", "coupled runs with pathwise monitors");
  couple->add_option("--variant", ca.variant, "redundancy-matching | nsystem")
      ->check(CLI::IsMember({"redundancy-matching", "nsystem"}));
  couple->add_option("--model", ca.model, "model JSON file (redundancy-matching)");
  couple->add_option("--l1", ca.l1);
  couple->add_option("--l2", ca.l2);
  couple->add_option("--m1", ca.m1);
  couple->add_option("--m2", ca.m2);
  couple->add_option("--events", ca.events, "events per run")->check(CLI::NonNegativeNumber);
  couple->add_option("--seed", ca.seed, "first seed");
  couple->add_option("--seeds", ca.seeds, "number of consecutive seeds")->check(CLI::PositiveNumber);
  couple->add_option("--fault", ca.fault, "none | tail-copy | lifo-server2");
  couple->add_option("--trace", ca.trace, "CSV of N^r - N^q samples (nsystem)");
  couple->add_option("--trace-stride", ca.trace_stride, "events between trace samples")->check(CLI::PositiveNumber);
  couple->add_option("-o,--output", ca.output, "write the report here instead of stdout");

  MatchflowArgs ma;
  auto* flow = app.add_subcommand("matchflow", "FCFS matching of an i.i.d. window");
  flow->add_option("--model", ma.model, "model JSON file")->required();
  flow->add_option("--marks", ma.marks, "window length")->check(CLI::NonNegativeNumber);
  flow->add_option("--seed", ma.seed);
  flow->add_option("--mode", ma.mode, "directed | bipartite | alis-variant")
      ->check(CLI::IsMember({"directed", "bipartite", "alis-variant"}));
  flow->add_flag("--verify-reversal", ma.verify, "check reversal on perfect blocks");
  flow->add_option("--emit-links", ma.links, "link CSV path");
  flow->add_option("-o,--output", ma.output, "write the report here instead of stdout");

  NsystemArgs na;
  auto* ns = app.add_subcommand("nsystem", "closed forms for the two-server N-system");
  ns->add_option("--l1", na.l1);
  ns->add_option("--l2", na.l2);
  ns->add_option("--m1", na.m1);
  ns->add_option("--m2", na.m2);
  ns->add_flag("--sweep", na.sweep, "difference grid over (rho1, rho2, theta)");
  ns->add_option("--grid", na.grid, "grid CSV path (with --sweep)");
  ns->add_option("-o,--output", na.output, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInput;
  }

  try {
    if (*check) return cmd_check(check_model, check_out, out);
    if (*exact) return cmd_exact(exact_model, n_max, exact_out, out);
    if (*sim) return cmd_simulate(sa, out, log);
    if (*couple) return cmd_couple(ca, out, log);
    if (*flow) return cmd_matchflow(ma, out, log);
    if (*ns) return cmd_nsystem(na, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DivergenceError& e) {
    err << "unstable: " << e.what() << "\n";
    return kExitInput;
  } catch (const InvariantError& e) {
    err << "invariant violated: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitInput;
}

}  // namespace skillmatch::cli
