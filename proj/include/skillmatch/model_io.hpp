#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "json.hpp"

#include "skillmatch/model.hpp"

namespace skillmatch {

namespace detail {

inline Rate parse_rate(const nlohmann::json& v) {
  if (v.is_number_integer() || v.is_number_unsigned()) return Rate::integer(v.get<std::int64_t>());
  if (v.is_number_float()) return Rate(v.get<double>());
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    const auto slash = s.find('/');
    try {
      std::size_t used = 0;
      if (slash == std::string::npos) {
        const auto n = std::stoll(s, &used);
        if (used != s.size()) throw InputError("bad rate string: " + s);
        return Rate::integer(n);
      }
      const auto num_str = s.substr(0, slash);
      const auto den_str = s.substr(slash + 1);
      const auto n = std::stoll(num_str, &used);
      if (used != num_str.size()) throw InputError("bad rate string: " + s);
      const auto d = std::stoll(den_str, &used);
      if (used != den_str.size()) throw InputError("bad rate string: " + s);
      return Rate::ratio(n, d);
    } catch (const std::logic_error&) {
      throw InputError("bad rate string: " + s);
    }
  }
  throw InputError("rate must be a number or a \"p/q\" string");
}

inline nlohmann::ordered_json rate_to_json(const Rate& r) {
  if (r.exact) {
    if (r.exact->den == 1) return r.exact->num;
    return std::to_string(r.exact->num) + "/" + std::to_string(r.exact->den);
  }
  return r.value;
}

}  // namespace detail

/// Parses a model config:
///   {"customer_types": [...], "server_types": [...],
///    "edges": [["c1","s1"], ...], "lambda": [...], "mu": [...]}
/// Indices follow declaration order. Rates are numbers or "p/q" strings.
inline CompatibilityModel model_from_json(const nlohmann::json& j) {
  try {
    const auto customers = j.at("customer_types").get<std::vector<std::string>>();
    const auto servers = j.at("server_types").get<std::vector<std::string>>();
    std::map<std::string, int> cidx, sidx;
    for (std::size_t i = 0; i < customers.size(); ++i)
      if (!cidx.emplace(customers[i], static_cast<int>(i)).second) throw InputError("duplicate customer label " + customers[i]);
    for (std::size_t k = 0; k < servers.size(); ++k)
      if (!sidx.emplace(servers[k], static_cast<int>(k)).second) throw InputError("duplicate server label " + servers[k]);
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw InputError("edge must be a [customer, server] pair");
      const auto c = e[0].get<std::string>();
      const auto s = e[1].get<std::string>();
      if (!cidx.count(c)) throw InputError("edge references unknown customer " + c);
      if (!sidx.count(s)) throw InputError("edge references unknown server " + s);
      edges.emplace_back(cidx[c], sidx[s]);
    }
    std::vector<Rate> lambda, mu;
    for (const auto& v : j.at("lambda")) lambda.push_back(detail::parse_rate(v));
    for (const auto& v : j.at("mu")) mu.push_back(detail::parse_rate(v));
    return CompatibilityModel(customers, servers, edges, lambda, mu);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model config: ") + e.what());
  }
}

inline CompatibilityModel model_from_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model config is not valid JSON: ") + e.what());
  }
  return model_from_json(j);
}

inline CompatibilityModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_string(buf.str());
}

inline nlohmann::ordered_json model_to_json(const CompatibilityModel& m) {
  nlohmann::ordered_json j;
  j["customer_types"] = m.customer_labels();
  j["server_types"] = m.server_labels();
  auto edges = nlohmann::ordered_json::array();
  for (auto [c, s] : m.edges()) edges.push_back({m.customer_label(c), m.server_label(s)});
  j["edges"] = edges;
  auto lambda = nlohmann::ordered_json::array();
  for (int i = 0; i < m.customer_count(); ++i) lambda.push_back(detail::rate_to_json(m.lambda_rate(i)));
  auto mu = nlohmann::ordered_json::array();
  for (int k = 0; k < m.server_count(); ++k) mu.push_back(detail::rate_to_json(m.mu_rate(k)));
  j["lambda"] = lambda;
  j["mu"] = mu;
  return j;
}

}  // namespace skillmatch
