#pragma once

// Text formats for limit laws:
//
//   critical-value table   '#' + JSON header line, then "alpha,critical_value" rows
//   limit sample           '#' + JSON header line, then "draw" rows (sorted)
//
// Numbers are written in shortest round-trip form, so reading a file back
// reproduces the doubles exactly.

#include <charconv>
#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cusum_lp/error.hpp"
#include "cusum_lp/limit_laws.hpp"
#include "cusum_lp/version.hpp"
#include "cusum_lp/weight.hpp"

namespace cusum_lp {

using json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  detail::require(res.ec == std::errc{} && res.ptr == text.data() + text.size(), error_kind::invalid_input,
                  "not a number: '" + std::string(text) + "'");
  return v;
}

inline json to_json(const weight_spec& w) {
  json j;
  if (w.is_uniform()) {
    j["kind"] = "uniform";
  } else if (w.is_power()) {
    j["kind"] = "power";
    j["q"] = w.exponent();
  } else {
    const auto& t = std::get<trimmed_power_weight>(w.kind());
    j["kind"] = "trimmed-power";
    j["kappa"] = t.kappa;
    j["t1"] = t.t1;
    j["t2"] = t.t2;
  }
  return j;
}

inline weight_spec weight_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "uniform") return weight_spec::uniform();
  if (kind == "power") return weight_spec::power(j.at("q").get<double>());
  if (kind == "trimmed-power") {
    return weight_spec::trimmed_power(j.at("kappa").get<double>(), j.at("t1").get<double>(),
                                      j.at("t2").get<double>());
  }
  detail::fail(error_kind::invalid_input, "unknown weight kind '" + kind + "'");
}

inline json to_json(const law_family& law) {
  return std::visit(
      [](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        json j;
        if constexpr (std::is_same_v<T, general_law>) {
          j["family"] = "general";
          j["p"] = l.p;
          j["weight"] = to_json(l.weight);
        } else if constexpr (std::is_same_v<T, fb_law>) {
          j["family"] = "renyi";
          j["p"] = l.p;
          j["kappa"] = l.kappa;
          j["gamma1"] = l.gamma1;
          j["gamma2"] = l.gamma2;
          j["grid_step"] = l.grid_step;
          j["tail_tol"] = l.tail_tol;
        } else {
          j["family"] = "wiener-tail";
          j["p"] = l.p;
          j["kappa"] = l.kappa;
          j["grid_step"] = l.grid_step;
          j["tail_tol"] = l.tail_tol;
        }
        return j;
      },
      law);
}

inline json to_json(standard_normal_law) { return json{{"family", "darling-erdos"}, {"limit", "standard-normal"}}; }

inline law_family law_from_json(const json& j) {
  const auto family = j.at("family").get<std::string>();
  if (family == "general") return general_law{j.at("p").get<double>(), weight_from_json(j.at("weight"))};
  if (family == "renyi") {
    return fb_law{j.at("p").get<double>(),      j.at("kappa").get<double>(),     j.at("gamma1").get<double>(),
                  j.at("gamma2").get<double>(), j.at("grid_step").get<double>(), j.at("tail_tol").get<double>()};
  }
  if (family == "wiener-tail") {
    return wiener_tail_law{j.at("p").get<double>(), j.at("kappa").get<double>(), j.at("grid_step").get<double>(),
                           j.at("tail_tol").get<double>()};
  }
  detail::fail(error_kind::invalid_input, "no sample representation for law family '" + family + "'");
}

/// Header describing a simulated law; also the cache identity of the sample.
inline json sample_header(const limit_sample& s, std::string_view format) {
  json j;
  j["format"] = format;
  j["format_version"] = table_format_version;
  j["tool_version"] = tool_version;
  j["law"] = to_json(s.family);
  j["grid"] = s.grid_size;
  j["reps"] = s.replications;
  j["seed"] = s.seed;
  if (s.truncation_horizon) j["truncation_horizon"] = *s.truncation_horizon;
  if (std::holds_alternative<general_law>(s.family)) j["endpoint_bias_bound"] = s.endpoint_bias_bound;
  return j;
}

inline json normal_header(std::string_view format) {
  json j;
  j["format"] = format;
  j["format_version"] = table_format_version;
  j["tool_version"] = tool_version;
  j["law"] = to_json(standard_normal_law{});
  return j;
}

inline constexpr std::string_view critical_value_format = "cusum-lp/critical-values";
inline constexpr std::string_view sample_format = "cusum-lp/limit-sample";

inline const std::vector<double>& default_alphas() {
  static const std::vector<double> alphas{0.10, 0.05, 0.025, 0.01};
  return alphas;
}

struct critical_value_table {
  json header;
  std::vector<double> alpha;
  std::vector<double> value;
};

inline void write_table(std::ostream& os, const critical_value_table& table) {
  os << '#' << table.header.dump() << '\n' << "alpha,critical_value\n";
  for (std::size_t i = 0; i < table.alpha.size(); ++i) {
    os << format_double(table.alpha[i]) << ',' << format_double(table.value[i]) << '\n';
  }
}

inline critical_value_table make_table(const limit_sample& s, const std::vector<double>& alphas) {
  critical_value_table t{sample_header(s, critical_value_format), alphas, {}};
  for (double a : alphas) t.value.push_back(critical_value(s, a));
  return t;
}

inline critical_value_table make_table(standard_normal_law law, const std::vector<double>& alphas) {
  critical_value_table t{normal_header(critical_value_format), alphas, {}};
  for (double a : alphas) t.value.push_back(critical_value(law, a));
  return t;
}

namespace detail {

inline json read_header(std::istream& is, std::string_view expected_format) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)) && !line.empty() && line.front() == '#',
          error_kind::invalid_input, "missing '#' header line");
  json header;
  try {
    header = json::parse(line.substr(1));
  } catch (const json::exception& e) {
    fail(error_kind::invalid_input, std::string("bad table header: ") + e.what());
  }
  require(header.value("format", std::string{}) == expected_format, error_kind::invalid_input,
          "unexpected table format");
  require(header.value("format_version", 0) == table_format_version, error_kind::invalid_input,
          "unsupported table format version");
  return header;
}

}  // namespace detail

inline critical_value_table read_table(std::istream& is) {
  critical_value_table t{detail::read_header(is, critical_value_format), {}, {}};
  std::string line;
  detail::require(static_cast<bool>(std::getline(is, line)) && line.rfind("alpha,critical_value", 0) == 0,
                  error_kind::invalid_input, "missing column header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    detail::require(comma != std::string::npos, error_kind::invalid_input, "malformed table row: " + line);
    t.alpha.push_back(parse_double(std::string_view(line).substr(0, comma)));
    t.value.push_back(parse_double(std::string_view(line).substr(comma + 1)));
  }
  return t;
}

inline void write_sample(std::ostream& os, const limit_sample& s) {
  os << '#' << sample_header(s, sample_format).dump() << '\n' << "draw\n";
  for (double d : s.draws) os << format_double(d) << '\n';
}

inline limit_sample read_sample(std::istream& is) {
  const json header = detail::read_header(is, sample_format);
  limit_sample s;
  s.family = law_from_json(header.at("law"));
  s.grid_size = header.at("grid").get<std::size_t>();
  s.replications = header.at("reps").get<std::size_t>();
  s.seed = header.at("seed").get<std::uint64_t>();
  if (header.contains("truncation_horizon")) s.truncation_horizon = header["truncation_horizon"].get<double>();
  s.endpoint_bias_bound = header.value("endpoint_bias_bound", 0.0);
  std::string line;
  detail::require(static_cast<bool>(std::getline(is, line)) && line.rfind("draw", 0) == 0,
                  error_kind::invalid_input, "missing column header");
  while (std::getline(is, line)) {
    if (!line.empty()) s.draws.push_back(parse_double(line));
  }
  detail::require(s.draws.size() == s.replications, error_kind::invalid_input,
                  "sample file is truncated");
  detail::require(std::is_sorted(s.draws.begin(), s.draws.end()), error_kind::invalid_input,
                  "sample draws are not sorted");
  return s;
}

}  // namespace cusum_lp
