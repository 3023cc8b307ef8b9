#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "cusum_lp/cusum.hpp"
#include "cusum_lp/dgp.hpp"
#include "cusum_lp/error.hpp"
#include "cusum_lp/hypothesis_test.hpp"
#include "cusum_lp/parallel.hpp"
#include "cusum_lp/rng.hpp"
#include "cusum_lp/table.hpp"
#include "cusum_lp/variance.hpp"

namespace cusum_lp {

/// sigma supplied directly.
struct known_sigma {
  double sigma = 1.0;
};
/// sigma^2 = true_lrv(noise); fails for models without an analytic value.
struct oracle_sigma {};
/// sigma^2 estimated from each simulated series.
struct estimated_sigma {
  lrv_config lrv;
};

using sigma_mode = std::variant<known_sigma, oracle_sigma, estimated_sigma>;

struct study_config {
  noise_model noise = iid_normal{};
  change_spec change;
  std::size_t n = 200;
  test_spec statistic;
  sigma_mode sigma = known_sigma{};
  double alpha = 0.05;
  std::size_t replications = 1000;
  std::uint64_t seed = 1;
  limit_config limit;
};

struct study_report {
  double critical_value = 0.0;
  std::size_t rejections = 0;
  double rejection_rate = 0.0;
  double standard_error = 0.0;  ///< binomial, sqrt(r (1 - r) / R)
  std::vector<double> statistics;  ///< normalized statistic per replication, in replication order
};

inline void validate(const study_config& cfg) {
  validate(cfg.noise);
  validate(cfg.statistic, cfg.n);
  detail::require(cfg.replications >= 100, error_kind::invalid_parameter, "a study needs at least 100 replications");
  detail::require(cfg.alpha > 0.0 && cfg.alpha < 1.0, error_kind::invalid_parameter, "alpha must lie in (0, 1)");
  if (cfg.change.k_star) {
    detail::require(*cfg.change.k_star >= 1 && *cfg.change.k_star < cfg.n, error_kind::invalid_model,
                    "change point must satisfy 1 <= k* < N");
  }
  if (std::holds_alternative<oracle_sigma>(cfg.sigma)) {
    detail::require(true_lrv(cfg.noise).has_value(), error_kind::invalid_parameter,
                    "noise model has no analytic long-run variance");
  }
  if (auto* k = std::get_if<known_sigma>(&cfg.sigma)) {
    detail::require(k->sigma > 0.0 && std::isfinite(k->sigma), error_kind::invalid_parameter,
                    "sigma must be positive");
  }
}

/// Size/power study with a precomputed limit law.
///
/// Replication i draws its series from stream i of the root seed, so the
/// report does not depend on thread scheduling.
inline study_report run_study(const study_config& cfg, const limit_law& law) {
  validate(cfg);
  const statistic_evaluator evaluator(cfg.statistic, cfg.n);
  const std::optional<double> oracle = true_lrv(cfg.noise);

  study_report report;
  report.critical_value = critical_value(law, cfg.alpha);
  report.statistics.resize(cfg.replications);
  std::vector<char> rejected(cfg.replications, 0);

  parallel_for(cfg.replications, [&](std::size_t i) {
    auto engine = make_engine(cfg.seed, i);
    const time_series series = generate_series(cfg.noise, cfg.change, cfg.n, engine);
    double sigma = 1.0;
    if (auto* k = std::get_if<known_sigma>(&cfg.sigma)) {
      sigma = k->sigma;
    } else if (std::holds_alternative<oracle_sigma>(cfg.sigma)) {
      sigma = std::sqrt(*oracle);
    } else {
      sigma = std::sqrt(estimate_lrv(series, std::get<estimated_sigma>(cfg.sigma).lrv).sigma2);
    }
    const auto stat = evaluator.evaluate(compute_cusum(series), sigma);
    report.statistics[i] = stat.normalized;
    rejected[i] = stat.normalized > report.critical_value ? 1 : 0;
  });

  for (char r : rejected) report.rejections += static_cast<std::size_t>(r);
  const auto reps = static_cast<double>(cfg.replications);
  report.rejection_rate = static_cast<double>(report.rejections) / reps;
  report.standard_error = std::sqrt(report.rejection_rate * (1.0 - report.rejection_rate) / reps);
  return report;
}

inline study_report run_study(const study_config& cfg) {
  validate(cfg);
  return run_study(cfg, build_limit_law(cfg.statistic, cfg.limit));
}

inline json to_json(const noise_model& noise) {
  json j;
  j["kind"] = describe(noise);
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, iid_normal>) {
          j["s"] = m.s;
        } else if constexpr (std::is_same_v<T, iid_student_t>) {
          j["df"] = m.df;
          j["scale"] = m.scale;
        } else if constexpr (std::is_same_v<T, ar1>) {
          j["rho"] = m.rho;
          j["s"] = m.s;
        } else if constexpr (std::is_same_v<T, moving_average>) {
          j["coeffs"] = m.coeffs;
          j["s"] = m.s;
        } else {
          j["a"] = m.a;
          j["s"] = m.s;
        }
      },
      noise);
  return j;
}

inline json to_json(const test_spec& spec) {
  json j;
  j["family"] = to_string(spec.family);
  j["p"] = spec.p;
  if (spec.family == statistic_family::general_weighted) j["weight"] = to_json(spec.weight);
  if (spec.family == statistic_family::renyi) {
    j["kappa"] = spec.kappa;
    j["t1"] = spec.t1;
    j["t2"] = spec.t2;
  }
  return j;
}

inline json to_json(const sigma_mode& sigma) {
  json j;
  if (auto* k = std::get_if<known_sigma>(&sigma)) {
    j["mode"] = "fixed";
    j["value"] = k->sigma;
  } else if (std::holds_alternative<oracle_sigma>(sigma)) {
    j["mode"] = "true-lrv";
  } else {
    const auto& lrv = std::get<estimated_sigma>(sigma).lrv;
    j["mode"] = "estimate";
    j["kernel"] = to_string(lrv.kernel);
    if (lrv.bandwidth) j["bandwidth"] = *lrv.bandwidth;
    else j["bandwidth"] = "auto";
    j["demean"] = to_string(lrv.demean);
  }
  return j;
}

/// Report document: config echo, outcome, and optionally every statistic.
inline json to_json(const study_config& cfg, const study_report& report, bool include_statistics) {
  json config;
  config["noise"] = to_json(cfg.noise);
  json change;
  if (cfg.change.k_star) change["k_star"] = *cfg.change.k_star;
  else change["k_star"] = nullptr;
  change["delta"] = cfg.change.delta;
  change["mu0"] = cfg.change.mu0;
  config["change"] = change;
  config["n"] = cfg.n;
  config["statistic"] = to_json(cfg.statistic);
  config["sigma"] = to_json(cfg.sigma);
  config["alpha"] = cfg.alpha;
  config["replications"] = cfg.replications;
  config["seed"] = cfg.seed;
  json limit;
  limit["grid"] = cfg.limit.grid;
  limit["replications"] = cfg.limit.replications;
  limit["seed"] = cfg.limit.seed;
  if (cfg.statistic.family == statistic_family::renyi) {
    limit["grid_step"] = cfg.limit.grid_step;
    limit["tail_tol"] = cfg.limit.tail_tol;
  }
  config["limit"] = limit;

  json j;
  j["tool_version"] = tool_version;
  j["config"] = config;
  j["critical_value"] = report.critical_value;
  j["rejections"] = report.rejections;
  j["rejection_rate"] = report.rejection_rate;
  j["standard_error"] = report.standard_error;
  if (include_statistics) j["statistics"] = report.statistics;
  return j;
}

}  // namespace cusum_lp
