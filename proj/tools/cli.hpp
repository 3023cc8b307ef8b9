#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cusum_lp/cusum_lp.hpp"

namespace cusum_lp::cli {

enum exit_code : int {
  ok = 0,
  failure = 1,
  parse_error = 2,
  inadmissible = 3,
  insufficient = 4,
  unwritable = 5,
  accuracy_failure = 6,
};

inline int exit_code_for(error_kind kind) {
  switch (kind) {
    case error_kind::weight_inadmissible:
    case error_kind::divergent_limit: return inadmissible;
    case error_kind::insufficient_data: return insufficient;
    case error_kind::io: return unwritable;
    case error_kind::accuracy: return accuracy_failure;
    case error_kind::invalid_input:
    case error_kind::invalid_trim:
    case error_kind::invalid_parameter:
    case error_kind::invalid_model:
    case error_kind::precision: return parse_error;
  }
  return failure;
}

inline std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

/// Reads one value per line, or the named column of a CSV with a header row.
/// Blank lines and '#' comment lines are skipped; any other non-numeric cell
/// is an error.
inline std::vector<double> parse_series_csv(std::istream& in, const std::optional<std::string>& column) {
  std::vector<double> values;
  std::optional<std::size_t> column_index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto cells = split_csv(t);
    if (column && !column_index) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == *column) column_index = i;
      }
      detail::require(column_index.has_value(), error_kind::invalid_input,
                      "column '" + *column + "' not found in header on line " + std::to_string(line_no));
      continue;
    }
    std::string cell;
    if (column_index) {
      detail::require(*column_index < cells.size(), error_kind::invalid_input,
                      "line " + std::to_string(line_no) + " has too few columns");
      cell = cells[*column_index];
    } else {
      detail::require(cells.size() == 1, error_kind::invalid_input,
                      "line " + std::to_string(line_no) + ": expected one value per line (use --column)");
      cell = cells.front();
    }
    try {
      values.push_back(parse_double(cell));
    } catch (const error&) {
      detail::fail(error_kind::invalid_input,
                   "line " + std::to_string(line_no) + ": non-numeric value '" + cell + "'");
    }
  }
  return values;
}

struct options {
  // input / output
  std::string input;
  std::optional<std::string> column;
  std::string output;
  std::string emit_path;
  bool no_cache = false;
  bool include_stats = false;

  // statistic
  std::string family = "general";
  double p = 2.0;
  std::optional<double> weight_q;
  double kappa = 3.0;
  std::optional<double> t1;
  std::optional<double> t2;
  std::optional<double> gamma1;
  std::optional<double> gamma2;
  double alpha = 0.05;
  std::vector<double> alphas;

  // sigma
  std::string sigma = "auto";
  std::string kernel = "bartlett";
  std::string bandwidth = "auto";
  std::string demean = "full";

  // simulation
  std::uint64_t seed = 1;
  std::optional<std::size_t> reps;
  std::size_t grid = 4096;
  double grid_step = 1e-3;
  double tail_tol = 1e-3;
  std::optional<std::size_t> limit_reps;
  std::uint64_t limit_seed = 1;

  // data generation
  std::string noise = "iid-normal";
  double noise_scale = 1.0;
  double rho = 0.5;
  double df = 5.0;
  std::vector<double> ma;
  double nonlinearity = 0.5;
  std::size_t n = 200;
  double delta = 0.0;
  std::optional<std::size_t> k_star;
  double mu0 = 0.0;
};

inline statistic_family parse_family(const std::string& s) {
  if (s == "general") return statistic_family::general_weighted;
  if (s == "darling-erdos") return statistic_family::darling_erdos;
  if (s == "renyi") return statistic_family::renyi;
  detail::fail(error_kind::invalid_parameter, "unknown family '" + s + "'");
}

inline lrv_config parse_lrv(const options& o) {
  lrv_config cfg;
  if (o.kernel == "bartlett") cfg.kernel = lrv_kernel::bartlett;
  else if (o.kernel == "parzen") cfg.kernel = lrv_kernel::parzen;
  else if (o.kernel == "flat-top") cfg.kernel = lrv_kernel::flat_top;
  else detail::fail(error_kind::invalid_parameter, "unknown kernel '" + o.kernel + "'");
  if (o.bandwidth != "auto") cfg.bandwidth = parse_double(o.bandwidth);
  if (o.demean == "full") cfg.demean = demeaning::full_sample;
  else if (o.demean == "split") cfg.demean = demeaning::split_half;
  else detail::fail(error_kind::invalid_parameter, "unknown demeaning '" + o.demean + "'");
  return cfg;
}

/// "auto", "true" (study only) or "fixed:<value>".
inline sigma_mode parse_sigma(const options& o, bool allow_oracle) {
  if (o.sigma == "auto") return estimated_sigma{parse_lrv(o)};
  if (allow_oracle && o.sigma == "true") return oracle_sigma{};
  if (o.sigma.rfind("fixed:", 0) == 0) {
    const double v = parse_double(o.sigma.substr(6));
    detail::require(v > 0.0 && std::isfinite(v), error_kind::invalid_parameter, "fixed sigma must be positive");
    return known_sigma{v};
  }
  detail::fail(error_kind::invalid_parameter, "--sigma must be auto or fixed:<value>");
}

/// Statistic parameters for a series of length n; trimming defaults to
/// t1 = 1 - t2 = n^{-1/2}.
inline test_spec parse_test_spec(const options& o, std::size_t n) {
  test_spec spec;
  spec.family = parse_family(o.family);
  spec.p = o.p;
  detail::require(std::isfinite(o.p) && o.p >= 1.0, error_kind::invalid_parameter, "--p must be >= 1");
  if (spec.family == statistic_family::general_weighted) {
    spec.weight = o.weight_q ? weight_spec::power(*o.weight_q) : weight_spec::uniform();
  }
  if (spec.family == statistic_family::renyi) {
    spec.kappa = o.kappa;
    const double r = 1.0 / std::sqrt(static_cast<double>(n));
    spec.t1 = o.t1.value_or(r);
    spec.t2 = o.t2.value_or(1.0 - r);
  }
  return spec;
}

inline limit_config parse_limit(const options& o, std::size_t default_reps) {
  limit_config cfg;
  cfg.grid = o.grid;
  cfg.replications = o.limit_reps.value_or(o.reps.value_or(default_reps));
  cfg.seed = o.seed;
  cfg.grid_step = o.grid_step;
  cfg.tail_tol = o.tail_tol;
  detail::require(cfg.grid >= 4, error_kind::invalid_parameter, "--grid must be >= 4");
  return cfg;
}

inline noise_model parse_noise(const options& o) {
  noise_model m;
  if (o.noise == "iid-normal") m = iid_normal{o.noise_scale};
  else if (o.noise == "student-t") m = iid_student_t{o.df, o.noise_scale};
  else if (o.noise == "ar1") m = ar1{o.rho, o.noise_scale};
  else if (o.noise == "ma") m = moving_average{o.ma, o.noise_scale};
  else if (o.noise == "bernoulli-shift") m = bernoulli_shift_ar{o.nonlinearity, o.noise_scale};
  else detail::fail(error_kind::invalid_model, "unknown noise model '" + o.noise + "'");
  validate(m);
  return m;
}

inline change_spec parse_change(const options& o) { return change_spec{o.k_star, o.delta, o.mu0}; }

/// Simulated (or cached) limit sample for a statistic specification.
inline limit_law obtain_limit_law(const test_spec& spec, const limit_config& cfg, bool use_cache,
                                  std::ostream& err) {
  if (spec.family == statistic_family::darling_erdos) return standard_normal_law{};
  law_family family;
  if (spec.family == statistic_family::general_weighted) {
    family = general_law{spec.p, spec.weight};
  } else {
    const auto [g1, g2] = trim_gammas(spec.t1, spec.t2);
    family = fb_law{spec.p, spec.kappa, g1, g2, cfg.grid_step, cfg.tail_tol};
  }
  const auto identity = sample_identity(family, cfg.grid, cfg.replications, cfg.seed);
  const auto dir = use_cache ? default_cache_directory() : std::nullopt;
  auto result = cached_sample(identity, [&] { return std::get<limit_sample>(build_limit_law(spec, cfg)); }, dir);
  err << (result.hit ? "limit sample: cache hit " : "limit sample: simulated ")
      << (result.file ? result.file->string() : std::string("(not cached)")) << '\n';
  return std::move(result.sample);
}

inline json provenance(const limit_law& law) {
  if (const auto* s = std::get_if<limit_sample>(&law)) return sample_header(*s, sample_format);
  return normal_header(critical_value_format);
}

/// Writes text to `path`, or to `out` when path is empty.
inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  f.flush();
  detail::require(static_cast<bool>(f), error_kind::io, "cannot write '" + path + "'");
}

inline time_series read_input(const options& o) {
  detail::require(!o.input.empty(), error_kind::invalid_input, "--input is required");
  std::ifstream in(o.input);
  detail::require(static_cast<bool>(in), error_kind::invalid_input, "cannot open '" + o.input + "'");
  auto values = parse_series_csv(in, o.column);
  if (values.size() < 2) {
    detail::fail(error_kind::insufficient_data,
                 "input has " + std::to_string(values.size()) + " observations; at least 2 are required");
  }
  return time_series{std::move(values)};
}

inline int cmd_test(const options& o, std::ostream& out, std::ostream& err) {
  const time_series series = read_input(o);
  const std::size_t n = series.size();
  const test_spec spec = parse_test_spec(o, n);
  validate(spec, n);
  const sigma_mode sigma = parse_sigma(o, false);
  detail::require(o.alpha > 0.0 && o.alpha < 1.0, error_kind::invalid_parameter, "--alpha must lie in (0, 1)");
  const limit_config lim = parse_limit(o, 10000);

  double sigma2 = 1.0;
  bool degenerate = false;
  if (auto* k = std::get_if<known_sigma>(&sigma)) {
    sigma2 = k->sigma * k->sigma;
  } else {
    const auto est = estimate_lrv(series, std::get<estimated_sigma>(sigma).lrv);
    sigma2 = est.sigma2;
    degenerate = est.degenerate;
  }

  const cusum_path path = compute_cusum(series);
  const statistic_evaluator evaluator(spec, n);
  const auto stat = evaluator.evaluate(path, std::sqrt(sigma2));
  const limit_law law = obtain_limit_law(spec, lim, !o.no_cache, err);
  const auto d = decide(stat, law, o.alpha);

  json j;
  j["family"] = to_string(spec.family);
  j["p"] = spec.p;
  if (spec.family == statistic_family::general_weighted) j["weight"] = to_json(spec.weight);
  else if (spec.family == statistic_family::renyi) j["weight"] = to_json(weight_spec::trimmed_power(spec.kappa, spec.t1, spec.t2));
  else j["weight"] = to_json(weight_spec::power(1.0 + spec.p / 2.0));
  j["N"] = n;
  j["sigma2_hat"] = sigma2;
  j["sigma_degenerate"] = degenerate;
  j["statistic_raw"] = stat.raw;
  j["statistic_normalized"] = stat.normalized;
  j["alpha"] = o.alpha;
  j["critical_value"] = d.critical_value;
  j["p_value"] = d.p_value;
  j["reject"] = d.reject;
  json prov = provenance(law);
  if (spec.family == statistic_family::darling_erdos) {
    prov["a_p"] = evaluator.a_p();
    prov["b_p"] = evaluator.b_p();
  }
  j["table_provenance"] = prov;
  emit(o.output, j.dump(2) + "\n", out);

  if (!o.emit_path.empty()) {
    std::ostringstream csv;
    csv << "t,z_n\n";
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t k = 0; k <= n; ++k) {
      csv << format_double(static_cast<double>(k) / static_cast<double>(n + 1)) << ','
          << format_double(path[k] * scale) << '\n';
    }
    csv << "1,0\n";
    emit(o.emit_path, csv.str(), out);
  }
  return ok;
}

inline int cmd_critvals(const options& o, std::ostream& out, std::ostream& err) {
  const auto family = parse_family(o.family);
  const std::vector<double> alphas = o.alphas.empty() ? default_alphas() : o.alphas;
  const limit_config lim = parse_limit(o, 100000);

  critical_value_table table;
  if (family == statistic_family::darling_erdos) {
    table = make_table(standard_normal_law{}, alphas);
  } else {
    test_spec spec;
    spec.family = family;
    spec.p = o.p;
    detail::require(std::isfinite(o.p) && o.p >= 1.0, error_kind::invalid_parameter, "--p must be >= 1");
    limit_law law;
    if (family == statistic_family::general_weighted) {
      spec.weight = o.weight_q ? weight_spec::power(*o.weight_q) : weight_spec::uniform();
      require_weight_admissible(spec.p, spec.weight);
      law = obtain_limit_law(spec, lim, !o.no_cache, err);
    } else {
      detail::require(o.kappa > o.p / 2.0 + 1.0, error_kind::divergent_limit,
                      "renyi limit requires kappa > p/2 + 1");
      double g1 = o.gamma1.value_or(1.0);
      double g2 = o.gamma2.value_or(1.0);
      if (o.t1 && o.t2) {
        weight_spec::trimmed_power(o.kappa, *o.t1, *o.t2);  // validates the interval
        std::tie(g1, g2) = trim_gammas(*o.t1, *o.t2);
      }
      const law_family fam = fb_law{o.p, o.kappa, g1, g2, lim.grid_step, lim.tail_tol};
      const auto identity = sample_identity(fam, lim.grid, lim.replications, lim.seed);
      auto result = cached_sample(
          identity,
          [&] { return sample_fb(o.p, o.kappa, g1, g2, lim.grid_step, lim.replications, lim.tail_tol, lim.seed); },
          o.no_cache ? std::nullopt : default_cache_directory());
      law = std::move(result.sample);
    }
    table = make_table(std::get<limit_sample>(law), alphas);
  }
  std::ostringstream text;
  write_table(text, table);
  emit(o.output, text.str(), out);
  return ok;
}

inline json constants_json(double p, double a_p, double b_p, double err_est) {
  json j;
  j["p"] = p;
  j["a_p"] = a_p;
  j["b_p"] = b_p;
  j["quadrature_error_estimate"] = err_est;
  json mass = json::array();
  for (double u : {0.1, 1.0, 5.0}) {
    json m;
    m["u"] = u;
    m["mass"] = g_mass(u);
    m["expected"] = 1.0 + 2.0 / std::numbers::pi * std::asin(std::exp(-u));
    mass.push_back(m);
  }
  j["g_u_mass_check"] = mass;
  return j;
}

inline int cmd_constants(const options& o, std::ostream& out, std::ostream& err) {
  detail::require(std::isfinite(o.p) && o.p >= 1.0, error_kind::invalid_parameter, "--p must be >= 1");
  try {
    const auto c = compute_a(o.p);
    emit(o.output, constants_json(o.p, c.a_p, c.b_p, c.quadrature_error_estimate).dump(2) + "\n", out);
    return ok;
  } catch (const accuracy_error& e) {
    err << "error: " << e.what() << '\n';
    emit(o.output, constants_json(o.p, e.value(), compute_b(o.p), e.error_estimate()).dump(2) + "\n", out);
    return accuracy_failure;
  }
}

inline int cmd_simulate(const options& o, std::ostream& out, std::ostream&) {
  const noise_model noise = parse_noise(o);
  const change_spec change = parse_change(o);
  const auto series = generate_series(noise, change, o.n, o.seed);
  std::ostringstream csv;
  json meta;
  meta["noise"] = to_json(noise);
  meta["n"] = o.n;
  meta["seed"] = o.seed;
  csv << "# " << meta.dump() << '\n';
  for (double v : series.values()) csv << format_double(v) << '\n';
  emit(o.output, csv.str(), out);
  return ok;
}

inline int cmd_study(const options& o, std::ostream& out, std::ostream& err) {
  study_config cfg;
  cfg.noise = parse_noise(o);
  cfg.change = parse_change(o);
  cfg.n = o.n;
  cfg.statistic = parse_test_spec(o, o.n);
  cfg.sigma = parse_sigma(o, true);
  cfg.alpha = o.alpha;
  cfg.replications = o.reps.value_or(1000);
  cfg.seed = o.seed;
  cfg.limit = parse_limit(o, 10000);
  cfg.limit.replications = o.limit_reps.value_or(10000);
  cfg.limit.seed = o.limit_seed;
  validate(cfg);
  const limit_law law = obtain_limit_law(cfg.statistic, cfg.limit, !o.no_cache, err);
  const auto report = run_study(cfg, law);
  emit(o.output, to_json(cfg, report, o.include_stats).dump(2) + "\n", out);
  return ok;
}

inline void add_statistic_options(CLI::App& cmd, options& o) {
  cmd.add_option("--family", o.family, "general | darling-erdos | renyi")
      ->check(CLI::IsMember({"general", "darling-erdos", "renyi"}));
  cmd.add_option("--p", o.p, "exponent p >= 1");
  cmd.add_option("--weight-q", o.weight_q, "general family: weight (t(1-t))^q (default uniform)");
  cmd.add_option("--kappa", o.kappa, "renyi family: weight exponent");
  cmd.add_option("--t1", o.t1, "renyi family: left trimming point (default N^-1/2)");
  cmd.add_option("--t2", o.t2, "renyi family: right trimming point (default 1 - N^-1/2)");
  cmd.add_option("--seed", o.seed, "root seed");
  cmd.add_option("--grid", o.grid, "bridge grid cells for the general limit");
  cmd.add_option("--grid-step", o.grid_step, "relative step of the Wiener grid (renyi)");
  cmd.add_option("--tail-tol", o.tail_tol, "truncated tail mass of the renyi limit");
  cmd.add_flag("--no-cache", o.no_cache, "do not read or write the limit sample cache");
  cmd.add_option("--output", o.output, "output file (default stdout)");
}

inline void add_sigma_options(CLI::App& cmd, options& o) {
  cmd.add_option("--sigma", o.sigma, "auto | fixed:<value>");
  cmd.add_option("--kernel", o.kernel, "bartlett | parzen | flat-top");
  cmd.add_option("--bandwidth", o.bandwidth, "auto or a value in [1, N-1]");
  cmd.add_option("--demean", o.demean, "full | split");
}

inline void add_noise_options(CLI::App& cmd, options& o) {
  cmd.add_option("--noise", o.noise, "iid-normal | student-t | ar1 | ma | bernoulli-shift");
  cmd.add_option("--noise-scale", o.noise_scale, "innovation standard deviation (t: scale)");
  cmd.add_option("--rho", o.rho, "AR(1) coefficient");
  cmd.add_option("--df", o.df, "Student t degrees of freedom");
  cmd.add_option("--ma", o.ma, "MA coefficients")->delimiter(',');
  cmd.add_option("--nonlinearity", o.nonlinearity, "Bernoulli-shift coefficient a");
  cmd.add_option("--n", o.n, "series length");
  cmd.add_option("--delta", o.delta, "mean change mu_A - mu_0");
  cmd.add_option("--k-star", o.k_star, "last index before the change");
  cmd.add_option("--mu0", o.mu0, "mean before the change");
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted L^p CUSUM change-point tests", "cusum-lp"};
  app.require_subcommand(1);
  options o;

  auto* test = app.add_subcommand("test", "test a series for a change in the mean");
  test->add_option("--input", o.input, "CSV input")->required();
  test->add_option("--column", o.column, "column name when the CSV has a header");
  test->add_option("--alpha", o.alpha, "significance level");
  test->add_option("--reps", o.reps, "limit sample replications (default 10000)");
  test->add_option("--emit-path", o.emit_path, "write (t, Z_N(t)) to this CSV");
  add_statistic_options(*test, o);
  add_sigma_options(*test, o);

  auto* critvals = app.add_subcommand("critvals", "write a critical-value table");
  critvals->add_option("--alpha", o.alphas, "levels (default 0.10,0.05,0.025,0.01)")->delimiter(',');
  critvals->add_option("--reps", o.reps, "replications (default 100000)");
  critvals->add_option("--gamma1", o.gamma1, "renyi: gamma1 (default 1)");
  critvals->add_option("--gamma2", o.gamma2, "renyi: gamma2 (default 1)");
  add_statistic_options(*critvals, o);

  auto* constants = app.add_subcommand("constants", "print a(p) and b(p)");
  constants->add_option("--p", o.p, "exponent p >= 1");
  constants->add_option("--output", o.output, "output file (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "write a synthetic series as CSV");
  add_noise_options(*simulate, o);
  simulate->add_option("--seed", o.seed, "seed");
  simulate->add_option("--output", o.output, "output file (default stdout)");

  auto* study = app.add_subcommand("study", "size/power study");
  add_noise_options(*study, o);
  add_statistic_options(*study, o);
  add_sigma_options(*study, o);
  study->add_option("--alpha", o.alpha, "significance level");
  study->add_option("--reps", o.reps, "study replications (default 1000)");
  study->add_option("--limit-reps", o.limit_reps, "limit sample replications (default 10000)");
  study->add_option("--limit-seed", o.limit_seed, "limit sample seed");
  study->add_flag("--include-stats", o.include_stats, "include per-replication statistics");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return parse_error;
  }

  try {
    if (*test) return cmd_test(o, out, err);
    if (*critvals) return cmd_critvals(o, out, err);
    if (*constants) return cmd_constants(o, out, err);
    if (*simulate) return cmd_simulate(o, out, err);
    if (*study) return cmd_study(o, out, err);
  } catch (const error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return failure;
  }
  return failure;
}

}  // namespace cusum_lp::cli
