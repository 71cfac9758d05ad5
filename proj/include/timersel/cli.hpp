#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "timersel/timersel.hpp"

// Experiment harness. Subcommands: scheme1, scheme2, table1, simulate,
// baseline. Every CSV starts with a '#' metadata line carrying the full
// invocation, the seed (or '-' for closed-form commands) and the library
// version; re-running the recorded invocation reproduces the file
// byte-for-byte. Exit codes: 0 ok, 2 validation error, 3 infeasible,
// 4 internal numerical failure.

namespace timersel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitNumerical = 4;

namespace detail {

inline std::string invocation_text(int argc, const char* const* argv) {
  std::string text = "timersel";
  for (int i = 1; i < argc; ++i) {
    text += ' ';
    text += argv[i];
  }
  return text;
}

inline void write_metadata(std::ostream& os, const std::string& invocation,
                           const std::string& seed_text) {
  os << "# invocation: " << invocation << " | seed: " << seed_text
     << " | version: " << kVersion << "\n";
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::invalid_argument("--out: cannot open '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

// "--k" token: a positive integer or "inf" (nullopt)
inline std::optional<int> parse_k_token(const std::string& token) {
  if (token == "inf") return std::nullopt;
  std::size_t pos = 0;
  int k = 0;
  try {
    k = std::stoi(token, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("--k: expected a positive integer or 'inf', got '" + token + "'");
  }
  if (pos != token.size() || k < 1)
    throw std::invalid_argument("--k: expected a positive integer or 'inf', got '" + token + "'");
  return k;
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) items.push_back(item);
  return items;
}

inline std::vector<double> parse_real_list(const std::string& text, const char* flag) {
  std::vector<double> values;
  for (const auto& item : split_list(text)) {
    try {
      std::size_t pos = 0;
      values.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(flag) + ": cannot parse '" + item + "'");
    }
  }
  if (values.empty()) throw std::invalid_argument(std::string(flag) + ": empty list");
  return values;
}

// "--n" accepts a single slot count or an inclusive range "lo:hi"
inline std::pair<int, int> parse_n_range(const std::string& text) {
  const auto colon = text.find(':');
  auto parse_one = [&](const std::string& part) {
    try {
      std::size_t pos = 0;
      const int n = std::stoi(part, &pos);
      if (pos != part.size() || n < 0) throw std::invalid_argument("");
      return n;
    } catch (const std::exception&) {
      throw std::invalid_argument("--n: expected a non-negative integer, got '" + part + "'");
    }
  };
  if (colon == std::string::npos) {
    const int n = parse_one(text);
    return {n, n};
  }
  const int lo = parse_one(text.substr(0, colon));
  const int hi = parse_one(text.substr(colon + 1));
  if (lo > hi) throw std::invalid_argument("--n: range lower bound exceeds upper bound");
  return {lo, hi};
}

inline MetricDistribution parse_dist(const std::string& spec) {
  if (spec == "uniform") return MetricDistribution::uniform01();
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "exp" || kind == "rayleigh") {
    if (arg.empty())
      throw std::invalid_argument("--dist: '" + kind + "' needs a parameter, e.g. " + kind + ":1.0");
    double value = 0.0;
    try {
      std::size_t pos = 0;
      value = std::stod(arg, &pos);
      if (pos != arg.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("--dist: cannot parse parameter '" + arg + "'");
    }
    return kind == "exp" ? MetricDistribution::exponential(value)
                         : MetricDistribution::rayleigh(value);
  }
  if (kind == "table") {
    if (arg.empty()) throw std::invalid_argument("--dist: 'table' needs a file path");
    std::ifstream in(arg);
    if (!in) throw std::invalid_argument("--dist: cannot open table '" + arg + "'");
    return MetricDistribution::tabulated(read_cdf_table_csv(in));
  }
  throw std::invalid_argument("--dist: unknown distribution '" + spec +
                              "' (use uniform|exp:MEAN|rayleigh:SCALE|table:PATH)");
}

inline TimeConvention parse_convention(const std::string& text) {
  if (text == "nslots") return TimeConvention::CapAtNSlots;
  if (text == "tmax") return TimeConvention::CapAtTmax;
  throw std::invalid_argument("--time-convention: expected 'nslots' or 'tmax'");
}

struct Geometry {
  int n_slots = 0;
  double delta = 1.0;
  double t_max = 0.0;
};

// exactly one of --n / --tmax; --n uses delta=1 normalized units unless
// --delta overrides; --tmax requires --delta
inline Geometry resolve_geometry(const std::optional<std::string>& n_spec,
                                 const std::optional<double>& delta,
                                 const std::optional<double>& t_max) {
  if (n_spec.has_value() == t_max.has_value())
    throw std::invalid_argument("give exactly one of --n or --tmax");
  Geometry g;
  if (delta) {
    if (!(*delta > 0.0)) throw std::invalid_argument("--delta: must be > 0");
    g.delta = *delta;
  }
  if (n_spec) {
    const auto [lo, hi] = parse_n_range(*n_spec);
    if (lo != hi) throw std::invalid_argument("--n: this command takes a single slot count");
    g.n_slots = lo;
    g.t_max = lo * g.delta;
  } else {
    if (!delta) throw std::invalid_argument("--tmax requires --delta");
    if (!(*t_max >= 0.0)) throw std::invalid_argument("--tmax: must be >= 0");
    g.t_max = *t_max;
    const long long n = derive_params(1, g.delta, g.t_max).n_slots;
    if (n > 200000)
      throw std::invalid_argument("--tmax/--delta: slot count too large for a lookup table");
    g.n_slots = static_cast<int>(n);
  }
  return g;
}

inline const char* convention_name(TimeConvention c) {
  return c == TimeConvention::CapAtNSlots ? "nslots" : "tmax";
}

}  // namespace detail

inline int run(int argc, const char* const* argv) {
  CLI::App app{"optimal timer-based best-node selection toolkit"};
  app.require_subcommand(1);

  // ---- scheme1 ----
  auto* scheme1_cmd =
      app.add_subcommand("scheme1", "success-probability-maximizing mapping tables");
  std::string s1_k = "inf";
  std::string s1_n;
  std::optional<double> s1_delta, s1_tmax;
  std::string s1_out;
  scheme1_cmd->add_option("--k", s1_k, "node count(s): comma list of ints and/or 'inf'");
  scheme1_cmd->add_option("--n", s1_n, "slot count N, or range 'lo:hi'");
  scheme1_cmd->add_option("--delta", s1_delta, "vulnerability window, seconds");
  scheme1_cmd->add_option("--tmax", s1_tmax, "maximum selection duration, seconds");
  scheme1_cmd->add_option("--out", s1_out, "output CSV path (default stdout)");

  // ---- scheme2 ----
  auto* scheme2_cmd = app.add_subcommand(
      "scheme2", "expected-time-minimizing mappings under a success floor");
  std::string s2_k = "inf";
  std::string s2_n;
  std::optional<double> s2_delta, s2_tmax;
  std::string s2_eta;
  std::string s2_out, s2_solution_out;
  scheme2_cmd->add_option("--k", s2_k, "node count: int or 'inf'");
  scheme2_cmd->add_option("--n", s2_n, "slot count N");
  scheme2_cmd->add_option("--delta", s2_delta, "vulnerability window, seconds");
  scheme2_cmd->add_option("--tmax", s2_tmax, "maximum selection duration, seconds");
  scheme2_cmd->add_option("--eta", s2_eta, "success floor(s), comma list")->required();
  scheme2_cmd->add_option("--out", s2_out, "output CSV path (default stdout)");
  scheme2_cmd->add_option("--solution-out", s2_solution_out,
                          "also write the interval-length table (single --eta only; "
                          "loadable by simulate --mapping)");

  // ---- table1 ----
  auto* table1_cmd = app.add_subcommand(
      "table1", "timer-vs-splitting selection-time comparison table");
  double t1_delta = 13e-6;
  std::string t1_out;
  table1_cmd->add_option("--delta", t1_delta, "vulnerability window, seconds (default 13us)");
  table1_cmd->add_option("--out", t1_out, "output CSV path (default stdout)");

  // ---- simulate ----
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo estimate for a mapping");
  std::string sim_k;
  std::string sim_n;
  std::optional<double> sim_delta, sim_tmax;
  std::string sim_mapping, sim_alphas, sim_dist = "uniform", sim_out, sim_trace;
  double sim_eta = -1.0, sim_inverse_c = 0.0;
  bool sim_optimal = false;
  std::uint64_t sim_trials = 100000, sim_seed = 1;
  unsigned sim_threads = 0;
  std::string sim_convention = "nslots";
  sim_cmd->add_option("--k", sim_k, "node count (finite)");
  sim_cmd->add_option("--n", sim_n, "slot count N");
  sim_cmd->add_option("--delta", sim_delta, "vulnerability window, seconds");
  sim_cmd->add_option("--tmax", sim_tmax, "maximum selection duration, seconds");
  sim_cmd->add_option("--mapping", sim_mapping, "load interval lengths from a scheme CSV");
  sim_cmd->add_option("--alphas", sim_alphas, "inline interval lengths, comma list");
  sim_cmd->add_flag("--optimal", sim_optimal, "use the scheme-1 optimal mapping");
  sim_cmd->add_option("--target-eta", sim_eta,
                      "use the scheme-2 optimal mapping for this success floor");
  sim_cmd->add_option("--inverse-c", sim_inverse_c,
                      "use the inverse-metric mapping with this c");
  sim_cmd->add_option("--dist", sim_dist,
                      "metric distribution for --inverse-c "
                      "(uniform|exp:MEAN|rayleigh:SCALE|table:PATH)");
  sim_cmd->add_option("--trials", sim_trials, "number of Monte Carlo trials");
  sim_cmd->add_option("--seed", sim_seed, "RNG seed");
  sim_cmd->add_option("--time-convention", sim_convention, "stop-time cap: nslots|tmax");
  sim_cmd->add_option("--threads", sim_threads, "worker threads (0 = auto)");
  sim_cmd->add_option("--trace", sim_trace, "also write a per-trial trace CSV here");
  sim_cmd->add_option("--out", sim_out, "output CSV path (default stdout)");

  // ---- baseline ----
  auto* base_cmd =
      app.add_subcommand("baseline", "optimize the inverse-metric mapping and compare");
  std::string base_k;
  std::string base_n;
  std::optional<double> base_delta, base_tmax;
  std::string base_dist, base_objective = "success", base_out;
  double base_eta = -1.0;
  int base_budget = 60;
  std::uint64_t base_trials = 100000, base_final_trials = 1000000, base_seed = 1;
  std::string base_convention = "nslots";
  base_cmd->add_option("--k", base_k, "node count (finite)")->required();
  base_cmd->add_option("--n", base_n, "slot count N");
  base_cmd->add_option("--delta", base_delta, "vulnerability window, seconds");
  base_cmd->add_option("--tmax", base_tmax, "maximum selection duration, seconds");
  base_cmd->add_option("--dist", base_dist,
                       "metric distribution (uniform|exp:MEAN|rayleigh:SCALE|table:PATH)")
      ->required();
  base_cmd->add_option("--objective", base_objective,
                       "'success' (maximize) or 'time' (minimize at --eta)");
  base_cmd->add_option("--eta", base_eta, "success floor for --objective time");
  base_cmd->add_option("--budget", base_budget, "search evaluations");
  base_cmd->add_option("--trials", base_trials, "trials per search evaluation");
  base_cmd->add_option("--final-trials", base_final_trials, "trials for the final estimate");
  base_cmd->add_option("--seed", base_seed, "RNG seed (common random numbers)");
  base_cmd->add_option("--time-convention", base_convention, "stop-time cap: nslots|tmax");
  base_cmd->add_option("--out", base_out, "output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  const std::string invocation = detail::invocation_text(argc, argv);

  try {
    if (app.got_subcommand(scheme1_cmd)) {
      std::optional<std::string> n_spec =
          s1_n.empty() ? std::nullopt : std::optional<std::string>(s1_n);
      int n_lo = 0, n_hi = 0;
      double delta = s1_delta.value_or(1.0);
      if (n_spec) {
        if (s1_tmax) throw std::invalid_argument("give exactly one of --n or --tmax");
        std::tie(n_lo, n_hi) = detail::parse_n_range(*n_spec);
        if (s1_delta && !(*s1_delta > 0.0))
          throw std::invalid_argument("--delta: must be > 0");
      } else {
        const detail::Geometry g = detail::resolve_geometry(n_spec, s1_delta, s1_tmax);
        n_lo = n_hi = g.n_slots;
        delta = g.delta;
      }
      std::vector<std::optional<int>> ks;
      for (const auto& token : detail::split_list(s1_k)) ks.push_back(detail::parse_k_token(token));
      if (ks.empty()) throw std::invalid_argument("--k: empty list");

      detail::Output out(s1_out);
      detail::write_metadata(out.stream(), invocation, "-");
      out.stream() << "k,N,j,alpha_or_beta,p_star\n";
      for (const auto& k : ks) {
        for (int n = n_lo; n <= n_hi; ++n) {
          if (k) {
            const Scheme1Solution s = optimize_finite(*k, n, delta);
            const auto& alphas = s.mapping.alphas();
            for (std::size_t j = 0; j < alphas.size(); ++j)
              out.stream() << *k << "," << n << "," << j << "," << format_real(alphas[j])
                           << "," << format_real(s.p_star) << "\n";
          } else {
            const Scheme1AsymptoticSolution s = optimize_asymptotic(n);
            for (std::size_t j = 0; j < s.mapping.betas.size(); ++j)
              out.stream() << "inf," << n << "," << j << ","
                           << format_real(s.mapping.betas[j]) << ","
                           << format_real(s.p_star) << "\n";
          }
        }
      }
      return kExitOk;
    }

    if (app.got_subcommand(scheme2_cmd)) {
      const std::optional<int> k = detail::parse_k_token(s2_k);
      const detail::Geometry g = detail::resolve_geometry(
          s2_n.empty() ? std::nullopt : std::optional<std::string>(s2_n), s2_delta, s2_tmax);
      const std::vector<double> etas = detail::parse_real_list(s2_eta, "--eta");
      if (!s2_solution_out.empty() && etas.size() != 1)
        throw std::invalid_argument("--solution-out: needs exactly one --eta value");

      detail::Output out(s2_out);
      detail::write_metadata(out.stream(), invocation, "-");
      out.stream() << "k,N,eta,lambda_star,p,gamma,gamma_over_delta,no_transmit_mass,status\n";
      std::size_t infeasible_count = 0;
      for (double eta : etas) {
        const std::string k_text = k ? std::to_string(*k) : "inf";
        try {
          if (k) {
            const Scheme2Solution s = solve_constrained_finite(*k, g.n_slots, g.delta, eta);
            out.stream() << k_text << "," << g.n_slots << "," << format_real(eta) << ","
                         << format_real(s.lambda) << "," << format_real(s.p_success) << ","
                         << format_real(s.expected_time) << ","
                         << format_real(s.expected_time / g.delta) << ","
                         << format_real(s.mapping.no_transmit_mass()) << ",ok\n";
            if (!s2_solution_out.empty()) {
              detail::Output solution(s2_solution_out);
              detail::write_metadata(solution.stream(), invocation, "-");
              write_scheme2_csv(solution.stream(), s, eta);
            }
          } else {
            const Scheme2AsymptoticSolution s =
                solve_constrained_asymptotic(g.n_slots, g.delta, eta);
            // k=inf: report exp(-sum beta), the limit probability that no
            // node transmits at all (the per-node mass vanishes as 1/k)
            CompensatedSum beta_total;
            for (double b : s.mapping.betas) beta_total.add(b);
            out.stream() << k_text << "," << g.n_slots << "," << format_real(eta) << ","
                         << format_real(s.lambda) << "," << format_real(s.p_success) << ","
                         << format_real(s.expected_time) << ","
                         << format_real(s.expected_time / g.delta) << ","
                         << format_real(std::exp(-beta_total.value())) << ",ok\n";
            if (!s2_solution_out.empty()) {
              detail::Output solution(s2_solution_out);
              detail::write_metadata(solution.stream(), invocation, "-");
              write_scheme2_csv(solution.stream(), s, eta);
            }
          }
        } catch (const InfeasibleError&) {
          ++infeasible_count;
          out.stream() << k_text << "," << g.n_slots << "," << format_real(eta)
                       << ",,,,,,infeasible\n";
        }
      }
      return infeasible_count == etas.size() ? kExitInfeasible : kExitOk;
    }

    if (app.got_subcommand(table1_cmd)) {
      if (!(t1_delta > 0.0)) throw std::invalid_argument("--delta: must be > 0");
      detail::Output out(t1_out);
      detail::write_metadata(out.stream(), invocation, "-");
      out.stream() << "tmax_us,scheme,p_success,selection_time_us,selection_time_over_delta,"
                      "status\n";
      const double etas[] = {0.75, 0.85, 0.90, 0.98};
      const double tmaxes_us[] = {288.0, 1296.0};
      for (double tmax_us : tmaxes_us) {
        const double t_max = tmax_us * 1e-6;
        const int n = derive_params(1, t1_delta, t_max).n_slots;
        for (double eta : etas) {
          try {
            const Scheme2AsymptoticSolution s =
                solve_constrained_asymptotic(n, t1_delta, eta);
            out.stream() << format_real(tmax_us) << ",timer," << format_real(eta) << ","
                         << format_real(s.expected_time * 1e6) << ","
                         << format_real(s.expected_time / t1_delta) << ",ok\n";
          } catch (const InfeasibleError&) {
            out.stream() << format_real(tmax_us) << ",timer," << format_real(eta)
                         << ",,,infeasible\n";
          }
        }
      }
      for (const SplittingFixture& fx : kSplittingPublished) {
        out.stream() << format_real(fx.t_max_us) << ",splitting,"
                     << format_real(fx.p_success) << "," << format_real(fx.mean_time_us)
                     << "," << format_real(fx.mean_time_us * 1e-6 / t1_delta)
                     << ",published\n";
      }
      return kExitOk;
    }

    if (app.got_subcommand(sim_cmd)) {
      const TimeConvention convention = detail::parse_convention(sim_convention);
      if (sim_trials < 1) throw std::invalid_argument("--trials: need at least 1");

      const int sources = (sim_mapping.empty() ? 0 : 1) + (sim_alphas.empty() ? 0 : 1) +
                          (sim_optimal ? 1 : 0) + (sim_eta >= 0.0 ? 1 : 0) +
                          (sim_inverse_c > 0.0 ? 1 : 0);
      if (sources != 1)
        throw std::invalid_argument(
            "give exactly one mapping source: --mapping, --alphas, --optimal, "
            "--target-eta or --inverse-c");

      std::optional<int> k_flag;
      if (!sim_k.empty()) {
        k_flag = detail::parse_k_token(sim_k);
        if (!k_flag) throw std::invalid_argument("--k: simulate needs a finite node count");
      }

      // interval lengths from file or flags; geometry may be inferred from them
      std::optional<std::vector<double>> alphas;
      std::optional<int> k_meta;
      if (!sim_mapping.empty()) {
        std::ifstream in(sim_mapping);
        if (!in) throw std::invalid_argument("--mapping: cannot open '" + sim_mapping + "'");
        const MappingCsv m = read_mapping_csv(in);
        if (m.is_beta)
          throw std::invalid_argument(
              "--mapping: file holds a k=inf normalized table; simulate needs finite k");
        alphas = m.values;
        k_meta = m.k;
      } else if (!sim_alphas.empty()) {
        alphas = detail::parse_real_list(sim_alphas, "--alphas");
      }

      int k = 0;
      if (k_flag) {
        k = *k_flag;
        if (k_meta && *k_meta != k)
          throw std::invalid_argument("--k disagrees with the mapping file's k metadata");
      } else if (k_meta) {
        k = *k_meta;
      } else {
        throw std::invalid_argument("--k is required (no mapping metadata supplies it)");
      }

      detail::Geometry g;
      if (sim_n.empty() && !sim_tmax && alphas) {
        g.n_slots = static_cast<int>(alphas->size()) - 1;
        g.delta = sim_delta.value_or(1.0);
        if (!(g.delta > 0.0)) throw std::invalid_argument("--delta: must be > 0");
        g.t_max = g.n_slots * g.delta;
      } else {
        g = detail::resolve_geometry(
            sim_n.empty() ? std::nullopt : std::optional<std::string>(sim_n), sim_delta,
            sim_tmax);
      }
      SelectionParams params = derive_params(k, g.delta, g.t_max);
      params.n_slots = g.n_slots;

      if (alphas && static_cast<int>(alphas->size()) != params.n_slots + 1)
        throw std::invalid_argument("mapping length disagrees with N+1 slots");

      SimStats stats;
      auto run_one = [&](const auto& mapping) {
        stats = estimate(mapping, params, sim_trials, sim_seed, convention, sim_threads);
        if (!sim_trace.empty()) {
          std::ofstream trace(sim_trace, std::ios::binary);
          if (!trace) throw std::invalid_argument("--trace: cannot open '" + sim_trace + "'");
          detail::write_metadata(trace, invocation, std::to_string(sim_seed));
          trace << "trial,success,stop_time,t1,t2\n";
          run_trials_trace(mapping, params, sim_trials, sim_seed, convention,
                           [&](std::uint64_t t, const SelectionOutcome& o) {
                             trace << t << "," << (o.success ? 1 : 0) << ","
                                   << format_real(o.stop_time) << ","
                                   << (o.t1 ? format_real(*o.t1) : "inf") << ","
                                   << (o.t2 ? format_real(*o.t2) : "inf") << "\n";
                           });
        }
      };

      if (sim_inverse_c > 0.0) {
        run_one(inverse_mapping(sim_inverse_c, detail::parse_dist(sim_dist), params.t_max));
      } else {
        std::vector<double> lengths;
        if (alphas) {
          lengths = *alphas;
        } else if (sim_optimal) {
          lengths = optimize_finite(k, params.n_slots, params.delta).mapping.alphas();
        } else {
          lengths =
              solve_constrained_finite(k, params.n_slots, params.delta, sim_eta)
                  .mapping.alphas();
        }
        run_one(DiscreteMapping(params, std::move(lengths)));
      }

      detail::Output out(sim_out);
      detail::write_metadata(out.stream(), invocation, std::to_string(sim_seed));
      out.stream() << "trials,success_prob,success_se,mean_time,time_se,seed,"
                      "time_convention\n";
      out.stream() << stats.trials << "," << format_real(stats.success_prob) << ","
                   << format_real(stats.success_se) << "," << format_real(stats.mean_time)
                   << "," << format_real(stats.time_se) << "," << stats.seed << ","
                   << detail::convention_name(stats.convention) << "\n";
      return kExitOk;
    }

    if (app.got_subcommand(base_cmd)) {
      const std::optional<int> k_opt = detail::parse_k_token(base_k);
      if (!k_opt) throw std::invalid_argument("--k: baseline needs a finite node count");
      const int k = *k_opt;
      const detail::Geometry g = detail::resolve_geometry(
          base_n.empty() ? std::nullopt : std::optional<std::string>(base_n), base_delta,
          base_tmax);
      SelectionParams params = derive_params(k, g.delta, g.t_max);
      params.n_slots = g.n_slots;

      BaselineConfig config;
      config.distribution = detail::parse_dist(base_dist);
      config.search_budget = base_budget;
      config.trials_per_eval = base_trials;
      config.final_trials = base_final_trials;
      config.seed = base_seed;
      config.convention = detail::parse_convention(base_convention);
      if (base_objective == "success") {
        config.goal = BaselineGoal::MaximizeSuccess;
      } else if (base_objective == "time") {
        config.goal = BaselineGoal::MinimizeTimeAtConstraint;
        if (!(base_eta >= 0.0 && base_eta <= 1.0))
          throw std::invalid_argument("--objective time needs --eta in [0,1]");
        config.eta = base_eta;
      } else {
        throw std::invalid_argument("--objective: expected 'success' or 'time'");
      }

      double optimal_value = 0.0, ratio = 0.0;
      BaselineResult result;
      try {
        result = optimize_c(config, params);
        if (config.goal == BaselineGoal::MaximizeSuccess) {
          optimal_value = optimize_finite(k, params.n_slots, params.delta).p_star;
          ratio = (1.0 - result.value) / (1.0 - optimal_value);  // failure-probability ratio
        } else {
          optimal_value =
              solve_constrained_finite(k, params.n_slots, params.delta, config.eta)
                  .expected_time;
          ratio = result.value / optimal_value;  // slowdown of the baseline
        }
      } catch (const ConstraintUnmeetableError& e) {
        std::cerr << "baseline: " << e.what() << "\n";
        return kExitInfeasible;
      } catch (const InfeasibleError& e) {
        std::cerr << "baseline: " << e.what() << "\n";
        return kExitInfeasible;
      }

      detail::Output out(base_out);
      detail::write_metadata(out.stream(), invocation, std::to_string(base_seed));
      out.stream() << "distribution,k,N,c_star,objective,value,stderr,seed,optimal_value,"
                      "ratio\n";
      out.stream() << base_dist << "," << k << "," << params.n_slots << ","
                   << format_real(result.c_star) << "," << base_objective << ","
                   << format_real(result.value) << "," << format_real(result.value_se)
                   << "," << base_seed << "," << format_real(optimal_value) << ","
                   << format_real(ratio) << "\n";
      return kExitOk;
    }
  } catch (const CsvError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitNumerical;
  }

  return kExitValidation;  // unreachable with require_subcommand(1)
}

}  // namespace timersel::cli
