#include "latcorr/runner.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "latcorr/analytic.hpp"
#include "latcorr/averaging.hpp"
#include "latcorr/correlations.hpp"
#include "latcorr/divergence.hpp"
#include "latcorr/numtheory.hpp"
#include "latcorr/verify.hpp"

namespace latcorr {

namespace {

double get_d(const ExperimentConfig& c, const std::string& key, double fallback,
             bool required = false) {
  auto it = c.params.find(key);
  if (it == c.params.end()) {
    if (required) throw config_error("missing parameter: " + key);
    return fallback;
  }
  try {
    return std::stod(it->second);
  } catch (...) {
    throw config_error("bad numeric value for " + key + ": " + it->second);
  }
}

long long get_i(const ExperimentConfig& c, const std::string& key, long long fallback,
                bool required = false) {
  auto it = c.params.find(key);
  if (it == c.params.end()) {
    if (required) throw config_error("missing parameter: " + key);
    return fallback;
  }
  try {
    return std::stoll(it->second);
  } catch (...) {
    throw config_error("bad integer value for " + key + ": " + it->second);
  }
}

std::string get_s(const ExperimentConfig& c, const std::string& key, const std::string& fallback) {
  auto it = c.params.find(key);
  return it == c.params.end() ? fallback : it->second;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

std::vector<long long> parse_ilist(const std::string& text) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoll(item));
  }
  return out;
}

Disc parse_disc(const ExperimentConfig& c) {
  auto v = parse_list(get_s(c, "disc", "0.5,0.5,0.25"));
  if (v.size() != 3) throw config_error("disc must be x0,y0,r0");
  return Disc{v[0], v[1], v[2]};
}

std::vector<std::string> tail_cells(std::initializer_list<std::string> cells) { return cells; }

}  // namespace

ResultTable run_experiment(const ExperimentConfig& config) {
  if (config.threads > 0) set_max_threads(config.threads);
  ResultTable t;
  t.experiment_id = config.command;
  const std::string& cmd = config.command;

  if (cmd == "pair-correlation") {
    long long Q = get_i(config, "Q", 0, true);
    double x = get_d(config, "x", 0, true), y = get_d(config, "y", 0, true);
    double lambda = get_d(config, "lambda", 1.0);
    CorrelationSpec spec{2, {lambda}, Q, Observer{x, y}};
    CorrelationResult r = get_s(config, "oracle", "") == "1"
                              ? pair_correlation_oracle(spec, config.budget)
                              : pair_correlation_fast(spec);
    t.header = {"id", "Q", "x", "y", "lambda", "N", "tuple_count", "value",
                "scale", "poisson", "engine", "truncated", "claim"};
    t.rows.push_back(tail_cells(
        {cmd, format_int(Q), format_double(x), format_double(y), format_double(lambda),
         format_int(static_cast<long long>(r.N)),
         format_int(static_cast<long long>(r.tuple_count)), format_double(r.value),
         format_double(r.scale), format_double(poisson_baseline(2, {lambda})),
         r.engine == CountingEngine::oracle ? "oracle" : "fast", r.truncated ? "1" : "0",
         "pair_correlation_definition"}));
    return t;
  }

  if (cmd == "nu-correlation") {
    long long Q = get_i(config, "Q", 0, true);
    double x = get_d(config, "x", 0, true), y = get_d(config, "y", 0, true);
    long long nu = get_i(config, "nu", 2);
    auto lambdas = parse_list(get_s(config, "lambdas", "1"));
    CorrelationSpec spec{static_cast<int>(nu), lambdas, Q, Observer{x, y}};
    NuOptions opts;
    opts.work_cap = config.budget;
    CorrelationResult r = nu_correlation(spec, opts);
    std::string lam_text = get_s(config, "lambdas", "1");
    t.header = {"id", "Q", "x", "y", "nu", "lambdas", "N", "tuple_count",
                "value", "poisson", "truncated", "claim"};
    t.rows.push_back(tail_cells(
        {cmd, format_int(Q), format_double(x), format_double(y), format_int(nu), lam_text,
         format_int(static_cast<long long>(r.N)),
         format_int(static_cast<long long>(r.tuple_count)), format_double(r.value),
         format_double(poisson_baseline(static_cast<int>(nu), lambdas)),
         r.truncated ? "1" : "0", "nu_level_correlation_definition"}));
    return t;
  }

  if (cmd == "avg-pair-correlation") {
    Disc disc = parse_disc(config);
    double lambda = get_d(config, "lambda", 1.0);
    long long samples = get_i(config, "samples", 128);
    std::string mode = get_s(config, "mode", "mc");
    t.header = {"id", "Q", "lambda", "x0", "y0", "r0", "samples", "seed",
                "mean", "stderr", "theory", "claim"};
    for (long long Q : parse_ilist(get_s(config, "Q", "100"))) {
      AverageReport rep =
          mode == "grid"
              ? grid_average_pair_correlation(disc, Q, lambda,
                                              get_d(config, "grid-step", disc.r0 / 8.0))
              : average_pair_correlation(disc, Q, lambda, samples, config.seed);
      t.rows.push_back(tail_cells(
          {cmd, format_int(Q), format_double(lambda), format_double(disc.x0),
           format_double(disc.y0), format_double(disc.r0), format_int(rep.sample_count),
           format_int(static_cast<long long>(rep.seed)), format_double(rep.mean),
           format_double(rep.standard_error), format_double(rep.theory),
           "avg_pair_correlation_limit_2pi_lambda_over_3"}));
    }
    return t;
  }

  if (cmd == "gq") {
    Disc disc = parse_disc(config);
    double mu = get_d(config, "mu", kPi / 2.0);
    t.header = {"id", "Q", "mu", "x0", "y0", "r0", "value", "limit", "claim"};
    for (long long Q : parse_ilist(get_s(config, "Q", "40"))) {
      double v = g_sum_GQ(Q, mu, disc, static_cast<long long>(config.budget));
      double limit = 16.0 * kPi * disc.r0 * disc.r0 * mu / 3.0;
      t.rows.push_back(tail_cells({cmd, format_int(Q), format_double(mu),
                                   format_double(disc.x0), format_double(disc.y0),
                                   format_double(disc.r0), format_double(v),
                                   format_double(limit), "gq_limit_16pi_r0sq_mu_over_3"}));
    }
    return t;
  }

  if (cmd == "sq") {
    Disc disc = parse_disc(config);
    t.header = {"id", "Q", "x0", "y0", "r0", "value", "limit", "claim"};
    for (long long Q : parse_ilist(get_s(config, "Q", "50"))) {
      double v = s_sum_SQ(Q, disc, static_cast<long long>(config.budget));
      double limit = kPi * disc.r0 * disc.r0 / 6.0;
      t.rows.push_back(tail_cells({cmd, format_int(Q), format_double(disc.x0),
                                   format_double(disc.y0), format_double(disc.r0),
                                   format_double(v), format_double(limit),
                                   "sq_limit_pi_r0sq_over_6"}));
    }
    return t;
  }

  if (cmd == "mq") {
    double r0 = get_d(config, "r0", 1.0);
    t.header = {"id", "Q", "r0", "value", "limit", "claim"};
    for (long long Q : parse_ilist(get_s(config, "Q", "10000"))) {
      t.rows.push_back(tail_cells({cmd, format_int(Q), format_double(r0),
                                   format_double(mq_main_term(Q, r0)),
                                   format_double(kPi * r0 * r0 / 6.0),
                                   "mq_main_term_limit_pi_r0sq_over_6"}));
    }
    return t;
  }

  if (cmd == "phi-integrals") {
    QuadratureConfig qc;
    qc.abs_tol = get_d(config, "tol", 1e-8);
    long long count = get_i(config, "count", 1);
    t.header = {"id", "alpha0", "beta0", "abs_psi_prime_integral", "sqrt_phi_integral",
                "expected_sqrt_phi", "bound_abs_psi_prime", "claim"};
    std::mt19937_64 rng(config.seed);
    for (long long i = 0; i < count; ++i) {
      PhiParams p;
      if (config.params.count("alpha0") || count == 1) {
        p.alpha0 = get_d(config, "alpha0", 0.0);
        p.beta0 = get_d(config, "beta0", 0.0);
      } else {
        p.alpha0 = -2.0 + 4.0 * uniform01(rng);
        p.beta0 = -2.0 + 4.0 * uniform01(rng);
      }
      Lemma30Integrals li = lemma30_integrals(p, qc);
      t.rows.push_back(tail_cells(
          {cmd, format_double(p.alpha0), format_double(p.beta0),
           format_double(li.abs_psi_prime_integral), format_double(li.sqrt_phi_integral),
           format_double(2.0 * kPi / 3.0),
           format_double(std::sqrt(2.0) + std::log(1.0 + std::sqrt(2.0))),
           "sqrt_phi_integral_2pi_over_3"}));
    }
    return t;
  }

  if (cmd == "kloosterman") {
    long long q = get_i(config, "q", 1, true);
    long long m = get_i(config, "m", 0);
    long long n = get_i(config, "n", 0);
    t.header = {"id", "m", "n", "q", "real", "imag", "weil_bound", "claim"};
    std::complex<double> k;
    if (get_s(config, "incomplete", "") == "1") {
      IntInterval I{get_i(config, "lo", 0), get_i(config, "hi", q)};
      k = incomplete_kloosterman(I, n, q);
    } else {
      k = kloosterman(m, n, q);
    }
    t.rows.push_back(tail_cells({cmd, format_int(m), format_int(n), format_int(q),
                                 format_double(k.real()), format_double(k.imag()),
                                 format_double(2.0 * std::sqrt(static_cast<double>(q))),
                                 "kloosterman_weil_bound"}));
    return t;
  }

  if (cmd == "hyperbola-count") {
    HyperbolaQuery query;
    query.q = get_i(config, "q", 1, true);
    query.h = get_i(config, "h", 1);
    query.I1 = {get_i(config, "lo1", 0), get_i(config, "hi1", query.q)};
    query.I2 = {get_i(config, "lo2", 0), get_i(config, "hi2", query.q)};
    HyperbolaCount hc = hyperbola_count(query);
    t.header = {"id", "q", "h", "lo1", "hi1", "lo2", "hi2", "count", "main_term",
                "error", "claim"};
    t.rows.push_back(tail_cells(
        {cmd, format_int(query.q), format_int(query.h), format_int(query.I1.lo),
         format_int(query.I1.hi), format_int(query.I2.lo), format_int(query.I2.hi),
         format_int(hc.count), format_double(hc.main_term), format_double(hc.error),
         "hyperbola_equidistribution_main_term"}));
    return t;
  }

  if (cmd == "coprime-count") {
    long long a = get_i(config, "a", 1, true);
    long long b = get_i(config, "b", 1, true);
    long long d = get_i(config, "d", 1, true);
    t.header = {"id", "a", "b", "d", "count", "claim"};
    t.rows.push_back(tail_cells({cmd, format_int(a), format_int(b), format_int(d),
                                 format_int(coprime_progression_count(a, b, d)),
                                 "coprime_progression_totient_formula"}));
    return t;
  }

  if (cmd == "solution-pairs") {
    long long a = get_i(config, "a", 1, true);
    long long b = get_i(config, "b", 1, true);
    long long q = get_i(config, "q", 1, true);
    SolutionPairSet set = build_solution_pairs(a, b, q);
    if (get_s(config, "list", "") == "1") {
      t.header = {"id", "a", "b", "q", "A", "B", "claim"};
      for (auto [A, B] : set.pairs)
        t.rows.push_back(tail_cells({cmd, format_int(a), format_int(b), format_int(q),
                                     format_int(A), format_int(B),
                                     "solution_pair_density_lower_bound"}));
    } else {
      double phi_q = static_cast<double>(totient(q));
      t.header = {"id", "a", "b", "q", "set_size", "phi_q", "density_floor", "claim"};
      t.rows.push_back(tail_cells(
          {cmd, format_int(a), format_int(b), format_int(q),
           format_int(static_cast<long long>(set.pairs.size())), format_double(phi_q),
           format_double(phi_q / (2.0 * std::log(static_cast<double>(std::max<long long>(q, 3))))),
           "solution_pair_density_lower_bound"}));
    }
    return t;
  }

  if (cmd == "divergence-demo") {
    double x = get_d(config, "x", 0, true), y = get_d(config, "y", 0, true);
    auto lambdas = parse_list(get_s(config, "lambdas", "1,1,1,1,1"));
    R6Options opts;
    opts.delta = get_d(config, "delta", 0.05);
    opts.T_override = get_i(config, "T", 0);
    opts.M_override = get_i(config, "M", 0);
    opts.work_cap = config.budget;
    t.header = {"id", "x", "y", "Q", "T", "q", "a", "b", "M", "cluster_total",
                "cluster_count", "r6_lower_bound", "r6_counted", "counted_available",
                "counted_truncated", "paper_floor", "floor_attained", "active",
                "rational_path", "claim"};
    for (long long Q : parse_ilist(get_s(config, "Q", "1024"))) {
      DivergenceReport r = r6_divergence_demo(x, y, Q, lambdas, opts);
      t.rows.push_back(tail_cells(
          {cmd, format_double(x), format_double(y), format_int(r.Q), format_int(r.T),
           format_int(r.q), format_int(r.a), format_int(r.b), format_int(r.M),
           format_int(r.cluster_total), format_int(r.cluster_count),
           format_double(r.r6_lower_bound), format_double(r.r6_counted),
           r.counted_available ? "1" : "0", r.counted_truncated ? "1" : "0",
           format_double(r.paper_floor), r.floor_attained ? "1" : "0", r.active ? "1" : "0",
           r.rational_path ? "1" : "0", "six_level_correlation_divergence"}));
    }
    return t;
  }

  if (cmd == "verify") {
    std::string suite = get_s(config, "suite", "all");
    t.header = {"id", "suite", "status", "detail"};
    bool all_ok = true;
    for (const auto& [name, fn] : verification_suites()) {
      if (suite != "all" && suite != name) continue;
      SuiteResult res = fn();
      all_ok = all_ok && res.passed;
      std::string detail;
      for (const auto& n : res.notes) detail += n + "; ";
      t.rows.push_back(tail_cells({cmd, name, res.passed ? "pass" : "fail", detail}));
    }
    if (t.rows.empty()) throw config_error("unknown suite: " + suite);
    if (!all_ok) throw validation_error("verification suite failed");
    return t;
  }

  if (cmd == "emit-plots") {
    std::string in = get_s(config, "in", "");
    if (in.empty()) throw config_error("emit-plots needs --in CSV path");
    std::ifstream f(in);
    if (!f) throw config_error("cannot open " + in);
    ResultTable parsed;
    parsed.experiment_id = "plot";
    std::string line;
    while (std::getline(f, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::vector<std::string> cells;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      if (parsed.header.empty())
        parsed.header = cells;
      else
        parsed.rows.push_back(cells);
    }
    if (!parsed.rows.empty() && !parsed.rows[0].empty()) parsed.experiment_id = parsed.rows[0][0];
    std::string outpath = config.out.empty() ? (parsed.experiment_id + "_plot.py") : config.out;
    emit_plot_script(parsed, outpath);
    t.header = {"id", "script", "rows", "claim"};
    t.rows.push_back(tail_cells({cmd, outpath,
                                 format_int(static_cast<long long>(parsed.rows.size())),
                                 "artifact_plumbing"}));
    return t;
  }

  throw config_error("unknown command: " + cmd);
}

int run_and_emit(const ExperimentConfig& config, std::ostream& err) {
  try {
    ResultTable t = run_experiment(config);
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!config.out.empty() && config.command != "emit-plots") {
      file.open(config.out);
      if (!file) {
        err << "error: cannot open output file " << config.out << "\n";
        return 1;
      }
      os = &file;
    }
    if (config.format == "json")
      write_json(*os, config, t);
    else
      write_csv(*os, config, t);
    return 0;
  } catch (const config_error& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace latcorr
