// Command-line front door: runs the experiments, emits CSV/JSON rows, and
// executes the verification suites. Exit codes: 0 success, 1 computational
// failure, 2 usage error.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "latcorr/runner.hpp"

using latcorr::ExperimentConfig;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 1;
  int threads = 0;
  std::uint64_t budget = 1'000'000'000;
  std::string out;
  std::string format = "csv";
};

void add_param_opt(CLI::App* sub, ExperimentConfig& config, const std::string& key,
                   const std::string& help) {
  auto holder = std::make_shared<std::string>();
  sub->add_option_function<std::string>(
         "--" + key, [&config, key](const std::string& v) { config.params[key] = v; }, help)
      ->expected(1);
  (void)holder;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fine-scale statistics of lattice-point directions"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");

  GlobalOpts g;
  app.add_option("--seed", g.seed, "RNG seed for stochastic experiments");
  app.add_option("--threads", g.threads, "worker threads (0 = hardware)");
  app.add_option("--budget", g.budget, "work cap for counting engines");
  app.add_option("--out", g.out, "output path (default stdout)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  ExperimentConfig config;

  struct SubSpec {
    const char* name;
    const char* help;
    std::vector<std::pair<const char*, const char*>> params;
  };
  const std::vector<SubSpec> subs = {
      {"pair-correlation",
       "pair correlation of directions from one observer",
       {{"Q", "box radius"},
        {"x", "observer x"},
        {"y", "observer y"},
        {"lambda", "window size"},
        {"oracle", "1 = run the quadratic oracle instead of the fast engine"}}},
      {"nu-correlation",
       "nu-level correlation of directions from one observer",
       {{"Q", "box radius"},
        {"x", "observer x"},
        {"y", "observer y"},
        {"nu", "tuple length (2..8)"},
        {"lambdas", "comma list of nu-1 window sizes"}}},
      {"avg-pair-correlation",
       "disc average of the pair correlation vs 2*pi*lambda/3",
       {{"Q", "box radius, comma list for a sweep"},
        {"lambda", "window size"},
        {"disc", "x0,y0,r0"},
        {"samples", "Monte Carlo observer count"},
        {"grid-step", "grid spacing for mode=grid"},
        {"mode", "mc or grid"}}},
      {"gq",
       "normalized strip-area pair sum vs 16*pi*r0^2*mu/3",
       {{"Q", "box radius, comma list"}, {"mu", "strip half-width scale"}, {"disc", "x0,y0,r0"}}},
      {"sq",
       "first-quadrant congruence pair sum vs pi*r0^2/6",
       {{"Q", "box radius, comma list"}, {"disc", "x0,y0,r0"}}},
      {"mq",
       "single-sum main term vs pi*r0^2/6",
       {{"Q", "cutoff, comma list"}, {"r0", "disc radius"}}},
      {"phi-integrals",
       "sqrt(Phi) integrals: 2*pi/3 identity and the |psi'| bound",
       {{"alpha0", "normalized center x"},
        {"beta0", "normalized center y"},
        {"count", "random parameter draws (when alpha0/beta0 absent)"},
        {"tol", "quadrature tolerance"}}},
      {"kloosterman",
       "exact Kloosterman sum",
       {{"m", "first frequency"},
        {"n", "second frequency"},
        {"q", "modulus"},
        {"incomplete", "1 = sum over [lo,hi) only"},
        {"lo", "interval start"},
        {"hi", "interval end"}}},
      {"hyperbola-count",
       "points on x*y = h (mod q) in an interval box",
       {{"q", "modulus"},
        {"h", "residue"},
        {"lo1", "I1 start"},
        {"hi1", "I1 end"},
        {"lo2", "I2 start"},
        {"hi2", "I2 end"}}},
      {"coprime-count",
       "count of m in [0,2d) with gcd(a+bm,d)=1",
       {{"a", "offset"}, {"b", "step"}, {"d", "modulus"}}},
      {"solution-pairs",
       "coprime pairs (A,B) in [1,2q]^2 with q | A*b - B*a",
       {{"a", "first residue"},
        {"b", "second residue"},
        {"q", "modulus"},
        {"list", "1 = one row per pair"}}},
      {"divergence-demo",
       "certified lower bound on the 6-level correlation",
       {{"x", "observer x"},
        {"y", "observer y"},
        {"Q", "box radius, comma list"},
        {"lambdas", "comma list of 5 window sizes"},
        {"delta", "floor exponent offset"},
        {"T", "approximation range override (0 = Q^(3/4))"},
        {"M", "cluster size override (0 = best certified)"}}},
      {"verify", "run the invariant suites", {{"suite", "suite name or all"}}},
      {"emit-plots", "write a batch plotting script from a CSV", {{"in", "input CSV path"}}},
  };

  for (const auto& spec : subs) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    sub->set_help_flag("--help", "print help");
    sub->fallthrough();  // global flags may follow the subcommand
    for (const auto& [key, help] : spec.params) add_param_opt(sub, config, key, help);
    sub->callback([&, name = std::string(spec.name)] { config.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  config.seed = g.seed;
  config.threads = g.threads;
  config.budget = g.budget;
  config.out = g.out;
  config.format = g.format;
  return latcorr::run_and_emit(config, std::cerr);
}
