#include "latcorr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "latcorr/analytic.hpp"
#include "latcorr/averaging.hpp"
#include "latcorr/correlations.hpp"
#include "latcorr/divergence.hpp"
#include "latcorr/experiment.hpp"
#include "latcorr/numtheory.hpp"

namespace latcorr {

namespace {

struct Check {
  SuiteResult& res;
  void operator()(bool ok, const std::string& what) {
    if (!ok) {
      res.passed = false;
      res.notes.push_back("FAIL: " + what);
    }
  }
};

SuiteResult suite_lattice() {
  SuiteResult res;
  res.name = "lattice";
  Check check{res};
  for (long long Q : {0LL, 1LL, 2LL, 7LL, 30LL}) {
    auto pts = enumerate_box(Q);
    check(pts.size() == Box::of(Q).N, "box count (2Q+1)^2 at Q=" + std::to_string(Q));
  }
  // angle multiset round trip: stored angles equal recomputed ray angles
  std::mt19937_64 rng(7);
  auto pts = enumerate_box(20);
  for (int trial = 0; trial < 100; ++trial) {
    Observer obs{uniform01(rng), uniform01(rng)};
    AngleMultiset ms(obs, pts);
    bool ok = true;
    for (const auto& e : ms.entries())
      if (e.angle != ray_angle(obs, e.point)) ok = false;
    for (std::size_t i = 1; i < ms.entries().size(); ++i)
      if (ms.entries()[i - 1].angle > ms.entries()[i].angle) ok = false;
    check(ok, "angle multiset round trip");
    if (!ok) break;
  }
  // separation symmetry + circular triangle inequality
  for (int trial = 0; trial < 2000; ++trial) {
    double a = kTwoPi * uniform01(rng);
    double b = kTwoPi * uniform01(rng);
    double c = kTwoPi * uniform01(rng);
    check(angular_separation(a, b) == angular_separation(b, a), "separation symmetry");
    check(angular_separation(a, c) <=
              angular_separation(a, b) + angular_separation(b, c) + 1e-12,
          "separation triangle inequality");
  }
  // irrational-type observers never collide with a lattice point
  for (int trial = 0; trial < 50; ++trial) {
    Observer obs{uniform01(rng), uniform01(rng)};
    for (const auto& p : enumerate_box(6)) (void)ray_angle(obs, p);
  }
  return res;
}

SuiteResult suite_correlations() {
  SuiteResult res;
  res.name = "correlations";
  Check check{res};
  std::mt19937_64 rng(11);
  // oracle vs fast equivalence
  for (int trial = 0; trial < 60; ++trial) {
    long long Q = 1 + static_cast<long long>(uniform01(rng) * 12);
    double lambda = 0.01 + uniform01(rng) * 19.99;
    Observer obs{uniform01(rng), uniform01(rng)};
    CorrelationSpec spec{2, {lambda}, Q, obs};
    auto slow = pair_correlation_oracle(spec);
    auto fast = pair_correlation_fast(spec);
    check(slow.tuple_count == fast.tuple_count,
          "oracle/fast equality at Q=" + std::to_string(Q));
    if (slow.tuple_count != fast.tuple_count) break;
  }
  // monotonicity in lambda
  for (int trial = 0; trial < 10; ++trial) {
    Observer obs{uniform01(rng), uniform01(rng)};
    std::uint64_t prev = 0;
    for (double lambda : {0.2, 1.0, 3.0, 8.0}) {
      auto r = pair_correlation_fast(CorrelationSpec{2, {lambda}, 8, obs});
      check(r.tuple_count >= prev, "monotonicity in lambda");
      prev = r.tuple_count;
    }
  }
  // ordered-pair evenness
  for (int trial = 0; trial < 10; ++trial) {
    Observer obs{uniform01(rng), uniform01(rng)};
    auto r = pair_correlation_fast(CorrelationSpec{2, {1.5}, 9, obs});
    check(r.tuple_count % 2 == 0, "pair count evenness");
  }
  // reversal symmetry of the lambda vector
  for (int trial = 0; trial < 8; ++trial) {
    Observer obs{uniform01(rng), uniform01(rng)};
    std::vector<double> lam{0.4 + uniform01(rng), 2.0 * uniform01(rng) + 0.1,
                            0.8 * uniform01(rng) + 0.1};
    std::vector<double> rev(lam.rbegin(), lam.rend());
    auto r1 = nu_correlation(CorrelationSpec{4, lam, 5, obs});
    auto r2 = nu_correlation(CorrelationSpec{4, rev, 5, obs});
    check(r1.tuple_count == r2.tuple_count, "lambda reversal symmetry");
  }
  // window soundness: sampled tuples satisfy the definition
  {
    std::vector<std::vector<LatticePoint>> samples;
    NuOptions opts;
    opts.sample_stride = 97;
    opts.samples = &samples;
    Observer obs{0.5, 0.5};
    CorrelationSpec spec{3, {1.0, 2.0}, 6, obs};
    auto r = nu_correlation(spec, opts);
    (void)r;
    Box box = Box::of(6);
    for (const auto& tup : samples) {
      for (std::size_t i = 0; i < tup.size(); ++i)
        for (std::size_t j = i + 1; j < tup.size(); ++j)
          check(!(tup[i] == tup[j]), "sampled tuple distinctness");
      for (std::size_t i = 0; i + 1 < tup.size(); ++i) {
        double sep = angular_separation(ray_angle(obs, tup[i]), ray_angle(obs, tup[i + 1]));
        check(within_threshold(sep, spec.threshold(i, box.N)), "sampled tuple window");
      }
    }
    check(!samples.empty(), "sampling hook produced tuples");
  }
  return res;
}

SuiteResult suite_averaging() {
  SuiteResult res;
  res.name = "averaging";
  Check check{res};
  Disc disc{0.5, 0.5, 0.25};
  auto r1 = average_pair_correlation(disc, 40, 1.0, 16, 42);
  auto r2 = average_pair_correlation(disc, 40, 1.0, 16, 42);
  check(r1.mean == r2.mean && r1.standard_error == r2.standard_error,
        "bit reproducibility for a fixed seed");
  check(r1.theory == kTwoPi / 3.0, "theory field 2*pi*lambda/3");
  int before = max_threads();
  set_max_threads(2);
  auto r3 = average_pair_correlation(disc, 40, 1.0, 16, 42);
  set_max_threads(before);
  check(r1.mean == r3.mean, "thread-count independence");
  // sampler statistics
  auto samples = sample_disc(disc, 100000, 3);
  double mx = 0, my = 0;
  for (auto& o : samples) {
    mx += o.x;
    my += o.y;
  }
  mx /= static_cast<double>(samples.size());
  my /= static_cast<double>(samples.size());
  double sigma = disc.r0 / 2.0 / std::sqrt(static_cast<double>(samples.size()));
  check(std::fabs(mx - disc.x0) < 3 * sigma && std::fabs(my - disc.y0) < 3 * sigma,
        "sample mean near disc center");
  return res;
}

SuiteResult suite_analytic() {
  SuiteResult res;
  res.name = "analytic";
  Check check{res};
  std::mt19937_64 rng(13);
  Disc disc{0.5, 0.5, 0.25};
  // strip area upper bound 8*mu*r0/||P-P'|| and the support condition
  for (int trial = 0; trial < 200; ++trial) {
    long long Q = 20;
    LatticePoint P{static_cast<long long>(uniform01(rng) * 41) - 20,
                   static_cast<long long>(uniform01(rng) * 41) - 20};
    LatticePoint Pp{static_cast<long long>(uniform01(rng) * 41) - 20,
                    static_cast<long long>(uniform01(rng) * 41) - 20};
    if (P == Pp) continue;
    double mu = 0.1 + 3.0 * uniform01(rng);
    double area = strip_area_A(P, Pp, disc, Q, mu);
    double dist = std::hypot(static_cast<double>(P.q - Pp.q), static_cast<double>(P.a - Pp.a));
    check(area <= 8.0 * mu * disc.r0 / dist + 1e-12, "strip area bound 8*mu*r0/dist");
    if (!strip_support_possible(P, Pp, disc, mu))
      check(area == 0.0, "support condition forces zero area");
  }
  // sublevel measure bound
  for (int trial = 0; trial < 200; ++trial) {
    double u = (uniform01(rng) - 0.5) * 4;
    if (std::fabs(u) < 1e-3) continue;
    double v = (uniform01(rng) - 0.5) * 4, w = (uniform01(rng) - 0.5) * 4;
    double K = (uniform01(rng) - 0.5) * 6, L = (uniform01(rng) - 0.5) * 3;
    double m = quadratic_sublevel_measure(u, v, w, K, L);
    check(m <= 2.0 * std::fabs(L) / std::sqrt(std::fabs(u)) + 1e-12,
          "sublevel measure bound 2|L|/sqrt|u|");
  }
  // divisor-totient identity used by the main-term reduction
  for (long long q = 1; q <= 2000; ++q) {
    long long sum = 0;
    for (long long d = 1; d * d <= q; ++d) {
      if (q % d != 0) continue;
      sum += totient(d);
      if (d != q / d) sum += totient(q / d);
    }
    check(sum == q, "sum of phi over divisors equals q");
    if (sum != q) break;
  }
  // sqrt(Phi) integral parameter independence (sampled)
  QuadratureConfig qc;
  qc.abs_tol = 1e-7;
  for (int trial = 0; trial < 10; ++trial) {
    PhiParams p{-2.0 + 4.0 * uniform01(rng), -2.0 + 4.0 * uniform01(rng)};
    auto li = lemma30_integrals(p, qc);
    check(std::fabs(li.sqrt_phi_integral - 2.0 * kPi / 3.0) < 1e-5,
          "sqrt(Phi) integral = 2*pi/3");
    check(li.abs_psi_prime_integral <=
              std::sqrt(2.0) + std::log(1.0 + std::sqrt(2.0)) + 1e-5,
          "|psi'| integral bound");
  }
  // main term decay: error*Q stays bounded
  double e100 = std::fabs(mq_main_term(100, 1.0) - kPi / 6.0);
  double e1000 = std::fabs(mq_main_term(1000, 1.0) - kPi / 6.0);
  double e10000 = std::fabs(mq_main_term(10000, 1.0) - kPi / 6.0);
  check(e1000 * 1000.0 <= 1.5 * (e100 * 100.0) + 1e-9, "main term error ~ C/Q (step 1)");
  check(e10000 * 10000.0 <= 1.5 * (e100 * 100.0) + 1e-9, "main term error ~ C/Q (step 2)");
  std::ostringstream note;
  note << "mq errors: " << format_double(e100) << " @100, " << format_double(e1000)
       << " @1000, " << format_double(e10000) << " @10000";
  res.notes.push_back(note.str());
  return res;
}

SuiteResult suite_numtheory() {
  SuiteResult res;
  res.name = "numtheory";
  Check check{res};
  std::mt19937_64 rng(17);
  // Kloosterman symmetry and the classical modulus bound, small primes
  for (long long p : {2LL, 3LL, 5LL, 7LL, 11LL, 53LL, 101LL, 199LL}) {
    auto sweep = kloosterman_prime_sweep(p);
    check(sweep.max_abs_imag < 1e-9 * static_cast<double>(p), "imaginary parts tiny");
    check(sweep.max_abs <= 2.0 * std::sqrt(static_cast<double>(p)) + 1e-6,
          "modulus bound 2*sqrt(p)");
  }
  // exhaustive progression count identity
  for (long long d = 1; d <= 60; ++d)
    for (long long b = 1; b <= d; ++b)
      for (long long a = 1; a <= d; ++a) {
        if (std::gcd(a, std::gcd(b, d)) != 1) continue;
        long long brute = 0;
        for (long long m = 0; m <= 2 * d - 1; ++m)
          if (std::gcd(((a + b * m) % d + d) % d == 0 ? d : ((a + b * m) % d + d) % d, d) == 1)
            ++brute;
        long long formula = coprime_progression_count(a, b, d);
        check(formula == brute, "progression formula vs brute force");
        if (formula != brute) return res;
      }
  // solution pairs satisfy their three defining conditions
  for (int trial = 0; trial < 10; ++trial) {
    long long q = 50 + static_cast<long long>(uniform01(rng) * 250);
    long long a = 1 + static_cast<long long>(uniform01(rng) * (q - 1));
    long long b = 1 + static_cast<long long>(uniform01(rng) * (q - 1));
    if (std::gcd(a, std::gcd(b, q)) != 1) continue;
    auto set = build_solution_pairs(a, b, q);
    for (auto [A, B] : set.pairs) {
      bool ok = A >= 1 && A <= 2 * q && B >= 1 && B <= 2 * q && std::gcd(A, B) == 1 &&
                (static_cast<__int128>(A) * b - static_cast<__int128>(B) * a) % q == 0;
      check(ok, "pair conditions recheck");
      if (!ok) return res;
    }
  }
  return res;
}

SuiteResult suite_divergence() {
  SuiteResult res;
  res.name = "divergence";
  Check check{res};
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    double x = uniform01(rng), y = uniform01(rng);
    long long T = 80 + static_cast<long long>(uniform01(rng) * 200);
    ApproximationTriple tri;
    try {
      tri = minkowski_approx(x, y, T);
    } catch (const config_error&) {
      continue;  // degenerate observer draw
    }
    if (tri.a < 1 || tri.b < 1) continue;
    long long Q = 64 * tri.q + static_cast<long long>(uniform01(rng) * 100);
    long long M = std::min<long long>(Q / (4 * tri.q), 8);
    if (M < 1) continue;
    auto pairs = build_solution_pairs(tri.a, tri.b, tri.q);
    std::vector<ClusterSet> clusters;
    for (auto [A, B] : pairs.pairs)
      clusters.push_back(build_cluster(tri.a, tri.b, tri.q, A, B, Q, M));
    auto vr = validate_construction(clusters, Q);
    check(vr.ok, "structural guarantees on a random pipeline run");
    if (!vr.ok) {
      res.notes.push_back(vr.violations.front());
      return res;
    }
    Observer obs{x, y};
    for (const auto& c : clusters) {
      // ratio device: (q*n2 - b)/(q*n1 - a) = B/A in exact arithmetic
      for (const auto& p : c.points) {
        __int128 lhs = static_cast<__int128>(tri.q) * p.a - tri.b;
        __int128 rhs = static_cast<__int128>(tri.q) * p.q - tri.a;
        check(lhs * c.A == rhs * c.B, "collinearity ratio device");
      }
      try {
        (void)cluster_angle_audit(c, obs, Q, M, tri.a, tri.b, tri.q);
      } catch (const validation_error&) {
        check(false, "sine bound audit");
      }
    }
  }
  return res;
}

SuiteResult suite_experiment() {
  SuiteResult res;
  res.name = "experiment";
  Check check{res};
  std::mt19937_64 rng(23);
  const auto& schemas = command_schemas();
  std::vector<std::string> commands;
  for (const auto& [name, keys] : schemas) commands.push_back(name);
  for (int trial = 0; trial < 100; ++trial) {
    ExperimentConfig c;
    c.command = commands[static_cast<std::size_t>(uniform01(rng) * commands.size())];
    const auto& keys = schemas.at(c.command);
    for (const auto& k : keys)
      if (uniform01(rng) < 0.5) c.params[k] = format_double(uniform01(rng) * 100.0);
    c.format = uniform01(rng) < 0.5 ? "csv" : "json";
    c.seed = rng();
    c.threads = static_cast<int>(uniform01(rng) * 8);
    c.budget = rng() % 1000000 + 1;
    ExperimentConfig back = parse_config(serialize_config(c));
    check(back == c, "config round trip");
    if (!(back == c)) break;
  }
  bool rejected = false;
  try {
    parse_config(R"({"command":"mq","params":{"bogus":"1"}})");
  } catch (const config_error&) {
    rejected = true;
  }
  check(rejected, "unknown keys rejected");
  for (double v : {0.1, 1.0 / 3.0, 2.0944, 1e-17, 123456789.123456}) {
    check(std::strtod(format_double(v).c_str(), nullptr) == v, "double formatting round trip");
  }
  return res;
}

}  // namespace

const std::vector<std::pair<std::string, SuiteFn>>& verification_suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites = {
      {"lattice", suite_lattice},       {"correlations", suite_correlations},
      {"averaging", suite_averaging},   {"analytic", suite_analytic},
      {"numtheory", suite_numtheory},   {"divergence", suite_divergence},
      {"experiment", suite_experiment},
  };
  return suites;
}

}  // namespace latcorr
