// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "support/corpus.hpp"
#include "walkabout/chains.hpp"
#include "walkabout/crawl_net.hpp"
#include "walkabout/error.hpp"
#include "walkabout/estimators.hpp"
#include "walkabout/generators.hpp"
#include "walkabout/lab.hpp"
#include "walkabout/oracle.hpp"
#include "walkabout/stats.hpp"

using namespace walkabout;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Graph random_01_labels(const Graph& g, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> f(g.num_vertices());
  for (auto& x : f) x = rng.bernoulli(0.5) ? 1.0 : 0.0;
  return g.with_values(f);
}

std::size_t lazy_tmix(const Graph& g) {
  return mixing_time(g, ChainKernel::lazy_simple(), 0.25).tau;
}

EstimatorConfig config_for(const Graph& g, std::size_t tmix, double eps, double delta) {
  const auto ds = degree_stats(g);
  EstimatorConfig cfg;
  cfg.epsilon = eps;
  cfg.delta = delta;
  cfg.t_mix_hint = std::max<std::size_t>(1, tmix);
  cfg.d_max_bound = ds.d_max;
  cfg.d_min_hint = ds.d_min;
  cfg.d_avg_hint = ds.d_avg;
  return cfg;
}

double query_scale(std::size_t tmix, double d_avg, double eps, double delta) {
  return static_cast<double>(tmix) * d_avg * std::log(1.0 / delta) / (eps * eps);
}

// ------------------------------------------------------------------ 1

Verdict exactness() {
  double worst_fixed = 0.0, worst_rise = 0.0;
  for (const auto& [name, g] : testing::small_corpus()) {
    for (const auto& k : testing::kernels_for(g)) {
      const auto pi = stationary(g, k);
      worst_fixed = std::max(worst_fixed, l1_distance(pi, step_distribution(g, k, pi)));
      for (const auto& row : l1_trajectories(g, k, 200)) {
        for (std::size_t t = 1; t < row.size(); ++t) worst_rise = std::max(worst_rise, row[t] - row[t - 1]);
      }
    }
  }
  return {worst_fixed <= 1e-12 && worst_rise <= 1e-12,
          fmt("max |pi P - pi|_1 = %.2e, max l1 increase = %.2e over 12 graphs x 3 kernels",
              worst_fixed, worst_rise)};
}

// ------------------------------------------------------------------ 2

struct Main12Setup {
  Graph g;
  std::size_t tmix = 0;
  double truth = 0.0;
  EstimatorConfig cfg;
};

Main12Setup main12_setup() {
  Rng rng(12);
  Main12Setup s;
  s.g = random_01_labels(gen_erdos_renyi(2000, 20.0 / 2000, rng), 1212);
  s.tmix = lazy_tmix(s.g);
  s.truth = f_average(s.g);
  s.cfg = config_for(s.g, s.tmix, 0.1, 0.1);
  return s;
}

struct TrialOutcome {
  double value = 0.0;
  std::size_t queries = 0;
};

constexpr std::size_t kMain12Trials = 100;

VertexId trial_seed_vertex(std::size_t trial, std::size_t n) {
  return static_cast<VertexId>(Rng(9000 + trial).below(n));
}

std::vector<TrialOutcome> main12_trials(const Main12Setup& s,
                                        const std::function<EstimateOutcome(std::size_t, Rng&)>& run) {
  std::vector<TrialOutcome> out;
  for (std::size_t i = 0; i < kMain12Trials; ++i) {
    Rng rng(Rng::derive(2, i));
    const auto r = run(i, rng);
    out.push_back({r.value, r.queries_used});
  }
  return out;
}

// kappa = largest queries / (t_mix d_avg eps^-2 ln(1/delta)) seen on the small corpus.
double fit_kappa() {
  double kappa = 0.0;
  std::uint64_t label_seed = 1;
  for (const auto& [name, base] : testing::small_corpus()) {
    const Graph g = random_01_labels(base, label_seed++);
    const std::size_t tmix = lazy_tmix(g);
    const double d_avg = degree_stats(g).d_avg;
    for (double eps : {0.5, 0.3, 0.2, 0.1}) {
      for (std::uint64_t s = 0; s < 5; ++s) {
        ExplorationOracle o(g, static_cast<VertexId>(s % g.num_vertices()), {.id_seed = s});
        Rng rng(Rng::derive(label_seed, s));
        const auto r = mdw_average(o, config_for(g, tmix, eps, 0.1), rng);
        kappa = std::max(kappa, r.queries_used / query_scale(tmix, d_avg, eps, 0.1));
      }
    }
  }
  return kappa;
}

Verdict main12(const Main12Setup& s, std::vector<TrialOutcome>& trials) {
  const double kappa = fit_kappa();
  trials = main12_trials(s, [&](std::size_t i, Rng& rng) {
    ExplorationOracle o(s.g, trial_seed_vertex(i, s.g.num_vertices()), {.id_seed = i});
    return mdw_average(o, s.cfg, rng);
  });
  std::size_t failures = 0, max_q = 0;
  for (const auto& t : trials) {
    failures += std::abs(t.value - s.truth) > s.cfg.epsilon;
    max_q = std::max(max_q, t.queries);
  }
  const double limit = kappa * query_scale(s.tmix, *s.cfg.d_avg_hint, 0.1, 0.1);
  const double rate = failures / static_cast<double>(trials.size());
  return {rate <= 0.15 && static_cast<double>(max_q) <= limit,
          fmt("failure rate %.2f (<= 0.15), t_mix %zu, kappa %.4f, max queries %zu <= %.0f",
              rate, s.tmix, kappa, max_q, limit)};
}

// ------------------------------------------------------------------ 3

struct SamplingSetup {
  Graph g;
  EstimatorConfig cfg;
  VertexId seed = 0;
};

constexpr std::size_t kDraws = 100000;

SamplingSetup sampling_setup() {
  // Irregular by construction: a hub, a path tail and a dense core.
  std::vector<Edge> edges;
  for (VertexId v = 1; v < 8; ++v) edges.push_back({0, v});
  for (VertexId v = 8; v < 12; ++v) edges.push_back({v - 1, v});
  for (VertexId a = 12; a < 20; ++a) {
    for (VertexId b = a + 1; b < 20; b += 2) edges.push_back({a, b});
  }
  edges.push_back({11, 12});
  edges.push_back({3, 15});
  SamplingSetup s{build_graph(edges), {}, 0};
  s.cfg = config_for(s.g, lazy_tmix(s.g), 0.05, 0.1);
  return s;
}

// Hidden ids of draws, given an oracle whose refs follow the same key.
std::vector<VertexId> draw_samples(NeighborOracle& o, const SamplingSetup& s, SampleMethod m,
                                   std::uint64_t ref_seed, std::size_t& queries) {
  std::unordered_map<std::uint64_t, VertexId> id_of;
  const std::uint64_t key = ref_key(ref_seed);
  for (VertexId v = 0; v < s.g.num_vertices(); ++v) id_of[scramble_id(v, key).value] = v;
  Rng rng(Rng::derive(3, static_cast<std::uint64_t>(m)));
  std::vector<VertexId> out;
  out.reserve(kDraws);
  for (std::size_t i = 0; i < kDraws; ++i) out.push_back(id_of.at(uniform_sample(o, s.cfg, m, rng).vertex.value));
  queries = o.query_count();
  return out;
}

double l1_to_uniform(const std::vector<VertexId>& draws, std::size_t n) {
  std::vector<std::size_t> counts(n, 0);
  for (VertexId v : draws) ++counts[v];
  return stats::empirical_l1(counts, std::vector<double>(n, 1.0 / n));
}

Verdict uniform_quality(const SamplingSetup& s, std::vector<std::vector<VertexId>>& draws,
                        std::vector<std::size_t>& queries) {
  const std::size_t n = s.g.num_vertices();
  const double bound = 0.05 + 4 * std::sqrt(n / static_cast<double>(kDraws));
  bool pass = true;
  std::string detail = fmt("bound %.4f;", bound);
  for (SampleMethod m : {SampleMethod::MaxDegreeWalk, SampleMethod::Rejection}) {
    ExplorationOracle o(s.g, s.seed, {.id_seed = 33});
    std::size_t q = 0;
    draws.push_back(draw_samples(o, s, m, 33, q));
    queries.push_back(q);
    const double l1 = l1_to_uniform(draws.back(), n);
    pass = pass && l1 <= bound;
    detail += fmt(" %s l1 %.4f", to_string(m), l1);
  }
  return {pass, detail};
}

// ------------------------------------------------------------------ 4

Verdict star_discovery() {
  lab::StarCurveParams p;
  p.n = 4000;
  p.d = 40;
  p.t = 10;
  p.c1 = 1;
  const std::size_t dt = 400;
  p.budgets = {dt / 20, dt / 2, 10 * dt};
  p.trials = 200;
  p.seed = 4;
  const auto r = lab::star_discovery_curve(p);
  bool pass = r.monotone;
  double worst_low = 0.0, worst_high = 1.0, worst_mean_ratio = 0.0;
  for (const auto& pt : r.curve) {
    if (pt.budget == dt / 20) worst_low = std::max(worst_low, pt.fraction_found);
    if (pt.budget == 10 * dt) worst_high = std::min(worst_high, pt.fraction_found);
    if (pt.budget < dt) {
      worst_mean_ratio = std::max(worst_mean_ratio, pt.mean_found / (16.0 * pt.budget / dt));
    }
  }
  pass = pass && worst_low <= 0.3 && worst_high >= 0.9 && worst_mean_ratio <= 1.0;
  return {pass, fmt("q=dt/20 max fraction %.3f (<= 0.3), q=10dt min fraction %.3f (>= 0.9), "
                    "max mean/(16q/dt) %.3f (<= 1), monotone %s",
                    worst_low, worst_high, worst_mean_ratio, r.monotone ? "yes" : "no")};
}

// ------------------------------------------------------------------ 5

Verdict biased_functions() {
  lab::BiasedParams p;
  p.epsilon = 0.2;
  p.trials = 200;
  p.seed = 5;
  const auto r = lab::biased_function_experiment(p);
  double worst_low = 0.0;
  for (const auto& pt : r.points) {
    if (pt.below_requirement) worst_low = std::max(worst_low, pt.success_rate);
  }
  const double top = r.points.back().success_rate;
  std::string rates;
  for (const auto& pt : r.points) rates += fmt(" %zu:%.3f", pt.budget, pt.success_rate);
  return {worst_low <= 0.75 && top >= 0.9,
          fmt("max success below requirement %.3f (<= 0.75), top budget %.3f (>= 0.9); rates",
              worst_low, top) + rates};
}

// ------------------------------------------------------------------ 6

Verdict observed_vertices() {
  lab::ObservedParams p;
  p.seed = 6;
  const auto r = lab::observed_vertex_audit(p);
  return {r.p_observed <= r.observed_bound && r.edge_bound_rate >= 0.99,
          fmt("P(observed) %.4f <= %.4f, edge bound held in %.3f of trials (>= 0.99)",
              r.p_observed, r.observed_bound, r.edge_bound_rate)};
}

// ------------------------------------------------------------------ 7

Verdict order_and_degree() {
  const Graph k400 = complete_graph(400);
  const EstimatorConfig kcfg = config_for(k400, lazy_tmix(k400), 0.1, 0.1);
  std::vector<double> estimates;
  for (std::uint64_t i = 0; i < 50; ++i) {
    ExplorationOracle o(k400, static_cast<VertexId>(i), {.id_seed = i});
    Rng rng(Rng::derive(7, i));
    try {
      estimates.push_back(katzir_order(o, kcfg, 400, rng).value);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InsufficientCollisions) throw;
      estimates.push_back(INFINITY);
    }
  }
  const double med = stats::median(estimates);

  Rng gr(77);
  const Graph reg = gen_random_regular(512, 8, gr);
  const EstimatorConfig dcfg = config_for(reg, lazy_tmix(reg), 0.1, 0.1);
  ExplorationOracle o(reg, 0);
  Rng rng(78);
  const double deg = avg_degree(o, dcfg, rng).value;

  return {med >= 200 && med <= 800 && std::abs(deg - 8.0) <= dcfg.epsilon,
          fmt("K400 median order %.1f (in [200, 800]), 8-regular avg degree %.4f (8 +/- %.2f)",
              med, deg, dcfg.epsilon)};
}

// ------------------------------------------------------------------ 8

Verdict mixing_trends() {
  lab::DecoratedMixingParams dp;
  dp.seed = 8;
  const auto rows = lab::decorated_mixing_trend(dp);
  double worst = 0.0;
  std::string detail = "t_mix base/decorated:";
  bool exact = true;
  for (const auto& row : rows) {
    worst = std::max(worst, row.ratio);
    exact = exact && !row.lower_estimate;
    detail += fmt(" t=%zu %zu/%zu", row.t, row.tau_base, row.tau_decorated);
  }
  lab::PsiMixingParams pp;
  pp.seed = 8;
  const auto psi_rows = lab::psi_mixing_trend(pp);
  std::size_t increasing = 0;
  for (const auto& row : psi_rows) increasing += row.increasing;
  detail += fmt("; max ratio %.2f (<= 12); psi trend increasing in %zu/%zu seeds (>= 4)", worst,
                increasing, psi_rows.size());
  return {exact && worst <= 12.0 && increasing >= 4, detail};
}

// ------------------------------------------------------------------ 9

Verdict transparency(const Main12Setup& m12, const std::vector<TrialOutcome>& local12,
                     const SamplingSetup& smp, const std::vector<std::vector<VertexId>>& local_draws,
                     const std::vector<std::size_t>& local_queries) {
  net::CrawlServer server;
  server.add_graph("er2000", m12.g);
  server.add_graph("irregular20", smp.g);
  server.start();

  const auto remote12 = main12_trials(m12, [&](std::size_t i, Rng& rng) {
    net::RemoteOracle o(server.address(), "er2000",
                        {.seed_hint = trial_seed_vertex(i, m12.g.num_vertices()), .ref_seed = i});
    return mdw_average(o, m12.cfg, rng);
  });
  std::vector<double> a, b;
  bool same_queries = true;
  for (std::size_t i = 0; i < local12.size(); ++i) {
    a.push_back(local12[i].value);
    b.push_back(remote12[i].value);
    same_queries = same_queries && local12[i].queries == remote12[i].queries;
  }
  const double p12 = stats::ks_two_sample(a, b).p_value;

  double p_min_sampling = 1.0;
  std::size_t idx = 0;
  for (SampleMethod m : {SampleMethod::MaxDegreeWalk, SampleMethod::Rejection}) {
    net::RemoteOracle o(server.address(), "irregular20", {.seed_hint = smp.seed, .ref_seed = 33});
    std::size_t q = 0;
    const auto draws = draw_samples(o, smp, m, 33, q);
    same_queries = same_queries && q == local_queries[idx];
    std::vector<double> x(local_draws[idx].begin(), local_draws[idx].end());
    std::vector<double> y(draws.begin(), draws.end());
    p_min_sampling = std::min(p_min_sampling, stats::ks_two_sample(x, y).p_value);
    ++idx;
  }
  server.stop();
  return {p12 > 0.01 && p_min_sampling > 0.01 && same_queries,
          fmt("KS p estimates %.3f, KS p samples %.3f (> 0.01), query counts %s", p12,
              p_min_sampling, same_queries ? "identical" : "differ")};
}

// ------------------------------------------------------------------ 10

Verdict chernoff() {
  lab::ChernoffParams p;
  p.seed = 10;
  const auto r = lab::chernoff_check(p);
  bool pass = !r.rows.empty();
  std::string detail = fmt("t_mix %zu;", r.t_mix);
  for (const auto& row : r.rows) {
    pass = pass && row.empirical <= row.bound;
    detail += fmt(" c=%g %.4f <= %.4f", row.c, row.empirical, row.bound);
  }
  return {pass, detail};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const std::function<Verdict()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d: %s  %s  [%.1fs]\n", id, v.pass ? "PASS" : "FAIL", v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !v.pass;
  };

  const Main12Setup m12 = main12_setup();
  const SamplingSetup smp = sampling_setup();
  std::vector<TrialOutcome> local12;
  std::vector<std::vector<VertexId>> local_draws;
  std::vector<std::size_t> local_queries;

  report(1, exactness);
  report(2, [&] { return main12(m12, local12); });
  report(3, [&] { return uniform_quality(smp, local_draws, local_queries); });
  report(4, star_discovery);
  report(5, biased_functions);
  report(6, observed_vertices);
  report(7, order_and_degree);
  report(8, mixing_trends);
  report(9, [&] {
    if (local12.empty() || local_draws.size() != 2) return Verdict{false, "criteria 2 and 3 did not complete"};
    return transparency(m12, local12, smp, local_draws, local_queries);
  });
  report(10, chernoff);

  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
