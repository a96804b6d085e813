#include "walkabout/lab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "walkabout/error.hpp"
#include "walkabout/oracle.hpp"
#include "walkabout/parallel.hpp"

namespace walkabout::lab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Instance {
  BridgedPair base;
  Graph decorated;
};

Instance make_instance(std::size_t n, double d, double psi, std::size_t t, std::size_t c1,
                       Rng& rng) {
  Instance inst{gen_bridged_pair(n, d, psi, rng), {}};
  inst.decorated = decorate(inst.base.graph, {t, c1}, rng);
  return inst;
}

}  // namespace

std::string RegimeCheck::message() const {
  std::ostringstream os;
  if (!d_ok) os << "d below 4 ln n = " << d_floor << "; ";
  if (!t_ok) os << "t above n/(10 d^2) = " << t_ceiling << "; ";
  std::string s = os.str();
  if (s.size() >= 2) s.resize(s.size() - 2);
  return s;
}

RegimeCheck check_regime(std::size_t n, double d, std::size_t t) {
  RegimeCheck r;
  r.d_floor = 4.0 * std::log(static_cast<double>(n));
  r.t_ceiling = static_cast<double>(n) / (10.0 * d * d);
  r.d_ok = d >= r.d_floor;
  r.t_ok = static_cast<double>(t) <= r.t_ceiling;
  return r;
}

double lab_psi(std::optional<double> psi, double d, std::size_t t) {
  return clamp_psi(psi ? *psi : d / static_cast<double>(t));
}

StarCurveReport star_discovery_curve(const StarCurveParams& p) {
  if (p.budgets.empty()) fail(ErrorCode::InvalidArgument, "no budgets given");
  StarCurveReport report;
  report.params = p;
  report.regime = check_regime(p.n, p.d, p.t);
  report.psi_used = lab_psi(p.psi, p.d, p.t);
  std::vector<std::size_t> budgets = p.budgets;
  std::sort(budgets.begin(), budgets.end());
  const std::size_t max_budget = budgets.back();

  std::vector<std::vector<TrialReport>> rows(p.trials);
  parallel_for(p.trials, p.jobs, [&](std::size_t trial) {
    Rng rng = Rng(p.seed).split(trial);
    const Instance inst = make_instance(p.n, p.d, report.psi_used, p.t, p.c1, rng);
    const Graph& g = inst.decorated;
    const auto seed = static_cast<VertexId>(rng.below(inst.base.graph.num_vertices()));
    const std::size_t d_max = degree_stats(g).d_max;
    for (std::size_t k = 0; k < p.strategies.size(); ++k) {
      const auto start = Clock::now();
      Rng srng = rng.split(k + 1);
      ExplorationOracle o(g, seed, {max_budget, srng.next(), false});
      CrawlOptions opt;
      opt.budget = max_budget;
      opt.max_walk_steps = p.walk_steps;
      opt.max_degree_bound = d_max;
      crawl(o, p.strategies[k], opt, srng);
      const double elapsed = seconds_since(start);
      // A crawl with a smaller budget is a prefix of this run: strategies never
      // look at the budget when choosing what to query next.
      const auto& ids = OracleAudit::queried_ids(o);
      for (std::size_t b : budgets) {
        const std::size_t prefix = std::min(b, ids.size());
        const AuditReport a = audit_vertices(g, std::span(ids.data(), prefix));
        TrialReport r;
        r.strategy = to_string(p.strategies[k]);
        r.trial = trial;
        r.budget = b;
        r.queries_used = prefix;
        r.star_centers_found = a.star_centers_queried_count;
        r.observed_nonqueried = a.observed_count;
        r.wall_time = elapsed;
        rows[trial].push_back(std::move(r));
      }
    }
  });

  for (auto& per_trial : rows) {
    for (auto& r : per_trial) report.trials.push_back(std::move(r));
  }
  for (CrawlerKind kind : p.strategies) {
    const std::string name = to_string(kind);
    double last_fraction = -1.0;
    for (std::size_t b : budgets) {
      CurvePoint pt;
      pt.strategy = name;
      pt.budget = b;
      pt.predicted_mean = 8.0 * static_cast<double>(b) / (p.d * static_cast<double>(p.t));
      std::size_t hits = 0, total = 0;
      for (const auto& r : report.trials) {
        if (r.strategy != name || r.budget != b) continue;
        ++pt.trials;
        hits += r.star_centers_found > 0;
        total += r.star_centers_found;
      }
      if (pt.trials > 0) {
        pt.fraction_found = static_cast<double>(hits) / static_cast<double>(pt.trials);
        pt.mean_found = static_cast<double>(total) / static_cast<double>(pt.trials);
      }
      if (pt.fraction_found < last_fraction) report.monotone = false;
      last_fraction = pt.fraction_found;
      report.curve.push_back(pt);
    }
  }
  return report;
}

std::string to_string(LabEstimator e) { return e == LabEstimator::Order ? "order" : "avg_degree"; }

LabEstimator lab_estimator_from_string(const std::string& name) {
  if (name == "order") return LabEstimator::Order;
  if (name == "avg_degree" || name == "avgdeg") return LabEstimator::AvgDegree;
  fail(ErrorCode::InvalidArgument, "unknown estimator '" + name + "'");
}

namespace {

// Estimator that sees only the oracle: half the budget on BFS (exact if that
// exhausts the graph), the rest on the collision or MaxDegree estimator.
double blind_estimate(NeighborOracle& o, LabEstimator which, const EstimatorConfig& cfg,
                      std::size_t budget, std::size_t order_samples, Rng& rng) {
  CrawlOptions bfs;
  bfs.budget = std::max<std::size_t>(1, budget / 2);
  const CrawlResult r = crawl(o, CrawlerKind::BFS, bfs, rng);
  if (r.exhausted) {
    if (which == LabEstimator::Order) return static_cast<double>(r.visited.size());
    double degree_sum = 0.0;
    for (VertexRef v : r.visited) degree_sum += static_cast<double>(o.query(v).degree);
    return degree_sum / static_cast<double>(r.visited.size());
  }
  if (which == LabEstimator::AvgDegree) return avg_degree(o, cfg, rng).value;
  try {
    return katzir_order(o, cfg, order_samples, rng).value;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InsufficientCollisions) throw;
    return static_cast<double>(o.revealed_count());
  }
}

}  // namespace

DistinguishReport indistinguishability_experiment(const DistinguishParams& p) {
  if (!(p.c > 0.0) || !(p.factor >= 1.0)) fail(ErrorCode::InvalidArgument, "c > 0 and factor >= 1 required");
  DistinguishReport report;
  report.params = p;
  report.regime = check_regime(p.n, p.d, p.t);
  report.budget = p.budget ? *p.budget
                           : std::max<std::size_t>(
                                 1, static_cast<std::size_t>(p.d * static_cast<double>(p.t) / p.c));
  const double psi = lab_psi(p.psi, p.d, p.t);

  struct Row {
    TrialReport report;
    bool decorated = false;
    std::size_t n1 = 0, n2 = 0;
  };
  std::vector<Row> rows(p.trials);
  parallel_for(p.trials, p.jobs, [&](std::size_t trial) {
    const auto start = Clock::now();
    Rng rng = Rng(p.seed).split(trial);
    const Instance inst = make_instance(p.n, p.d, psi, p.t, p.c1, rng);
    const bool decorated = rng.bernoulli(0.5);
    const Graph& g = decorated ? inst.decorated : inst.base.graph;
    // Same hints for both arms, so the configuration itself leaks nothing.
    EstimatorConfig cfg;
    cfg.epsilon = p.epsilon;
    cfg.delta = p.delta;
    cfg.t_mix_hint = p.t;
    cfg.d_max_bound =
        std::max(degree_stats(inst.decorated).d_max, degree_stats(inst.base.graph).d_max);
    cfg.d_avg_hint = p.d;
    cfg.budget_mode = BudgetMode::Truncate;
    const auto seed = static_cast<VertexId>(rng.below(inst.base.graph.num_vertices()));
    ExplorationOracle o(g, seed, {report.budget, rng.next(), false});
    Row& row = rows[trial];
    row.decorated = decorated;
    row.n1 = inst.decorated.num_vertices();
    row.n2 = inst.base.graph.num_vertices();
    TrialReport& r = row.report;
    r.strategy = to_string(p.estimator);
    r.arm = decorated ? "G1" : "G2";
    r.trial = trial;
    r.budget = report.budget;
    r.estimate = blind_estimate(o, p.estimator, cfg, report.budget, p.order_samples, rng);
    r.truth = p.estimator == LabEstimator::Order ? static_cast<double>(g.num_vertices())
                                                 : degree_stats(g).d_avg;
    r.queries_used = o.query_count();
    r.star_centers_found = audit(o).star_centers_queried_count;
    r.wall_time = seconds_since(start);
  });

  double sum_n1 = 0.0, sum_n2 = 0.0;
  for (auto& row : rows) {
    sum_n1 += static_cast<double>(row.n1);
    sum_n2 += static_cast<double>(row.n2);
    ArmSummary& arm = row.decorated ? report.decorated : report.undecorated;
    const double est = *row.report.estimate, truth = *row.report.truth;
    ++arm.trials;
    arm.accurate += est > 0.0 && est <= truth * p.factor && est >= truth / p.factor;
    arm.mean_truth += truth;
    arm.mean_estimate += est;
    report.trials.push_back(std::move(row.report));
  }
  for (ArmSummary* arm : {&report.decorated, &report.undecorated}) {
    if (arm->trials == 0) continue;
    const double k = static_cast<double>(arm->trials);
    arm->accuracy = static_cast<double>(arm->accurate) / k;
    arm->mean_truth /= k;
    arm->mean_estimate /= k;
  }
  report.order_ratio = sum_n2 > 0.0 ? sum_n1 / sum_n2 : 0.0;
  report.indistinguishable =
      std::min(report.decorated.accuracy, report.undecorated.accuracy) <= 0.6;
  return report;
}

BiasedReport biased_function_experiment(const BiasedParams& p) {
  if (!(p.epsilon > 0.0 && p.epsilon <= 0.5)) {
    fail(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1/2]");
  }
  if (!(p.delta > 0.0 && p.delta < 1.0)) fail(ErrorCode::InvalidArgument, "delta must lie in (0, 1)");
  BiasedReport report;
  report.params = p;
  report.regime = check_regime(p.n, p.d, p.t);
  report.center_requirement = static_cast<std::size_t>(
      std::ceil(std::log(1.0 / p.delta) / (p.epsilon * p.epsilon)));
  const double psi = lab_psi(p.psi, p.d, p.t);
  std::vector<std::size_t> budgets = p.budgets;
  std::sort(budgets.begin(), budgets.end());

  struct Row {
    std::vector<TrialReport> reports;
    std::vector<bool> success;
    std::vector<std::size_t> starred;
    double gap = 0.0, starred_fraction = 0.0;
  };
  std::vector<Row> rows(p.trials);
  parallel_for(p.trials, p.jobs, [&](std::size_t trial) {
    Rng rng = Rng(p.seed).split(trial);
    const Instance inst = make_instance(p.n, p.d, psi, p.t, 1, rng);
    const Graph& g = inst.decorated;
    const std::size_t n = g.num_vertices();
    std::vector<double> f1(n, 0.0), f2(n, 0.0);
    std::size_t starred = 0;
    for (VertexId v = 0; v < n; ++v) {
      if (!is_starred(g.label(v).role)) continue;
      ++starred;
      f1[v] = rng.bernoulli(0.5 + p.epsilon) ? 1.0 : 0.0;
      f2[v] = rng.bernoulli(0.5 - p.epsilon) ? 1.0 : 0.0;
    }
    const bool first = rng.bernoulli(0.5);
    const Graph labelled = g.with_values(first ? f1 : f2);
    Row& row = rows[trial];
    row.starred_fraction = static_cast<double>(starred) / static_cast<double>(n);
    row.gap = f_average(g.with_values(f1)) - f_average(g.with_values(f2));
    const double truth = f_average(labelled);
    const double midpoint = 0.5 * row.starred_fraction;
    const DegreeStats stats = degree_stats(labelled);

    EstimatorConfig cfg;
    cfg.epsilon = p.epsilon;
    cfg.delta = p.delta;
    cfg.t_mix_hint = p.t_mix_hint.value_or(p.t);
    cfg.d_max_bound = stats.d_max;
    cfg.d_avg_hint = stats.d_avg;
    cfg.budget_mode = BudgetMode::Truncate;
    const auto seed = static_cast<VertexId>(rng.below(inst.base.graph.num_vertices()));
    const std::uint64_t walk_seed = rng.next(), id_seed = rng.next();
    for (std::size_t b : budgets) {
      const auto start = Clock::now();
      // Same walk randomness at every budget: smaller budgets see a prefix of the run.
      Rng walk_rng(walk_seed);
      ExplorationOracle o(labelled, seed, {b, id_seed, false});
      TrialReport r;
      r.strategy = "mdw";
      r.arm = first ? "F1" : "F2";
      r.trial = trial;
      r.budget = b;
      if (b > 0) r.estimate = mdw_average(o, cfg, walk_rng).value;
      else r.estimate = 0.0;
      r.truth = truth;
      r.queries_used = o.query_count();
      const AuditReport a = audit(o);
      r.star_centers_found = a.star_centers_queried_count;
      r.observed_nonqueried = a.observed_count;
      r.wall_time = seconds_since(start);
      row.success.push_back(first ? *r.estimate > midpoint : *r.estimate < midpoint);
      row.starred.push_back(a.starred_queried_count);
      row.reports.push_back(std::move(r));
    }
  });

  double gap_sum = 0.0, frac_sum = 0.0;
  for (const Row& row : rows) {
    gap_sum += row.gap;
    frac_sum += row.starred_fraction;
    report.max_gap_deviation = std::max(report.max_gap_deviation,
                                        std::abs(row.gap - 2.0 * p.epsilon * row.starred_fraction));
  }
  const double trials = static_cast<double>(std::max<std::size_t>(p.trials, 1));
  report.mean_gap = gap_sum / trials;
  report.expected_gap = 2.0 * p.epsilon * frac_sum / trials;
  for (std::size_t k = 0; k < budgets.size(); ++k) {
    BiasedPoint pt;
    pt.budget = budgets[k];
    pt.predicted_centers = 8.0 * static_cast<double>(budgets[k]) / (p.d * static_cast<double>(p.t));
    pt.below_requirement = pt.predicted_centers < 1.0 / (p.epsilon * p.epsilon);
    double centers = 0.0, starred = 0.0;
    for (const Row& row : rows) {
      ++pt.trials;
      pt.successes += row.success[k];
      centers += static_cast<double>(row.reports[k].star_centers_found);
      starred += static_cast<double>(row.starred[k]);
    }
    if (pt.trials > 0) {
      const double t = static_cast<double>(pt.trials);
      pt.success_rate = static_cast<double>(pt.successes) / t;
      pt.mean_centers_found = centers / t;
      pt.mean_starred_found = starred / t;
    }
    report.points.push_back(pt);
  }
  for (auto& row : rows) {
    for (auto& r : row.reports) report.trials.push_back(std::move(r));
  }
  return report;
}

ObservedReport observed_vertex_audit(const ObservedParams& p) {
  if (p.q == 0 || p.trials == 0 || p.trials_per_graph == 0) {
    fail(ErrorCode::InvalidArgument, "q, trials and trials_per_graph must be positive");
  }
  ObservedReport report;
  report.params = p;
  const double n = static_cast<double>(p.n), q = static_cast<double>(p.q);
  report.observed_bound = q * (q - 1.0) / 2.0 * (p.d + p.psi) * (p.d + p.psi) / n;
  report.edge_bound = 100.0 * q * q * p.d / n;
  report.bound_is_vacuous = report.observed_bound >= 1.0;

  const std::size_t graphs = (p.trials + p.trials_per_graph - 1) / p.trials_per_graph;
  std::vector<std::vector<TrialReport>> rows(graphs);
  std::vector<double> sizes(graphs, 0.0);
  parallel_for(graphs, p.jobs, [&](std::size_t gi) {
    Rng rng = Rng(p.seed).split(gi);
    GenOptions opts;
    opts.policy = ConnectivityPolicy::GiantComponent;
    const BridgedPair h = gen_bridged_pair(p.n, p.d, p.psi, rng, opts);
    const Graph& g = h.graph;
    sizes[gi] = static_cast<double>(g.num_vertices());
    const std::size_t first = gi * p.trials_per_graph;
    const std::size_t last = std::min(p.trials, first + p.trials_per_graph);
    for (std::size_t trial = first; trial < last; ++trial) {
      const auto start = Clock::now();
      Rng trng = rng.split(trial + 1);
      const auto seed = static_cast<VertexId>(trng.below(g.num_vertices()));
      ExplorationOracle o(g, seed, {p.q, trng.next(), false});
      CrawlOptions opt;
      opt.budget = p.q;
      opt.record_moves = true;
      const CrawlResult cr = crawl(o, CrawlerKind::LazyWalk, opt, trng);
      std::set<std::pair<VertexId, VertexId>> traversed;
      for (const auto& [a, b] : cr.moves) {
        const VertexId u = OracleAudit::hidden_id(o, a), v = OracleAudit::hidden_id(o, b);
        traversed.emplace(std::min(u, v), std::max(u, v));
      }
      const AuditReport a = audit(o);
      TrialReport r;
      r.strategy = to_string(CrawlerKind::LazyWalk);
      r.trial = trial;
      r.budget = p.q;
      r.queries_used = a.queried_count;
      r.observed_nonqueried = a.observed_count;
      r.estimate = static_cast<double>(a.queried_pair_edges - traversed.size());
      r.wall_time = seconds_since(start);
      rows[gi].push_back(std::move(r));
    }
  });

  std::size_t observed = 0, within = 0;
  double nontraversed = 0.0;
  for (auto& per_graph : rows) {
    for (auto& r : per_graph) {
      observed += r.observed_nonqueried > 0;
      within += *r.estimate <= report.edge_bound;
      nontraversed += *r.estimate;
      report.trials.push_back(std::move(r));
    }
  }
  const double k = static_cast<double>(report.trials.size());
  report.p_observed = static_cast<double>(observed) / k;
  report.edge_bound_rate = static_cast<double>(within) / k;
  report.mean_nontraversed = nontraversed / k;
  double size_sum = 0.0;
  for (double s : sizes) size_sum += s;
  report.mean_vertices = size_sum / static_cast<double>(graphs);
  return report;
}

namespace {

MixingReport exact_or_sampled(const Graph& g, double threshold, std::size_t limit, unsigned jobs,
                              std::uint64_t seed) {
  MixingOptions opts;
  opts.worst_case_limit = limit;
  opts.jobs = jobs;
  const StartPolicy policy = g.num_vertices() <= limit ? StartPolicy::worst_case()
                                                       : StartPolicy::sampled(32, seed);
  return mixing_time(g, ChainKernel::lazy_simple(), threshold, policy, opts);
}

}  // namespace

std::vector<DecoratedMixingRow> decorated_mixing_trend(const DecoratedMixingParams& p) {
  std::vector<DecoratedMixingRow> rows;
  for (std::size_t k = 0; k < p.ts.size(); ++k) {
    Rng rng = Rng(p.seed).split(k);
    DecoratedMixingRow row;
    row.t = p.ts[k];
    row.psi = lab_psi(p.psi, p.d, row.t);
    const Instance inst = make_instance(p.n, p.d, row.psi, row.t, p.c1, rng);
    row.base_vertices = inst.base.graph.num_vertices();
    row.decorated_vertices = inst.decorated.num_vertices();
    const MixingReport base =
        exact_or_sampled(inst.base.graph, p.threshold, p.exact_limit, p.jobs, rng.next());
    const MixingReport dec =
        exact_or_sampled(inst.decorated, p.threshold, p.exact_limit, p.jobs, rng.next());
    row.tau_base = base.tau;
    row.tau_decorated = dec.tau;
    row.lower_estimate = base.lower_estimate || dec.lower_estimate;
    row.ratio = base.tau > 0 ? static_cast<double>(dec.tau) / static_cast<double>(base.tau) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

std::vector<PsiMixingRow> psi_mixing_trend(const PsiMixingParams& p) {
  std::vector<PsiMixingRow> rows;
  for (std::size_t s = 0; s < p.seeds; ++s) {
    PsiMixingRow row;
    row.seed_index = s;
    for (double psi : p.psis) {
      // Same stream per psi: identical halves, only the bridges differ.
      Rng rng = Rng(p.seed).split(s);
      const BridgedPair h = gen_bridged_pair(p.n, p.d, psi, rng);
      MixingOptions opts;
      opts.worst_case_limit = std::max<std::size_t>(2000, h.graph.num_vertices());
      opts.jobs = p.jobs;
      row.taus.push_back(mixing_time(h.graph, ChainKernel::lazy_simple(), p.threshold,
                                     StartPolicy::worst_case(), opts).tau);
    }
    row.increasing = true;
    for (std::size_t j = 1; j < row.taus.size(); ++j) {
      const bool psi_down = p.psis[j] < p.psis[j - 1];
      const bool tau_up = row.taus[j] > row.taus[j - 1];
      if (psi_down != tau_up) row.increasing = false;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ChernoffReport chernoff_check(const ChernoffParams& p) {
  ChernoffReport report;
  report.params = p;
  Rng rng(p.seed);
  const Graph base = gen_erdos_renyi(p.n, p.d / static_cast<double>(p.n), rng);
  report.d_max = degree_stats(base).d_max;
  const ChainKernel kernel = ChainKernel::max_degree(report.d_max);
  MixingOptions opts;
  opts.jobs = p.jobs;
  report.t_mix = mixing_time(base, kernel, p.threshold, StartPolicy::worst_case(), opts).tau;

  // Indicator of a fixed random half of the vertices.
  std::vector<VertexId> order(p.n);
  for (VertexId v = 0; v < p.n; ++v) order[v] = v;
  rng.shuffle(std::span<VertexId>(order));
  std::vector<double> f(p.n, 0.0);
  for (std::size_t i = 0; i < p.n / 2; ++i) f[order[i]] = 1.0;
  const Graph g = base.with_values(f);
  report.mu = f_average(g);

  for (std::size_t ci = 0; ci < p.cs.size(); ++ci) {
    ChernoffRow row;
    row.c = p.cs[ci];
    row.steps = static_cast<std::size_t>(std::ceil(row.c * static_cast<double>(report.t_mix)));
    row.bound = std::exp(-p.delta_prime * p.delta_prime * row.c / 72.0);
    std::vector<char> deviated(p.trials, 0);
    parallel_for(p.trials, p.jobs, [&](std::size_t trial) {
      Rng trng = Rng(p.seed).split(1000003 * (ci + 1) + trial);
      // Uniform start is the chain's stationary distribution, so ||phi||_pi = 1.
      auto v = static_cast<VertexId>(trng.below(g.num_vertices()));
      double x = 0.0;
      for (std::size_t s = 0; s < row.steps; ++s) {
        v = walk_step(g, kernel, v, trng);
        x += g.label(v).f_value;
      }
      deviated[trial] = std::abs(x / static_cast<double>(row.steps) - report.mu) >= p.delta_prime;
    });
    std::size_t count = 0;
    for (char dev : deviated) count += dev;
    row.empirical = static_cast<double>(count) / static_cast<double>(std::max<std::size_t>(p.trials, 1));
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace walkabout::lab
