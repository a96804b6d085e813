#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "walkabout/chains.hpp"
#include "walkabout/crawlers.hpp"
#include "walkabout/estimators.hpp"
#include "walkabout/generators.hpp"

namespace walkabout::lab {

// Concrete guards for d = omega(log n) and t = o(n / d^2).
struct RegimeCheck {
  double d_floor = 0.0;    // 4 ln n
  double t_ceiling = 0.0;  // n / (10 d^2)
  bool d_ok = true;
  bool t_ok = true;

  bool violated() const { return !d_ok || !t_ok; }
  std::string message() const;
};

RegimeCheck check_regime(std::size_t n, double d, std::size_t t);

struct TrialReport {
  std::string strategy;
  std::string arm;
  std::size_t trial = 0;
  std::size_t budget = 0;
  std::size_t queries_used = 0;
  std::size_t star_centers_found = 0;
  std::size_t observed_nonqueried = 0;
  std::optional<double> estimate;
  std::optional<double> truth;
  double wall_time = 0.0;  // seconds; not serialized, so reports stay reproducible
};

// psi for the bridged base graph: explicit value, else d / t, clamped below 1.
double lab_psi(std::optional<double> psi, double d, std::size_t t);

// ---------------------------------------------------------------- star discovery

struct StarCurveParams {
  std::size_t n = 4000;
  double d = 40;
  std::size_t t = 10;
  std::size_t c1 = 1;
  std::optional<double> psi;
  std::vector<CrawlerKind> strategies = all_crawlers();
  std::vector<std::size_t> budgets = {20, 200, 2000};
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
  std::size_t walk_steps = 0;  // walk crawler step cap; 0 = 100 * max budget + 1000
};

struct CurvePoint {
  std::string strategy;
  std::size_t budget = 0;
  std::size_t trials = 0;
  double fraction_found = 0.0;
  double mean_found = 0.0;
  double predicted_mean = 0.0;  // 8 q / (d t)
};

struct StarCurveReport {
  StarCurveParams params;
  RegimeCheck regime;
  double psi_used = 0.0;
  std::vector<CurvePoint> curve;
  std::vector<TrialReport> trials;
  bool monotone = true;  // discovery fraction non-decreasing in budget for every strategy
};

StarCurveReport star_discovery_curve(const StarCurveParams& p);

// ---------------------------------------------------------------- G1 vs G2

enum class LabEstimator { Order, AvgDegree };
std::string to_string(LabEstimator e);
LabEstimator lab_estimator_from_string(const std::string& name);

struct DistinguishParams {
  std::size_t n = 4000;
  double d = 40;
  std::size_t t = 10;
  std::size_t c1 = 1;
  std::optional<double> psi;
  double c = 20;                       // budget = d t / c unless overridden
  std::optional<std::size_t> budget;
  LabEstimator estimator = LabEstimator::Order;
  std::size_t trials = 200;
  double factor = 1.4;                 // an estimate is accurate within this factor of the truth
  double epsilon = 0.2;
  double delta = 0.1;
  std::size_t order_samples = 2000;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
};

struct ArmSummary {
  std::size_t trials = 0;
  std::size_t accurate = 0;
  double accuracy = 0.0;
  double mean_truth = 0.0;
  double mean_estimate = 0.0;
};

struct DistinguishReport {
  DistinguishParams params;
  RegimeCheck regime;
  std::size_t budget = 0;
  ArmSummary decorated;    // G1
  ArmSummary undecorated;  // G2
  double order_ratio = 0.0;  // mean |V(G1)| / mean |V(G2)| over all generated pairs
  std::vector<TrialReport> trials;
  // min over arms of the accuracy rate is at most 0.6
  bool indistinguishable = false;
};

DistinguishReport indistinguishability_experiment(const DistinguishParams& p);

// ---------------------------------------------------------------- biased functions

struct BiasedParams {
  std::size_t n = 4000;
  double d = 40;
  std::size_t t = 10;
  std::optional<double> psi;
  double epsilon = 0.2;
  double delta = 0.1;
  std::vector<std::size_t> budgets = {20, 200, 1000, 4000, 20000, 500000};
  std::size_t trials = 200;
  std::optional<std::size_t> t_mix_hint;  // defaults to t
  std::uint64_t seed = 1;
  unsigned jobs = 0;
};

struct BiasedPoint {
  std::size_t budget = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  double predicted_centers = 0.0;  // 8 q / (d t)
  double mean_centers_found = 0.0;
  double mean_starred_found = 0.0;
  bool below_requirement = false;  // predicted_centers < eps^-2
};

struct BiasedReport {
  BiasedParams params;
  RegimeCheck regime;
  std::size_t center_requirement = 0;  // ceil(eps^-2 ln(1/delta))
  double mean_gap = 0.0;               // mean of f_avg(F1) - f_avg(F2)
  double expected_gap = 0.0;           // 2 eps * mean starred fraction
  double max_gap_deviation = 0.0;      // max |gap - 2 eps * starred fraction| per instance
  std::vector<BiasedPoint> points;
  std::vector<TrialReport> trials;
};

BiasedReport biased_function_experiment(const BiasedParams& p);

// ---------------------------------------------------------------- observed vertices

struct ObservedParams {
  std::size_t n = 100000;
  double d = 10;
  double psi = 0.5;
  std::size_t q = 30;
  std::size_t trials = 500;
  std::size_t trials_per_graph = 1;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
};

struct ObservedReport {
  ObservedParams params;
  double observed_bound = 0.0;   // C(q,2) (d+psi)^2 / n
  double edge_bound = 0.0;       // 100 q^2 d / n
  bool bound_is_vacuous = false; // observed_bound >= 1
  double p_observed = 0.0;
  double edge_bound_rate = 0.0;  // fraction of trials with non-traversed edges <= edge_bound
  double mean_nontraversed = 0.0;
  double mean_vertices = 0.0;    // graph size after keeping the giant component
  std::vector<TrialReport> trials;
};

ObservedReport observed_vertex_audit(const ObservedParams& p);

// ---------------------------------------------------------------- mixing trends

struct DecoratedMixingParams {
  std::size_t n = 1000;
  double d = 20;
  std::vector<std::size_t> ts = {5, 10, 20};
  std::size_t c1 = 1;
  std::optional<double> psi;
  double threshold = 0.25;
  std::size_t exact_limit = 5000;  // worst-case iteration up to this many vertices
  std::uint64_t seed = 1;
  unsigned jobs = 0;
};

struct DecoratedMixingRow {
  std::size_t t = 0;
  double psi = 0.0;
  std::size_t base_vertices = 0;
  std::size_t decorated_vertices = 0;
  std::size_t tau_base = 0;
  std::size_t tau_decorated = 0;
  double ratio = 0.0;
  bool lower_estimate = false;
};

std::vector<DecoratedMixingRow> decorated_mixing_trend(const DecoratedMixingParams& p);

struct PsiMixingParams {
  std::size_t n = 1000;
  double d = 20;
  std::vector<double> psis = {0.8, 0.4, 0.2};
  std::size_t seeds = 5;
  double threshold = 0.25;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
};

struct PsiMixingRow {
  std::size_t seed_index = 0;
  std::vector<std::size_t> taus;  // aligned with psis
  bool increasing = false;        // tau strictly increases as psi decreases
};

std::vector<PsiMixingRow> psi_mixing_trend(const PsiMixingParams& p);

// ---------------------------------------------------------------- Markov Chernoff

struct ChernoffParams {
  std::size_t n = 500;
  double d = 15;
  std::vector<double> cs = {20, 50, 100};
  double delta_prime = 0.2;
  double threshold = 0.125;  // l1 threshold defining t_mix for the bound
  std::size_t trials = 2000;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
};

struct ChernoffRow {
  double c = 0.0;
  std::size_t steps = 0;
  double empirical = 0.0;  // P(|X/t - mu| >= delta')
  double bound = 0.0;      // exp(-delta'^2 c / 72), C = 1, stationary start
};

struct ChernoffReport {
  ChernoffParams params;
  std::size_t t_mix = 0;
  std::size_t d_max = 0;
  double mu = 0.0;
  std::vector<ChernoffRow> rows;
};

ChernoffReport chernoff_check(const ChernoffParams& p);

}  // namespace walkabout::lab
