#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "walkabout/chains.hpp"
#include "walkabout/oracle.hpp"
#include "walkabout/rng.hpp"

namespace walkabout {

enum class BudgetMode {
  Fail,      // BudgetExhausted propagates to the caller
  Truncate,  // stop at the budget and return what was accumulated
};

struct EstimatorConfig {
  double epsilon = 0.1;
  double delta = 0.1;
  std::size_t t_mix_hint = 1;
  std::size_t d_max_bound = 1;  // D
  std::size_t d_min_hint = 1;
  std::optional<double> d_avg_hint;
  BudgetMode budget_mode = BudgetMode::Fail;
};

// Throws ConfigInvalid on out-of-range fields.
void validate_config(const EstimatorConfig& cfg);

struct EstimateOutcome {
  double value = 0.0;
  std::size_t queries_used = 0;
  std::size_t steps_taken = 0;
  bool truncated = false;
  bool d_avg_from_pilot = false;
  double d_avg_used = 0.0;
  std::size_t samples = 0;
  std::size_t accepted = 0;
  std::size_t collisions = 0;
  // Step and sample counts derived from the config, with the expanded arithmetic
  // that produced each one.
  std::map<std::string, std::size_t> schedule;
  std::map<std::string, std::string> formulas;
};

// Per-vertex value accumulated by the walk estimators. Defaults to the oracle's f value.
using ValueFn = std::function<double(const QueryResult&)>;

EstimateOutcome mdw_average(NeighborOracle& o, const EstimatorConfig& cfg, Rng& rng,
                            const ValueFn& value = {});
EstimateOutcome metropolis_average(NeighborOracle& o, const EstimatorConfig& cfg, Rng& rng,
                                   const ValueFn& value = {});
EstimateOutcome rejection_average(NeighborOracle& o, const EstimatorConfig& cfg, Rng& rng,
                                  const ValueFn& value = {});
EstimateOutcome weighted_average(NeighborOracle& o, const EstimatorConfig& cfg, Rng& rng,
                                 const ValueFn& value = {});

enum class SampleMethod { MaxDegreeWalk, Rejection };

struct SampleOutcome {
  VertexRef vertex;
  std::size_t queries_used = 0;
  std::size_t steps_taken = 0;
  std::size_t attempts = 1;
};

// Every draw restarts from the seed; cached queries make repeat draws cheap.
SampleOutcome uniform_sample(NeighborOracle& o, const EstimatorConfig& cfg, SampleMethod method,
                             Rng& rng);

// Collision-based order estimate from `sample_count` thinned lazy-walk samples.
EstimateOutcome katzir_order(NeighborOracle& o, const EstimatorConfig& cfg,
                             std::size_t sample_count, Rng& rng);

EstimateOutcome avg_degree(NeighborOracle& o, const EstimatorConfig& cfg, Rng& rng);

// Pilot estimate of d_avg: harmonic mean of degrees over `samples` thinned lazy-walk samples.
double pilot_average_degree(NeighborOracle& o, const EstimatorConfig& cfg, Rng& rng,
                            std::size_t samples = 100, std::size_t* steps = nullptr);

// Walk driven purely through oracle queries.
class OracleWalk {
 public:
  OracleWalk(NeighborOracle& o, ChainKernel k);

  // One kernel step; queries the landing vertex. Returns true when the walk moved.
  bool step(Rng& rng);
  const QueryResult& current() const { return *current_; }
  void restart();

 private:
  NeighborOracle* oracle_;
  ChainKernel kernel_;
  const QueryResult* current_;
};

const char* to_string(SampleMethod m);
const char* to_string(BudgetMode m);

}  // namespace walkabout
