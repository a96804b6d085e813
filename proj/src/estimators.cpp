#include "walkabout/estimators.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

#include "walkabout/error.hpp"

namespace walkabout {

namespace {

struct Accumulator {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::size_t ceil_count(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) fail(ErrorCode::ConfigInvalid, "step count not finite");
  return static_cast<std::size_t>(std::ceil(x - 1e-9));
}

bool is_budget(const Error& e) { return e.code() == ErrorCode::BudgetExhausted; }

// Runs body; a BudgetExhausted in Truncate mode marks the outcome instead of propagating.
template <typename Body>
void guarded(const EstimatorConfig& cfg, EstimateOutcome& out, Body&& body) {
  try {
    body();
  } catch (const Error& e) {
    if (!is_budget(e) || cfg.budget_mode == BudgetMode::Fail) throw;
    out.truncated = true;
  }
}

double value_of(const ValueFn& value, const QueryResult& q) {
  return value ? value(q) : q.f_value;
}

std::size_t thinning(const EstimatorConfig& cfg) {
  return cfg.t_mix_hint * static_cast<std::size_t>(std::ceil(std::log(1.0 / cfg.epsilon)));
}

std::string thinning_formula(const EstimatorConfig& cfg) {
  return num(static_cast<double>(cfg.t_mix_hint)) + "*ceil(ln(1/" + num(cfg.epsilon) + ")) = " +
         std::to_string(thinning(cfg));
}

// Uses the hint when given, otherwise runs the pilot and records that it did.
double resolve_d_avg(NeighborOracle& o, const EstimatorConfig& cfg, Rng& rng,
                     EstimateOutcome& out) {
  if (cfg.d_avg_hint) {
    out.d_avg_used = *cfg.d_avg_hint;
    return out.d_avg_used;
  }
  std::size_t steps = 0;
  out.d_avg_used = pilot_average_degree(o, cfg, rng, 100, &steps);
  out.d_avg_from_pilot = true;
  out.steps_taken += steps;
  out.schedule["pilot_steps"] = steps;
  return out.d_avg_used;
}

// Shared body of the MaxDegree and Metropolis estimators: burn-in, then accumulate
// until the walk has moved `target` times.
EstimateOutcome move_counting_average(NeighborOracle& o, const EstimatorConfig& cfg,
                                      ChainKernel kernel, double precision, Rng& rng,
                                      const ValueFn& value) {
  validate_config(cfg);
  const std::size_t before = o.query_count();
  EstimateOutcome out;
  guarded(cfg, out, [&] { resolve_d_avg(o, cfg, rng, out); });
  if (out.truncated) {
    out.queries_used = o.query_count() - before;
    return out;
  }
  const double D = static_cast<double>(cfg.d_max_bound);
  const double dmin = static_cast<double>(cfg.d_min_hint);
  const double tmix = static_cast<double>(cfg.t_mix_hint);
  const double log_term = std::log(1.0 / cfg.delta);
  const std::size_t burn = ceil_count(tmix * D / dmin);
  const std::size_t target =
      ceil_count((out.d_avg_used / dmin) * tmix * log_term / (precision * precision));
  out.schedule["burn_in"] = burn;
  out.schedule["target_moves"] = target;
  out.formulas["burn_in"] =
      num(tmix) + "*" + num(D) + "/" + num(dmin) + " = " + std::to_string(burn);
  out.formulas["target_moves"] = "ceil((" + num(out.d_avg_used) + "/" + num(dmin) + ")*" +
                                 num(tmix) + "*" + num(precision) + "^-2*ln(1/" +
                                 num(cfg.delta) + ")) = " + std::to_string(target);

  Accumulator burn_sum, sum;
  std::size_t burn_steps = 0, steps = 0, moves = 0;
  guarded(cfg, out, [&] {
    OracleWalk walk(o, kernel);
    while (burn_steps < burn) {
      walk.step(rng);
      ++burn_steps;
      burn_sum.add(value_of(value, walk.current()));
    }
    while (moves < target) {
      if (walk.step(rng)) ++moves;
      ++steps;
      sum.add(value_of(value, walk.current()));
    }
  });
  out.steps_taken += burn_steps + steps;
  out.samples = steps;
  if (steps > 0) {
    out.value = sum.value() / static_cast<double>(steps);
  } else if (burn_steps > 0) {
    out.value = burn_sum.value() / static_cast<double>(burn_steps);
  }
  out.queries_used = o.query_count() - before;
  return out;
}

}  // namespace

void validate_config(const EstimatorConfig& cfg) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
    fail(ErrorCode::ConfigInvalid, "epsilon must lie in (0, 1)");
  }
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) fail(ErrorCode::ConfigInvalid, "delta must lie in (0, 1)");
  if (cfg.t_mix_hint == 0) fail(ErrorCode::ConfigInvalid, "t_mix hint must be positive");
  if (cfg.d_max_bound == 0) fail(ErrorCode::ConfigInvalid, "degree bound D must be positive");
  if (cfg.d_min_hint == 0) fail(ErrorCode::ConfigInvalid, "d_min hint must be positive");
  if (cfg.d_avg_hint && !(*cfg.d_avg_hint > 0.0)) {
    fail(ErrorCode::ConfigInvalid, "d_avg hint must be positive");
  }
}

OracleWalk::OracleWalk(NeighborOracle& o, ChainKernel k)
    : oracle_(&o), kernel_(k), current_(&o.query(o.seed())) {}

void OracleWalk::restart() { current_ = &oracle_->query(oracle_->seed()); }

bool OracleWalk::step(Rng& rng) {
  const QueryResult& here = *current_;
  auto degree_of = [&](std::size_t i) -> std::size_t {
    if (auto d = oracle_->peek_degree(here.neighbors[i])) return *d;
    return oracle_->query(here.neighbors[i]).degree;
  };
  auto next = kernel_step(kernel_, here.degree, degree_of, rng);
  if (!next) return false;
  current_ = &oracle_->query(here.neighbors[*next]);
  return true;
}

double pilot_average_degree(NeighborOracle& o, const EstimatorConfig& cfg, Rng& rng,
                            std::size_t samples, std::size_t* steps) {
  const std::size_t T = thinning(cfg);
  OracleWalk walk(o, ChainKernel::lazy_simple());
  Accumulator inv;
  std::size_t taken = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < T; ++i) walk.step(rng);
    taken += T;
    inv.add(1.0 / static_cast<double>(walk.current().degree));
  }
  if (steps) *steps = taken;
  return static_cast<double>(samples) / inv.value();
}

EstimateOutcome mdw_average(NeighborOracle& o, const EstimatorConfig& cfg, Rng& rng,
                            const ValueFn& value) {
  return move_counting_average(o, cfg, ChainKernel::max_degree(cfg.d_max_bound), cfg.epsilon,
                               rng, value);
}

EstimateOutcome metropolis_average(NeighborOracle& o, const EstimatorConfig& cfg, Rng& rng,
                                   const ValueFn& value) {
  return move_counting_average(o, cfg, ChainKernel::metropolis(), cfg.epsilon, rng, value);
}

EstimateOutcome rejection_average(NeighborOracle& o, const EstimatorConfig& cfg, Rng& rng,
                                  const ValueFn& value) {
  validate_config(cfg);
  const std::size_t before = o.query_count();
  EstimateOutcome out;
  Accumulator sum;
  guarded(cfg, out, [&] {
    const double d_avg = resolve_d_avg(o, cfg, rng, out);
    const std::size_t T = thinning(cfg);
    const std::size_t K =
        ceil_count(d_avg * std::log(1.0 / cfg.delta) / (cfg.epsilon * cfg.epsilon));
    out.schedule["thinning"] = T;
    out.schedule["samples"] = K;
    out.formulas["thinning"] = thinning_formula(cfg);
    out.formulas["samples"] = "ceil(" + num(d_avg) + "*" + num(cfg.epsilon) + "^-2*ln(1/" +
                              num(cfg.delta) + ")) = " + std::to_string(K);
    OracleWalk walk(o, ChainKernel::lazy_simple());
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t i = 0; i < T; ++i) walk.step(rng);
      out.steps_taken += T;
      ++out.samples;
      const QueryResult& v = walk.current();
      if (rng.bernoulli(1.0 / static_cast<double>(v.degree))) {
        ++out.accepted;
        sum.add(value_of(value, v));
      }
    }
  });
  out.queries_used = o.query_count() - before;
  if (out.accepted == 0) {
    fail(ErrorCode::NoAcceptedSamples,
         "no sample accepted out of " + std::to_string(out.samples));
  }
  out.value = sum.value() / static_cast<double>(out.accepted);
  return out;
}

EstimateOutcome weighted_average(NeighborOracle& o, const EstimatorConfig& cfg, Rng& rng,
                                 const ValueFn& value) {
  validate_config(cfg);
  const std::size_t before = o.query_count();
  EstimateOutcome out;
  Accumulator sum;
  std::size_t counted = 0;
  guarded(cfg, out, [&] {
    const double d_avg = resolve_d_avg(o, cfg, rng, out);
    const std::size_t burn = thinning(cfg);
    const double tmix = static_cast<double>(cfg.t_mix_hint);
    const std::size_t T = ceil_count(tmix * d_avg * d_avg * std::log(1.0 / cfg.delta) /
                                     (cfg.epsilon * cfg.epsilon));
    out.schedule["burn_in"] = burn;
    out.schedule["steps"] = T;
    out.formulas["burn_in"] = thinning_formula(cfg);
    out.formulas["steps"] = "ceil(" + num(tmix) + "*" + num(d_avg) + "^2*" + num(cfg.epsilon) +
                            "^-2*ln(1/" + num(cfg.delta) + ")) = " + std::to_string(T);
    OracleWalk walk(o, ChainKernel::lazy_simple());
    for (std::size_t i = 0; i < burn; ++i) {
      walk.step(rng);
      ++out.steps_taken;
    }
    for (std::size_t i = 0; i < T; ++i) {
      walk.step(rng);
      ++out.steps_taken;
      const QueryResult& v = walk.current();
      sum.add(value_of(value, v) / static_cast<double>(v.degree));
      ++counted;
    }
  });
  out.samples = counted;
  out.queries_used = o.query_count() - before;
  if (counted > 0) out.value = out.d_avg_used * sum.value() / static_cast<double>(counted);
  return out;
}

SampleOutcome uniform_sample(NeighborOracle& o, const EstimatorConfig& cfg, SampleMethod method,
                             Rng& rng) {
  validate_config(cfg);
  const std::size_t before = o.query_count();
  SampleOutcome out;
  const double lnv = std::ceil(std::log(1.0 / cfg.epsilon));
  if (method == SampleMethod::MaxDegreeWalk) {
    const std::size_t steps =
        ceil_count(static_cast<double>(cfg.t_mix_hint) * static_cast<double>(cfg.d_max_bound) /
                   static_cast<double>(cfg.d_min_hint) * lnv);
    OracleWalk walk(o, ChainKernel::max_degree(cfg.d_max_bound));
    for (std::size_t i = 0; i < steps; ++i) walk.step(rng);
    out.vertex = walk.current().vertex;
    out.steps_taken = steps;
  } else {
    const std::size_t T = thinning(cfg);
    OracleWalk walk(o, ChainKernel::lazy_simple());
    for (out.attempts = 1;; ++out.attempts) {
      walk.restart();
      for (std::size_t i = 0; i < T; ++i) walk.step(rng);
      out.steps_taken += T;
      if (rng.bernoulli(1.0 / static_cast<double>(walk.current().degree))) break;
    }
    out.vertex = walk.current().vertex;
  }
  out.queries_used = o.query_count() - before;
  return out;
}

EstimateOutcome katzir_order(NeighborOracle& o, const EstimatorConfig& cfg,
                             std::size_t sample_count, Rng& rng) {
  validate_config(cfg);
  if (sample_count < 2) fail(ErrorCode::InvalidArgument, "order estimation needs two samples");
  const std::size_t before = o.query_count();
  EstimateOutcome out;
  Accumulator psi_plus, psi_minus;
  std::unordered_map<VertexRef, std::size_t, VertexRefHash> hits;
  const std::size_t T = thinning(cfg);
  out.schedule["thinning"] = T;
  out.schedule["samples"] = sample_count;
  out.formulas["thinning"] = thinning_formula(cfg);
  guarded(cfg, out, [&] {
    OracleWalk walk(o, ChainKernel::lazy_simple());
    for (std::size_t s = 0; s < sample_count; ++s) {
      for (std::size_t i = 0; i < T; ++i) walk.step(rng);
      out.steps_taken += T;
      const QueryResult& v = walk.current();
      const double deg = static_cast<double>(v.degree);
      psi_plus.add(deg);
      psi_minus.add(1.0 / deg);
      out.collisions += hits[v.vertex]++;
      ++out.samples;
    }
  });
  out.queries_used = o.query_count() - before;
  if (out.collisions == 0) {
    fail(ErrorCode::InsufficientCollisions,
         "no collisions among " + std::to_string(out.samples) + " samples");
  }
  out.value = psi_plus.value() * psi_minus.value() / (2.0 * static_cast<double>(out.collisions));
  out.formulas["estimate"] = num(psi_plus.value()) + "*" + num(psi_minus.value()) + "/(2*" +
                             std::to_string(out.collisions) + ") = " + num(out.value);
  return out;
}

EstimateOutcome avg_degree(NeighborOracle& o, const EstimatorConfig& cfg, Rng& rng) {
  validate_config(cfg);
  const double D = static_cast<double>(cfg.d_max_bound);
  auto normalized = [D](const QueryResult& q) { return static_cast<double>(q.degree) / D; };
  EstimateOutcome out = move_counting_average(o, cfg, ChainKernel::max_degree(cfg.d_max_bound),
                                              cfg.epsilon / D, rng, normalized);
  out.value *= D;
  return out;
}

const char* to_string(SampleMethod m) {
  return m == SampleMethod::MaxDegreeWalk ? "maxdeg" : "rejection";
}

const char* to_string(BudgetMode m) { return m == BudgetMode::Fail ? "fail" : "truncate"; }

}  // namespace walkabout
