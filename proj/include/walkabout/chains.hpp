#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "walkabout/error.hpp"
#include "walkabout/graph.hpp"
#include "walkabout/rng.hpp"

namespace walkabout {

enum class KernelKind { LazySimple, MaxDegree, Metropolis };

// Transition rule of a walk.
//   LazySimple: stay with probability 1/2, else move to a uniform neighbor.
//   MaxDegree(D): move to each neighbor with probability 1/D, stay otherwise.
//   Metropolis: stay with probability 1/2, else propose a uniform neighbor u
//               and accept with min(1, deg(v)/deg(u)).
struct ChainKernel {
  KernelKind kind = KernelKind::LazySimple;
  std::size_t max_degree_bound = 0;  // D, MaxDegree only

  static ChainKernel lazy_simple() { return {KernelKind::LazySimple, 0}; }
  static ChainKernel max_degree(std::size_t bound) { return {KernelKind::MaxDegree, bound}; }
  static ChainKernel metropolis() { return {KernelKind::Metropolis, 0}; }

  friend bool operator==(const ChainKernel&, const ChainKernel&) = default;
};

std::string to_string(const ChainKernel& k);
ChainKernel kernel_from_string(const std::string& name, std::size_t max_degree_bound = 0);

// Throws KernelInvalid when a MaxDegree bound is below the graph's maximum degree.
void validate_kernel(const Graph& g, const ChainKernel& k);

// Probability vector over vertex ids.
class DistributionVector {
 public:
  DistributionVector() = default;
  // Validates non-negativity and unit mass (1e-12).
  explicit DistributionVector(std::vector<double> p);

  static DistributionVector point_mass(std::size_t n, VertexId v);
  static DistributionVector uniform(std::size_t n);
  // No validation; for results of exact arithmetic on valid inputs.
  static DistributionVector unchecked(std::vector<double> p);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t v) const { return p_[v]; }
  std::span<const double> values() const { return p_; }
  double total() const;

 private:
  std::vector<double> p_;
};

DistributionVector step_distribution(const Graph& g, const ChainKernel& k,
                                     const DistributionVector& p);

// Applies step_distribution `steps` times.
DistributionVector evolve(const Graph& g, const ChainKernel& k, DistributionVector p,
                          std::size_t steps);

DistributionVector stationary(const Graph& g, const ChainKernel& k);

// p(v) proportional to deg(v)^zeta.
DistributionVector degree_power_distribution(const Graph& g, double zeta);

// Sum of absolute differences (twice the total variation distance).
double l1_distance(std::span<const double> p, std::span<const double> q);
double l1_distance(const DistributionVector& p, const DistributionVector& q);

struct StartPolicy {
  enum class Mode { WorstCase, SingleStart, SampledStarts };
  Mode mode = Mode::WorstCase;
  VertexId start = 0;          // SingleStart
  std::size_t samples = 32;    // SampledStarts
  std::uint64_t sample_seed = 0;

  static StartPolicy worst_case() { return {}; }
  static StartPolicy single(VertexId v) { return {Mode::SingleStart, v, 0, 0}; }
  static StartPolicy sampled(std::size_t count, std::uint64_t seed) {
    return {Mode::SampledStarts, 0, count, seed};
  }
};

std::string to_string(const StartPolicy& p);

struct MixingOptions {
  std::size_t max_steps = 200000;
  // WorstCase refuses graphs above this many vertices.
  std::size_t worst_case_limit = 2000;
  unsigned jobs = 0;  // 0 = hardware concurrency
};

struct MixingReport {
  std::size_t tau = 0;
  double threshold = 0.25;
  StartPolicy start_policy;
  // (step, l1) for steps 0..tau, maximised over evaluated starts.
  std::vector<std::pair<std::size_t, double>> curve;
  VertexId governing_start = 0;
  std::size_t starts_evaluated = 0;
  // Every start's l1 distance was non-increasing (to 1e-12) through its crossing.
  bool monotone = true;
  // Sampled starts only bound the worst case from below.
  bool lower_estimate = false;
};

MixingReport mixing_time(const Graph& g, const ChainKernel& k, double threshold,
                         StartPolicy policy = StartPolicy::worst_case(),
                         MixingOptions options = {});

// l1 distance to stationarity after each of `steps` steps for every start vertex
// (row-major: result[start][step]); steps + 1 columns including step 0.
std::vector<std::vector<double>> l1_trajectories(const Graph& g, const ChainKernel& k,
                                                 std::size_t steps);

// One kernel step expressed over the current vertex's neighbor list. Returns
// nullopt to stay, or the index of the neighbor to move to. degree_of(i) gives
// the degree of neighbor i and is only called by Metropolis, after the proposal
// is drawn. Graph walks and oracle walks share this so a seed drives both alike.
template <typename DegreeOf>
std::optional<std::size_t> kernel_step(const ChainKernel& k, std::size_t degree,
                                       DegreeOf&& degree_of, Rng& rng) {
  switch (k.kind) {
    case KernelKind::LazySimple:
      if (rng.bernoulli(0.5)) return std::nullopt;
      return static_cast<std::size_t>(rng.below(degree));
    case KernelKind::MaxDegree: {
      if (k.max_degree_bound < degree) {
        fail(ErrorCode::KernelInvalid, "MaxDegree bound " + std::to_string(k.max_degree_bound) +
                                           " below degree " + std::to_string(degree));
      }
      const auto j = static_cast<std::size_t>(rng.below(k.max_degree_bound));
      if (j < degree) return j;
      return std::nullopt;
    }
    case KernelKind::Metropolis: {
      if (rng.bernoulli(0.5)) return std::nullopt;
      const auto i = static_cast<std::size_t>(rng.below(degree));
      const std::size_t du = degree_of(i);
      if (du <= degree || rng.uniform() * static_cast<double>(du) < static_cast<double>(degree)) {
        return i;
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

VertexId walk_step(const Graph& g, const ChainKernel& k, VertexId v, Rng& rng);

}  // namespace walkabout
