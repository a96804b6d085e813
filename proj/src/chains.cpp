#include "walkabout/chains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>

#include "walkabout/parallel.hpp"

namespace walkabout {

std::string to_string(const ChainKernel& k) {
  switch (k.kind) {
    case KernelKind::LazySimple: return "lazy";
    case KernelKind::MaxDegree: return "maxdeg(" + std::to_string(k.max_degree_bound) + ")";
    case KernelKind::Metropolis: return "metropolis";
  }
  return "lazy";
}

ChainKernel kernel_from_string(const std::string& name, std::size_t max_degree_bound) {
  if (name == "lazy") return ChainKernel::lazy_simple();
  if (name == "metropolis") return ChainKernel::metropolis();
  if (name == "maxdeg") return ChainKernel::max_degree(max_degree_bound);
  fail(ErrorCode::InvalidArgument, "unknown kernel '" + name + "'");
}

void validate_kernel(const Graph& g, const ChainKernel& k) {
  if (k.kind != KernelKind::MaxDegree) return;
  const std::size_t d_max = degree_stats(g).d_max;
  if (k.max_degree_bound == 0 || k.max_degree_bound < d_max) {
    fail(ErrorCode::KernelInvalid, "MaxDegree bound " + std::to_string(k.max_degree_bound) +
                                       " below d_max " + std::to_string(d_max));
  }
}

namespace {

double neumaier_sum(std::span<const double> xs) {
  double sum = 0.0, c = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + c;
}

// Pull form of the transition matrix: next[v] = stay[v]*cur[v] + sum_k weight[k]*cur[u_k]
// over v's neighbors u_k, where weight[k] is the probability of moving u_k -> v.
struct PullOperator {
  std::vector<std::size_t> offsets;
  std::vector<VertexId> sources;
  std::vector<double> weight;
  std::vector<double> stay;
};

PullOperator make_operator(const Graph& g, const ChainKernel& k) {
  validate_kernel(g, k);
  const std::size_t n = g.num_vertices();
  PullOperator op;
  op.offsets.assign(n + 1, 0);
  op.stay.assign(n, 0.0);
  for (VertexId v = 0; v < n; ++v) op.offsets[v + 1] = op.offsets[v] + g.degree(v);
  op.sources.resize(op.offsets[n]);
  op.weight.resize(op.offsets[n]);
  const double inv_bound =
      k.kind == KernelKind::MaxDegree ? 1.0 / static_cast<double>(k.max_degree_bound) : 0.0;
  for (VertexId v = 0; v < n; ++v) {
    const double dv = static_cast<double>(g.degree(v));
    double leave = 0.0;
    std::size_t slot = op.offsets[v];
    for (VertexId u : g.neighbors(v)) {
      const double du = static_cast<double>(g.degree(u));
      double w = 0.0;
      switch (k.kind) {
        case KernelKind::LazySimple: w = 0.5 / du; break;
        case KernelKind::MaxDegree: w = inv_bound; break;
        case KernelKind::Metropolis: w = 0.5 * std::min(1.0 / du, 1.0 / dv); break;
      }
      op.sources[slot] = u;
      op.weight[slot] = w;
      ++slot;
      // Symmetric kernels: probability v -> u equals the u -> v weight computed at v.
      switch (k.kind) {
        case KernelKind::LazySimple: leave += 0.5 / dv; break;
        case KernelKind::MaxDegree: leave += inv_bound; break;
        case KernelKind::Metropolis: leave += w; break;
      }
    }
    op.stay[v] = std::max(0.0, 1.0 - leave);
    if (k.kind == KernelKind::LazySimple) op.stay[v] = 0.5;
  }
  return op;
}

constexpr std::size_t kBlock = 32;

// y = x * P for kBlock columns stored interleaved (x[v * kBlock + b]).
void step_block(const PullOperator& op, const double* x, double* y) {
  const std::size_t n = op.stay.size();
  for (std::size_t v = 0; v < n; ++v) {
    double acc[kBlock];
    const double s = op.stay[v];
    const double* xv = x + v * kBlock;
    for (std::size_t b = 0; b < kBlock; ++b) acc[b] = s * xv[b];
    for (std::size_t slot = op.offsets[v]; slot < op.offsets[v + 1]; ++slot) {
      const double w = op.weight[slot];
      const double* xu = x + static_cast<std::size_t>(op.sources[slot]) * kBlock;
      for (std::size_t b = 0; b < kBlock; ++b) acc[b] += w * xu[b];
    }
    double* yv = y + v * kBlock;
    for (std::size_t b = 0; b < kBlock; ++b) yv[b] = acc[b];
  }
}

void block_l1(const double* x, std::span<const double> pi, double* out) {
  for (std::size_t b = 0; b < kBlock; ++b) out[b] = 0.0;
  for (std::size_t v = 0; v < pi.size(); ++v) {
    const double* xv = x + v * kBlock;
    for (std::size_t b = 0; b < kBlock; ++b) out[b] += std::abs(xv[b] - pi[v]);
  }
}

}  // namespace

DistributionVector::DistributionVector(std::vector<double> p) : p_(std::move(p)) {
  for (std::size_t v = 0; v < p_.size(); ++v) {
    if (!(p_[v] >= 0.0)) {
      fail(ErrorCode::InvalidArgument, "negative probability at " + std::to_string(v));
    }
  }
  const double mass = total();
  if (std::abs(mass - 1.0) > 1e-12) {
    fail(ErrorCode::InvalidArgument, "probabilities sum to " + std::to_string(mass));
  }
}

DistributionVector DistributionVector::point_mass(std::size_t n, VertexId v) {
  if (v >= n) fail(ErrorCode::InvalidArgument, "point mass outside support");
  std::vector<double> p(n, 0.0);
  p[v] = 1.0;
  return unchecked(std::move(p));
}

DistributionVector DistributionVector::uniform(std::size_t n) {
  return unchecked(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

DistributionVector DistributionVector::unchecked(std::vector<double> p) {
  DistributionVector d;
  d.p_ = std::move(p);
  return d;
}

double DistributionVector::total() const { return neumaier_sum(p_); }

DistributionVector step_distribution(const Graph& g, const ChainKernel& k,
                                     const DistributionVector& p) {
  if (p.size() != g.num_vertices()) {
    fail(ErrorCode::DimensionMismatch, "distribution has " + std::to_string(p.size()) +
                                           " entries for " + std::to_string(g.num_vertices()) +
                                           " vertices");
  }
  const PullOperator op = make_operator(g, k);
  std::vector<double> next(p.size());
  for (std::size_t v = 0; v < p.size(); ++v) {
    double acc = op.stay[v] * p[v];
    for (std::size_t slot = op.offsets[v]; slot < op.offsets[v + 1]; ++slot) {
      acc += op.weight[slot] * p[op.sources[slot]];
    }
    next[v] = acc;
  }
  return DistributionVector::unchecked(std::move(next));
}

DistributionVector evolve(const Graph& g, const ChainKernel& k, DistributionVector p,
                          std::size_t steps) {
  if (p.size() != g.num_vertices()) fail(ErrorCode::DimensionMismatch, "distribution size");
  const PullOperator op = make_operator(g, k);
  std::vector<double> cur(p.values().begin(), p.values().end()), next(cur.size());
  for (std::size_t s = 0; s < steps; ++s) {
    for (std::size_t v = 0; v < cur.size(); ++v) {
      double acc = op.stay[v] * cur[v];
      for (std::size_t slot = op.offsets[v]; slot < op.offsets[v + 1]; ++slot) {
        acc += op.weight[slot] * cur[op.sources[slot]];
      }
      next[v] = acc;
    }
    std::swap(cur, next);
  }
  return DistributionVector::unchecked(std::move(cur));
}

DistributionVector stationary(const Graph& g, const ChainKernel& k) {
  validate_kernel(g, k);
  const std::size_t n = g.num_vertices();
  if (k.kind != KernelKind::LazySimple) return DistributionVector::uniform(n);
  std::vector<double> p(n);
  const double two_m = 2.0 * static_cast<double>(g.num_edges());
  for (VertexId v = 0; v < n; ++v) p[v] = static_cast<double>(g.degree(v)) / two_m;
  return DistributionVector::unchecked(std::move(p));
}

DistributionVector degree_power_distribution(const Graph& g, double zeta) {
  std::vector<double> p(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    p[v] = std::pow(static_cast<double>(g.degree(v)), zeta);
  }
  const double z = neumaier_sum(p);
  for (double& x : p) x /= z;
  return DistributionVector::unchecked(std::move(p));
}

double l1_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    fail(ErrorCode::DimensionMismatch,
         "l1 distance between sizes " + std::to_string(p.size()) + " and " + std::to_string(q.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return sum;
}

double l1_distance(const DistributionVector& p, const DistributionVector& q) {
  return l1_distance(p.values(), q.values());
}

std::string to_string(const StartPolicy& p) {
  switch (p.mode) {
    case StartPolicy::Mode::WorstCase: return "worst_case";
    case StartPolicy::Mode::SingleStart: return "single_start(" + std::to_string(p.start) + ")";
    case StartPolicy::Mode::SampledStarts:
      return "sampled_starts(" + std::to_string(p.samples) + ")";
  }
  return "worst_case";
}

MixingReport mixing_time(const Graph& g, const ChainKernel& k, double threshold,
                         StartPolicy policy, MixingOptions options) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    fail(ErrorCode::InvalidArgument, "threshold must lie in (0, 1]");
  }
  const std::size_t n = g.num_vertices();
  std::vector<VertexId> starts;
  MixingReport report;
  report.threshold = threshold;
  report.start_policy = policy;
  switch (policy.mode) {
    case StartPolicy::Mode::WorstCase:
      if (n > options.worst_case_limit) {
        fail(ErrorCode::TooLargeForExact,
             "worst-case mixing on " + std::to_string(n) + " vertices exceeds the limit of " +
                 std::to_string(options.worst_case_limit) + "; use sampled starts");
      }
      starts.resize(n);
      std::iota(starts.begin(), starts.end(), VertexId{0});
      break;
    case StartPolicy::Mode::SingleStart:
      if (policy.start >= n) fail(ErrorCode::InvalidArgument, "start vertex out of range");
      starts.push_back(policy.start);
      break;
    case StartPolicy::Mode::SampledStarts: {
      std::vector<VertexId> all(n);
      std::iota(all.begin(), all.end(), VertexId{0});
      Rng rng(policy.sample_seed);
      const std::size_t count = std::min(policy.samples, n);
      for (std::size_t i = 0; i < count; ++i) std::swap(all[i], all[i + rng.below(n - i)]);
      starts.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(count));
      report.lower_estimate = count < n;
      break;
    }
  }
  report.starts_evaluated = starts.size();

  const PullOperator op = make_operator(g, k);
  const DistributionVector pi = stationary(g, k);
  const std::size_t blocks = (starts.size() + kBlock - 1) / kBlock;

  std::mutex merge;
  std::vector<double> curve;
  std::size_t tau = 0;
  VertexId governing = starts.empty() ? 0 : starts.front();
  bool monotone = true;

  parallel_for(blocks, options.jobs, [&](std::size_t block) {
    const std::size_t first = block * kBlock;
    const std::size_t width = std::min(kBlock, starts.size() - first);
    std::vector<double> x(n * kBlock, 0.0), y(n * kBlock, 0.0);
    for (std::size_t b = 0; b < width; ++b) x[starts[first + b] * kBlock + b] = 1.0;

    std::vector<double> local_curve;
    std::vector<std::size_t> crossed(kBlock, 0);
    std::vector<double> prev(kBlock, std::numeric_limits<double>::infinity());
    double dist[kBlock];
    bool local_monotone = true;
    std::size_t remaining = width;
    std::vector<char> done(kBlock, 0);
    for (std::size_t step = 0;; ++step) {
      if (step > 0) {
        step_block(op, x.data(), y.data());
        std::swap(x, y);
      }
      block_l1(x.data(), pi.values(), dist);
      double worst = 0.0;
      for (std::size_t b = 0; b < width; ++b) {
        if (dist[b] > prev[b] + 1e-12) local_monotone = false;
        prev[b] = dist[b];
        worst = std::max(worst, dist[b]);
        if (!done[b] && dist[b] <= threshold) {
          done[b] = 1;
          crossed[b] = step;
          --remaining;
        }
      }
      local_curve.push_back(worst);
      if (remaining == 0) break;
      if (step >= options.max_steps) {
        fail(ErrorCode::DidNotMix, "l1 distance still above " + std::to_string(threshold) +
                                       " after " + std::to_string(options.max_steps) +
                                       " steps (periodic chain?)");
      }
    }

    std::lock_guard lock(merge);
    if (curve.size() < local_curve.size()) curve.resize(local_curve.size(), 0.0);
    for (std::size_t s = 0; s < local_curve.size(); ++s) curve[s] = std::max(curve[s], local_curve[s]);
    for (std::size_t b = 0; b < width; ++b) {
      const VertexId start = starts[first + b];
      if (crossed[b] > tau || (crossed[b] == tau && start < governing)) {
        tau = crossed[b];
        governing = start;
      }
    }
    monotone = monotone && local_monotone;
  });

  report.tau = tau;
  report.governing_start = governing;
  report.monotone = monotone;
  for (std::size_t s = 0; s <= tau && s < curve.size(); ++s) report.curve.emplace_back(s, curve[s]);
  return report;
}

std::vector<std::vector<double>> l1_trajectories(const Graph& g, const ChainKernel& k,
                                                 std::size_t steps) {
  const std::size_t n = g.num_vertices();
  const PullOperator op = make_operator(g, k);
  const DistributionVector pi = stationary(g, k);
  std::vector<std::vector<double>> out(n, std::vector<double>(steps + 1));
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  for (std::size_t block = 0; block < blocks; ++block) {
    const std::size_t first = block * kBlock;
    const std::size_t width = std::min(kBlock, n - first);
    std::vector<double> x(n * kBlock, 0.0), y(n * kBlock, 0.0);
    for (std::size_t b = 0; b < width; ++b) x[(first + b) * kBlock + b] = 1.0;
    double dist[kBlock];
    for (std::size_t step = 0; step <= steps; ++step) {
      if (step > 0) {
        step_block(op, x.data(), y.data());
        std::swap(x, y);
      }
      block_l1(x.data(), pi.values(), dist);
      for (std::size_t b = 0; b < width; ++b) out[first + b][step] = dist[b];
    }
  }
  return out;
}

VertexId walk_step(const Graph& g, const ChainKernel& k, VertexId v, Rng& rng) {
  auto nb = g.neighbors(v);
  auto next = kernel_step(
      k, nb.size(), [&](std::size_t i) { return g.degree(nb[i]); }, rng);
  return next ? nb[*next] : v;
}

}  // namespace walkabout
