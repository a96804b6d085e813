#include "walkabout/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "walkabout/error.hpp"

namespace walkabout::stats {

double kolmogorov_tail(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) fail(ErrorCode::InvalidArgument, "KS test needs non-empty samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  const double ne = std::sqrt(n * m / (n + m));
  TestResult r;
  r.statistic = d;
  r.p_value = kolmogorov_tail((ne + 0.12 + 0.11 / ne) * d);
  return r;
}

TestResult chi_square_gof(std::span<const std::size_t> observed, std::span<const double> probs,
                          double min_expected) {
  if (observed.size() != probs.size()) {
    fail(ErrorCode::DimensionMismatch, "observed and expected sizes differ");
  }
  const double total = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::size_t{0}));
  // Pool small cells in order until each pooled cell reaches min_expected.
  std::vector<double> obs, exp;
  double pooled_o = 0.0, pooled_e = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    pooled_o += static_cast<double>(observed[i]);
    pooled_e += probs[i] * total;
    if (pooled_e >= min_expected) {
      obs.push_back(pooled_o);
      exp.push_back(pooled_e);
      pooled_o = pooled_e = 0.0;
    }
  }
  if (pooled_e > 0.0 || pooled_o > 0.0) {
    if (exp.empty()) {
      obs.push_back(pooled_o);
      exp.push_back(pooled_e);
    } else {
      obs.back() += pooled_o;
      exp.back() += pooled_e;
    }
  }
  TestResult r;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (exp[i] > 0.0) r.statistic += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  }
  r.dof = obs.size() > 1 ? obs.size() - 1 : 1;
  boost::math::chi_squared dist(static_cast<double>(r.dof));
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double mu = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) fail(ErrorCode::InvalidArgument, "quantile of an empty sample");
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

double empirical_l1(std::span<const std::size_t> counts, std::span<const double> probs) {
  if (counts.size() != probs.size()) fail(ErrorCode::DimensionMismatch, "histogram size");
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  double d = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    d += std::abs(static_cast<double>(counts[i]) / total - probs[i]);
  }
  return d;
}

double binomial_sd(std::size_t n, double p) {
  return std::sqrt(static_cast<double>(n) * p * (1.0 - p));
}

}  // namespace walkabout::stats
