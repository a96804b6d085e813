#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace walkabout::stats {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t dof = 0;
};

// Two-sample Kolmogorov-Smirnov test, asymptotic p-value with Stephens' small-sample correction.
TestResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// Kolmogorov distribution tail Q(lambda) = 2 * sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2).
double kolmogorov_tail(double lambda);

// Pearson goodness of fit. Cells with expected count below min_expected are pooled.
TestResult chi_square_gof(std::span<const std::size_t> observed, std::span<const double> probs,
                          double min_expected = 5.0);

double mean(std::span<const double> xs);
double stddev(std::span<const double> xs);
double median(std::vector<double> xs);
double quantile(std::vector<double> xs, double q);

// l1 distance between an empirical histogram and a probability vector.
double empirical_l1(std::span<const std::size_t> counts, std::span<const double> probs);

double binomial_sd(std::size_t n, double p);

}  // namespace walkabout::stats
