#pragma once

// Small statistics helpers shared by the harness, the validation suites and
// the tests.

#include <cstdint>
#include <span>
#include <vector>

namespace oim {

/// Exact integer moments; merging is associative, so parallel reductions
/// are bit-identical to serial ones.
struct IntMoments {
  std::int64_t count = 0;
  std::int64_t sum = 0;
  std::int64_t sum_sq = 0;

  void add(std::int64_t x) {
    ++count;
    sum += x;
    sum_sq += x * x;
  }
  void merge(const IntMoments& o) {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  double mean() const;
  /// Unbiased sample variance; 0 with fewer than two samples.
  double variance() const;
  double std_error() const;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope x + intercept.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Two-sample chi-square homogeneity test on binned counts. Bins empty in
/// both samples are dropped.
ChiSquareResult chi_square_two_sample(std::span<const std::int64_t> a,
                                      std::span<const std::int64_t> b);

/// Goodness of fit of observed counts against expected probabilities.
ChiSquareResult chi_square_goodness(std::span<const std::int64_t> observed,
                                    std::span<const double> probabilities);

/// Mean and standard error of a sample of doubles.
struct MeanError {
  double mean = 0.0;
  double std_error = 0.0;
};
MeanError mean_and_error(std::span<const double> xs);

}  // namespace oim
