#include "oim/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>

#include "oim/common.hpp"

namespace oim {
namespace {

double chi_square_tail(double statistic, int dof) {
  if (dof <= 0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

}  // namespace

double IntMoments::mean() const {
  return count > 0 ? static_cast<double>(sum) / static_cast<double>(count) : 0.0;
}

double IntMoments::variance() const {
  if (count < 2) return 0.0;
  const auto c = static_cast<long double>(count);
  const long double s = static_cast<long double>(sum);
  const long double var = (static_cast<long double>(sum_sq) - s * s / c) / (c - 1.0L);
  return var > 0.0L ? static_cast<double>(var) : 0.0;
}

double IntMoments::std_error() const {
  return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("linear fit needs >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InputError("linear fit needs distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

ChiSquareResult chi_square_two_sample(std::span<const std::int64_t> a,
                                      std::span<const std::int64_t> b) {
  if (a.size() != b.size()) throw InputError("chi-square samples need equal bin counts");
  double na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na += static_cast<double>(a[i]);
    nb += static_cast<double>(b[i]);
  }
  if (na == 0.0 || nb == 0.0) throw InputError("chi-square samples must be non-empty");
  ChiSquareResult out;
  int bins = 0;
  const double ka = std::sqrt(nb / na);
  const double kb = std::sqrt(na / nb);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double total = static_cast<double>(a[i] + b[i]);
    if (total == 0.0) continue;
    const double diff = ka * static_cast<double>(a[i]) - kb * static_cast<double>(b[i]);
    out.statistic += diff * diff / total;
    ++bins;
  }
  out.dof = bins - 1;
  out.p_value = chi_square_tail(out.statistic, out.dof);
  return out;
}

ChiSquareResult chi_square_goodness(std::span<const std::int64_t> observed,
                                    std::span<const double> probabilities) {
  if (observed.size() != probabilities.size()) {
    throw InputError("chi-square goodness of fit needs one probability per bin");
  }
  double total = 0.0;
  for (auto o : observed) total += static_cast<double>(o);
  ChiSquareResult out;
  int bins = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = total * probabilities[i];
    if (expected <= 0.0) {
      if (observed[i] != 0) throw InputError("observation in a zero-probability bin");
      continue;
    }
    const double diff = static_cast<double>(observed[i]) - expected;
    out.statistic += diff * diff / expected;
    ++bins;
  }
  out.dof = bins - 1;
  out.p_value = chi_square_tail(out.statistic, out.dof);
  return out;
}

MeanError mean_and_error(std::span<const double> xs) {
  MeanError out;
  if (xs.empty()) return out;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) out.mean += x;
  out.mean /= n;
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.std_error = std::sqrt(ss / (n - 1.0) / n);
  return out;
}

}  // namespace oim
