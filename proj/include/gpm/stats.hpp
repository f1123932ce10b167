#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace gpm {

struct MeanEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Streaming mean/variance (Welford) with an order-fixed merge, so chunked
/// reductions are reproducible.
class Moments {
 public:
  void add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }
  void merge(const Moments& other);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double std_error() const;
  MeanEstimate estimate() const { return {mean(), std_error()}; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

MeanEstimate mean_estimate(std::span<const double> xs);

/// Allowed drop between two estimates that should be ordered: two combined
/// standard errors plus a relative rounding allowance for exact estimates.
inline double ordering_slack(const MeanEstimate& a, const MeanEstimate& b) {
  return 2.0 * (a.std_error + b.std_error) + 1e-9 * std::max(std::abs(a.value), std::abs(b.value));
}

/// Two-sided Kolmogorov-Smirnov statistic of xs against N(0, 1).
double ks_statistic_normal(std::vector<double> xs);

/// Asymptotic 1% critical value of the one-sample KS statistic.
double ks_critical_1pct(std::size_t n);

}  // namespace gpm
