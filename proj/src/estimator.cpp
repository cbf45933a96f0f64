#include "sumk/estimator.hpp"

#include <cmath>

namespace sumk {

double rounded_mean(const ItemType& type, std::int64_t W, QueryCounter* counter) {
  // Bucket k holds the mass on [2^k, 2^{k+1}); each unit of it counts as 2^k.
  double sum = 0.0;
  double prev = cdf(type, 0, counter);
  for (int k = 0; ; ++k) {
    const std::int64_t lo = std::int64_t{1} << k;
    const std::int64_t hi = (lo << 1) - 1;  // top of the bucket, inclusive
    const double cur = cdf(type, hi, counter);
    sum += static_cast<double>(lo) * (cur - prev);
    prev = cur;
    if (hi >= W) break;
  }
  return sum;
}

Estimate estimate_T(const Instance& inst, QueryCounter* counter) {
  Estimate est;
  est.rounded_means.reserve(inst.types.size());
  double best_ratio = 0.0;
  for (std::size_t i = 0; i < inst.types.size(); ++i) {
    const double mean = rounded_mean(inst.types[i], inst.capacity, counter);
    est.rounded_means.push_back(mean);
    const double ratio = inst.types[i].cost / mean;
    if (est.best_ratio_type < 0 || ratio < best_ratio) {
      best_ratio = ratio;
      est.best_ratio_type = static_cast<int>(i);
    }
  }
  est.T = 0.5 * static_cast<double>(inst.capacity) * best_ratio;
  return est;
}

}  // namespace sumk
