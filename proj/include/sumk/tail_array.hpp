#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sumk/instance.hpp"
#include "sumk/query_counter.hpp"

namespace sumk {

/// Sparse tail-probability array: a non-increasing step function
/// t(w) = Pr{X >= w} on [1, capacity], stored as breakpoints
/// (position, tail) with strictly decreasing tails. The first breakpoint is
/// always (1, 1) (positive support), and all mass at or beyond the capacity
/// is treated as a single atom at the capacity.
class TailArray {
 public:
  TailArray(std::int64_t capacity,
            std::vector<std::int64_t> positions,
            std::vector<double> tails);

  /// Exact tail array of a weight distribution, clamped to the capacity.
  static TailArray from_distribution(const WeightDistribution& dist,
                                     std::int64_t capacity);

  /// t(w); 1 for w <= 1, 0 beyond the capacity. O(log breakpoints).
  double at(std::int64_t w, QueryCounter* counter = nullptr) const;

  std::int64_t capacity() const { return capacity_; }
  std::size_t breakpoint_count() const { return positions_.size(); }
  const std::vector<std::int64_t>& positions() const { return positions_; }
  const std::vector<double>& tails() const { return tails_; }

  /// PMF atoms of the represented (capacity-clamped) variable, ascending by
  /// position. Atom masses are positive and sum to 1.
  struct Atoms {
    std::vector<std::int64_t> positions;
    std::vector<double> masses;
  };
  Atoms atoms() const;

  double mean() const;

 private:
  std::int64_t capacity_;
  std::vector<std::int64_t> positions_;
  std::vector<double> tails_;
};

/// Geometric rounding parameters: tails are rounded up onto the grid
/// {(1+eta)^-k} with a floor at (1+eta)^-zeta, which caps the number of
/// distinct tail values at ceil(zeta)+1.
struct ApproxParams {
  double eta = 0.0;
  double zeta = 0.0;
  double floor = 0.0;         // (1+eta)^-zeta
  std::vector<double> grid;   // grid[k] = (1+eta)^-k, k < ceil(zeta)

  /// eta = epsilon / (10 log2 W), zeta = log_{1+eta}(W/eta). The floor then
  /// equals eta/W in closed form; both expressions are cross-checked.
  static ApproxParams from_epsilon(double epsilon, std::int64_t capacity);

  /// Same zeta/floor relation for a directly chosen eta.
  static ApproxParams from_eta(double eta, std::int64_t capacity);

  /// Fully explicit parameters (tests): floor = (1+eta)^-zeta.
  static ApproxParams explicit_params(double eta, double zeta);

  /// Smallest grid-or-floor value >= t. Values <= floor land exactly on it.
  double round_up(double t) const;
};

/// Rounds every tail up to the (1+eta) grid with the zeta floor. Output
/// dominates the input pointwise, is idempotent, and carries at most
/// ceil(zeta)+1 distinct values.
TailArray round_zeta_eta(const TailArray& a, const ApproxParams& p);

/// Exact tail array of X + Y for independent X ~ a, Y ~ b, with sums clamped
/// at the capacity. Sparse atom-pair enumeration, O(k^2 log k) for k
/// breakpoints per side.
TailArray convolve(const TailArray& a, const TailArray& b);

/// Tail array of the sum of `multiplicity` (a power of two) i.i.d. copies of
/// the base variable, rounding after every doubling, so the result dominates
/// the exact i.i.d. sum pointwise while staying O(zeta)-sparse.
TailArray approx_iid_sum(const TailArray& base, std::int64_t multiplicity,
                         const ApproxParams& p);

/// Tuning knob: cell count of the dense accumulator window used by large
/// convolutions (default 2^23, 64 MB). Smaller windows cap transient memory
/// at the cost of more sweeps; results are identical for any setting.
void set_convolution_window_cells(std::int64_t cells);

}  // namespace sumk
