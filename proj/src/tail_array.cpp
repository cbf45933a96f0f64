#include "sumk/tail_array.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sumk {

namespace {

constexpr std::size_t kSortPairLimit = std::size_t{1} << 21;
constexpr std::size_t kExactConvMaxBreakpoints = std::size_t{1} << 23;

std::int64_t g_window_cells = std::int64_t{1} << 23;

// Compensated accumulator. Suffix tails near the rounding floor (~1e-13)
// would drown in plain-double summation error over millions of addends.
struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

TailArray::TailArray(std::int64_t capacity, std::vector<std::int64_t> positions,
                     std::vector<double> tails)
    : capacity_(capacity),
      positions_(std::move(positions)),
      tails_(std::move(tails)) {
  if (capacity_ < 1) {
    throw std::invalid_argument("TailArray: capacity must be >= 1");
  }
  if (positions_.empty() || positions_.size() != tails_.size()) {
    throw std::invalid_argument("TailArray: breakpoint lists empty or mismatched");
  }
  if (positions_.front() != 1 || tails_.front() != 1.0) {
    throw std::invalid_argument("TailArray: first breakpoint must be (1, 1)");
  }
  for (std::size_t i = 1; i < positions_.size(); ++i) {
    if (positions_[i] <= positions_[i - 1] || positions_[i] > capacity_) {
      throw std::invalid_argument("TailArray: positions must be ascending within [1, capacity]");
    }
    if (!(tails_[i] < tails_[i - 1]) || tails_[i] < 0.0) {
      throw std::invalid_argument("TailArray: tails must be strictly decreasing in [0, 1]");
    }
  }
}

TailArray TailArray::from_distribution(const WeightDistribution& dist,
                                       std::int64_t capacity) {
  // Clamp-merge mass at or above the capacity.
  std::vector<std::int64_t> values;
  std::vector<double> probs;
  double lump = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist.values()[i] >= capacity) {
      lump += dist.probs()[i];
    } else {
      values.push_back(dist.values()[i]);
      probs.push_back(dist.probs()[i]);
    }
  }
  if (lump > 0.0) {
    values.push_back(capacity);
    probs.push_back(lump);
  }
  if (values.front() < 1) {
    throw InstanceError("TailArray requires positive support; normalize first");
  }

  const std::size_t k = values.size();
  std::vector<double> suffix(k);
  NeumaierSum acc;
  for (std::size_t i = k; i-- > 0;) {
    acc.add(probs[i]);
    suffix[i] = acc.value();
  }

  std::vector<std::int64_t> pos{1};
  std::vector<double> tails{1.0};
  for (std::size_t i = 1; i < k; ++i) {
    pos.push_back(values[i - 1] + 1);
    tails.push_back(suffix[i]);
  }
  if (values.back() < capacity) {
    pos.push_back(values.back() + 1);
    tails.push_back(0.0);
  }
  return TailArray(capacity, std::move(pos), std::move(tails));
}

double TailArray::at(std::int64_t w, QueryCounter* counter) const {
  if (counter != nullptr) ++counter->tail;
  if (w <= 1) return 1.0;
  if (w > capacity_) return 0.0;
  auto it = std::upper_bound(positions_.begin(), positions_.end(), w);
  return tails_[static_cast<std::size_t>(it - positions_.begin()) - 1];
}

TailArray::Atoms TailArray::atoms() const {
  Atoms out;
  out.positions.reserve(positions_.size());
  out.masses.reserve(positions_.size());
  for (std::size_t i = 0; i + 1 < positions_.size(); ++i) {
    const double mass = tails_[i] - tails_[i + 1];
    if (mass > 0.0) {
      out.positions.push_back(positions_[i + 1] - 1);
      out.masses.push_back(mass);
    }
  }
  if (tails_.back() > 0.0) {
    out.positions.push_back(capacity_);
    out.masses.push_back(tails_.back());
  }
  return out;
}

double TailArray::mean() const {
  const Atoms a = atoms();
  double m = 0.0;
  for (std::size_t i = 0; i < a.positions.size(); ++i) {
    m += static_cast<double>(a.positions[i]) * a.masses[i];
  }
  return m;
}

// ---------------------------------------------------------------------------
// Rounding parameters

namespace {

ApproxParams finish_params(double eta, double zeta, double floor_value) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw std::invalid_argument("ApproxParams: eta must be positive");
  }
  if (!(zeta > 0.0) || !std::isfinite(zeta)) {
    throw std::invalid_argument("ApproxParams: zeta must be positive");
  }
  ApproxParams p;
  p.eta = eta;
  p.zeta = zeta;
  p.floor = floor_value;
  const auto levels = static_cast<std::size_t>(std::ceil(zeta));
  const double log1p_eta = std::log1p(eta);
  p.grid.reserve(levels);
  for (std::size_t k = 0; k < levels; ++k) {
    // exp(-k log1p(eta)) keeps full precision in eta where pow(1+eta, -k)
    // would round it away inside the base.
    p.grid.push_back(std::exp(-static_cast<double>(k) * log1p_eta));
  }
  while (!p.grid.empty() && p.grid.back() <= p.floor) {
    p.grid.pop_back();
  }
  if (p.grid.empty() || p.grid.front() != 1.0) {
    throw std::logic_error("ApproxParams: degenerate rounding grid");
  }
  return p;
}

}  // namespace

ApproxParams ApproxParams::from_epsilon(double epsilon, std::int64_t capacity) {
  if (!(epsilon > 0.0) || epsilon >= 1.0) {
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  }
  const double log2w = std::max(1.0, std::log2(static_cast<double>(capacity)));
  return from_eta(epsilon / (10.0 * log2w), capacity);
}

ApproxParams ApproxParams::from_eta(double eta, std::int64_t capacity) {
  if (capacity < 1) {
    throw std::invalid_argument("capacity must be >= 1");
  }
  const double w = static_cast<double>(capacity);
  const double zeta = std::log(w / eta) / std::log1p(eta);
  const double floor_value = eta / w;  // (1+eta)^-zeta in closed form
  const double via_pow = std::exp(-zeta * std::log1p(eta));
  if (std::abs(via_pow - floor_value) > 1e-12 * floor_value) {
    throw std::logic_error("ApproxParams: floor expressions disagree beyond 1e-12");
  }
  return finish_params(eta, zeta, floor_value);
}

ApproxParams ApproxParams::explicit_params(double eta, double zeta) {
  return finish_params(eta, zeta, std::exp(-zeta * std::log1p(eta)));
}

double ApproxParams::round_up(double t) const {
  t = std::min(t, 1.0);
  if (t <= floor) return floor;
  const double log1p_eta = std::log1p(eta);
  auto k = static_cast<std::int64_t>(std::log(1.0 / t) / log1p_eta);
  const auto last = static_cast<std::int64_t>(grid.size()) - 1;
  k = std::clamp(k, std::int64_t{0}, last);
  while (k + 1 <= last && grid[static_cast<std::size_t>(k + 1)] >= t) ++k;
  while (grid[static_cast<std::size_t>(k)] < t) --k;
  return grid[static_cast<std::size_t>(k)];
}

TailArray round_zeta_eta(const TailArray& a, const ApproxParams& p) {
  std::vector<std::int64_t> pos;
  std::vector<double> tails;
  pos.reserve(a.breakpoint_count());
  tails.reserve(a.breakpoint_count());
  for (std::size_t i = 0; i < a.breakpoint_count(); ++i) {
    const double r = p.round_up(a.tails()[i]);
    if (tails.empty() || r < tails.back()) {
      pos.push_back(a.positions()[i]);
      tails.push_back(r);
    }
  }
  return TailArray(a.capacity(), std::move(pos), std::move(tails));
}

// ---------------------------------------------------------------------------
// Convolution

namespace {

// Collects exact (position, tail) steps streamed in descending position
// order and rebuilds a breakpoint array.
struct ExactConvSink {
  std::int64_t capacity;
  std::vector<std::int64_t> pos;
  std::vector<double> tail;

  void operator()(std::int64_t position, double t) {
    if (pos.size() >= kExactConvMaxBreakpoints) {
      throw std::runtime_error("convolve: exact output too large; round between doublings");
    }
    pos.push_back(position);
    tail.push_back(t);
  }

  TailArray finalize() {
    std::reverse(pos.begin(), pos.end());
    std::reverse(tail.begin(), tail.end());
    std::vector<std::int64_t> bp_pos{1};
    std::vector<double> bp_tail{1.0};
    for (std::size_t j = 1; j < pos.size(); ++j) {
      if (tail[j] < bp_tail.back()) {
        bp_pos.push_back(pos[j - 1] + 1);
        bp_tail.push_back(tail[j]);
      }
    }
    if (pos.back() < capacity && bp_tail.back() > 0.0) {
      bp_pos.push_back(pos.back() + 1);
      bp_tail.push_back(0.0);
    }
    return TailArray(capacity, std::move(bp_pos), std::move(bp_tail));
  }
};

// Tracks only the positions where the rounded tail value changes, so the
// doubling chain never materializes more than O(zeta) entries.
struct RoundedConvSink {
  std::int64_t capacity;
  const ApproxParams* params;
  std::vector<std::int64_t> pos;   // descending
  std::vector<double> val;         // ascending rounded values
  double current = -1.0;

  void operator()(std::int64_t position, double t) {
    const double r = params->round_up(t);
    if (r != current) {
      pos.push_back(position);
      val.push_back(r);
      current = r;
    }
  }

  TailArray finalize() {
    std::reverse(pos.begin(), pos.end());
    std::reverse(val.begin(), val.end());
    std::vector<std::int64_t> bp_pos{1};
    std::vector<double> bp_tail{1.0};
    for (std::size_t k = 1; k < pos.size(); ++k) {
      bp_pos.push_back(pos[k - 1] + 1);
      bp_tail.push_back(val[k]);
    }
    if (pos.back() < capacity && params->floor < bp_tail.back()) {
      bp_pos.push_back(pos.back() + 1);
      bp_tail.push_back(params->floor);
    }
    return TailArray(capacity, std::move(bp_pos), std::move(bp_tail));
  }
};

// Streams every distinct mass position of X + Y (sums clamped at the
// capacity) in descending order, together with the exact suffix tail at that
// position. Small products are enumerated and sorted; large ones go through
// a dense window accumulator so memory stays bounded by the window size.
template <typename Sink>
void stream_convolution(const TailArray& a, const TailArray& b, Sink& sink) {
  const std::int64_t W = a.capacity();
  const TailArray::Atoms aa = a.atoms();
  const TailArray::Atoms bb = b.atoms();
  const std::size_t na = aa.positions.size();
  const std::size_t nb = bb.positions.size();

  if (na * nb <= kSortPairLimit) {
    std::vector<std::pair<std::int64_t, double>> pairs;
    pairs.reserve(na * nb);
    for (std::size_t i = 0; i < na; ++i) {
      for (std::size_t j = 0; j < nb; ++j) {
        pairs.emplace_back(std::min(aa.positions[i] + bb.positions[j], W),
                           aa.masses[i] * bb.masses[j]);
      }
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    NeumaierSum acc;
    std::size_t i = pairs.size();
    while (i > 0) {
      const std::int64_t position = pairs[i - 1].first;
      double group = 0.0;
      while (i > 0 && pairs[i - 1].first == position) {
        group += pairs[i - 1].second;
        --i;
      }
      acc.add(group);
      sink(position, acc.value());
    }
    return;
  }

  // Suffix masses of B, compensated so the clamp lump stays accurate.
  std::vector<double> bsuf(nb + 1, 0.0);
  {
    NeumaierSum acc;
    for (std::size_t j = nb; j-- > 0;) {
      acc.add(bb.masses[j]);
      bsuf[j] = acc.value();
    }
  }

  NeumaierSum acc;

  // All pairs with x + y >= W collapse into one atom at W.
  {
    NeumaierSum lump;
    for (std::size_t i = 0; i < na; ++i) {
      const auto j = static_cast<std::size_t>(
          std::lower_bound(bb.positions.begin(), bb.positions.end(),
                           W - aa.positions[i]) -
          bb.positions.begin());
      if (j < nb) lump.add(aa.masses[i] * bsuf[j]);
    }
    const double mass = lump.value();
    if (mass > 0.0) {
      acc.add(mass);
      sink(W, acc.value());
    }
  }

  const std::int64_t lo = aa.positions.front() + bb.positions.front();
  const std::int64_t hi =
      std::min(aa.positions.back() + bb.positions.back(), W - 1);
  if (lo > hi) return;

  const std::int64_t cells_len = std::min(hi - lo + 1, g_window_cells);
  std::vector<double> cells(static_cast<std::size_t>(cells_len), 0.0);

  for (std::int64_t win_hi = hi; win_hi >= lo;) {
    const std::int64_t win_lo = std::max(lo, win_hi - cells_len + 1);
    for (std::size_t i = 0; i < na; ++i) {
      const std::int64_t x = aa.positions[i];
      const double p = aa.masses[i];
      auto j = static_cast<std::size_t>(
          std::lower_bound(bb.positions.begin(), bb.positions.end(),
                           win_lo - x) -
          bb.positions.begin());
      for (; j < nb && bb.positions[j] <= win_hi - x; ++j) {
        cells[static_cast<std::size_t>(x + bb.positions[j] - win_lo)] +=
            p * bb.masses[j];
      }
    }
    for (std::int64_t idx = win_hi - win_lo; idx >= 0; --idx) {
      const double mass = cells[static_cast<std::size_t>(idx)];
      if (mass != 0.0) {
        cells[static_cast<std::size_t>(idx)] = 0.0;
        acc.add(mass);
        sink(win_lo + idx, acc.value());
      }
    }
    win_hi = win_lo - 1;
  }
}

TailArray convolve_rounded(const TailArray& a, const TailArray& b,
                           const ApproxParams& p) {
  RoundedConvSink sink{a.capacity(), &p, {}, {}, -1.0};
  stream_convolution(a, b, sink);
  return sink.finalize();
}

}  // namespace

TailArray convolve(const TailArray& a, const TailArray& b) {
  if (a.capacity() != b.capacity()) {
    throw std::invalid_argument("convolve: capacity mismatch");
  }
  ExactConvSink sink{a.capacity(), {}, {}};
  stream_convolution(a, b, sink);
  return sink.finalize();
}

TailArray approx_iid_sum(const TailArray& base, std::int64_t multiplicity,
                         const ApproxParams& p) {
  if (multiplicity < 1 ||
      !std::has_single_bit(static_cast<std::uint64_t>(multiplicity))) {
    throw std::invalid_argument("approx_iid_sum: multiplicity must be a power of two");
  }
  TailArray acc = round_zeta_eta(base, p);
  for (std::int64_t m = 1; m < multiplicity; m <<= 1) {
    acc = convolve_rounded(acc, acc, p);
  }
  return acc;
}

void set_convolution_window_cells(std::int64_t cells) {
  if (cells < 16) {
    throw std::invalid_argument("convolution window must have at least 16 cells");
  }
  g_window_cells = cells;
}

}  // namespace sumk
