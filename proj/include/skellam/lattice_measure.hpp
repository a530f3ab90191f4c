#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace skellam {

/// Thrown when a series operand has total variation >= 1 (or a series is
/// otherwise not summable). The message names the failing block.
class divergence_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown when a Wasserstein-type norm is requested for a measure whose
/// total mass is not (numerically) zero.
class mass_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown for theorem/metric combinations the bound tables do not define.
class unsupported_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Finite signed measure on the integers: a dense run of weights starting at
/// `offset`. Canonical form trims exact zeros at both ends; the zero measure
/// is the empty run. Values are immutable after construction.
class LatticeMeasure {
 public:
  LatticeMeasure() = default;  // zero measure

  LatticeMeasure(std::int64_t offset, std::vector<double> weights)
      : offset_(offset), weights_(std::move(weights)) {
    canonicalize();
  }

  bool is_zero() const { return weights_.empty(); }
  std::int64_t offset() const { return offset_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }

  /// Smallest / largest point of the stored support (zero measure: both 0).
  std::int64_t min_support() const { return offset_; }
  std::int64_t max_support() const {
    return weights_.empty() ? 0
                            : offset_ + static_cast<std::int64_t>(weights_.size()) - 1;
  }

  /// Weight of the point {k}; 0 outside the stored run.
  double at(std::int64_t k) const {
    const std::int64_t i = k - offset_;
    if (i < 0 || i >= static_cast<std::int64_t>(weights_.size())) return 0.0;
    return weights_[static_cast<std::size_t>(i)];
  }

  /// Total mass M{Z}.
  double mass() const {
    return std::accumulate(weights_.begin(), weights_.end(), 0.0);
  }

 private:
  void canonicalize() {
    std::size_t lo = 0, hi = weights_.size();
    while (lo < hi && weights_[lo] == 0.0) ++lo;
    while (hi > lo && weights_[hi - 1] == 0.0) --hi;
    if (lo == hi) {
      offset_ = 0;
      weights_.clear();
      return;
    }
    if (lo > 0 || hi < weights_.size()) {
      weights_ = std::vector<double>(weights_.begin() + static_cast<std::ptrdiff_t>(lo),
                                     weights_.begin() + static_cast<std::ptrdiff_t>(hi));
      offset_ += static_cast<std::int64_t>(lo);
    }
  }

  std::int64_t offset_ = 0;
  std::vector<double> weights_;
};

/// Per-operation allowance for discarded l1 mass, plus the running total of
/// what was actually discarded. Each series/exponential operation may drop at
/// most `budget` and adds its real discard (or a tail bound for analytic
/// truncations) to `accumulated`. Confine one instance to one task.
struct TruncationBudget {
  double budget = 1e-12;
  double accumulated = 0.0;
};

/// Degenerate measure I_a with I_a{a} = 1.
inline LatticeMeasure dirac(std::int64_t a = 0) { return LatticeMeasure(a, {1.0}); }

/// Pointwise c1*M + c2*V.
inline LatticeMeasure linear_combine(double c1, const LatticeMeasure& m, double c2,
                                     const LatticeMeasure& v) {
  if (m.is_zero() && v.is_zero()) return LatticeMeasure();
  std::int64_t lo = std::min(m.is_zero() ? v.min_support() : m.min_support(),
                             v.is_zero() ? m.min_support() : v.min_support());
  std::int64_t hi = std::max(m.is_zero() ? v.max_support() : m.max_support(),
                             v.is_zero() ? m.max_support() : v.max_support());
  std::vector<double> w(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i)
    w[static_cast<std::size_t>(m.offset() - lo) + i] += c1 * m.weights()[i];
  for (std::size_t i = 0; i < v.size(); ++i)
    w[static_cast<std::size_t>(v.offset() - lo) + i] += c2 * v.weights()[i];
  return LatticeMeasure(lo, std::move(w));
}

/// c*M.
inline LatticeMeasure scaled(const LatticeMeasure& m, double c) {
  if (m.is_zero() || c == 0.0) return LatticeMeasure();
  std::vector<double> w(m.weights());
  for (double& x : w) x *= c;
  return LatticeMeasure(m.offset(), std::move(w));
}

/// Exact discrete convolution, schoolbook O(mn). Support is the Minkowski
/// sum of the operand supports; mass is multiplicative.
inline LatticeMeasure convolve(const LatticeMeasure& m, const LatticeMeasure& v) {
  if (m.is_zero() || v.is_zero()) return LatticeMeasure();
  const auto& a = m.weights();
  const auto& b = v.weights();
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b[j];
  }
  return LatticeMeasure(m.offset() + v.offset(), std::move(out));
}

/// k-fold convolution power; k = 0 yields I.
inline LatticeMeasure convolve_power(const LatticeMeasure& m, std::uint64_t k) {
  LatticeMeasure result = dirac(0);
  LatticeMeasure base = m;
  while (k > 0) {
    if (k & 1u) result = convolve(result, base);
    k >>= 1u;
    if (k) base = convolve(base, base);
  }
  return result;
}

/// (I_{direction} - I) * M by shifted subtraction (no full convolution).
/// direction = +1: result{k} = M{k-1} - M{k}; direction = -1 mirrors it.
inline LatticeMeasure diff_conv(const LatticeMeasure& m, int direction) {
  if (direction != 1 && direction != -1)
    throw std::invalid_argument("diff_conv: direction must be +1 or -1");
  if (m.is_zero()) return LatticeMeasure();
  const auto& w = m.weights();
  const std::size_t n = w.size();
  std::vector<double> out(n + 1, 0.0);
  if (direction == 1) {
    // result{k} = M{k-1} - M{k}, support grows one point to the right
    for (std::size_t i = 0; i < n; ++i) {
      out[i + 1] += w[i];
      out[i] -= w[i];
    }
    return LatticeMeasure(m.offset(), std::move(out));
  }
  // result{k} = M{k+1} - M{k}, support grows one point to the left
  for (std::size_t i = 0; i < n; ++i) {
    out[i] += w[i];
    out[i + 1] -= w[i];
  }
  return LatticeMeasure(m.offset() - 1, std::move(out));
}

/// Remove smallest-|weight| edge entries while total discarded l1 mass stays
/// within tb.budget. Updates tb.accumulated by the mass actually dropped.
inline LatticeMeasure truncate(const LatticeMeasure& m, TruncationBudget& tb) {
  if (m.is_zero() || tb.budget <= 0.0) return m;
  const auto& w = m.weights();
  std::size_t lo = 0, hi = w.size() - 1;
  double discarded = 0.0;
  while (lo < hi) {
    const double a = std::abs(w[lo]);
    const double b = std::abs(w[hi]);
    const double next = std::min(a, b);
    if (discarded + next > tb.budget) break;
    if (a <= b) {
      discarded += a;
      ++lo;
    } else {
      discarded += b;
      --hi;
    }
  }
  tb.accumulated += discarded;
  if (lo == 0 && hi == w.size() - 1) return m;
  return LatticeMeasure(m.offset() + static_cast<std::int64_t>(lo),
                        std::vector<double>(w.begin() + static_cast<std::ptrdiff_t>(lo),
                                            w.begin() + static_cast<std::ptrdiff_t>(hi) + 1));
}

}  // namespace skellam
