#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "skellam/chain.hpp"
#include "skellam/components.hpp"
#include "skellam/lattice_measure.hpp"
#include "skellam/markov_exact.hpp"
#include "skellam/norms.hpp"
#include "skellam/skellam_dist.hpp"

namespace skellam {

/// Which theorem's approximant and bound shape to evaluate.
///  - EKG:       E*K*G^{*n}, shapes min(n^{-1}; b)-style
///  - Skellam:   D^{*n}, shapes (1/n)(1+|a-b|/b)-style, C := 1
///  - Expansion: D^{*n}*(I+A1+nA2), shapes (1/n^2)(1+(a-b)^2/b^2)-style, C := 1
///  - Explicit:  D^{*n} against explicit leading constants (0.61/n, ...)
///  - LrInterp:  D^{*n} in l_r / L_r norms via the interpolation exponents
enum class TheoremId { EKG, Skellam, Expansion, Explicit, LrInterp };

/// norm(F - G, kind). Wasserstein/CapLr require equal total masses within
/// 1e-9, otherwise the partial-sum series diverges.
inline double distance(const LatticeMeasure& f, const LatticeMeasure& g,
                       NormKind kind) {
  if (kind.family == NormKind::Family::Wasserstein ||
      kind.family == NormKind::Family::CapLr) {
    if (std::abs(f.mass() - g.mass()) > 1e-9)
      throw mass_error("distance: Wasserstein/CapLr need equal total masses (got " +
                       std::to_string(f.mass()) + " vs " + std::to_string(g.mass()) +
                       ")");
  }
  return norm(linear_combine(1.0, f, -1.0, g), kind);
}

/// Metric conventions on top of the norms: the total variation metric is
/// half of the total variation norm; local and Wasserstein metrics equal
/// their norms.
inline double tv_metric(const LatticeMeasure& f, const LatticeMeasure& g) {
  return 0.5 * distance(f, g, NormKind::tv());
}

/// The theorem's bound with C set to 1 (shape), or the explicit leading
/// term for TheoremId::Explicit. For LrInterp, r is taken from the
/// norm kind. Combinations the theorems do not cover are rejected.
inline double bound_shape(TheoremId id, NormKind kind, const ChainParams& cp,
                          std::int64_t n) {
  if (n < 1) throw std::invalid_argument("bound_shape: n must be >= 1");
  const double a = cp.alpha;
  const double b = cp.beta;
  const double nn = static_cast<double>(n);
  const double ratio = std::abs(a - b) / b;
  using Fam = NormKind::Family;
  switch (id) {
    case TheoremId::EKG:
      switch (kind.family) {
        case Fam::TotalVariation: return std::min(1.0 / nn, b);
        case Fam::Local: return std::min(1.0 / (nn * std::sqrt(nn * b)), b);
        case Fam::Wasserstein: return std::min(std::sqrt(b / nn), b);
        default: break;
      }
      break;
    case TheoremId::Skellam:
      switch (kind.family) {
        case Fam::TotalVariation: return (1.0 / nn) * (1.0 + ratio);
        case Fam::Local: return (1.0 / (nn * std::sqrt(nn * b))) * (1.0 + ratio);
        case Fam::Wasserstein: return std::sqrt(b / nn) * (1.0 + ratio);
        default: break;
      }
      break;
    case TheoremId::Expansion:
      switch (kind.family) {
        case Fam::TotalVariation: return (1.0 / (nn * nn)) * (1.0 + ratio * ratio);
        case Fam::Local:
          return (1.0 / (nn * nn * std::sqrt(nn * b))) * (1.0 + ratio * ratio);
        case Fam::Wasserstein:
          return (1.0 / nn) * std::sqrt(b / nn) * (1.0 + ratio * ratio);
        default: break;
      }
      break;
    case TheoremId::Explicit:
      switch (kind.family) {
        case Fam::TotalVariation: return (0.61 / nn) * (1.0 + 3.21 * ratio);
        case Fam::Local:
          return (0.6 / (nn * std::sqrt(nn * b))) * (1.0 + 3.0 * ratio);
        case Fam::Wasserstein:
          return 0.5 * std::sqrt(b / nn) * (1.0 + 3.9 * ratio);
        default: break;
      }
      break;
    case TheoremId::LrInterp: {
      const double r = kind.r;
      if (kind.family == Fam::Lr)
        return std::pow(nn, -(3.0 * r - 1.0) / (2.0 * r)) *
               std::pow(b, -(r - 1.0) / (2.0 * r)) * (1.0 + ratio);
      // interpolated from the TV and Wasserstein shapes as
      // (TV)^{(r-1)/r} (W)^{1/r}; note the exponent decays in n
      if (kind.family == Fam::CapLr)
        return std::pow(nn, -(2.0 * r - 1.0) / (2.0 * r)) * std::pow(b, 1.0 / (2.0 * r)) *
               (1.0 + ratio);
      break;
    }
  }
  throw unsupported_error("bound_shape: combination not defined by the theorems");
}

/// One grid point of a sweep.
struct SweepPoint {
  ChainParams cp;
  std::int64_t n = 1;
};

/// One record of an experiment: parameters, measured lhs, bound shape, their
/// ratio, and the truncation mass spent building the measures. A nonempty
/// `error` marks a failed row (lhs/shape/ratio are NaN).
struct SweepRow {
  double alpha = 0, beta = 0, p1 = 0, p2 = 0, p3 = 0;
  std::int64_t n = 0;
  NormKind metric;
  TheoremId approximant = TheoremId::Skellam;
  double lhs = 0, shape = 0, ratio = 0;
  double truncation = 0;
  std::string error;
};

/// The measure each theorem compares F_n against.
inline LatticeMeasure approximant_measure(TheoremId id, const ChainParams& cp,
                                          std::int64_t n, TruncationBudget& tb) {
  switch (id) {
    case TheoremId::EKG: return theorem1_approx(cp, n, tb);
    case TheoremId::Expansion: return expansion_approx(cp, n, tb);
    case TheoremId::Skellam:
    case TheoremId::Explicit:
    case TheoremId::LrInterp: return skellam_power(cp, n, tb);
  }
  throw std::invalid_argument("approximant_measure: unknown theorem id");
}

/// One row per (grid point, metric), in grid-major deterministic order.
/// Rows are independent; with jobs > 1 the points are processed
/// concurrently and written into their preassigned slots. Per-row failures
/// are recorded in the row, never abort the sweep.
inline std::vector<SweepRow> sweep(std::span<const SweepPoint> grid, TheoremId id,
                                   std::span<const NormKind> metrics, int jobs = 1,
                                   double budget = 1e-12) {
  if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
  if (metrics.empty()) throw std::invalid_argument("sweep: no metrics");
  std::vector<SweepRow> rows(grid.size() * metrics.size());

  auto run_point = [&](std::size_t pi) {
    const SweepPoint& pt = grid[pi];
    SweepRow base;
    base.alpha = pt.cp.alpha;
    base.beta = pt.cp.beta;
    base.p1 = pt.cp.p1;
    base.p2 = pt.cp.p2;
    base.p3 = pt.cp.p3;
    base.n = pt.n;
    base.approximant = id;

    LatticeMeasure fn, approx;
    TruncationBudget tb{budget, 0.0};
    std::string build_error;
    try {
      fn = exact_distribution(pt.cp, pt.n);
      approx = approximant_measure(id, pt.cp, pt.n, tb);
    } catch (const std::exception& e) {
      build_error = e.what();
    }
    for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
      SweepRow row = base;
      row.metric = metrics[mi];
      row.truncation = tb.accumulated;
      if (!build_error.empty()) {
        row.error = build_error;
        row.lhs = row.shape = row.ratio = std::nan("");
      } else {
        try {
          row.lhs = distance(fn, approx, metrics[mi]);
          row.shape = bound_shape(id, metrics[mi], pt.cp, pt.n);
          row.ratio = row.lhs / row.shape;
        } catch (const std::exception& e) {
          row.error = e.what();
          row.lhs = row.shape = row.ratio = std::nan("");
        }
      }
      rows[pi * metrics.size() + mi] = std::move(row);
    }
  };

  if (jobs <= 1 || grid.size() == 1) {
    for (std::size_t pi = 0; pi < grid.size(); ++pi) run_point(pi);
  } else {
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t pi = cursor.fetch_add(1);
        if (pi >= grid.size()) return;
        run_point(pi);
      }
    };
    const std::size_t nthreads =
        std::min<std::size_t>(static_cast<std::size_t>(jobs), grid.size());
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

/// Least-squares fit of log(value) against log(n).
struct RateFit {
  double slope = 0;
  double intercept = 0;
};

inline RateFit rate_fit(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3)
    throw std::invalid_argument("rate_fit: need at least 3 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [n, value] : points) {
    if (!(n > 0.0) || !(value > 0.0))
      throw std::domain_error("rate_fit: points must be positive");
    const double x = std::log(n);
    const double y = std::log(value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(points.size());
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return {slope, (sy - slope * sx) / m};
}

enum class SmoothingKind { TotalVariation, Local };

struct SmoothingResult {
  double lhs = 0;
  double rhs = 0;
  bool ok = false;
};

/// lhs = ||(F-I)^{*j} * exp{t(F-I)}|| against the smoothing bounds:
/// TV: sqrt(2/(e t)) for j=1, 3/(e t) for j=2, sqrt(j!) t^{-j/2} otherwise;
/// local (F symmetric on Z \ {0}): 2((j+1/2)/(t e))^{j+1/2}.
/// ok means lhs <= rhs + 1e-12.
inline SmoothingResult smoothing_check(const LatticeMeasure& f, double t,
                                       std::int64_t j, SmoothingKind kind) {
  if (!(t > 0.0)) throw std::invalid_argument("smoothing_check: t must be > 0");
  if (j < 1) throw std::invalid_argument("smoothing_check: j must be >= 1");
  for (double w : f.weights())
    if (w < 0.0)
      throw std::invalid_argument("smoothing_check: F must be a probability measure");
  if (std::abs(f.mass() - 1.0) > 1e-9)
    throw std::invalid_argument("smoothing_check: F must have total mass 1");
  if (kind == SmoothingKind::Local) {
    if (f.at(0) != 0.0)
      throw std::invalid_argument("smoothing_check(local): F must vanish at 0");
    for (std::int64_t k = f.min_support(); k <= f.max_support(); ++k)
      if (std::abs(f.at(k) - f.at(-k)) > 1e-12)
        throw std::invalid_argument("smoothing_check(local): F must be symmetric");
  }

  TruncationBudget tb{1e-15, 0.0};
  const LatticeMeasure exppart = cp_exponential(t, f, tb);
  const LatticeMeasure fmi = linear_combine(1.0, f, -1.0, dirac(0));
  const LatticeMeasure lhs_measure =
      convolve(convolve_power(fmi, static_cast<std::uint64_t>(j)), exppart);

  SmoothingResult res;
  if (kind == SmoothingKind::TotalVariation) {
    res.lhs = norm(lhs_measure, NormKind::tv());
    if (j == 1)
      res.rhs = std::sqrt(2.0 / (std::exp(1.0) * t));
    else if (j == 2)
      res.rhs = 3.0 / (std::exp(1.0) * t);
    else
      res.rhs = std::sqrt(std::tgamma(static_cast<double>(j) + 1.0)) *
                std::pow(t, -static_cast<double>(j) / 2.0);
  } else {
    res.lhs = norm(lhs_measure, NormKind::local());
    const double e = std::exp(1.0);
    const double p = static_cast<double>(j) + 0.5;
    res.rhs = 2.0 * std::pow(p / (t * e), p);
  }
  res.ok = res.lhs <= res.rhs + 1e-12;
  return res;
}

namespace detail {

inline double binomial_coeff(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (std::int64_t i = 0; i < k; ++i)
    c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return c;  // exact in double for n <= 20
}

}  // namespace detail

/// TV residual of Bergstrom's identity at expansion depth k:
/// V^{*n} - M^{*n} = sum_{m=1}^{k} binom(n,m) (V-M)^{*m} * M^{*(n-m)}
///                 + (V-M)^{*(k+1)} * sum_{m=k}^{n-1} binom(m,k) V^{*(n-1-m)} * M^{*(m-k)}.
/// Exact evaluation is guarded to small supports and n <= 20. If scale_out is
/// given, it receives the largest term TV norm, defining "residual <= tol*scale".
inline double bergstrom_residual(const LatticeMeasure& v, const LatticeMeasure& m,
                                 std::int64_t n, std::int64_t k,
                                 double* scale_out = nullptr) {
  if (n < 1 || n > 20)
    throw std::invalid_argument("bergstrom_residual: need 1 <= n <= 20");
  if (k < 0 || k >= n)
    throw std::invalid_argument("bergstrom_residual: need 0 <= k < n");
  if (v.size() > 32 || m.size() > 32)
    throw std::invalid_argument("bergstrom_residual: supports must be <= 32 points");

  const LatticeMeasure d = linear_combine(1.0, v, -1.0, m);
  const LatticeMeasure lhs =
      linear_combine(1.0, convolve_power(v, static_cast<std::uint64_t>(n)), -1.0,
                     convolve_power(m, static_cast<std::uint64_t>(n)));
  double scale = std::max(tv_norm(convolve_power(v, static_cast<std::uint64_t>(n))),
                          tv_norm(convolve_power(m, static_cast<std::uint64_t>(n))));

  LatticeMeasure rhs;
  for (std::int64_t i = 1; i <= k; ++i) {
    const LatticeMeasure term =
        convolve(convolve_power(d, static_cast<std::uint64_t>(i)),
                 convolve_power(m, static_cast<std::uint64_t>(n - i)));
    const double c = detail::binomial_coeff(n, i);
    scale = std::max(scale, c * tv_norm(term));
    rhs = linear_combine(1.0, rhs, c, term);
  }
  LatticeMeasure inner;
  for (std::int64_t i = k; i <= n - 1; ++i) {
    const LatticeMeasure term =
        convolve(convolve_power(v, static_cast<std::uint64_t>(n - 1 - i)),
                 convolve_power(m, static_cast<std::uint64_t>(i - k)));
    inner = linear_combine(1.0, inner, detail::binomial_coeff(i, k), term);
  }
  const LatticeMeasure remainder =
      convolve(convolve_power(d, static_cast<std::uint64_t>(k + 1)), inner);
  scale = std::max(scale, tv_norm(remainder));
  rhs = linear_combine(1.0, rhs, 1.0, remainder);

  if (scale_out) *scale_out = scale;
  return tv_norm(linear_combine(1.0, lhs, -1.0, rhs));
}

/// Empirical constant for the independent-case sanity shape
/// min(4 n b^2, 4/n): K_emp = lhs / shape. Reported, never asserted.
inline double presman_ratio(double lhs, std::int64_t n, double beta) {
  const double shape =
      std::min(4.0 * static_cast<double>(n) * beta * beta, 4.0 / static_cast<double>(n));
  return lhs / shape;
}

}  // namespace skellam
