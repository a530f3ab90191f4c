#pragma once

#include <cstdint>
#include <vector>

#include "skellam/chain.hpp"
#include "skellam/components.hpp"
#include "skellam/counter_rng.hpp"
#include "skellam/lattice_measure.hpp"
#include "skellam/norms.hpp"

namespace skellam {

/// Exact distribution of S_n = f(xi_1) + ... + f(xi_n) by forward dynamic
/// programming over (state, partial sum). xi_0 contributes its initial
/// distribution but no summand; the value added at step i is f of the
/// arrived state. O(n^2) arithmetic, support inside [-n, n], total mass 1
/// up to rounding.
inline LatticeMeasure exact_distribution(const ChainParams& cp, std::int64_t n) {
  if (n < 0) throw std::invalid_argument("exact_distribution: n must be >= 0");
  if (n == 0) return dirac(0);
  const std::size_t width = static_cast<std::size_t>(2 * n + 1);
  // v[s][k + n] = P(xi_i = s, S_i = k)
  std::vector<std::vector<double>> v(3, std::vector<double>(width, 0.0));
  std::vector<std::vector<double>> next(3, std::vector<double>(width, 0.0));
  const auto init = cp.initial();
  for (int s = 0; s < 3; ++s) v[static_cast<std::size_t>(s)][static_cast<std::size_t>(n)] = init[static_cast<std::size_t>(s)];

  // rows out of a1 and a3 coincide, so only the (a1+a3, a2) split matters
  std::vector<double> outer(width);
  for (std::int64_t i = 1; i <= n; ++i) {
    for (std::size_t k = 0; k < width; ++k) outer[k] = v[0][k] + v[2][k];
    const auto row_outer = cp.transition_row(0);
    const auto row_mid = cp.transition_row(1);
    // only indices within [n-i, n+i] can be occupied
    const std::size_t lo = static_cast<std::size_t>(n - i);
    const std::size_t hi = static_cast<std::size_t>(n + i);
    for (int sp = 0; sp < 3; ++sp) {
      const double w_outer = row_outer[static_cast<std::size_t>(sp)];
      const double w_mid = row_mid[static_cast<std::size_t>(sp)];
      auto& dst = next[static_cast<std::size_t>(sp)];
      const std::int64_t shift = kStateValues[static_cast<std::size_t>(sp)];
      for (std::size_t k = lo; k <= hi; ++k) {
        const std::int64_t src = static_cast<std::int64_t>(k) - shift;
        dst[k] = (src >= 0 && src < static_cast<std::int64_t>(width))
                     ? outer[static_cast<std::size_t>(src)] * w_outer +
                           v[1][static_cast<std::size_t>(src)] * w_mid
                     : 0.0;
      }
    }
    std::swap(v, next);
  }
  std::vector<double> w(width, 0.0);
  for (std::size_t k = 0; k < width; ++k) w[k] = v[0][k] + v[1][k] + v[2][k];
  return LatticeMeasure(-n, std::move(w));
}

/// Empirical pmf of S_n from simulated chain paths. Deterministic given
/// seed: draw j of sample i is splitmix64_at(seed, i*(n+1) + j); draw 0
/// picks xi_0 against (p1, p2, p3) and draws 1..n advance the chain, each
/// compared against the cumulative transition row in state order a1, a2, a3.
inline LatticeMeasure monte_carlo_distribution(const ChainParams& cp, std::int64_t n,
                                               std::int64_t samples,
                                               std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("monte_carlo_distribution: n must be >= 1");
  if (samples < 1)
    throw std::invalid_argument("monte_carlo_distribution: samples must be >= 1");
  const std::size_t width = static_cast<std::size_t>(2 * n + 1);
  std::vector<std::int64_t> counts(width, 0);
  const double c1 = cp.p1;
  const double c2 = cp.p1 + cp.p2;
  for (std::int64_t i = 0; i < samples; ++i) {
    const std::uint64_t base = static_cast<std::uint64_t>(i) *
                               static_cast<std::uint64_t>(n + 1);
    const double u0 = u01_from_bits(splitmix64_at(seed, base));
    int state = (u0 < c1) ? 0 : (u0 < c2 ? 1 : 2);
    std::int64_t sum = 0;
    for (std::int64_t j = 1; j <= n; ++j) {
      const double q = (state == 1) ? cp.beta : cp.alpha;
      const double u = u01_from_bits(splitmix64_at(seed, base + static_cast<std::uint64_t>(j)));
      state = (u < q) ? 0 : (u < 1.0 - q ? 1 : 2);
      sum += kStateValues[static_cast<std::size_t>(state)];
    }
    ++counts[static_cast<std::size_t>(sum + n)];
  }
  std::vector<double> w(width);
  for (std::size_t k = 0; k < width; ++k)
    w[k] = static_cast<double>(counts[k]) / static_cast<double>(samples);
  return LatticeMeasure(-n, std::move(w));
}

/// Which P*W interpretation the decomposition diagnostic uses.
///  - Displayed: the closed-form P1, P2 builders (which carry no total
///    mass, so this interpretation cannot reproduce F_n).
///  - Eigen: the P_i * W_i products are derived numerically from the
///    two-eigenvalue transfer structure: Q1 = (F_2 - F_1*Lambda2) *
///    Lambda1^{-1} * (Lambda1 - Lambda2)^{-1}, remainder R2 = F_1 - Q1*Lambda1
///    (which equals Q2*Lambda2), using Neumann/binomial series for the
///    inverses. No closed-form P/W guesses are involved.
enum class DecompositionVariant { Displayed, Eigen };

inline const char* to_string(DecompositionVariant v) {
  return v == DecompositionVariant::Displayed ? "displayed" : "eigen";
}

/// || F_n - (P1*Lambda1^{*n}*W1 + P2*Lambda2^{*n}*W2) ||_TV for the chosen
/// variant. A diagnostic, not an assertion: report, don't assert.
inline double decomposition_residual(const ChainParams& cp, std::int64_t n,
                                     DecompositionVariant variant,
                                     TruncationBudget& tb) {
  if (n < 1) throw std::invalid_argument("decomposition_residual: n must be >= 1");
  const LatticeMeasure fn = exact_distribution(cp, n);
  const LatticeMeasure lam1 = build_component(cp, ComponentName::Lambda1, tb);
  const LatticeMeasure lam2 = build_component(cp, ComponentName::Lambda2, tb);

  LatticeMeasure approx;
  if (variant == DecompositionVariant::Displayed) {
    const LatticeMeasure w1 = build_component(cp, ComponentName::W1, tb);
    const LatticeMeasure w2 = build_component(cp, ComponentName::W2, tb);
    const LatticeMeasure q1 = build_component(cp, ComponentName::P1, tb);
    const LatticeMeasure q2 = build_component(cp, ComponentName::P2, tb);
    approx = linear_combine(
        1.0, convolve(q1, convolve(convolve_power(lam1, static_cast<std::uint64_t>(n)), w1)),
        1.0, convolve(q2, convolve(convolve_power(lam2, static_cast<std::uint64_t>(n)), w2)));
  } else {
    const double den = 1.0 - 2.0 * cp.alpha + 2.0 * cp.beta;
    const LatticeMeasure f1 = exact_distribution(cp, 1);
    const LatticeMeasure f2 = exact_distribution(cp, 2);
    const LatticeMeasure delta = build_component(cp, ComponentName::Delta, tb);
    const LatticeMeasure u = build_component(cp, ComponentName::U, tb);
    const LatticeMeasure inv_root =
        detail::named_binomial(HalfExponent::MinusHalf, delta, tb, "decomposition");
    const LatticeMeasure geom = detail::geometric_u(cp, u, tb, "decomposition");
    // (Lambda1 - Lambda2)^{-1} = (I+Delta)^{-1/2} * geom / den
    const LatticeMeasure inv_gap = scaled(convolve(inv_root, geom), 1.0 / den);
    const LatticeMeasure eye_minus_lam1 = linear_combine(1.0, dirac(0), -1.0, lam1);
    const LatticeMeasure inv_lam1 =
        detail::named_series(eye_minus_lam1, tb, "decomposition Lambda1 inverse");
    const LatticeMeasure q1 = convolve(
        linear_combine(1.0, f2, -1.0, convolve(f1, lam2)), convolve(inv_lam1, inv_gap));
    const LatticeMeasure r2 = linear_combine(1.0, f1, -1.0, convolve(q1, lam1));
    approx = linear_combine(
        1.0, convolve(q1, convolve_power(lam1, static_cast<std::uint64_t>(n))),
        1.0, convolve(r2, convolve_power(lam2, static_cast<std::uint64_t>(n - 1))));
  }
  return tv_norm(linear_combine(1.0, fn, -1.0, approx));
}

}  // namespace skellam
