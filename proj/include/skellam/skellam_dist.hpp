#pragma once

#include <cmath>
#include <cstdint>

#include "skellam/bessel.hpp"
#include "skellam/chain.hpp"
#include "skellam/lattice_measure.hpp"
#include "skellam/series.hpp"

namespace skellam {

/// Intensities of the two independent Poisson components of a Skellam law.
struct SkellamParams {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

/// Poisson pmf e^{-lam} lam^k / k!, in log space; 0 for k < 0 or lam = 0, k > 0.
inline double poisson_pmf(double lam, std::int64_t k) {
  if (!(lam >= 0.0)) throw std::invalid_argument("poisson_pmf: lambda must be >= 0");
  if (k < 0) return 0.0;
  if (lam == 0.0) return (k == 0) ? 1.0 : 0.0;
  return std::exp(-lam + static_cast<double>(k) * std::log(lam) -
                  std::lgamma(static_cast<double>(k) + 1.0));
}

/// P(pi_{l1} - pi_{l2} = k) = e^{-l1-l2} (l1/l2)^{k/2} I_{|k|}(2 sqrt(l1 l2)),
/// assembled in log space. Degenerate intensities reduce to (reflected)
/// Poisson pmfs; both zero reduces to the point mass at 0.
inline double skellam_pmf(const SkellamParams& p, std::int64_t k) {
  if (!(p.lambda1 >= 0.0) || !(p.lambda2 >= 0.0))
    throw std::invalid_argument("skellam_pmf: intensities must be >= 0");
  if (p.lambda2 == 0.0) return poisson_pmf(p.lambda1, k);
  if (p.lambda1 == 0.0) return poisson_pmf(p.lambda2, -k);
  const double bessel = bessel_i(static_cast<int>(k < 0 ? -k : k),
                                 2.0 * std::sqrt(p.lambda1 * p.lambda2));
  if (bessel <= 0.0) return 0.0;
  const double lg = -p.lambda1 - p.lambda2 +
                    0.5 * static_cast<double>(k) *
                        (std::log(p.lambda1) - std::log(p.lambda2)) +
                    std::log(bessel);
  return std::exp(lg);
}

/// The half-and-half two-point measure L = (I_{-1} + I_1)/2.
inline LatticeMeasure two_point_half() { return LatticeMeasure(-1, {0.5, 0.0, 0.5}); }

/// D^{*n} = exp{n lam (I_1 - I) + n lam (I_{-1} - I)} with
/// lam = beta/(1-2alpha+2beta), built as cp_exponential(2 n lam, L).
inline LatticeMeasure skellam_power(const ChainParams& cp, std::int64_t n,
                                    TruncationBudget& tb) {
  if (n < 0) throw std::invalid_argument("skellam_power: n must be >= 0");
  return cp_exponential(2.0 * static_cast<double>(n) * cp.skellam_intensity(),
                        two_point_half(), tb);
}

}  // namespace skellam
