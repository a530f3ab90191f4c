// Minimal tour of the library: build the exact chain distribution, its
// Skellam approximant and the first-order expansion, and print how the
// distances decay against the bound shapes.

#include <cstdio>

#include "skellam/skellam.hpp"

int main() {
  using namespace skellam;

  const ChainParams cp = ChainParams::uniform(1.0 / 30.0, 1.0 / 40.0);
  std::printf("alpha = %.6f, beta = %.6f, lambda = %.6f\n\n", cp.alpha, cp.beta,
              cp.skellam_intensity());
  std::printf("%6s  %12s  %12s  %12s  %12s\n", "n", "||Fn-Dn||tv", "shape 1/n",
              "ratio", "expansion");

  for (std::int64_t n : {64, 128, 256, 512, 1024}) {
    TruncationBudget tb{1e-12, 0.0};
    const LatticeMeasure fn = exact_distribution(cp, n);
    const LatticeMeasure dn = skellam_power(cp, n, tb);
    const LatticeMeasure en = expansion_approx(cp, n, tb);
    const double lhs = distance(fn, dn, NormKind::tv());
    const double shape = bound_shape(TheoremId::Skellam, NormKind::tv(), cp, n);
    std::printf("%6lld  %12.4e  %12.4e  %12.4f  %12.4e\n", static_cast<long long>(n),
                lhs, shape, lhs / shape, distance(fn, en, NormKind::tv()));
  }

  std::printf("\npmf of the n=256 Skellam approximant near the origin:\n");
  const double lam = 256.0 * cp.skellam_intensity();
  for (std::int64_t k = -3; k <= 3; ++k)
    std::printf("  P(S = %+lld) ~ %.6f\n", static_cast<long long>(k),
                skellam_pmf({lam, lam}, k));
  return 0;
}
