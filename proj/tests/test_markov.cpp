#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <functional>

#include "skellam/markov_exact.hpp"
#include "test_util.hpp"

using namespace skellam;
using testutil::tv_diff;

namespace {

// oracle: full enumeration over all 3^n paths; extended precision keeps the
// oracle's own rounding well below the 1e-14 tolerance it arbitrates
LatticeMeasure enumerate_paths(const ChainParams& cp, int n) {
  std::vector<long double> w(static_cast<std::size_t>(2 * n + 1), 0.0L);
  std::function<void(int, int, int, long double)> walk =
      [&](int depth, int state, int sum, long double prob) {
        if (depth == n) {
          w[static_cast<std::size_t>(sum + n)] += prob;
          return;
        }
        const auto row = cp.transition_row(state);
        for (int next = 0; next < 3; ++next)
          walk(depth + 1, next, sum + kStateValues[static_cast<std::size_t>(next)],
               prob * static_cast<long double>(row[static_cast<std::size_t>(next)]));
      };
  const auto init = cp.initial();
  for (int s0 = 0; s0 < 3; ++s0)
    walk(0, s0, 0, static_cast<long double>(init[static_cast<std::size_t>(s0)]));
  return LatticeMeasure(-n, std::vector<double>(w.begin(), w.end()));
}

}  // namespace

TEST_CASE("exact_distribution base cases") {
  const ChainParams cp = ChainParams::create(0.03, 0.01, 0.5, 0.3, 0.2);
  REQUIRE(tv_diff(exact_distribution(cp, 0), dirac(0)) == 0.0);

  // one-step enumeration over the transition table
  const LatticeMeasure f1 = exact_distribution(cp, 1);
  const double step = cp.alpha * (cp.p1 + cp.p3) + cp.beta * cp.p2;
  REQUIRE(f1.at(1) == Catch::Approx(step).epsilon(1e-14));
  REQUIRE(f1.at(-1) == Catch::Approx(step).epsilon(1e-14));
  REQUIRE(f1.at(0) == Catch::Approx(1.0 - 2.0 * step).epsilon(1e-14));
}

TEST_CASE("exact_distribution equals full path enumeration for small n") {
  const ChainParams cp = ChainParams::create(1.0 / 30.0, 0.02, 0.2, 0.5, 0.3);
  for (int n : {1, 2, 3, 5, 8})
    REQUIRE(tv_diff(exact_distribution(cp, n), enumerate_paths(cp, n)) <= 1e-14);
}

TEST_CASE("exact_distribution reduces to convolution powers when alpha=beta") {
  const double p = 0.02;
  const ChainParams cp = ChainParams::uniform(p, p);
  const LatticeMeasure q(-1, {p, 1.0 - 2.0 * p, p});
  for (std::int64_t n : {1, 7, 64}) {
    const LatticeMeasure lhs = exact_distribution(cp, n);
    REQUIRE(tv_diff(lhs, convolve_power(q, static_cast<std::uint64_t>(n))) <= 1e-10);
  }
}

TEST_CASE("exact_distribution symmetry when p1 = p3") {
  const ChainParams cp = ChainParams::create(0.03, 0.01, 0.25, 0.5, 0.25);
  const LatticeMeasure f = exact_distribution(cp, 17);
  for (std::int64_t k = 0; k <= 17; ++k)
    REQUIRE(f.at(k) == Catch::Approx(f.at(-k)).margin(1e-12));
  REQUIRE(std::abs(f.mass() - 1.0) <= 1e-12);
}

TEST_CASE("support grows by at most one point per side per step") {
  const ChainParams cp = ChainParams::uniform(0.03, 0.02);
  LatticeMeasure prev = exact_distribution(cp, 1);
  for (std::int64_t n = 2; n <= 12; ++n) {
    const LatticeMeasure cur = exact_distribution(cp, n);
    REQUIRE(cur.min_support() >= prev.min_support() - 1);
    REQUIRE(cur.max_support() <= prev.max_support() + 1);
    REQUIRE(cur.min_support() >= -n);
    REQUIRE(cur.max_support() <= n);
    prev = cur;
  }
}

TEST_CASE("monte_carlo_distribution determinism and mass") {
  const ChainParams cp = ChainParams::uniform(0.02, 0.02);
  const LatticeMeasure a = monte_carlo_distribution(cp, 20, 20000, 99);
  const LatticeMeasure b = monte_carlo_distribution(cp, 20, 20000, 99);
  REQUIRE(a.offset() == b.offset());
  REQUIRE(a.weights() == b.weights());  // bit-identical
  REQUIRE(std::abs(a.mass() - 1.0) <= 1e-14);

  const LatticeMeasure c = monte_carlo_distribution(cp, 20, 20000, 100);
  REQUIRE(tv_diff(a, c) > 0.0);  // different seed, different sample
}

TEST_CASE("monte_carlo_distribution approaches the exact law") {
  const ChainParams cp = ChainParams::uniform(0.03, 0.01);
  const std::int64_t n = 30;
  const LatticeMeasure mc = monte_carlo_distribution(cp, n, 200000, 7);
  REQUIRE(tv_diff(mc, exact_distribution(cp, n)) <= 0.02);
}

TEST_CASE("decomposition residual per variant") {
  const ChainParams cp = ChainParams::uniform(0.03, 0.01);
  TruncationBudget tb{1e-13, 0.0};
  const double eig = decomposition_residual(cp, 5, DecompositionVariant::Eigen, tb);
  REQUIRE(eig >= 0.0);
  REQUIRE(eig <= 1e-8);

  const double disp =
      decomposition_residual(cp, 5, DecompositionVariant::Displayed, tb);
  REQUIRE(disp >= 0.0);
  REQUIRE(disp <= 2.5);  // sanity bracket ||F_n|| + ||decomposition||
  // the displayed P builders carry no mass, so their residual is O(1);
  // the report layer surfaces both numbers side by side
  REQUIRE(disp > 0.5);
}

TEST_CASE("eigen decomposition residual stays small across n") {
  const ChainParams cp = ChainParams::uniform(1.0 / 30.0, 1.0 / 40.0);
  for (std::int64_t n : {1, 2, 3, 10, 20}) {
    TruncationBudget tb{1e-13, 0.0};
    REQUIRE(decomposition_residual(cp, n, DecompositionVariant::Eigen, tb) <= 1e-8);
  }
}
