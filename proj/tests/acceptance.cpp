// Acceptance suite: one pass/fail line per criterion, each at its stated
// tolerance. Run all criteria or a single one with --criterion N.

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "skellam/skellam.hpp"

namespace {

using namespace skellam;
using Clock = std::chrono::steady_clock;

double poisson_oracle(double lam, std::int64_t k) {
  if (k < 0) return 0.0;
  double p = std::exp(-lam);
  for (std::int64_t i = 1; i <= k; ++i) p *= lam / static_cast<double>(i);
  return p;
}

double tv_diff(const LatticeMeasure& a, const LatticeMeasure& b) {
  return tv_norm(linear_combine(1.0, a, -1.0, b));
}

// extended precision keeps the oracle's rounding below the tolerance it checks
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

// --- criterion 1: Skellam oracle equivalence -------------------------------

bool criterion1() {
  bool ok = true;
  const std::vector<double> lambdas = {0.5, 1.0, 5.0, 10.0};
  double worst_rel = 0.0;
  for (double l1 : lambdas)
    for (double l2 : lambdas)
      for (std::int64_t k = -30; k <= 30; ++k) {
        double brute = 0.0;
        for (std::int64_t j = 0; j < 400; ++j)
          if (j + k >= 0) brute += poisson_oracle(l1, j + k) * poisson_oracle(l2, j);
        const double direct = skellam_pmf({l1, l2}, k);
        const double rel = std::abs(direct - brute) / std::max(brute, 1e-300);
        worst_rel = std::max(worst_rel, rel);
        if (rel > 1e-12) ok = false;
      }
  std::cout << "  pmf vs Poisson convolution sum: worst relative error "
            << worst_rel << "\n";

  double worst_tv = 0.0;
  for (double l1 : lambdas)
    for (double l2 : lambdas) {
      TruncationBudget tb{1e-13, 0.0};
      const LatticeMeasure q =
          linear_combine(l1 / (l1 + l2), dirac(1), l2 / (l1 + l2), dirac(-1));
      const LatticeMeasure viaexp = cp_exponential(l1 + l2, q, tb);
      double diff = 0.0;
      for (std::int64_t k = viaexp.min_support(); k <= viaexp.max_support(); ++k)
        diff += std::abs(viaexp.at(k) - skellam_pmf({l1, l2}, k));
      worst_tv = std::max(worst_tv, diff);
      if (diff > 1e-12) ok = false;
    }
  std::cout << "  pmf vs cp_exponential construction: worst TV " << worst_tv << "\n";
  return ok;
}

// --- criterion 2: exact-distribution validation -----------------------------

bool criterion2() {
  bool ok = true;
  const ChainParams cp = ChainParams::create(1.0 / 30.0, 0.02, 0.2, 0.5, 0.3);
  double worst_enum = 0.0;
  for (int n = 0; n <= 8; ++n) {
    const double d = tv_diff(exact_distribution(cp, n), enumerate_paths(cp, n));
    worst_enum = std::max(worst_enum, d);
    if (d > 1e-14) ok = false;
  }
  std::cout << "  DP vs full path enumeration, n <= 8: worst TV " << worst_enum << "\n";

  const double p = 0.02;
  const ChainParams eq = ChainParams::uniform(p, p);
  const LatticeMeasure q(-1, {p, 1.0 - 2.0 * p, p});
  double worst_conv = 0.0;
  for (std::int64_t n : {1, 16, 128, 512}) {
    const double d =
        tv_diff(exact_distribution(eq, n), convolve_power(q, static_cast<std::uint64_t>(n)));
    worst_conv = std::max(worst_conv, d);
    if (d > 1e-10) ok = false;
  }
  std::cout << "  DP vs three-point convolution power (alpha = beta), n <= 512: "
               "worst TV "
            << worst_conv << "\n";

  const LatticeMeasure mc = monte_carlo_distribution(eq, 50, 1000000, 20260810);
  const double mcdist = tv_diff(mc, exact_distribution(eq, 50));
  std::cout << "  Monte Carlo (n=50, 1e6 samples, fixed seed) vs exact: TV " << mcdist
            << "\n";
  if (mcdist > 0.005) ok = false;
  return ok;
}

// --- criteria 3/4: convergence rates ----------------------------------------

struct SlopeWindow {
  NormKind kind;
  const char* label;
  double lo, hi;
};

bool rate_criterion(TheoremId id, const std::vector<SlopeWindow>& windows) {
  const ChainParams cp = ChainParams::uniform(0.02, 0.02);
  const std::vector<std::int64_t> ns = {128, 256, 512, 1024, 2048, 4096};
  bool ok = true;

  std::vector<LatticeMeasure> exact, approx;
  for (std::int64_t n : ns) {
    TruncationBudget tb{1e-12, 0.0};
    exact.push_back(exact_distribution(cp, n));
    approx.push_back(approximant_measure(id, cp, n, tb));
  }
  for (const SlopeWindow& w : windows) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < ns.size(); ++i)
      pts.push_back({static_cast<double>(ns[i]), distance(exact[i], approx[i], w.kind)});
    const RateFit fit = rate_fit(pts);
    const bool pass = fit.slope >= w.lo && fit.slope <= w.hi;
    std::cout << "  " << w.label << " slope " << fit.slope << " (window [" << w.lo
              << ", " << w.hi << "])\n";
    if (!pass) ok = false;
    if (id == TheoremId::Skellam && w.kind.family == NormKind::Family::TotalVariation)
      // report the independent-case sanity constant (alpha = beta)
      std::cout << "  Presman-shape constant K_emp at n=4096: "
                << presman_ratio(pts.back().second, ns.back(), cp.beta) << "\n";
  }
  return ok;
}

bool criterion3() {
  return rate_criterion(
      TheoremId::Skellam,
      {{NormKind::tv(), "tv", -1.15, -0.85},
       {NormKind::local(), "local", -1.7, -1.3},
       {NormKind::wasserstein(), "wasserstein", -0.65, -0.35}});
}

bool criterion4() {
  return rate_criterion(TheoremId::Expansion, {{NormKind::tv(), "tv", -2.25, -1.75}});
}

// --- criterion 5: explicit leading constants --------------------------------

bool criterion5() {
  bool ok = true;
  const double third = 1.0 / 30.0;
  const std::vector<std::pair<double, double>> params = {
      {third, third}, {1.0 / 40.0, third}, {third, 1.0 / 40.0}};
  for (const auto& [a, b] : params)
    for (std::int64_t n : {2000, 4000}) {
      const ChainParams cp = ChainParams::uniform(a, b);
      TruncationBudget tb{1e-12, 0.0};
      const LatticeMeasure fn = exact_distribution(cp, n);
      const LatticeMeasure dn = skellam_power(cp, n, tb);
      for (NormKind kind : {NormKind::tv(), NormKind::local(), NormKind::wasserstein()}) {
        const double lhs = distance(fn, dn, kind);
        const double lead = bound_shape(TheoremId::Explicit, kind, cp, n);
        const double ratio = lhs / lead;
        std::cout << "  a=" << a << " b=" << b << " n=" << n << " "
                  << to_string(kind) << ": lhs " << lhs << " <= 1.1 * " << lead
                  << " (ratio " << ratio << ")\n";
        if (lhs > 1.1 * lead) ok = false;
      }
    }
  return ok;
}

// --- criterion 6: smoothing lemmas ------------------------------------------

bool criterion6() {
  bool ok = true;
  CounterRng rng(606);
  double worst_tv = -1e300, worst_local = -1e300;
  for (int i = 0; i < 200; ++i) {
    const double t = rng.uniform(0.5, 50.0);
    const std::int64_t j = rng.uniform_int(1, 4);

    const auto tvres = smoothing_check(random_probability_measure(rng, 8), t, j,
                                       SmoothingKind::TotalVariation);
    if (!tvres.ok) ok = false;
    worst_tv = std::max(worst_tv, tvres.lhs - tvres.rhs);

    const auto locres = smoothing_check(random_symmetric_probability(rng, 8), t, j,
                                        SmoothingKind::Local);
    if (!locres.ok) ok = false;
    worst_local = std::max(worst_local, locres.lhs - locres.rhs);
  }
  std::cout << "  200 TV cases, worst lhs - rhs = " << worst_tv << "\n";
  std::cout << "  200 local cases, worst lhs - rhs = " << worst_local << "\n";
  return ok;
}

// --- criterion 7: algebraic identities --------------------------------------

bool criterion7() {
  bool ok = true;
  CounterRng rng(707);

  int bad = 0;
  for (int i = 0; i < 50; ++i) {
    const LatticeMeasure v = random_signed_measure(rng, 6, 0.5);
    const LatticeMeasure m = random_signed_measure(rng, 6, 0.5);
    const std::int64_t n = rng.uniform_int(1, 20);
    const std::int64_t k = rng.uniform_int(0, std::min<std::int64_t>(3, n - 1));
    double scale = 0.0;
    if (bergstrom_residual(v, m, n, k, &scale) > 1e-12 * std::max(scale, 1e-30)) ++bad;
  }
  std::cout << "  Bergstrom identity: " << (50 - bad) << "/50 within 1e-12*scale\n";
  if (bad > 0) ok = false;

  bad = 0;
  for (int i = 0; i < 100; ++i) {
    const LatticeMeasure f = random_probability_measure(rng, 4);
    TruncationBudget tb{1e-14, 0.0};
    const double t1 = rng.uniform(0.1, 2.0), t2 = rng.uniform(0.1, 2.0);
    if (tv_diff(convolve(cp_exponential(t1, f, tb), cp_exponential(t2, f, tb)),
                cp_exponential(t1 + t2, f, tb)) > 1e-12)
      ++bad;
  }
  std::cout << "  exp additivity: " << (100 - bad) << "/100 within 1e-12 TV\n";
  if (bad > 0) ok = false;

  bad = 0;
  const LatticeMeasure step = linear_combine(1.0, dirac(1), -1.0, dirac(0));
  const LatticeMeasure half_sq = scaled(convolve(convolve_power(step, 2), dirac(-1)), 0.5);
  const LatticeMeasure u(-1, {0.5, -1.0, 0.5});
  for (int i = 0; i < 100; ++i) {
    const LatticeMeasure m = random_signed_measure(rng, 6);
    if (tv_diff(convolve(half_sq, m), convolve(u, m)) > 1e-12) ++bad;
  }
  std::cout << "  (1/2)(I_1-I)^{*2}*I_{-1} acts as U: " << (100 - bad) << "/100\n";
  if (bad > 0) ok = false;

  bad = 0;
  for (int i = 0; i < 100; ++i) {
    const LatticeMeasure m = random_signed_measure(rng, 8);
    const LatticeMeasure v = random_signed_measure(rng, 8);
    if (tv_norm(convolve(m, v)) > tv_norm(m) * tv_norm(v) + 1e-12) ++bad;
    if (norm(m, NormKind::local()) > tv_norm(m) + 1e-12) ++bad;
    if (norm(m, NormKind::local()) > tv_norm(diff_conv(m, +1)) + 1e-12) ++bad;
    if (!m.is_zero() &&
        std::abs(tv_norm(m) - norm(diff_conv(m, +1), NormKind::wasserstein())) > 1e-12)
      ++bad;
    const LatticeMeasure z = random_zero_mass_measure(rng, 8);
    if (!z.is_zero()) {
      if (!v.is_zero() && norm(convolve(z, v), NormKind::wasserstein()) >
                              norm(z, NormKind::wasserstein()) * tv_norm(v) + 1e-12)
        ++bad;
      const double loc = norm(z, NormKind::local());
      const double tv = tv_norm(z);
      const double w = norm(z, NormKind::wasserstein());
      for (double r : {1.5, 2.0, 3.0}) {
        if (norm(z, NormKind::lr(r)) >
            std::pow(loc, (r - 1.0) / r) * std::pow(tv, 1.0 / r) + 1e-12)
          ++bad;
        if (norm(z, NormKind::cap_lr(r)) >
            std::pow(tv, (r - 1.0) / r) * std::pow(w, 1.0 / r) + 1e-12)
          ++bad;
      }
    }
  }
  std::cout << "  norm relations + interpolation inequalities: "
            << (bad == 0 ? "all hold" : std::to_string(bad) + " violations")
            << " on 100 random measures\n";
  if (bad > 0) ok = false;
  return ok;
}

// --- criterion 8: component sanity -------------------------------------------

bool criterion8() {
  bool ok = true;

  double worst_delta = 0.0;
  for (int i = 1; i <= 10; ++i)
    for (int j = 1; j <= 10; ++j) {
      const ChainParams cp = ChainParams::uniform(i / 300.0, j / 300.0);
      TruncationBudget tb{1e-12, 0.0};
      worst_delta =
          std::max(worst_delta, tv_norm(build_component(cp, ComponentName::Delta, tb)));
    }
  std::cout << "  max ||Delta||_TV over the 10x10 grid: " << worst_delta << "\n";
  if (worst_delta > 0.62) ok = false;

  double worst_lambda = 0.0, worst_w = 0.0;
  for (const auto& [a, b] : std::vector<std::pair<double, double>>{
           {0.03, 0.01}, {1.0 / 30.0, 1.0 / 30.0}, {0.005, 1.0 / 30.0}}) {
    const ChainParams cp = ChainParams::uniform(a, b);
    TruncationBudget tb{1e-12, 0.0};
    const LatticeMeasure l1 = build_component(cp, ComponentName::Lambda1, tb);
    const LatticeMeasure l2 = build_component(cp, ComponentName::Lambda2, tb);
    const LatticeMeasure u = build_component(cp, ComponentName::U, tb);
    const LatticeMeasure expect =
        linear_combine(1.0 + 2.0 * a - 2.0 * b, dirac(0), 2.0 * a, u);
    worst_lambda =
        std::max(worst_lambda, tv_diff(linear_combine(1.0, l1, 1.0, l2), expect));
    const LatticeMeasure w1 = build_component(cp, ComponentName::W1, tb);
    const LatticeMeasure w2 = build_component(cp, ComponentName::W2, tb);
    worst_w = std::max(worst_w, tv_diff(linear_combine(1.0, w1, 1.0, w2), dirac(0)));
  }
  std::cout << "  Lambda1+Lambda2 reassembly: worst TV " << worst_lambda << "\n";
  std::cout << "  W1+W2 reassembly: worst TV " << worst_w << "\n";
  if (worst_lambda > 1e-12 || worst_w > 1e-12) ok = false;

  // decomposition residual: reported for every variant, not asserted
  const ChainParams cp = ChainParams::uniform(0.03, 0.01);
  for (DecompositionVariant variant :
       {DecompositionVariant::Displayed, DecompositionVariant::Eigen}) {
    TruncationBudget tb{1e-13, 0.0};
    std::cout << "  decomposition residual (" << to_string(variant)
              << ", n=5): " << decomposition_residual(cp, 5, variant, tb)
              << " [reported]\n";
  }
  return ok;
}

struct Criterion {
  int id;
  const char* name;
  bool (*run)();
};

const std::vector<Criterion> kCriteria = {
    {1, "Skellam oracle equivalence", criterion1},
    {2, "exact-distribution validation", criterion2},
    {3, "Skellam approximant convergence rates", criterion3},
    {4, "expansion approximant convergence rates", criterion4},
    {5, "explicit leading constants", criterion5},
    {6, "smoothing-lemma suite", criterion6},
    {7, "algebraic-identity suite", criterion7},
    {8, "component sanity", criterion8},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--list") == 0) {
      for (const auto& c : kCriteria) std::cout << c.id << ": " << c.name << "\n";
      return 0;
    } else {
      std::cerr << "usage: acceptance_suite [--criterion N] [--list]\n";
      return 2;
    }
  }

  std::cout.precision(6);
  bool all_ok = true;
  for (const auto& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = Clock::now();
    bool ok = false;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      std::cout << "  exception: " << e.what() << "\n";
      ok = false;
    }
    const double secs =
        std::chrono::duration<double>(Clock::now() - start).count();
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.name
              << " (" << secs << " s)\n";
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}
