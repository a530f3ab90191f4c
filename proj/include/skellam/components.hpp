#pragma once

#include <cstdint>
#include <string>

#include "skellam/chain.hpp"
#include "skellam/lattice_measure.hpp"
#include "skellam/norms.hpp"
#include "skellam/series.hpp"
#include "skellam/skellam_dist.hpp"

namespace skellam {

/// The named measures of the chain's transfer decomposition and its compound
/// Poisson approximants. A-blocks are the expansion corrections.
enum class ComponentName {
  L,
  U,
  H,
  E,
  K,
  Delta,
  Lambda1,
  Lambda2,
  W1,
  W2,
  P1,
  P2,
  G,
  D,
  A0,
  A1,
  A2,
};

/// K can be assembled two ways: a geometric series in L with ratio
/// 2a/(1+2b) and prefactor (1-2(a-b))/(1+2b) (Displayed), or a geometric
/// series in U with ratio 2a/(1-2a+2b) and no prefactor (Proof). Both have
/// total mass 1; the decomposition report compares them empirically.
enum class KVariant { Displayed, Proof };

namespace detail {

inline LatticeMeasure named_series(const LatticeMeasure& m, TruncationBudget& tb,
                                   const char* block) {
  try {
    return neumann_series(m, tb);
  } catch (const divergence_error& e) {
    throw divergence_error(std::string(block) + ": " + e.what());
  }
}

inline LatticeMeasure named_binomial(HalfExponent s, const LatticeMeasure& m,
                                     TruncationBudget& tb, const char* block) {
  try {
    return binomial_half_series(s, m, tb);
  } catch (const divergence_error& e) {
    throw divergence_error(std::string(block) + ": " + e.what());
  }
}

// sum_j (2a/(1-2a+2b))^j U^{*j}; shared by Delta, W and the K proof variant
inline LatticeMeasure geometric_u(const ChainParams& cp, const LatticeMeasure& u,
                                  TruncationBudget& tb, const char* block) {
  const double den = 1.0 - 2.0 * cp.alpha + 2.0 * cp.beta;
  return named_series(scaled(u, 2.0 * cp.alpha / den), tb, block);
}

}  // namespace detail

/// Scalar coefficient of the U^{*2} correction in the A-type builders:
/// -(2 b^2/(1-2a+2b)^2) ((1+2a)/(1-2a) + 2/(1-2a+2b)).
inline double delta_scalar(const ChainParams& cp) {
  const double den = 1.0 - 2.0 * cp.alpha + 2.0 * cp.beta;
  return -(2.0 * cp.beta * cp.beta / (den * den)) *
         ((1.0 + 2.0 * cp.alpha) / (1.0 - 2.0 * cp.alpha) + 2.0 / den);
}

/// Assemble the named measure from its defining series and products. Total
/// truncation across sub-series stays within tb.budget per block and is
/// accumulated into tb. Divergence (possible only with exploratory
/// parameters) names the failing block.
inline LatticeMeasure build_component(const ChainParams& cp, ComponentName name,
                                      TruncationBudget& tb,
                                      KVariant kv = KVariant::Displayed) {
  const double a = cp.alpha;
  const double b = cp.beta;
  const double den = 1.0 - 2.0 * a + 2.0 * b;
  const LatticeMeasure l = two_point_half();
  const LatticeMeasure u = linear_combine(1.0, l, -1.0, dirac(0));

  switch (name) {
    case ComponentName::L:
      return l;
    case ComponentName::U:
      return u;
    case ComponentName::H:
      // (1-2a) L * sum_j (2a L)^{*j}
      return convolve(scaled(l, 1.0 - 2.0 * a),
                      detail::named_series(scaled(l, 2.0 * a), tb, "H"));
    case ComponentName::E: {
      const double c = 2.0 * a * cp.p2 / (1.0 - 2.0 * a);
      return linear_combine(1.0 - c, dirac(0), c, l);
    }
    case ComponentName::G: {
      TruncationBudget htb{tb.budget, 0.0};
      const LatticeMeasure h = build_component(cp, ComponentName::H, htb, kv);
      tb.accumulated += htb.accumulated;
      return cp_exponential(2.0 * b * (1.0 - 2.0 * a) / den, h, tb);
    }
    case ComponentName::K: {
      if (kv == KVariant::Proof)
        return detail::geometric_u(cp, u, tb, "K(proof)");
      const double pref = (1.0 - 2.0 * (a - b)) / (1.0 + 2.0 * b);
      return scaled(
          detail::named_series(scaled(l, 2.0 * a / (1.0 + 2.0 * b)), tb, "K"), pref);
    }
    case ComponentName::Delta: {
      const LatticeMeasure geom = detail::geometric_u(cp, u, tb, "Delta");
      return scaled(convolve(u, convolve(geom, geom)), 8.0 * b / (den * den));
    }
    case ComponentName::Lambda1:
    case ComponentName::Lambda2: {
      TruncationBudget dtb{tb.budget, 0.0};
      const LatticeMeasure delta = build_component(cp, ComponentName::Delta, dtb, kv);
      tb.accumulated += dtb.accumulated;
      const LatticeMeasure root =
          detail::named_binomial(HalfExponent::PlusHalf, delta, tb, "Lambda");
      const LatticeMeasure apart =
          linear_combine(1.0 + 2.0 * a - 2.0 * b, dirac(0), 2.0 * a, u);
      const LatticeMeasure bpart = linear_combine(den, dirac(0), -2.0 * a, u);
      const double sign = (name == ComponentName::Lambda1) ? 0.5 : -0.5;
      return linear_combine(0.5, apart, sign, convolve(bpart, root));
    }
    case ComponentName::W1:
    case ComponentName::W2: {
      TruncationBudget dtb{tb.budget, 0.0};
      const LatticeMeasure delta = build_component(cp, ComponentName::Delta, dtb, kv);
      tb.accumulated += dtb.accumulated;
      const LatticeMeasure invroot =
          detail::named_binomial(HalfExponent::MinusHalf, delta, tb, "W");
      const LatticeMeasure geom = detail::geometric_u(cp, u, tb, "W");
      const LatticeMeasure front = linear_combine(1.0, dirac(0), 2.0 * a / den, u);
      const LatticeMeasure prod = convolve(front, convolve(geom, invroot));
      const double sign = (name == ComponentName::W1) ? 0.5 : -0.5;
      return linear_combine(0.5, dirac(0), sign, prod);
    }
    case ComponentName::P1:
    case ComponentName::P2: {
      const auto lname =
          (name == ComponentName::P1) ? ComponentName::Lambda1 : ComponentName::Lambda2;
      const LatticeMeasure lam = build_component(cp, lname, tb, kv);
      const LatticeMeasure inner =
          linear_combine(1.0, lam, -1.0, linear_combine(1.0, dirac(0), 2.0 * a, u));
      return scaled(inner, cp.p2 / (1.0 - 2.0 * a));
    }
    case ComponentName::D:
      return skellam_power(cp, 1, tb);
    case ComponentName::A0: {
      TruncationBudget ktb{tb.budget, 0.0};
      const LatticeMeasure k = build_component(cp, ComponentName::K, ktb, kv);
      TruncationBudget htb{tb.budget, 0.0};
      const LatticeMeasure h = build_component(cp, ComponentName::H, htb, kv);
      tb.accumulated += ktb.accumulated + htb.accumulated;
      const LatticeMeasure hm1 = linear_combine(1.0, h, -1.0, dirac(0));
      const LatticeMeasure bracket = linear_combine(
          1.0 + 2.0 * a, dirac(0), 2.0 * (1.0 - 2.0 * a) / den, k);
      const double pref = -2.0 * b * b * (1.0 - 2.0 * a) / (den * den);
      return scaled(convolve(bracket, convolve_power(hm1, 2)), pref);
    }
    case ComponentName::A1: {
      // (2(a-b)/den)((1-2a)/den - p2) (L - I), and L - I = U
      const double c = (2.0 * (a - b) / den) * ((1.0 - 2.0 * a) / den - cp.p2);
      return scaled(u, c);
    }
    case ComponentName::A2: {
      const double c = (2.0 * b / (den * den)) *
                       (2.0 * (a - b) * (1.0 - 2.0 * a) / den - b);
      return scaled(convolve_power(u, 2), c);
    }
  }
  throw std::invalid_argument("build_component: unknown component");
}

/// E * K * G^{*n}, with G^{*n} built in one exponential step as
/// exp{n 2b(1-2a)/(1-2a+2b) (H - I)}.
inline LatticeMeasure theorem1_approx(const ChainParams& cp, std::int64_t n,
                                      TruncationBudget& tb,
                                      KVariant kv = KVariant::Displayed) {
  if (n < 0) throw std::invalid_argument("theorem1_approx: n must be >= 0");
  const double den = 1.0 - 2.0 * cp.alpha + 2.0 * cp.beta;
  TruncationBudget sub{tb.budget, 0.0};
  const LatticeMeasure e = build_component(cp, ComponentName::E, sub, kv);
  const LatticeMeasure k = build_component(cp, ComponentName::K, sub, kv);
  const LatticeMeasure h = build_component(cp, ComponentName::H, sub, kv);
  const LatticeMeasure gn = cp_exponential(
      static_cast<double>(n) * 2.0 * cp.beta * (1.0 - 2.0 * cp.alpha) / den, h, sub);
  tb.accumulated += sub.accumulated;
  return convolve(e, convolve(k, gn));
}

/// D^{*n} * (I + A1 + n A2); the A-blocks have zero mass, so the result is a
/// signed measure of total mass 1 within the truncation budget.
inline LatticeMeasure expansion_approx(const ChainParams& cp, std::int64_t n,
                                       TruncationBudget& tb) {
  if (n < 1) throw std::invalid_argument("expansion_approx: n must be >= 1");
  TruncationBudget sub{tb.budget, 0.0};
  const LatticeMeasure dn = skellam_power(cp, n, sub);
  const LatticeMeasure a1 = build_component(cp, ComponentName::A1, sub);
  const LatticeMeasure a2 = build_component(cp, ComponentName::A2, sub);
  tb.accumulated += sub.accumulated;
  const LatticeMeasure correction = linear_combine(
      1.0, dirac(0), 1.0, linear_combine(1.0, a1, static_cast<double>(n), a2));
  return convolve(dn, correction);
}

}  // namespace skellam
