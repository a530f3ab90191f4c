#pragma once

#include <cmath>
#include <cstdint>

#include "skellam/lattice_measure.hpp"
#include "skellam/norms.hpp"

namespace skellam {

namespace detail {

// exp{lam(Q-I)} for a probability measure Q and lam <= 1, as the Poisson
// mixture e^{-lam} sum_k lam^k Q^{*k} / k!. All intermediates nonnegative.
// Stops when the geometric bound on the remaining Poisson tail drops below
// eps: after term k the tail is <= p_k * (lam/(k+1)) / (1 - lam/(k+2)).
// (A `1 - cumulative` test would saturate at double rounding for eps below
// ~1e-16 and never fire.)
inline LatticeMeasure poisson_mixture(double lam, const LatticeMeasure& q, double eps,
                                      double& tail_bound) {
  LatticeMeasure term = dirac(0);
  double pw = std::exp(-lam);
  LatticeMeasure acc = scaled(term, pw);
  std::uint64_t k = 0;
  for (;;) {
    const double r = lam / static_cast<double>(k + 2);
    const double next = pw * (lam / static_cast<double>(k + 1));
    if (r < 1.0 && next / (1.0 - r) <= eps) {
      tail_bound = (next > 0.0) ? next / (1.0 - r) : 0.0;
      return acc;
    }
    ++k;
    term = convolve(term, q);
    pw = next;
    acc = linear_combine(1.0, acc, pw, term);
    if (pw == 0.0) {
      tail_bound = 0.0;
      return acc;
    }
  }
}

}  // namespace detail

/// exp{t(Q-I)} for t >= 0 and a nonnegative compounding measure Q, computed
/// through nonnegative intermediates only: the argument is reduced to a
/// probability measure, expanded as an e^{-lam}-weighted Poisson mixture for
/// lam <= 1, and brought back by scaling-and-squaring otherwise (s is the
/// smallest integer with lam/2^s <= 1). Total discarded l1 mass, including
/// the series tail bound and squaring-stage truncations, stays within
/// tb.budget, so the result mass is within tb.budget of e^{t(mass(Q)-1)}.
inline LatticeMeasure cp_exponential(double t, const LatticeMeasure& q,
                                     TruncationBudget& tb) {
  if (!(t >= 0.0)) throw std::invalid_argument("cp_exponential: t must be >= 0");
  for (double w : q.weights())
    if (w < 0.0)
      throw std::invalid_argument(
          "cp_exponential: compounding measure must have nonnegative weights");
  if (t == 0.0) return dirac(0);
  const double mu = q.mass();
  if (mu == 0.0) return LatticeMeasure(0, {std::exp(-t)});

  const double lam = t * mu;
  if (lam > 1e9)
    throw std::invalid_argument(
        "cp_exponential: intensity t*mass(Q) exceeds desk-scale range");
  const double scale = std::exp(t * (mu - 1.0));  // = 1 for probability Q
  // keep the *scaled* discard within budget when mass(Q) > 1
  const double internal_budget = tb.budget * std::min(1.0, 1.0 / scale);

  int s = 0;
  while (lam / std::exp2(s) > 1.0) ++s;

  const LatticeMeasure qn = scaled(q, 1.0 / mu);
  const double eps0 = internal_budget / std::exp2(s + 1);
  double tail = 0.0;
  LatticeMeasure p = detail::poisson_mixture(lam / std::exp2(s), qn, eps0, tail);
  double discarded = tail * std::exp2(s);  // tail doubles per squaring

  for (int j = 1; j <= s; ++j) {
    p = convolve(p, p);
    TruncationBudget step{internal_budget * std::exp2(j - s) / (2.0 * (s + 1)), 0.0};
    p = truncate(p, step);
    discarded += step.accumulated * std::exp2(s - j);
  }
  tb.accumulated += discarded * scale;
  return scaled(p, scale);
}

/// Geometric series of measures sum_{j>=0} M^{*j}, truncated at J with tail
/// q^{J+1}/(1-q) <= tb.budget where q = ||M||_TV < 1.
inline LatticeMeasure neumann_series(const LatticeMeasure& m, TruncationBudget& tb) {
  const double q = tv_norm(m);
  if (q >= 1.0)
    throw divergence_error("neumann_series: ||M||_TV = " + std::to_string(q) +
                           " >= 1, series diverges");
  if (q == 0.0) return dirac(0);
  std::uint64_t terms = 0;
  double tail = q / (1.0 - q);
  while (tail > tb.budget) {
    tail *= q;
    if (++terms > 200000)
      throw divergence_error("neumann_series: truncation point exceeds 200000 terms");
  }
  LatticeMeasure acc = dirac(0), term = dirac(0);
  for (std::uint64_t j = 1; j <= terms; ++j) {
    term = convolve(term, m);
    acc = linear_combine(1.0, acc, 1.0, term);
  }
  tb.accumulated += tail;
  return acc;
}

/// Exponent selector for the binomial series (1 + M)^{+-1/2}.
enum class HalfExponent { PlusHalf, MinusHalf };

/// sum_{j>=0} binom(+-1/2, j) M^{*j}. Because |binom(+-1/2, j)| <= 1, the
/// tail after J is bounded by q^{J+1}/(1-q) with q = ||M||_TV < 1.
inline LatticeMeasure binomial_half_series(HalfExponent s, const LatticeMeasure& m,
                                           TruncationBudget& tb) {
  const double q = tv_norm(m);
  if (q >= 1.0)
    throw divergence_error("binomial_half_series: ||M||_TV = " + std::to_string(q) +
                           " >= 1, series diverges");
  if (q == 0.0) return dirac(0);
  std::uint64_t terms = 0;
  double tail = q / (1.0 - q);
  while (tail > tb.budget) {
    tail *= q;
    if (++terms > 200000)
      throw divergence_error(
          "binomial_half_series: truncation point exceeds 200000 terms");
  }
  const double expo = (s == HalfExponent::PlusHalf) ? 0.5 : -0.5;
  LatticeMeasure acc = dirac(0), term = dirac(0);
  double coeff = 1.0;
  for (std::uint64_t j = 1; j <= terms; ++j) {
    coeff *= (expo - static_cast<double>(j - 1)) / static_cast<double>(j);
    term = convolve(term, m);
    acc = linear_combine(1.0, acc, coeff, term);
  }
  tb.accumulated += tail;
  return acc;
}

}  // namespace skellam
