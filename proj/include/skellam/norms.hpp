#pragma once

#include <cmath>
#include <complex>

#include "skellam/lattice_measure.hpp"

namespace skellam {

/// Which norm to evaluate. Lr is the pointwise l_r norm on weights; CapLr is
/// the L_r norm on partial sums (Wasserstein when r = 1). r >= 1.
struct NormKind {
  enum class Family { Local, TotalVariation, Wasserstein, Lr, CapLr };

  Family family = Family::TotalVariation;
  double r = 1.0;

  static NormKind local() { return {Family::Local, 1.0}; }
  static NormKind tv() { return {Family::TotalVariation, 1.0}; }
  static NormKind wasserstein() { return {Family::Wasserstein, 1.0}; }
  static NormKind lr(double r) { return {Family::Lr, r}; }
  static NormKind cap_lr(double r) { return {Family::CapLr, r}; }

  friend bool operator==(const NormKind& a, const NormKind& b) {
    return a.family == b.family && a.r == b.r;
  }
};

namespace detail {

// Wasserstein-type sums require (numerically) zero total mass, else the
// series over k diverges.
inline void require_zero_mass(const LatticeMeasure& m, double tv_norm) {
  const double tol = 1e-9 * std::max(1.0, tv_norm);
  if (std::abs(m.mass()) > tol)
    throw mass_error("Wasserstein/CapLr norm requires zero total mass; got mass " +
                     std::to_string(m.mass()));
}

}  // namespace detail

/// Exact finite-sum norm evaluation. Norms of the zero measure are 0.
inline double norm(const LatticeMeasure& m, NormKind kind) {
  if (kind.family == NormKind::Family::Lr || kind.family == NormKind::Family::CapLr) {
    if (!(kind.r >= 1.0)) throw std::invalid_argument("norm: r must be >= 1");
  }
  if (m.is_zero()) return 0.0;
  const auto& w = m.weights();
  switch (kind.family) {
    case NormKind::Family::Local: {
      double mx = 0.0;
      for (double x : w) mx = std::max(mx, std::abs(x));
      return mx;
    }
    case NormKind::Family::TotalVariation: {
      double s = 0.0;
      for (double x : w) s += std::abs(x);
      return s;
    }
    case NormKind::Family::Lr: {
      double s = 0.0;
      for (double x : w) s += std::pow(std::abs(x), kind.r);
      return std::pow(s, 1.0 / kind.r);
    }
    case NormKind::Family::Wasserstein:
    case NormKind::Family::CapLr: {
      double tv = 0.0;
      for (double x : w) tv += std::abs(x);
      detail::require_zero_mass(m, tv);
      // running partial sums M{(-inf,k]}; they vanish outside the support
      // because the total mass is zero, so the sum is finite by construction
      double run = 0.0, s = 0.0;
      for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        run += w[i];
        s += (kind.family == NormKind::Family::Wasserstein)
                 ? std::abs(run)
                 : std::pow(std::abs(run), kind.r);
      }
      return (kind.family == NormKind::Family::Wasserstein) ? s
                                                            : std::pow(s, 1.0 / kind.r);
    }
  }
  return 0.0;
}

inline double tv_norm(const LatticeMeasure& m) { return norm(m, NormKind::tv()); }

/// Fourier transform sum_k e^{itk} M{k}; an independent test oracle.
inline std::complex<double> ch_fn(const LatticeMeasure& m, double t) {
  std::complex<double> s{0.0, 0.0};
  const auto& w = m.weights();
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double k = static_cast<double>(m.offset() + static_cast<std::int64_t>(i));
    s += w[i] * std::polar(1.0, t * k);
  }
  return s;
}

}  // namespace skellam
