#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace skellam {

/// Validation regime for chain parameters. Strict is the working condition
/// all bound shapes assume; Exploratory admits the full contractive range
/// and is flagged on the params so front ends can emit a warning.
enum class ParamMode { Strict, Exploratory };

/// Parameters of the symmetric three-state chain: transition weight alpha
/// out of the outer states, beta out of the middle state, and the initial
/// distribution (p1, p2, p3). State values are f = (-1, 0, +1).
struct ChainParams {
  double alpha = 0.0;
  double beta = 0.0;
  double p1 = 1.0 / 3.0;
  double p2 = 1.0 / 3.0;
  double p3 = 1.0 / 3.0;
  ParamMode mode = ParamMode::Strict;

  static ChainParams create(double alpha, double beta, double p1, double p2, double p3,
                            ParamMode mode = ParamMode::Strict) {
    constexpr double kStrictCap = 1.0 / 30.0;
    if (mode == ParamMode::Strict) {
      if (!(alpha > 0.0 && alpha <= kStrictCap))
        throw std::invalid_argument("alpha = " + std::to_string(alpha) +
                                    " violates 0 < alpha <= 1/30 (pass exploratory "
                                    "mode to relax)");
      if (!(beta > 0.0 && beta <= kStrictCap))
        throw std::invalid_argument("beta = " + std::to_string(beta) +
                                    " violates 0 < beta <= 1/30 (pass exploratory "
                                    "mode to relax)");
    } else {
      if (!(alpha >= 0.0 && alpha < 0.5))
        throw std::invalid_argument("alpha must lie in [0, 0.5) even in exploratory mode");
      if (!(beta > 0.0 && beta < 0.5))
        throw std::invalid_argument("beta must lie in (0, 0.5) even in exploratory mode");
    }
    if (p1 < 0.0 || p2 < 0.0 || p3 < 0.0)
      throw std::invalid_argument("initial probabilities must be nonnegative");
    if (std::abs(p1 + p2 + p3 - 1.0) > 1e-12)
      throw std::invalid_argument("initial probabilities must sum to 1 (got " +
                                  std::to_string(p1 + p2 + p3) + ")");
    return ChainParams{alpha, beta, p1, p2, p3, mode};
  }

  static ChainParams uniform(double alpha, double beta,
                             ParamMode mode = ParamMode::Strict) {
    return create(alpha, beta, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, mode);
  }

  bool exploratory() const { return mode == ParamMode::Exploratory; }

  /// Skellam intensity lambda = beta / (1 - 2 alpha + 2 beta).
  double skellam_intensity() const { return beta / (1.0 - 2.0 * alpha + 2.0 * beta); }

  /// Transition row out of state s (0-based): probabilities of arriving in
  /// states (a1, a2, a3). Rows for a1 and a3 coincide.
  std::array<double, 3> transition_row(int s) const {
    const double q = (s == 1) ? beta : alpha;
    return {q, 1.0 - 2.0 * q, q};
  }

  std::array<double, 3> initial() const { return {p1, p2, p3}; }
};

/// f(a1) = -1, f(a2) = 0, f(a3) = +1.
inline constexpr std::array<int, 3> kStateValues = {-1, 0, 1};

}  // namespace skellam
