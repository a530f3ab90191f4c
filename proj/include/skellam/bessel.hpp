#pragma once

#include <cmath>
#include <stdexcept>

namespace skellam {

/// Modified Bessel function of the first kind I_k(x) for integer order
/// k >= 0 and 0 <= x <= 60, by the ascending series
/// sum_m (x/2)^{2m+k} / (m! (m+k)!). The leading term is formed in log space
/// and successors by ratio recurrence, so nothing overflows in this range.
/// Truncation error <= 1e-15 relative. Larger arguments are rejected; build
/// the distribution through cp_exponential instead.
inline double bessel_i(int k, double x) {
  if (k < 0) throw std::invalid_argument("bessel_i: order must be >= 0");
  if (!(x >= 0.0)) throw std::invalid_argument("bessel_i: argument must be >= 0");
  if (x > 60.0)
    throw std::domain_error(
        "bessel_i: argument > 60 outside reference series range; "
        "use the cp_exponential construction instead");
  if (x == 0.0) return (k == 0) ? 1.0 : 0.0;
  const double h = x / 2.0;
  double term = std::exp(static_cast<double>(k) * std::log(h) - std::lgamma(k + 1.0));
  double sum = term;
  for (int m = 0; term > 1e-17 * sum; ++m) {
    term *= h * h / (static_cast<double>(m + 1) * static_cast<double>(m + 1 + k));
    sum += term;
  }
  return sum;
}

}  // namespace skellam
