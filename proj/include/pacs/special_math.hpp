#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pacs {

// Hard ceiling on the Laguerre order accepted at the API boundary. The
// upward recurrence is stable for the argument range used here (x <= 0,
// all terms positive), but the error claims are only tested up to this
// order.
inline constexpr int kMaxLaguerreOrder = 32;

// Laguerre polynomial L_m(x) by the three-term recurrence
//   (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}.
inline double laguerre(int m, double x) {
  if (m < 0 || m > kMaxLaguerreOrder) {
    throw std::domain_error("laguerre: order out of range [0, 32]");
  }
  if (!std::isfinite(x)) {
    throw std::domain_error("laguerre: argument must be finite");
  }
  double lkm1 = 1.0;  // L_0
  if (m == 0) return lkm1;
  double lk = 1.0 - x;  // L_1
  for (int k = 1; k < m; ++k) {
    const double lkp1 = ((2.0 * k + 1.0 - x) * lk - k * lkm1) / (k + 1.0);
    lkm1 = lk;
    lk = lkp1;
  }
  return lk;
}

// ln(n!) via lgamma.
inline double log_factorial(int n) {
  if (n < 0) throw std::domain_error("log_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace pacs
