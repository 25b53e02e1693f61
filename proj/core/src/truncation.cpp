#include "tbh/truncation.hpp"

#include <algorithm>
#include <cmath>

#include "tbh/errors.hpp"

namespace tbh {

double poisson_tail(double mean, int n_max) {
  if (mean < 0) throw RangeError("poisson mean must be nonnegative");
  if (n_max < 0) return 1.0;
  if (mean == 0) return 0.0;
  // Sum the tail directly so tiny tails do not cancel against 1.
  const int start = n_max + 1;
  double log_term = -mean + start * std::log(mean) - std::lgamma(start + 1.0);
  double sum = 0;
  for (int k = start; k < start + 100000; ++k) {
    const double term = std::exp(log_term);
    sum += term;
    if (k > mean && term < 1e-18 * sum) break;
    log_term += std::log(mean) - std::log(k + 1.0);
  }
  return std::min(sum, 1.0);
}

int TruncationPolicy::cutoff_for(double abs_beta, int excitation) const {
  if (abs_beta < 0 || !std::isfinite(abs_beta)) throw RangeError("amplitude must be finite");
  if (excitation < 0) throw RangeError("excitation order must be nonnegative");
  const double mean = abs_beta * abs_beta;
  int n = static_cast<int>(std::ceil(mean + 6 * abs_beta)) + base_cutoff;
  int tail_n = 0;
  while (poisson_tail(mean, tail_n) >= eps_trunc) ++tail_n;
  return std::max(n, tail_n) + excitation;
}

int TruncationPolicy::cutoff_for(std::complex<double> beta, int excitation) const {
  return cutoff_for(std::abs(beta), excitation);
}

}  // namespace tbh
