#ifndef RTO_PBOX_HPP
#define RTO_PBOX_HPP

#include <span>
#include <string>

namespace rto {

// Parameterized probability box for the load field: interval mean and
// interval standard deviation of a Gaussian magnitude distribution.
struct PBox {
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  double sigma_lo = 0.0;
  double sigma_hi = 0.0;
  double ci_level = 0.0;  // confidence level the intervals were built at, 0 = direct
  int n_samples = 0;      // sample count behind the intervals, 0 = direct

  double mu_mid() const { return 0.5 * (mu_lo + mu_hi); }
  double sigma_mid() const { return 0.5 * (sigma_lo + sigma_hi); }
  bool mu_straddles_zero() const { return mu_lo < 0.0 && mu_hi > 0.0; }
  bool zero_width() const { return mu_lo == mu_hi && sigma_lo == sigma_hi; }

  // Throws InvalidInput on ordering violations or negative sigma.
  void validate() const;
};

// Interval estimates from scalar load observations: normal-theory z
// interval for the mean, chi-square interval for the standard deviation.
// Requires at least 3 samples. A zero sample variance yields a zero-width
// sigma interval and, when `warning` is given, a note describing it.
PBox pbox_from_samples(std::span<const double> samples, double ci_level,
                       std::string* warning = nullptr);

}  // namespace rto

#endif
