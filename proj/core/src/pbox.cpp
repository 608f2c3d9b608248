#include "rto/pbox.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "rto/errors.hpp"

namespace rto {

void PBox::validate() const {
  if (!(mu_lo <= mu_hi))
    throw InvalidInput("pbox: mu_lo must not exceed mu_hi");
  if (!(0.0 <= sigma_lo && sigma_lo <= sigma_hi))
    throw InvalidInput("pbox: require 0 <= sigma_lo <= sigma_hi");
}

PBox pbox_from_samples(std::span<const double> samples, double ci_level,
                       std::string* warning) {
  const int n = static_cast<int>(samples.size());
  if (n < 3) throw InvalidInput("pbox_from_samples: need at least 3 samples");
  if (!(ci_level > 0.0 && ci_level < 1.0))
    throw InvalidInput("pbox_from_samples: ci_level must lie in (0,1)");

  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double var = ss / (n - 1);
  const double s = std::sqrt(var);

  const double alpha = 1.0 - ci_level;
  PBox box;
  box.ci_level = ci_level;
  box.n_samples = n;

  const boost::math::normal_distribution<double> snd(0.0, 1.0);
  const double z = boost::math::quantile(snd, 1.0 - alpha / 2.0);
  const double half = z * s / std::sqrt(static_cast<double>(n));
  box.mu_lo = mean - half;
  box.mu_hi = mean + half;

  if (s == 0.0) {
    box.sigma_lo = box.sigma_hi = 0.0;
    if (warning)
      *warning = "pbox_from_samples: zero sample variance, sigma interval is [0,0]";
  } else {
    const boost::math::chi_squared_distribution<double> chi(n - 1.0);
    const double chi_hi = boost::math::quantile(chi, 1.0 - alpha / 2.0);
    const double chi_lo = boost::math::quantile(chi, alpha / 2.0);
    box.sigma_lo = s * std::sqrt((n - 1) / chi_hi);
    box.sigma_hi = s * std::sqrt((n - 1) / chi_lo);
  }
  box.validate();
  return box;
}

}  // namespace rto
