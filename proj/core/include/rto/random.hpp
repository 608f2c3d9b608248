#ifndef RTO_RANDOM_HPP
#define RTO_RANDOM_HPP

#include <Eigen/Core>
#include <cstdint>
#include <random>

namespace rto {

// Uniform draw in (0,1) with 53-bit resolution. Never returns 0.
inline double uniform01(std::mt19937_64& gen) {
  return (static_cast<double>(gen() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

// Deterministic stream of standard-normal variates (Box-Muller over
// mt19937_64). std::normal_distribution is implementation-defined, so
// seeded streams would not be reproducible across standard libraries;
// this one is bit-identical everywhere.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : gen_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01(gen_);
    const double u2 = uniform01(gen_);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  Eigen::VectorXd draw(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = next();
    return v;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rto

#endif
