#ifndef RTO_STUDY_HPP
#define RTO_STUDY_HPP

#include "rto/optimizer.hpp"

namespace rto {

// Paired comparison of the two compliance routes at matched coefficient
// draws: the per-sample field realization lumped and solved directly
// against the truncated superposition quadratic form. The direct route
// keeps `m_direct` terms (a much richer expansion), so the discrepancy
// measures the truncation of the working basis.
struct SuperpositionStudy {
  std::vector<double> c_direct;
  std::vector<double> c_super;
  double rel_l1_error = 0.0;   // sum |direct - super| / sum |direct|
  double max_rel_error = 0.0;  // max_i |d_i - s_i| / mean |d|
  double ks_distance = 0.0;    // two-sample Kolmogorov-Smirnov statistic
  int m_super = 0;
  int m_direct = 0;
};

SuperpositionStudy superposition_study(const RtoProblem& problem,
                                       const Eigen::VectorXd& rho_phys,
                                       int n_samples, int m_direct,
                                       std::uint64_t seed);

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b);

}  // namespace rto

#endif
