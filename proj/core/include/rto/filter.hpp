#ifndef RTO_FILTER_HPP
#define RTO_FILTER_HPP

#include <Eigen/Core>
#include <vector>

#include "rto/mesh.hpp"

namespace rto {

// Linear cone-weighted density filter over element centers. Weights are
// R - ||x_i - x_e|| inside the radius; boundary neighborhoods stay
// truncated and renormalize through the weight sum.
class DensityFilter {
 public:
  DensityFilter(const Mesh& mesh, double radius);

  Eigen::VectorXd apply(const Eigen::VectorXd& rho) const;
  // Transpose of the filter map, for the sensitivity chain rule.
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& y) const;

  double radius() const { return radius_; }
  int size() const { return static_cast<int>(rows_.size()); }

 private:
  struct Neighbor {
    int index;
    double weight;  // w * v
  };
  std::vector<std::vector<Neighbor>> rows_;
  std::vector<double> wsum_;  // sum of w * v per element
  double radius_;
};

// Smoothed two-branch Heaviside projection with threshold eta and
// sharpness alpha; fixes 0 and 1, reduces to the identity as alpha -> 0
// and is strictly increasing in rho_bar.
double heaviside_apply(double rho_bar, double alpha, double eta);
double heaviside_derivative(double rho_bar, double alpha, double eta);

struct ProjectionResult {
  Eigen::VectorXd rho_phys;
  double eta = 0.0;
};

// Projects the filtered field, choosing eta by bisection so the material
// volume hits `target_volume` (defaults to the pre-projection volume).
ProjectionResult heaviside_project(const Eigen::VectorXd& rho_bar, double alpha,
                                   double elem_volume, double target_volume = -1.0);

// Maps d(objective)/d(rho_phys) back to the raw design variables:
// elementwise projection slope at fixed eta, then the filter transpose.
Eigen::VectorXd filter_chain_sensitivity(const Eigen::VectorXd& dj_drho_phys,
                                         const DensityFilter& filter,
                                         const Eigen::VectorXd& rho_bar,
                                         double alpha, double eta);

}  // namespace rto

#endif
