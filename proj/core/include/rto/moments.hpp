#ifndef RTO_MOMENTS_HPP
#define RTO_MOMENTS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "rto/fem.hpp"

namespace rto {

// Two variance conventions for the compliance quadratic form
// c = sum_ij xi_i xi_j c_ij:
//   OffDiagonal : 2 * sum_{i != j} c_ij^2 (diagonal fluctuation dropped)
//   Full        : 2 * sum_{all i,j} c_ij^2 (exact for Gaussian xi)
// Full is the default; it is the one consistent with the Monte Carlo
// oracle and with the sensitivity weight matrix.
enum class VarianceMode { OffDiagonal, Full };

// E[xi_i xi_j xi_k xi_l] for independent zero-mean normals with the given
// per-index standard deviations.
double fourth_moment(int i, int j, int k, int l, std::span<const double> sigmas);

// sum_i c_ii
double mean_compliance(const ComplianceMatrix& C);

double variance_compliance(const ComplianceMatrix& C, VarianceMode mode);

// mean + beta * std_dev
double objective_value(double mean, double std_dev, double beta);

struct McResult {
  double mean = 0.0;
  double variance = 0.0;
  std::vector<double> samples;
};

// Direct sampling of the quadratic form with i.i.d. standard normal
// coefficients; the ground-truth check for the closed-form moments and
// the source of empirical distribution envelopes.
McResult mc_compliance_oracle(const ComplianceMatrix& C, int n, std::uint64_t seed,
                              bool keep_samples = true);

}  // namespace rto

#endif
