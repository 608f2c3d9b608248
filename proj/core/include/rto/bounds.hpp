#ifndef RTO_BOUNDS_HPP
#define RTO_BOUNDS_HPP

#include <array>
#include <cstdint>
#include <string>

#include "rto/moments.hpp"
#include "rto/pbox.hpp"

namespace rto {

enum class BoundsEngine { CA, QMCS, PSO };
std::string to_string(BoundsEngine engine);

// A point in the (mu_f, sigma_f) parameter box.
struct ParamPoint {
  double mu = 0.0;
  double sigma = 0.0;
};

struct QuantityBounds {
  double lo = 0.0;
  double hi = 0.0;
  ParamPoint arg_lo;
  ParamPoint arg_hi;

  double width() const { return hi - lo; }
};

struct MomentBounds {
  QuantityBounds mean;
  QuantityBounds stddev;
  QuantityBounds objective;
  BoundsEngine engine = BoundsEngine::CA;
  std::uint64_t seed = 0;  // only meaningful for PSO
};

// Exact rescaling of the compliance matrix from the reference parameters
// to (mu, sigma): c_ij -> s_i s_j c_ij with s_0 = mu/mu_ref and
// s_{i>=1} = sigma/sigma_ref. Follows from the load-case definitions and
// the linearity of the stiffness solve.
ComplianceMatrix scale_compliance(const ComplianceMatrix& c_ref, double mu_ref,
                                  double sigma_ref, double mu, double sigma);

// Moments of the scaled matrix without materializing it.
struct MomentEval {
  double mean = 0.0;
  double stddev = 0.0;
  double objective = 0.0;
};
MomentEval eval_moments_at(const ComplianceMatrix& c_ref, double mu_ref,
                           double sigma_ref, double mu, double sigma,
                           double beta, VarianceMode mode);

// Combinatorial approach: evaluate at the four corners of the box and
// take componentwise extremes. Exact under monotonicity. The mu interval
// must not straddle zero.
MomentBounds ca_bounds(const ComplianceMatrix& c_ref, double mu_ref,
                       double sigma_ref, const PBox& box, double beta,
                       VarianceMode mode);

// Quasi-Monte Carlo scan: Sobol points with the first 1000 indices
// skipped and every 101st kept after that, mapped into the box.
MomentBounds qmcs_bounds(const ComplianceMatrix& c_ref, double mu_ref,
                         double sigma_ref, const PBox& box, double beta,
                         int n_points, VarianceMode mode);

struct SwarmConfig {
  int n_particles = 20;
  int n_iters = 100;
  double c1 = 2.0;
  double c2 = 2.0;
  double inertia_start = 0.9;
  double inertia_end = 0.4;
  std::uint64_t seed = 0;

  void validate() const;
};

// Particle swarm search, one min and one max swarm per quantity, with
// low-discrepancy initialization, velocity clamped to the box width and
// positions clipped to the box.
MomentBounds pso_bounds(const ComplianceMatrix& c_ref, double mu_ref,
                        double sigma_ref, const PBox& box, double beta,
                        const SwarmConfig& cfg, VarianceMode mode);

// Finite-difference slope signs of mean(c) and std(c) along each box
// axis, the other coordinate held at its midpoint. The combinatorial
// approach is only sound when every sweep keeps one slope sign.
struct MonotonicityReport {
  struct Entry {
    bool monotone = true;
    int sign = 0;  // +1 nondecreasing, -1 nonincreasing, 0 constant
  };
  // indexed [input][output], input 0 = mu_f, 1 = sigma_f;
  // output 0 = mean(c), 1 = std(c)
  std::array<std::array<Entry, 2>, 2> entries;
  int n_sweep = 0;

  bool all_monotone() const;
};
MonotonicityReport monotonicity_report(const ComplianceMatrix& c_ref,
                                       double mu_ref, double sigma_ref,
                                       const PBox& box, int n_sweep,
                                       VarianceMode mode);

}  // namespace rto

#endif
