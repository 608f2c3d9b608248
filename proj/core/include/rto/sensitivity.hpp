#ifndef RTO_SENSITIVITY_HPP
#define RTO_SENSITIVITY_HPP

#include <Eigen/Core>
#include <vector>

#include "rto/fem.hpp"
#include "rto/moments.hpp"

namespace rto {

// Symmetric weights combining the mean and the std-dev gradients of the
// objective into a single bilinear form over the load cases:
//   J = sum_ij w_ij c_ij  with  w_ii = 1 + 2 beta c_ii / std  (Full mode),
//   w_ij = 2 beta c_ij / std for i != j, identity when beta = 0.
// In OffDiagonal mode the diagonal correction is dropped, matching that
// variance convention.
struct WeightMatrix {
  Eigen::MatrixXd w;
};

WeightMatrix weight_matrix(const ComplianceMatrix& C, double beta, double std_dev,
                           VarianceMode mode);

// Eigendecomposition of W with a deterministic sign convention and the
// eigenvalues sorted descending. Diagonalizing W collapses the pairwise
// gradient sum into one term per transformed load case.
struct OstDecomposition {
  Eigen::MatrixXd t;       // orthogonal, columns are eigenvectors
  Eigen::VectorXd eigvals;
};

OstDecomposition ost_decompose(const WeightMatrix& W);

// Per-element objective gradient through the transformed displacements:
//   dJ/drho_e = -p rho^(p-1) (E0-Emin) sum_i eig_i uhat_ie^T k_e uhat_ie
// with uhat = [u_0 ... u_M] T.
Eigen::VectorXd sensitivity_field(const std::vector<Eigen::VectorXd>& disps,
                                  const OstDecomposition& ost,
                                  const Eigen::VectorXd& rho_phys,
                                  const SimpParams& params, const Mesh& mesh);

// Same gradient from the untransformed pairwise double sum; O((M+1)^2)
// per element, kept as the independent check of the transformed path.
Eigen::VectorXd sensitivity_direct(const std::vector<Eigen::VectorXd>& disps,
                                   const Eigen::MatrixXd& w,
                                   const Eigen::VectorXd& rho_phys,
                                   const SimpParams& params, const Mesh& mesh);

// Weighted combination of the gradients at the upper and lower objective
// corners; requires w1 + w2 = 1 with both nonnegative.
Eigen::VectorXd interval_sensitivity(const Eigen::VectorXd& sens_upper,
                                     const Eigen::VectorXd& sens_lower,
                                     double w1, double w2);

}  // namespace rto

#endif
