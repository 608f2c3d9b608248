#ifndef RTO_FEM_HPP
#define RTO_FEM_HPP

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <memory>
#include <vector>

#include "rto/kl.hpp"
#include "rto/mesh.hpp"

namespace rto {

struct SimpParams {
  double E0 = 1000.0;
  double Emin = 1e-9;
  double nu = 0.3;
  double p = 3.0;

  double modulus(double rho) const { return Emin + (E0 - Emin) * std::pow(rho, p); }
  void validate() const;
};

// Exact plane-stress stiffness of one square bilinear element at unit
// Young's modulus (closed-form integration; scale-free in 2D).
Eigen::Matrix<double, 8, 8> element_stiffness_unit(double nu);

// Same, scaled by the solid modulus E0.
Eigen::Matrix<double, 8, 8> element_stiffness(const SimpParams& params);

// Assembled global stiffness with per-element SIMP modulus, fixed dofs
// eliminated, ready for repeated right-hand-side solves. Uses a sparse
// Cholesky factorization up to `direct_dof_limit` free dofs and a Jacobi
// preconditioned conjugate gradient beyond that.
class FactoredStiffness {
 public:
  FactoredStiffness(const Mesh& mesh, const Eigen::VectorXd& rho_phys,
                    const SimpParams& params);
  ~FactoredStiffness();
  FactoredStiffness(FactoredStiffness&&) noexcept;
  FactoredStiffness& operator=(FactoredStiffness&&) noexcept;

  // Full-size load in, full-size displacement out (fixed dofs zero).
  Eigen::VectorXd solve(const Eigen::VectorXd& f) const;
  // ||K u - f|| / ||f|| over the free dofs.
  double residual(const Eigen::VectorXd& f, const Eigen::VectorXd& u) const;

  int n_free() const;
  bool direct() const;

  static constexpr int direct_dof_limit = 2 * 251 * 251;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// The mean-load case f_0 plus one case per retained K-L term, all as
// consistent (trapezoidal) nodal force vectors on the load edge.
struct LoadCaseSet {
  std::vector<Eigen::VectorXd> cases;
  double mu_ref = 0.0;
  double sigma_ref = 0.0;

  int order() const { return static_cast<int>(cases.size()) - 1; }
};

// Requires the load edge length to match the basis domain width 2a.
LoadCaseSet build_load_cases(const Mesh& mesh, const KLBasis& basis, double mu_ref);

// Lump an arbitrary magnitude profile given at the load-edge nodes into
// a global nodal force vector (trapezoidal along the edge).
Eigen::VectorXd lump_edge_load(const Mesh& mesh, std::span<const double> magnitudes);

// Edge-node coordinates mapped to the field domain [-a, a].
std::vector<double> load_edge_coordinates(const Mesh& mesh);

// Solves every case; verifies the relative residual of each solution.
std::vector<Eigen::VectorXd> solve_cases(const FactoredStiffness& K,
                                         const LoadCaseSet& loads);

// Symmetric matrix of load/displacement inner products c_ij = f_i^T u_j,
// kept with the reference parameters it was assembled at.
struct ComplianceMatrix {
  Eigen::MatrixXd c;

  int order() const { return static_cast<int>(c.rows()) - 1; }
};

ComplianceMatrix compliance_matrix(const LoadCaseSet& loads,
                                   const std::vector<Eigen::VectorXd>& disps);

}  // namespace rto

#endif
