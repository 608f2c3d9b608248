#ifndef RTO_KL_HPP
#define RTO_KL_HPP

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

namespace rto {

// Exponential covariance kernel sigma^2 exp(-|x1-x2|/L) on the 1D load
// domain [-a, a].
struct ExponentialKernel {
  double sigma = 1.0;  // field standard deviation
  double L = 1.0;      // correlation length
  double a = 1.0;      // half-width of the domain

  double operator()(double x1, double x2) const {
    return sigma * sigma * std::exp(-std::abs(x1 - x2) / L);
  }
  // Integral of the covariance along the diagonal, equals the full
  // eigenvalue sum.
  double trace() const { return 2.0 * a * sigma * sigma; }
  void validate() const;
};

enum class EigenParity { Cosine, Sine };

struct KLTerm {
  double freq = 0.0;    // transcendental root, > 0
  double lambda = 0.0;  // eigenvalue 2 sigma^2 L / (1 + freq^2 L^2)
  double norm = 0.0;    // eigenfunction normalization factor
  EigenParity parity = EigenParity::Cosine;
};

// Truncated spectral basis of the exponential kernel. Terms are sorted by
// descending eigenvalue; eigenfunctions are L2-orthonormal on [-a, a].
struct KLBasis {
  std::vector<KLTerm> terms;
  double a = 0.0;
  double L = 0.0;
  double sigma = 0.0;
  double energy_fraction = 0.0;  // sum(lambda) / (2 a sigma^2)

  int order() const { return static_cast<int>(terms.size()); }
  double eval_eigenfunction(int i, double x) const;
  std::vector<double> lambdas() const;
};

// The M smallest positive roots merged from the two transcendental
// families tan(wa) = 1/(wL) (cosine) and tan(wa) = -wL (sine), sorted
// ascending. Each root is bracketed inside a single branch of tan and
// refined by bisection to 1e-12 relative.
std::vector<double> kl_frequencies(double a, double L, int M);

// Roots of one family only; count roots starting from the smallest.
std::vector<double> kl_family_roots(double a, double L, int count, EigenParity parity);

KLBasis kl_basis(const ExponentialKernel& kernel, int M);

// Numerical oracle: midpoint-rule discretization of the covariance
// eigenproblem. Returns the M largest eigenvalues (quadrature-weighted)
// and the matching discrete eigenvectors (columns, unit Euclidean norm).
struct NystromEigen {
  std::vector<double> lambdas;
  Eigen::MatrixXd eigvecs;
  std::vector<double> nodes;
  double weight = 0.0;  // quadrature cell width
};
NystromEigen nystrom_eigenpairs(const ExponentialKernel& kernel, int n_quad, int M);

// Smallest M whose cumulative eigenvalue sum reaches the fraction s0 of
// `full_trace`. If the provided list cannot reach s0, returns the list
// length and, when `warning` is given, a note.
int significance_order(const std::vector<double>& lambdas_desc, double s0,
                       double full_trace, std::string* warning = nullptr);

struct FieldRealization {
  std::vector<double> xs;
  std::vector<double> values;
  Eigen::VectorXd xi;  // the standard-normal coefficients used
};

// value(x) = mu + sum_i sqrt(lambda_i) psi_i(x) xi_i. All xs must lie in
// [-a, a].
FieldRealization realize_field(const KLBasis& basis, double mu,
                               const Eigen::VectorXd& xi,
                               std::span<const double> xs);

}  // namespace rto

#endif
