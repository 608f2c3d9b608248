#include "rto/sensitivity.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "rto/errors.hpp"

namespace rto {

WeightMatrix weight_matrix(const ComplianceMatrix& C, double beta, double std_dev,
                           VarianceMode mode) {
  const int m = static_cast<int>(C.c.rows());
  if (beta > 0.0 && !(std_dev > 0.0))
    throw NumericalError("weight_matrix: zero std-dev with beta > 0 (degenerate variance)");
  WeightMatrix W;
  W.w = Eigen::MatrixXd::Identity(m, m);
  if (beta == 0.0) return W;
  const double s = 2.0 * beta / std_dev;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j && mode == VarianceMode::OffDiagonal) continue;
      W.w(i, j) += s * C.c(i, j);
    }
  return W;
}

OstDecomposition ost_decompose(const WeightMatrix& W) {
  const int m = static_cast<int>(W.w.rows());
  if (W.w.cols() != m) throw InvalidInput("ost_decompose: W must be square");
  if ((W.w - W.w.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * std::max(1.0, W.w.cwiseAbs().maxCoeff()))
    throw InvalidInput("ost_decompose: W must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W.w);
  if (es.info() != Eigen::Success)
    throw NumericalError("ost_decompose: eigen decomposition failed");
  OstDecomposition out;
  out.t.resize(m, m);
  out.eigvals.resize(m);
  for (int k = 0; k < m; ++k) {
    const int src = m - 1 - k;  // descending eigenvalues
    out.eigvals[k] = es.eigenvalues()[src];
    Eigen::VectorXd v = es.eigenvectors().col(src);
    // sign convention: largest-magnitude component positive
    int imax = 0;
    for (int i = 1; i < m; ++i)
      if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    if (v[imax] < 0.0) v = -v;
    out.t.col(k) = v;
  }
  return out;
}

namespace {

double simp_gradient_factor(double rho, const SimpParams& p) {
  return -p.p * std::pow(rho, p.p - 1.0) * (p.E0 - p.Emin);
}

}  // namespace

Eigen::VectorXd sensitivity_field(const std::vector<Eigen::VectorXd>& disps,
                                  const OstDecomposition& ost,
                                  const Eigen::VectorXd& rho_phys,
                                  const SimpParams& params, const Mesh& mesh) {
  const int m = static_cast<int>(disps.size());
  if (ost.t.rows() != m)
    throw InvalidInput("sensitivity_field: case count does not match transform");
  if (rho_phys.size() != mesh.n_elems())
    throw InvalidInput("sensitivity_field: density size does not match mesh");

  // transformed displacement set uhat_k = sum_j T_jk u_j
  std::vector<Eigen::VectorXd> uhat(m);
  for (int k = 0; k < m; ++k) {
    uhat[k] = Eigen::VectorXd::Zero(mesh.n_dofs());
    for (int j = 0; j < m; ++j)
      if (ost.t(j, k) != 0.0) uhat[k] += ost.t(j, k) * disps[j];
  }

  const auto ke = element_stiffness_unit(params.nu);
  Eigen::VectorXd dj(mesh.n_elems());
  Eigen::Matrix<double, 8, 1> ue;
  for (int ex = 0; ex < mesh.nx; ++ex)
    for (int ey = 0; ey < mesh.ny; ++ey) {
      const auto dofs = mesh.element_dofs(ex, ey);
      double acc = 0.0;
      for (int k = 0; k < m; ++k) {
        for (int d = 0; d < 8; ++d) ue[d] = uhat[k][dofs[d]];
        acc += ost.eigvals[k] * ue.dot(ke * ue);
      }
      const int e = mesh.elem_id(ex, ey);
      dj[e] = simp_gradient_factor(rho_phys[e], params) * acc;
    }
  return dj;
}

Eigen::VectorXd sensitivity_direct(const std::vector<Eigen::VectorXd>& disps,
                                   const Eigen::MatrixXd& w,
                                   const Eigen::VectorXd& rho_phys,
                                   const SimpParams& params, const Mesh& mesh) {
  const int m = static_cast<int>(disps.size());
  if (w.rows() != m || w.cols() != m)
    throw InvalidInput("sensitivity_direct: weight size does not match case count");
  if (rho_phys.size() != mesh.n_elems())
    throw InvalidInput("sensitivity_direct: density size does not match mesh");

  const auto ke = element_stiffness_unit(params.nu);
  Eigen::VectorXd dj(mesh.n_elems());
  Eigen::Matrix<double, 8, 1> ui, kuj;
  for (int ex = 0; ex < mesh.nx; ++ex)
    for (int ey = 0; ey < mesh.ny; ++ey) {
      const auto dofs = mesh.element_dofs(ex, ey);
      double acc = 0.0;
      for (int j = 0; j < m; ++j) {
        for (int d = 0; d < 8; ++d) ui[d] = disps[j][dofs[d]];
        kuj = ke * ui;
        for (int i = 0; i < m; ++i) {
          if (w(i, j) == 0.0) continue;
          double dot = 0.0;
          for (int d = 0; d < 8; ++d) dot += disps[i][dofs[d]] * kuj[d];
          acc += w(i, j) * dot;
        }
      }
      const int e = mesh.elem_id(ex, ey);
      dj[e] = simp_gradient_factor(rho_phys[e], params) * acc;
    }
  return dj;
}

Eigen::VectorXd interval_sensitivity(const Eigen::VectorXd& sens_upper,
                                     const Eigen::VectorXd& sens_lower,
                                     double w1, double w2) {
  if (!(w1 >= 0.0 && w2 >= 0.0 && std::abs(w1 + w2 - 1.0) < 1e-9))
    throw InvalidInput("interval_sensitivity: weights must be nonnegative and sum to 1");
  if (sens_upper.size() != sens_lower.size())
    throw InvalidInput("interval_sensitivity: field sizes differ");
  return w1 * sens_upper + w2 * sens_lower;
}

}  // namespace rto
