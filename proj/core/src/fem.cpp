#include "rto/fem.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <cmath>

#include "rto/errors.hpp"

namespace rto {

void SimpParams::validate() const {
  if (!(E0 > 0.0 && Emin > 0.0 && Emin < E0))
    throw InvalidInput("simp: require 0 < Emin < E0");
  if (!(p >= 1.0)) throw InvalidInput("simp: penalization must be >= 1");
  if (!(nu > -1.0 && nu < 0.5)) throw InvalidInput("simp: Poisson ratio out of range");
}

Eigen::Matrix<double, 8, 8> element_stiffness_unit(double nu) {
  const double k[8] = {0.5 - nu / 6.0,   0.125 + nu / 8.0, -0.25 - nu / 12.0,
                       -0.125 + 3.0 * nu / 8.0, -0.25 + nu / 12.0,
                       -0.125 - nu / 8.0, nu / 6.0,          0.125 - 3.0 * nu / 8.0};
  // Index pattern of the closed-form integral for corners ordered
  // counterclockwise from bottom-left, dofs interleaved (x, y).
  static const int idx[8][8] = {
      {0, 1, 2, 3, 4, 5, 6, 7}, {1, 0, 7, 6, 5, 4, 3, 2},
      {2, 7, 0, 5, 6, 3, 4, 1}, {3, 6, 5, 0, 7, 2, 1, 4},
      {4, 5, 6, 7, 0, 1, 2, 3}, {5, 4, 3, 2, 1, 0, 7, 6},
      {6, 3, 4, 1, 2, 7, 0, 5}, {7, 2, 1, 4, 3, 6, 5, 0}};
  Eigen::Matrix<double, 8, 8> ke;
  const double scale = 1.0 / (1.0 - nu * nu);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) ke(i, j) = scale * k[idx[i][j]];
  return ke;
}

Eigen::Matrix<double, 8, 8> element_stiffness(const SimpParams& params) {
  return params.E0 * element_stiffness_unit(params.nu);
}

struct FactoredStiffness::Impl {
  Eigen::SparseMatrix<double> A;  // reduced (free dofs only)
  std::vector<int> full_to_free;  // -1 for fixed
  std::vector<int> free_to_full;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
  bool use_direct = true;
};

FactoredStiffness::~FactoredStiffness() = default;
FactoredStiffness::FactoredStiffness(FactoredStiffness&&) noexcept = default;
FactoredStiffness& FactoredStiffness::operator=(FactoredStiffness&&) noexcept = default;

FactoredStiffness::FactoredStiffness(const Mesh& mesh,
                                     const Eigen::VectorXd& rho_phys,
                                     const SimpParams& params)
    : impl_(std::make_unique<Impl>()) {
  mesh.validate();
  params.validate();
  if (rho_phys.size() != mesh.n_elems())
    throw InvalidInput("assemble: density field size does not match the mesh");
  for (int e = 0; e < rho_phys.size(); ++e)
    if (!(rho_phys[e] >= -1e-12 && rho_phys[e] <= 1.0 + 1e-12))
      throw InvalidInput("assemble: densities must lie in [0, 1]");

  const int n_dofs = mesh.n_dofs();
  impl_->full_to_free.assign(n_dofs, -1);
  {
    size_t fi = 0;
    for (int d = 0; d < n_dofs; ++d) {
      if (fi < mesh.fixed_dofs.size() && mesh.fixed_dofs[fi] == d) {
        ++fi;
        continue;
      }
      impl_->full_to_free[d] = static_cast<int>(impl_->free_to_full.size());
      impl_->free_to_full.push_back(d);
    }
  }
  const int n_free = static_cast<int>(impl_->free_to_full.size());
  if (n_free == 0) throw InvalidInput("assemble: every dof is constrained");

  const auto ke = element_stiffness_unit(params.nu);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(mesh.n_elems()) * 64);
  for (int ex = 0; ex < mesh.nx; ++ex)
    for (int ey = 0; ey < mesh.ny; ++ey) {
      const double E = params.modulus(rho_phys[mesh.elem_id(ex, ey)]);
      const auto dofs = mesh.element_dofs(ex, ey);
      for (int i = 0; i < 8; ++i) {
        const int gi = impl_->full_to_free[dofs[i]];
        if (gi < 0) continue;
        for (int j = 0; j < 8; ++j) {
          const int gj = impl_->full_to_free[dofs[j]];
          if (gj < 0) continue;
          trips.emplace_back(gi, gj, E * ke(i, j));
        }
      }
    }
  impl_->A.resize(n_free, n_free);
  impl_->A.setFromTriplets(trips.begin(), trips.end());

  impl_->use_direct = n_free <= direct_dof_limit;
  if (impl_->use_direct) {
    impl_->llt.compute(impl_->A);
    if (impl_->llt.info() != Eigen::Success)
      throw StructuralError(
          "assemble: Cholesky factorization failed; the boundary conditions "
          "likely leave rigid-body modes (" +
          std::to_string(mesh.fixed_dofs.size()) + " fixed dofs)");
  }
}

int FactoredStiffness::n_free() const {
  return static_cast<int>(impl_->free_to_full.size());
}

bool FactoredStiffness::direct() const { return impl_->use_direct; }

Eigen::VectorXd FactoredStiffness::solve(const Eigen::VectorXd& f) const {
  const int n_dofs = static_cast<int>(impl_->full_to_free.size());
  if (f.size() != n_dofs)
    throw InvalidInput("solve: load vector size does not match the mesh");
  const int n_free = static_cast<int>(impl_->free_to_full.size());
  Eigen::VectorXd ff(n_free);
  for (int i = 0; i < n_free; ++i) ff[i] = f[impl_->free_to_full[i]];

  Eigen::VectorXd uf;
  if (impl_->use_direct) {
    uf = impl_->llt.solve(ff);
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                             Eigen::Lower | Eigen::Upper>
        cg;
    cg.setTolerance(1e-8);
    cg.setMaxIterations(10 * n_free);
    cg.compute(impl_->A);
    uf = cg.solve(ff);
    if (cg.info() != Eigen::Success)
      throw NumericalError("solve: conjugate gradient did not converge, residual " +
                           std::to_string(cg.error()));
  }
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n_dofs);
  for (int i = 0; i < n_free; ++i) u[impl_->free_to_full[i]] = uf[i];
  return u;
}

double FactoredStiffness::residual(const Eigen::VectorXd& f,
                                   const Eigen::VectorXd& u) const {
  const int n_free = static_cast<int>(impl_->free_to_full.size());
  Eigen::VectorXd ff(n_free), uf(n_free);
  for (int i = 0; i < n_free; ++i) {
    ff[i] = f[impl_->free_to_full[i]];
    uf[i] = u[impl_->free_to_full[i]];
  }
  const double fn = ff.norm();
  if (fn == 0.0) return (impl_->A * uf).norm();
  return (impl_->A * uf - ff).norm() / fn;
}

std::vector<double> load_edge_coordinates(const Mesh& mesh) {
  const int n = static_cast<int>(mesh.load_edge.nodes.size());
  const double a = 0.5 * (n - 1) * mesh.elem_size;
  std::vector<double> xs(n);
  for (int j = 0; j < n; ++j) xs[j] = -a + j * mesh.elem_size;
  return xs;
}

Eigen::VectorXd lump_edge_load(const Mesh& mesh, std::span<const double> magnitudes) {
  const auto& edge = mesh.load_edge;
  if (magnitudes.size() != edge.nodes.size())
    throw InvalidInput("lump_edge_load: one magnitude per edge node required");
  const int n = static_cast<int>(edge.nodes.size());
  const double h = mesh.elem_size;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(mesh.n_dofs());
  for (int j = 0; j < n; ++j) {
    const double w = (j == 0 || j == n - 1) ? 0.5 * h : h;
    const double q = w * magnitudes[j];
    f[2 * edge.nodes[j]] += q * edge.dir_x;
    f[2 * edge.nodes[j] + 1] += q * edge.dir_y;
  }
  return f;
}

LoadCaseSet build_load_cases(const Mesh& mesh, const KLBasis& basis, double mu_ref) {
  mesh.validate();
  const double edge_len = mesh.load_edge.span_elements() * mesh.elem_size;
  if (basis.order() > 0 &&
      std::abs(edge_len - 2.0 * basis.a) > 1e-9 * std::max(1.0, edge_len))
    throw InvalidInput("build_load_cases: load edge length " +
                       std::to_string(edge_len) +
                       " does not match the basis domain width " +
                       std::to_string(2.0 * basis.a));
  const auto xs = load_edge_coordinates(mesh);
  const int n = static_cast<int>(xs.size());

  LoadCaseSet set;
  set.mu_ref = mu_ref;
  set.sigma_ref = basis.sigma;
  std::vector<double> mags(n);

  std::fill(mags.begin(), mags.end(), mu_ref);
  set.cases.push_back(lump_edge_load(mesh, mags));

  for (int i = 0; i < basis.order(); ++i) {
    const double amp = std::sqrt(basis.terms[i].lambda);
    for (int j = 0; j < n; ++j)
      mags[j] = amp * basis.eval_eigenfunction(i, xs[j]);
    set.cases.push_back(lump_edge_load(mesh, mags));
  }
  return set;
}

std::vector<Eigen::VectorXd> solve_cases(const FactoredStiffness& K,
                                         const LoadCaseSet& loads) {
  std::vector<Eigen::VectorXd> disps;
  disps.reserve(loads.cases.size());
  for (size_t i = 0; i < loads.cases.size(); ++i) {
    disps.push_back(K.solve(loads.cases[i]));
    const double r = K.residual(loads.cases[i], disps.back());
    if (r > 1e-8)
      throw NumericalError("solve_cases: case " + std::to_string(i) +
                           " residual " + std::to_string(r) + " exceeds 1e-8");
  }
  return disps;
}

ComplianceMatrix compliance_matrix(const LoadCaseSet& loads,
                                   const std::vector<Eigen::VectorXd>& disps) {
  if (loads.cases.size() != disps.size())
    throw InvalidInput("compliance_matrix: load and displacement counts differ");
  const int m = static_cast<int>(loads.cases.size());
  Eigen::MatrixXd raw(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) raw(i, j) = loads.cases[i].dot(disps[j]);
  ComplianceMatrix out;
  out.c = 0.5 * (raw + raw.transpose());  // kill solver round-off asymmetry
  return out;
}

}  // namespace rto
