#ifndef RTO_OPTIMIZER_HPP
#define RTO_OPTIMIZER_HPP

#include <functional>
#include <optional>

#include "rto/bounds.hpp"
#include "rto/config.hpp"
#include "rto/filter.hpp"
#include "rto/sensitivity.hpp"

namespace rto {

// Tiling of the design domain into identical unit cells.
struct PeriodicLayout {
  int cells_x = 1;
  int cells_y = 1;
  int cell_nx = 0;
  int cell_ny = 0;

  bool active() const { return cells_x > 1 || cells_y > 1; }
  int cell_elems() const { return cell_nx * cell_ny; }
  int n_cells() const { return cells_x * cells_y; }

  static PeriodicLayout from(const Mesh& mesh, int cells_x, int cells_y);
};

// Tiles one cell's densities over the whole mesh.
Eigen::VectorXd periodic_expand(const Eigen::VectorXd& cell,
                                const PeriodicLayout& layout, const Mesh& mesh);
// Sums corresponding in-cell entries across all cells (the adjoint of the
// expansion, so tiled objectives differentiate consistently).
Eigen::VectorXd periodic_reduce(const Eigen::VectorXd& field,
                                const PeriodicLayout& layout, const Mesh& mesh);

struct IterationRecord {
  int iter = 0;
  double j_lo = 0.0, j_hi = 0.0;
  double mu_lo = 0.0, mu_hi = 0.0;
  double sigma_lo = 0.0, sigma_hi = 0.0;
  double volfrac = 0.0;
  double max_change = 0.0;
  ParamPoint upper_corner, lower_corner;
  double eta = 0.0;
  double alpha = 0.0;
};

enum class RunStatus { Running, Converged, MaxIterations, Stalled };
std::string to_string(RunStatus s);

enum class ConvergenceDecision { Continue, Converged, Stalled };

// Converged once the density change drops below tol with a feasible
// volume; stalled when the objective bounds sit flat (1e-6 relative) for
// 20 iterations without meeting the change tolerance.
ConvergenceDecision convergence_check(const std::vector<IterationRecord>& history,
                                      double tol_change, double volfrac_limit);

struct DesignState {
  Eigen::VectorXd rho;       // raw design variables (full mesh)
  Eigen::VectorXd rho_bar;   // linearly filtered
  Eigen::VectorXd rho_phys;  // projected physical densities
  int iter = 0;
  std::vector<IterationRecord> history;
  RunStatus status = RunStatus::Running;
};

// Everything about a configured problem that does not depend on the
// density field: mesh, filter, truncated basis, reference load cases.
class RtoProblem {
 public:
  explicit RtoProblem(const RunConfig& cfg);

  const RunConfig& config() const { return cfg_; }
  const Mesh& mesh() const { return mesh_; }
  const KLBasis& basis() const { return basis_; }
  const PBox& pbox() const { return pbox_; }
  const LoadCaseSet& loads() const { return loads_; }
  const DensityFilter& filter() const { return filter_; }
  double mu_ref() const { return loads_.mu_ref; }
  double sigma_ref() const { return loads_.sigma_ref; }
  double alpha_at(int iter) const;
  const std::string& pbox_warning() const { return pbox_warning_; }

  struct Evaluation {
    ComplianceMatrix c;
    std::vector<Eigen::VectorXd> disps;
    FactoredStiffness stiffness;
  };
  Evaluation evaluate(const Eigen::VectorXd& rho_phys) const;

  MomentBounds bounds_of(const ComplianceMatrix& c_ref) const;
  MonotonicityReport monotonicity(const ComplianceMatrix& c_ref) const;

  // Objective gradient w.r.t. physical densities: the transformed-case
  // gradient at each frozen objective corner, combined with (w1, w2).
  Eigen::VectorXd objective_gradient(const Evaluation& eval,
                                     const MomentBounds& bounds,
                                     const Eigen::VectorXd& rho_phys) const;
  // Gradient at one parameter point (used per corner and by tests).
  Eigen::VectorXd corner_gradient(const Evaluation& eval, const ParamPoint& corner,
                                  const Eigen::VectorXd& rho_phys) const;

 private:
  RunConfig cfg_;
  Mesh mesh_;
  PBox pbox_;
  KLBasis basis_;
  LoadCaseSet loads_;
  DensityFilter filter_;
  std::string pbox_warning_;
};

struct RtoResult {
  DesignState state;
  MomentBounds final_bounds;
  ComplianceMatrix final_compliance;
  double final_eta = 0.0;
  MonotonicityReport monotonicity;
  bool monotonicity_checked = false;
};

using ProgressFn = std::function<void(const IterationRecord&)>;

// The full pipeline: p-box, K-L truncation, per-iteration FE solves at
// the reference parameters, bound search, frozen-corner interval
// sensitivity, filter chain, density update, convergence check.
RtoResult run_rto(const RunConfig& cfg, const ProgressFn& progress = {});

}  // namespace rto

#endif
