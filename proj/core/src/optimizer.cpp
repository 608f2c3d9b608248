#include "rto/optimizer.hpp"

#include <cmath>

#include "rto/errors.hpp"
#include "rto/mma.hpp"

namespace rto {

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Running: return "running";
    case RunStatus::Converged: return "converged";
    case RunStatus::MaxIterations: return "max-iterations";
    case RunStatus::Stalled: return "stalled";
  }
  return "?";
}

PeriodicLayout PeriodicLayout::from(const Mesh& mesh, int cells_x, int cells_y) {
  if (cells_x < 1 || cells_y < 1)
    throw InvalidInput("periodic: cell counts must be >= 1");
  if (mesh.nx % cells_x != 0 || mesh.ny % cells_y != 0)
    throw InvalidInput("periodic: cell counts must divide the mesh");
  PeriodicLayout layout;
  layout.cells_x = cells_x;
  layout.cells_y = cells_y;
  layout.cell_nx = mesh.nx / cells_x;
  layout.cell_ny = mesh.ny / cells_y;
  return layout;
}

Eigen::VectorXd periodic_expand(const Eigen::VectorXd& cell,
                                const PeriodicLayout& layout, const Mesh& mesh) {
  if (cell.size() != layout.cell_elems())
    throw InvalidInput("periodic_expand: cell vector size mismatch");
  Eigen::VectorXd full(mesh.n_elems());
  for (int ex = 0; ex < mesh.nx; ++ex)
    for (int ey = 0; ey < mesh.ny; ++ey) {
      const int ix = ex % layout.cell_nx;
      const int iy = ey % layout.cell_ny;
      full[mesh.elem_id(ex, ey)] = cell[ix * layout.cell_ny + iy];
    }
  return full;
}

Eigen::VectorXd periodic_reduce(const Eigen::VectorXd& field,
                                const PeriodicLayout& layout, const Mesh& mesh) {
  if (field.size() != mesh.n_elems())
    throw InvalidInput("periodic_reduce: field size mismatch");
  Eigen::VectorXd cell = Eigen::VectorXd::Zero(layout.cell_elems());
  for (int ex = 0; ex < mesh.nx; ++ex)
    for (int ey = 0; ey < mesh.ny; ++ey) {
      const int ix = ex % layout.cell_nx;
      const int iy = ey % layout.cell_ny;
      cell[ix * layout.cell_ny + iy] += field[mesh.elem_id(ex, ey)];
    }
  return cell;
}

ConvergenceDecision convergence_check(const std::vector<IterationRecord>& history,
                                      double tol_change, double volfrac_limit) {
  if (history.empty())
    throw InvalidInput("convergence_check: need at least one iteration");
  if (history.size() >= 2) {
    const auto& last = history.back();
    if (last.max_change < tol_change && last.volfrac <= volfrac_limit + 1e-6)
      return ConvergenceDecision::Converged;
  }
  constexpr int window = 20;
  if (static_cast<int>(history.size()) >= window) {
    double hi_min = history.back().j_hi, hi_max = hi_min;
    double lo_min = history.back().j_lo, lo_max = lo_min;
    for (int k = 0; k < window; ++k) {
      const auto& r = history[history.size() - 1 - k];
      hi_min = std::min(hi_min, r.j_hi);
      hi_max = std::max(hi_max, r.j_hi);
      lo_min = std::min(lo_min, r.j_lo);
      lo_max = std::max(lo_max, r.j_lo);
    }
    const double scale = std::max({1.0, std::abs(hi_max), std::abs(lo_max)});
    if (hi_max - hi_min < 1e-6 * scale && lo_max - lo_min < 1e-6 * scale)
      return ConvergenceDecision::Stalled;
  }
  return ConvergenceDecision::Continue;
}

RtoProblem::RtoProblem(const RunConfig& cfg)
    : cfg_(cfg),
      mesh_(cfg.build_mesh()),
      pbox_(cfg.resolve_pbox(&pbox_warning_)),
      filter_(mesh_, cfg.filter.radius) {
  cfg_.validate();
  const double mu_ref = pbox_.mu_mid();
  const double sigma_ref = pbox_.sigma_mid();
  if (mu_ref == 0.0)
    throw InvalidInput("rto: the mean-load reference is zero; the scaling "
                       "decomposition needs a nonzero mean interval midpoint");

  const double a = 0.5 * mesh_.load_edge.span_elements() * mesh_.elem_size;
  int M = cfg_.uncertainty.m_terms;
  if (sigma_ref == 0.0) {
    M = 0;  // no fluctuation energy, the mean case carries everything
  } else if (M < 0) {
    ExponentialKernel unit{1.0, cfg_.uncertainty.corr_length, a};
    const auto lambdas = kl_basis(unit, cfg_.uncertainty.m_max).lambdas();
    M = significance_order(lambdas, cfg_.uncertainty.s0, unit.trace());
  }
  ExponentialKernel kernel{sigma_ref, cfg_.uncertainty.corr_length, a};
  basis_ = kl_basis(kernel, M);
  loads_ = build_load_cases(mesh_, basis_, mu_ref);
}

double RtoProblem::alpha_at(int iter) const {
  const int doublings = std::max(0, (iter - 1) / cfg_.filter.alpha_double_every);
  const double alpha = cfg_.filter.alpha0 * std::pow(2.0, doublings);
  return std::min(alpha, cfg_.filter.alpha_max);
}

RtoProblem::Evaluation RtoProblem::evaluate(const Eigen::VectorXd& rho_phys) const {
  FactoredStiffness K(mesh_, rho_phys, cfg_.material);
  auto disps = solve_cases(K, loads_);
  auto c = compliance_matrix(loads_, disps);
  return Evaluation{std::move(c), std::move(disps), std::move(K)};
}

MomentBounds RtoProblem::bounds_of(const ComplianceMatrix& c_ref) const {
  switch (cfg_.bounds.engine) {
    case BoundsEngine::CA:
      return ca_bounds(c_ref, mu_ref(), sigma_ref(), pbox_, cfg_.objective.beta,
                       cfg_.objective.mode);
    case BoundsEngine::QMCS:
      return qmcs_bounds(c_ref, mu_ref(), sigma_ref(), pbox_, cfg_.objective.beta,
                         cfg_.bounds.qmcs_points, cfg_.objective.mode);
    case BoundsEngine::PSO: {
      SwarmConfig swarm = cfg_.bounds.swarm;
      swarm.seed = cfg_.output.seed;
      return pso_bounds(c_ref, mu_ref(), sigma_ref(), pbox_, cfg_.objective.beta,
                        swarm, cfg_.objective.mode);
    }
  }
  throw InvalidInput("bounds: unknown engine");
}

MonotonicityReport RtoProblem::monotonicity(const ComplianceMatrix& c_ref) const {
  return monotonicity_report(c_ref, mu_ref(), sigma_ref(), pbox_,
                             cfg_.bounds.monotonicity_sweep, cfg_.objective.mode);
}

Eigen::VectorXd RtoProblem::corner_gradient(const Evaluation& eval,
                                            const ParamPoint& corner,
                                            const Eigen::VectorXd& rho_phys) const {
  const int m = static_cast<int>(eval.disps.size());
  const ComplianceMatrix c_corner = scale_compliance(
      eval.c, mu_ref(), sigma_ref(), corner.mu, corner.sigma);
  const double beta = cfg_.objective.beta;
  double std_dev = 0.0;
  if (beta > 0.0)
    std_dev = std::sqrt(variance_compliance(c_corner, cfg_.objective.mode));
  const WeightMatrix W = weight_matrix(c_corner, beta, std_dev, cfg_.objective.mode);
  const OstDecomposition ost = ost_decompose(W);

  const double s0 = corner.mu / mu_ref();
  const double s1 = m > 1 ? corner.sigma / sigma_ref() : 0.0;
  std::vector<Eigen::VectorXd> scaled(m);
  for (int i = 0; i < m; ++i) scaled[i] = (i == 0 ? s0 : s1) * eval.disps[i];
  return sensitivity_field(scaled, ost, rho_phys, cfg_.material, mesh_);
}

Eigen::VectorXd RtoProblem::objective_gradient(const Evaluation& eval,
                                               const MomentBounds& bounds,
                                               const Eigen::VectorXd& rho_phys) const {
  const auto upper = corner_gradient(eval, bounds.objective.arg_hi, rho_phys);
  const auto lower = corner_gradient(eval, bounds.objective.arg_lo, rho_phys);
  return interval_sensitivity(upper, lower, cfg_.objective.w1, cfg_.objective.w2);
}

RtoResult run_rto(const RunConfig& cfg, const ProgressFn& progress) {
  const RtoProblem problem(cfg);
  const Mesh& mesh = problem.mesh();
  const double v_e = mesh.elem_volume();
  const double v_total = mesh.total_volume();
  const double v_bar = cfg.optimizer.volfrac * v_total;

  const bool periodic = cfg.optimizer.cells_x > 0;
  const PeriodicLayout layout =
      periodic ? PeriodicLayout::from(mesh, cfg.optimizer.cells_x,
                                      cfg.optimizer.cells_y)
               : PeriodicLayout{1, 1, mesh.nx, mesh.ny};

  const int n_design = periodic ? layout.cell_elems() : mesh.n_elems();
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n_design, cfg.optimizer.volfrac);
  MmaUpdater mma(n_design);

  RtoResult result;
  result.state.status = RunStatus::MaxIterations;
  double prev_weighted_obj = std::numeric_limits<double>::infinity();

  auto expand = [&](const Eigen::VectorXd& xc) {
    return periodic ? periodic_expand(xc, layout, mesh) : xc;
  };
  auto reduce = [&](const Eigen::VectorXd& field) {
    return periodic ? periodic_reduce(field, layout, mesh) : field;
  };
  // Full pipeline value of a candidate design; used by the conservative
  // inner loop only.
  auto pipeline_objective = [&](const Eigen::VectorXd& xc, int iter) {
    const Eigen::VectorXd rho_full = expand(xc);
    const Eigen::VectorXd rho_bar = problem.filter().apply(rho_full);
    const auto proj = heaviside_project(rho_bar, problem.alpha_at(iter), v_e);
    const auto eval = problem.evaluate(proj.rho_phys);
    const auto bounds = problem.bounds_of(eval.c);
    return cfg.objective.w1 * bounds.objective.hi +
           cfg.objective.w2 * bounds.objective.lo;
  };

  for (int iter = 1; iter <= cfg.optimizer.max_iter; ++iter) {
    const double alpha = problem.alpha_at(iter);
    const Eigen::VectorXd rho_full = expand(x);
    const Eigen::VectorXd rho_bar = problem.filter().apply(rho_full);
    const auto proj = heaviside_project(rho_bar, alpha, v_e);
    const auto eval = problem.evaluate(proj.rho_phys);

    if (iter == 1 && cfg.bounds.engine == BoundsEngine::CA &&
        cfg.bounds.check_monotonicity) {
      result.monotonicity = problem.monotonicity(eval.c);
      result.monotonicity_checked = true;
      if (!result.monotonicity.all_monotone())
        throw NumericalError(
            "rto: the moment sweeps are not monotone across the p-box, the "
            "corner search is not applicable; use the qmcs or pso engine");
    }

    const MomentBounds bounds = problem.bounds_of(eval.c);
    const Eigen::VectorXd dj_phys =
        problem.objective_gradient(eval, bounds, proj.rho_phys);
    const Eigen::VectorXd dj_raw_full = filter_chain_sensitivity(
        dj_phys, problem.filter(), rho_bar, alpha, proj.eta);

    const double volume = v_e * proj.rho_phys.sum();
    const double g = volume / v_bar - 1.0;
    const Eigen::VectorXd dvol_phys =
        Eigen::VectorXd::Constant(mesh.n_elems(), v_e / v_bar);
    const Eigen::VectorXd dg_raw_full = filter_chain_sensitivity(
        dvol_phys, problem.filter(), rho_bar, alpha, proj.eta);

    const Eigen::VectorXd dj_raw = reduce(dj_raw_full);
    const Eigen::VectorXd dg_raw = reduce(dg_raw_full);

    Eigen::VectorXd x_new = mma.update(x, dj_raw, g, dg_raw);
    const double weighted_obj = cfg.objective.w1 * bounds.objective.hi +
                                cfg.objective.w2 * bounds.objective.lo;
    if (cfg.optimizer.conservative && iter > 1 &&
        weighted_obj > prev_weighted_obj * (1.0 + 1e-12)) {
      // Reject steps whose realized objective rose: pull the asymptotes
      // in and re-solve the subproblem around the same point.
      for (int attempt = 0; attempt < 2; ++attempt) {
        mma.tighten();
        x_new = mma.resolve(x, dj_raw, g, dg_raw);
        if (pipeline_objective(x_new, iter + 1) <= weighted_obj * (1.0 + 1e-12))
          break;
      }
    }
    prev_weighted_obj = weighted_obj;

    IterationRecord rec;
    rec.iter = iter;
    rec.j_lo = bounds.objective.lo;
    rec.j_hi = bounds.objective.hi;
    rec.mu_lo = bounds.mean.lo;
    rec.mu_hi = bounds.mean.hi;
    rec.sigma_lo = bounds.stddev.lo;
    rec.sigma_hi = bounds.stddev.hi;
    rec.volfrac = volume / v_total;
    rec.max_change = (x_new - x).cwiseAbs().maxCoeff();
    rec.upper_corner = bounds.objective.arg_hi;
    rec.lower_corner = bounds.objective.arg_lo;
    rec.eta = proj.eta;
    rec.alpha = alpha;
    result.state.history.push_back(rec);
    if (progress) progress(rec);

    x = x_new;
    result.state.iter = iter;

    const auto decision = convergence_check(result.state.history,
                                            cfg.optimizer.tol_change,
                                            cfg.optimizer.volfrac);
    if (decision == ConvergenceDecision::Converged) {
      result.state.status = RunStatus::Converged;
      break;
    }
    if (decision == ConvergenceDecision::Stalled) {
      result.state.status = RunStatus::Stalled;
      break;
    }
  }

  // Evaluate the final design once so the returned state and bounds
  // belong to the densities actually reported.
  const Eigen::VectorXd rho_full = expand(x);
  const Eigen::VectorXd rho_bar = problem.filter().apply(rho_full);
  const auto proj =
      heaviside_project(rho_bar, problem.alpha_at(result.state.iter), v_e);
  const auto eval = problem.evaluate(proj.rho_phys);
  result.final_bounds = problem.bounds_of(eval.c);
  result.final_compliance = eval.c;
  result.final_eta = proj.eta;
  result.state.rho = rho_full;
  result.state.rho_bar = rho_bar;
  result.state.rho_phys = proj.rho_phys;
  return result;
}

}  // namespace rto
