#include "rto/bounds.hpp"

#include <cmath>
#include <limits>

#include "rto/errors.hpp"
#include "rto/random.hpp"
#include "rto/sobol.hpp"

namespace rto {
namespace {

void check_refs(const ComplianceMatrix& c_ref, double mu_ref, double sigma_ref) {
  if (mu_ref == 0.0) throw InvalidInput("scale_compliance: mu_ref must be nonzero");
  if (c_ref.order() >= 1 && sigma_ref == 0.0)
    throw InvalidInput("scale_compliance: sigma_ref must be nonzero when K-L terms exist");
}

}  // namespace

std::string to_string(BoundsEngine engine) {
  switch (engine) {
    case BoundsEngine::CA: return "ca";
    case BoundsEngine::QMCS: return "qmcs";
    case BoundsEngine::PSO: return "pso";
  }
  return "?";
}

void SwarmConfig::validate() const {
  if (n_particles < 2) throw InvalidInput("swarm: need at least 2 particles");
  if (n_iters < 1) throw InvalidInput("swarm: need at least 1 iteration");
}

ComplianceMatrix scale_compliance(const ComplianceMatrix& c_ref, double mu_ref,
                                  double sigma_ref, double mu, double sigma) {
  check_refs(c_ref, mu_ref, sigma_ref);
  const int m = static_cast<int>(c_ref.c.rows());
  Eigen::VectorXd s(m);
  s[0] = mu / mu_ref;
  for (int i = 1; i < m; ++i) s[i] = sigma / sigma_ref;
  ComplianceMatrix out;
  out.c = s.asDiagonal() * c_ref.c * s.asDiagonal();
  return out;
}

MomentEval eval_moments_at(const ComplianceMatrix& c_ref, double mu_ref,
                           double sigma_ref, double mu, double sigma,
                           double beta, VarianceMode mode) {
  check_refs(c_ref, mu_ref, sigma_ref);
  const int m = static_cast<int>(c_ref.c.rows());
  const double s0 = mu / mu_ref;
  const double s1 = c_ref.order() >= 1 ? sigma / sigma_ref : 0.0;
  double mean = 0.0, var = 0.0;
  for (int i = 0; i < m; ++i) {
    const double si = i == 0 ? s0 : s1;
    mean += si * si * c_ref.c(i, i);
    for (int j = 0; j < m; ++j) {
      if (mode == VarianceMode::OffDiagonal && i == j) continue;
      const double sj = j == 0 ? s0 : s1;
      const double cij = si * sj * c_ref.c(i, j);
      var += cij * cij;
    }
  }
  MomentEval out;
  out.mean = mean;
  out.stddev = std::sqrt(std::max(0.0, 2.0 * var));
  out.objective = out.mean + beta * out.stddev;
  return out;
}

namespace {

struct Extremes {
  QuantityBounds mean, stddev, objective;
  bool empty = true;

  void absorb(const MomentEval& e, const ParamPoint& p) {
    auto upd = [&](QuantityBounds& q, double v) {
      if (empty || v < q.lo) { q.lo = v; q.arg_lo = p; }
      if (empty || v > q.hi) { q.hi = v; q.arg_hi = p; }
    };
    upd(mean, e.mean);
    upd(stddev, e.stddev);
    upd(objective, e.objective);
    empty = false;
  }
};

}  // namespace

MomentBounds ca_bounds(const ComplianceMatrix& c_ref, double mu_ref,
                       double sigma_ref, const PBox& box, double beta,
                       VarianceMode mode) {
  box.validate();
  if (box.mu_straddles_zero())
    throw InvalidInput(
        "ca_bounds: the mean interval [" + std::to_string(box.mu_lo) + ", " +
        std::to_string(box.mu_hi) +
        "] straddles zero; corner evaluation is not monotone in mu_f there");
  Extremes ext;
  for (double mu : {box.mu_lo, box.mu_hi})
    for (double sigma : {box.sigma_lo, box.sigma_hi}) {
      const ParamPoint p{mu, sigma};
      ext.absorb(eval_moments_at(c_ref, mu_ref, sigma_ref, mu, sigma, beta, mode), p);
    }
  MomentBounds out;
  out.mean = ext.mean;
  out.stddev = ext.stddev;
  out.objective = ext.objective;
  out.engine = BoundsEngine::CA;
  return out;
}

MomentBounds qmcs_bounds(const ComplianceMatrix& c_ref, double mu_ref,
                         double sigma_ref, const PBox& box, double beta,
                         int n_points, VarianceMode mode) {
  box.validate();
  if (n_points < 1) throw InvalidInput("qmcs_bounds: n_points must be >= 1");
  const Sobol2D sobol;
  Extremes ext;
  for (int k = 0; k < n_points; ++k) {
    const auto t = sobol.point(1000ull + 101ull * static_cast<std::uint64_t>(k));
    const ParamPoint p{box.mu_lo + t[0] * (box.mu_hi - box.mu_lo),
                       box.sigma_lo + t[1] * (box.sigma_hi - box.sigma_lo)};
    ext.absorb(eval_moments_at(c_ref, mu_ref, sigma_ref, p.mu, p.sigma, beta, mode), p);
  }
  MomentBounds out;
  out.mean = ext.mean;
  out.stddev = ext.stddev;
  out.objective = ext.objective;
  out.engine = BoundsEngine::QMCS;
  return out;
}

namespace {

// Bound-constrained PSO over the 2D box; returns best position found.
template <typename F>
std::pair<ParamPoint, double> pso_extremum(const F& f, const PBox& box,
                                           const SwarmConfig& cfg,
                                           std::uint64_t seed, bool maximize) {
  const double wmu = box.mu_hi - box.mu_lo;
  const double wsig = box.sigma_hi - box.sigma_lo;
  std::mt19937_64 gen(seed);
  const Sobol2D sobol;
  const int n = cfg.n_particles;

  std::vector<std::array<double, 2>> pos(n), vel(n, {0.0, 0.0}), pbest(n);
  std::vector<double> pbest_val(n);
  ParamPoint gbest{box.mu_lo, box.sigma_lo};
  double gbest_val = maximize ? -std::numeric_limits<double>::infinity()
                              : std::numeric_limits<double>::infinity();

  auto better = [&](double a, double b) { return maximize ? a > b : a < b; };
  auto eval = [&](const std::array<double, 2>& x) {
    return f(ParamPoint{x[0], x[1]});
  };

  for (int i = 0; i < n; ++i) {
    const auto t = sobol.point(static_cast<std::uint64_t>(i) + 1);
    pos[i] = {box.mu_lo + t[0] * wmu, box.sigma_lo + t[1] * wsig};
    pbest[i] = pos[i];
    pbest_val[i] = eval(pos[i]);
    if (better(pbest_val[i], gbest_val)) {
      gbest_val = pbest_val[i];
      gbest = {pos[i][0], pos[i][1]};
    }
  }

  for (int it = 0; it < cfg.n_iters; ++it) {
    const double w =
        cfg.inertia_start +
        (cfg.inertia_end - cfg.inertia_start) *
            (cfg.n_iters > 1 ? static_cast<double>(it) / (cfg.n_iters - 1) : 0.0);
    for (int i = 0; i < n; ++i) {
      const double lo[2] = {box.mu_lo, box.sigma_lo};
      const double hi[2] = {box.mu_hi, box.sigma_hi};
      const double width[2] = {wmu, wsig};
      const double g[2] = {gbest.mu, gbest.sigma};
      for (int d = 0; d < 2; ++d) {
        const double r1 = uniform01(gen);
        const double r2 = uniform01(gen);
        double v = w * vel[i][d] + cfg.c1 * r1 * (pbest[i][d] - pos[i][d]) +
                   cfg.c2 * r2 * (g[d] - pos[i][d]);
        v = std::clamp(v, -width[d], width[d]);
        vel[i][d] = v;
        pos[i][d] = std::clamp(pos[i][d] + v, lo[d], hi[d]);
      }
      const double val = eval(pos[i]);
      if (better(val, pbest_val[i])) {
        pbest_val[i] = val;
        pbest[i] = pos[i];
        if (better(val, gbest_val)) {
          gbest_val = val;
          gbest = {pos[i][0], pos[i][1]};
        }
      }
    }
  }
  return {gbest, gbest_val};
}

}  // namespace

MomentBounds pso_bounds(const ComplianceMatrix& c_ref, double mu_ref,
                        double sigma_ref, const PBox& box, double beta,
                        const SwarmConfig& cfg, VarianceMode mode) {
  box.validate();
  cfg.validate();
  MomentBounds out;
  out.engine = BoundsEngine::PSO;
  out.seed = cfg.seed;

  if (box.zero_width()) {
    const auto e = eval_moments_at(c_ref, mu_ref, sigma_ref, box.mu_lo,
                                   box.sigma_lo, beta, mode);
    const ParamPoint p{box.mu_lo, box.sigma_lo};
    out.mean = {e.mean, e.mean, p, p};
    out.stddev = {e.stddev, e.stddev, p, p};
    out.objective = {e.objective, e.objective, p, p};
    return out;
  }

  auto make_f = [&](int which) {
    return [&, which](const ParamPoint& p) {
      const auto e =
          eval_moments_at(c_ref, mu_ref, sigma_ref, p.mu, p.sigma, beta, mode);
      return which == 0 ? e.mean : which == 1 ? e.stddev : e.objective;
    };
  };
  QuantityBounds* slots[3] = {&out.mean, &out.stddev, &out.objective};
  for (int q = 0; q < 3; ++q) {
    auto f = make_f(q);
    const auto lo = pso_extremum(f, box, cfg, cfg.seed + 2 * q, false);
    const auto hi = pso_extremum(f, box, cfg, cfg.seed + 2 * q + 1, true);
    slots[q]->lo = lo.second;
    slots[q]->arg_lo = lo.first;
    slots[q]->hi = hi.second;
    slots[q]->arg_hi = hi.first;
  }
  return out;
}

bool MonotonicityReport::all_monotone() const {
  for (const auto& row : entries)
    for (const auto& e : row)
      if (!e.monotone) return false;
  return true;
}

MonotonicityReport monotonicity_report(const ComplianceMatrix& c_ref,
                                       double mu_ref, double sigma_ref,
                                       const PBox& box, int n_sweep,
                                       VarianceMode mode) {
  box.validate();
  if (n_sweep < 3) throw InvalidInput("monotonicity_report: n_sweep must be >= 3");
  MonotonicityReport report;
  report.n_sweep = n_sweep;
  for (int input = 0; input < 2; ++input) {
    std::vector<MomentEval> evals(n_sweep);
    for (int k = 0; k < n_sweep; ++k) {
      const double t = static_cast<double>(k) / (n_sweep - 1);
      const double mu =
          input == 0 ? box.mu_lo + t * (box.mu_hi - box.mu_lo) : box.mu_mid();
      const double sigma = input == 1
                               ? box.sigma_lo + t * (box.sigma_hi - box.sigma_lo)
                               : box.sigma_mid();
      evals[k] = eval_moments_at(c_ref, mu_ref, sigma_ref, mu, sigma, 0.0, mode);
    }
    for (int output = 0; output < 2; ++output) {
      auto& entry = report.entries[input][output];
      int sign = 0;
      bool monotone = true;
      for (int k = 1; k < n_sweep; ++k) {
        const double prev = output == 0 ? evals[k - 1].mean : evals[k - 1].stddev;
        const double cur = output == 0 ? evals[k].mean : evals[k].stddev;
        const double d = cur - prev;
        const int s = d > 0.0 ? 1 : d < 0.0 ? -1 : 0;
        if (s == 0) continue;
        if (sign == 0)
          sign = s;
        else if (s != sign)
          monotone = false;
      }
      entry.sign = sign;
      entry.monotone = monotone;
    }
  }
  return report;
}

}  // namespace rto
