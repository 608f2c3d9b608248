#include "rto/filter.hpp"

#include <cmath>

#include "rto/errors.hpp"

namespace rto {

DensityFilter::DensityFilter(const Mesh& mesh, double radius) : radius_(radius) {
  if (!(radius > 0.0)) throw InvalidInput("filter: radius must be positive");
  const int n = mesh.n_elems();
  rows_.resize(n);
  wsum_.assign(n, 0.0);
  const double h = mesh.elem_size;
  const double v = mesh.elem_volume();
  const int reach = static_cast<int>(std::ceil(radius / h));
  for (int ex = 0; ex < mesh.nx; ++ex)
    for (int ey = 0; ey < mesh.ny; ++ey) {
      const int e = mesh.elem_id(ex, ey);
      auto& row = rows_[e];
      for (int ix = std::max(0, ex - reach); ix <= std::min(mesh.nx - 1, ex + reach); ++ix)
        for (int iy = std::max(0, ey - reach); iy <= std::min(mesh.ny - 1, ey + reach); ++iy) {
          const double dx = (ix - ex) * h;
          const double dy = (iy - ey) * h;
          const double w = radius - std::sqrt(dx * dx + dy * dy);
          if (w <= 0.0) continue;
          row.push_back({mesh.elem_id(ix, iy), w * v});
          wsum_[e] += w * v;
        }
    }
}

Eigen::VectorXd DensityFilter::apply(const Eigen::VectorXd& rho) const {
  if (rho.size() != size()) throw InvalidInput("filter: field size mismatch");
  Eigen::VectorXd out(rho.size());
  for (int e = 0; e < rho.size(); ++e) {
    double acc = 0.0;
    for (const Neighbor& nb : rows_[e]) acc += nb.weight * rho[nb.index];
    out[e] = acc / wsum_[e];
  }
  return out;
}

Eigen::VectorXd DensityFilter::apply_transpose(const Eigen::VectorXd& y) const {
  if (y.size() != size()) throw InvalidInput("filter: field size mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(y.size());
  for (int e = 0; e < y.size(); ++e) {
    const double ye = y[e] / wsum_[e];
    for (const Neighbor& nb : rows_[e]) out[nb.index] += nb.weight * ye;
  }
  return out;
}

double heaviside_apply(double rho_bar, double alpha, double eta) {
  if (alpha == 0.0) return rho_bar;
  if (rho_bar <= eta) {
    if (eta == 0.0) return 0.0;
    const double t = 1.0 - rho_bar / eta;
    return eta * (std::exp(-alpha * t) - t * std::exp(-alpha));
  }
  if (eta == 1.0) return 1.0;
  const double t = (rho_bar - eta) / (1.0 - eta);
  return (1.0 - eta) * (1.0 - std::exp(-alpha * t) + t * std::exp(-alpha)) + eta;
}

double heaviside_derivative(double rho_bar, double alpha, double eta) {
  if (alpha == 0.0) return 1.0;
  if (rho_bar <= eta) {
    if (eta == 0.0) return alpha + std::exp(-alpha);
    const double t = 1.0 - rho_bar / eta;
    return alpha * std::exp(-alpha * t) + std::exp(-alpha);
  }
  if (eta == 1.0) return alpha + std::exp(-alpha);
  const double t = (rho_bar - eta) / (1.0 - eta);
  return alpha * std::exp(-alpha * t) + std::exp(-alpha);
}

ProjectionResult heaviside_project(const Eigen::VectorXd& rho_bar, double alpha,
                                   double elem_volume, double target_volume) {
  if (!(alpha >= 0.0)) throw InvalidInput("heaviside_project: alpha must be >= 0");
  if (!(elem_volume > 0.0))
    throw InvalidInput("heaviside_project: element volume must be positive");
  const double target =
      target_volume >= 0.0 ? target_volume : elem_volume * rho_bar.sum();
  if (target < -1e-12 || target > elem_volume * rho_bar.size() + 1e-9)
    throw InvalidInput("heaviside_project: target volume outside [0, total volume]");

  auto volume_at = [&](double eta) {
    double s = 0.0;
    for (int e = 0; e < rho_bar.size(); ++e)
      s += heaviside_apply(rho_bar[e], alpha, eta);
    return s * elem_volume;
  };

  // Projected volume decreases continuously from eta = 0 (everything
  // pushed up) to eta = 1 (everything pushed down), so the preserving
  // threshold is a plain bisection.
  double lo = 0.0, hi = 1.0;
  double eta = 0.5;
  const double tol = 1e-10 * std::max(1.0, target);
  double mismatch = 0.0;
  for (int it = 0; it < 200; ++it) {
    eta = 0.5 * (lo + hi);
    mismatch = volume_at(eta) - target;
    if (std::abs(mismatch) <= tol) break;
    if (mismatch > 0.0)
      lo = eta;
    else
      hi = eta;
    if (hi - lo < 1e-16) break;
  }
  if (std::abs(mismatch) > 1e-6 * std::max(1.0, target))
    throw NumericalError("heaviside_project: volume bisection failed, mismatch " +
                         std::to_string(mismatch));

  ProjectionResult out;
  out.eta = eta;
  out.rho_phys.resize(rho_bar.size());
  for (int e = 0; e < rho_bar.size(); ++e)
    out.rho_phys[e] =
        std::clamp(heaviside_apply(rho_bar[e], alpha, eta), 0.0, 1.0);
  return out;
}

Eigen::VectorXd filter_chain_sensitivity(const Eigen::VectorXd& dj_drho_phys,
                                         const DensityFilter& filter,
                                         const Eigen::VectorXd& rho_bar,
                                         double alpha, double eta) {
  if (dj_drho_phys.size() != rho_bar.size())
    throw InvalidInput("filter_chain_sensitivity: field sizes differ");
  Eigen::VectorXd scaled(rho_bar.size());
  for (int e = 0; e < rho_bar.size(); ++e)
    scaled[e] = dj_drho_phys[e] * heaviside_derivative(rho_bar[e], alpha, eta);
  return filter.apply_transpose(scaled);
}

}  // namespace rto
