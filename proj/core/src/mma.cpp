#include "rto/mma.hpp"

#include <cmath>

#include "rto/errors.hpp"

namespace rto {
namespace {

constexpr double kAsyInit = 0.5;
constexpr double kAsyIncr = 1.2;
constexpr double kAsyDecr = 0.7;
constexpr double kAlbefa = 0.1;
constexpr double kRaa0 = 1e-5;

}  // namespace

MmaUpdater::MmaUpdater(int n, double move_limit) : n_(n), move_(move_limit) {
  if (n < 1) throw InvalidInput("mma: need at least one variable");
  if (!(move_limit > 0.0 && move_limit <= 1.0))
    throw InvalidInput("mma: move limit must lie in (0, 1]");
}

void MmaUpdater::tighten(double factor) {
  if (iter_ == 0) return;
  low_ = xlast_ - factor * (xlast_ - low_);
  upp_ = xlast_ + factor * (upp_ - xlast_);
}

Eigen::VectorXd MmaUpdater::resolve(const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& dfdx, double g,
                                    const Eigen::VectorXd& dgdx) const {
  if (iter_ == 0) throw InvalidInput("mma: resolve before any update");
  if (x.size() != n_ || dfdx.size() != n_ || dgdx.size() != n_)
    throw InvalidInput("mma: vector size mismatch");
  if (!dfdx.allFinite() || !dgdx.allFinite() || !std::isfinite(g))
    throw InvalidInput("mma: gradients must be finite");

  Eigen::VectorXd alpha(n_), beta(n_), p0(n_), q0(n_), p1(n_), q1(n_);
  for (int e = 0; e < n_; ++e) {
    alpha[e] = std::max({0.0, low_[e] + kAlbefa * (x[e] - low_[e]), x[e] - move_});
    beta[e] = std::min({1.0, upp_[e] - kAlbefa * (upp_[e] - x[e]), x[e] + move_});
    const double du = upp_[e] - x[e];
    const double dl = x[e] - low_[e];
    const double df = dfdx[e];
    p0[e] = du * du * (std::max(df, 0.0) + 0.001 * std::abs(df) + kRaa0);
    q0[e] = dl * dl * (std::max(-df, 0.0) + 0.001 * std::abs(df) + kRaa0);
    const double dg = dgdx[e];
    p1[e] = du * du * std::max(dg, 0.0);
    q1[e] = dl * dl * std::max(-dg, 0.0);
  }
  // Constant of the approximated constraint: the model equals g at the
  // expansion point, so the subproblem requires the term sum <= b.
  double b = -g;
  for (int e = 0; e < n_; ++e)
    b += p1[e] / (upp_[e] - x[e]) + q1[e] / (x[e] - low_[e]);

  auto primal = [&](double lam, Eigen::VectorXd& xnew) {
    for (int e = 0; e < n_; ++e) {
      const double sp = std::sqrt(p0[e] + lam * p1[e]);
      const double sq = std::sqrt(q0[e] + lam * q1[e]);
      const double xe = (sp * low_[e] + sq * upp_[e]) / (sp + sq);
      xnew[e] = std::clamp(xe, alpha[e], beta[e]);
    }
  };
  auto constraint = [&](const Eigen::VectorXd& xnew) {
    double s = -b;
    for (int e = 0; e < n_; ++e)
      s += p1[e] / (upp_[e] - xnew[e]) + q1[e] / (xnew[e] - low_[e]);
    return s;
  };

  Eigen::VectorXd xnew(n_);
  primal(0.0, xnew);
  if (constraint(xnew) > 0.0) {
    double lam_lo = 0.0, lam_hi = 1.0;
    primal(lam_hi, xnew);
    int guard = 0;
    while (constraint(xnew) > 0.0 && guard++ < 80) {
      lam_hi *= 2.0;
      primal(lam_hi, xnew);
    }
    if (guard >= 80)
      throw NumericalError("mma: dual bisection could not bracket the multiplier");
    for (int it = 0; it < 100; ++it) {
      const double lam = 0.5 * (lam_lo + lam_hi);
      primal(lam, xnew);
      if (constraint(xnew) > 0.0)
        lam_lo = lam;
      else
        lam_hi = lam;
      if (lam_hi - lam_lo <= 1e-12 * std::max(1.0, lam_hi)) break;
    }
    primal(lam_hi, xnew);  // settle on the feasible side
  }
  return xnew;
}

Eigen::VectorXd MmaUpdater::update(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& dfdx, double g,
                                   const Eigen::VectorXd& dgdx) {
  if (x.size() != n_ || dfdx.size() != n_ || dgdx.size() != n_)
    throw InvalidInput("mma: vector size mismatch");

  ++iter_;
  if (iter_ <= 2) {
    low_ = x.array() - kAsyInit;
    upp_ = x.array() + kAsyInit;
  } else {
    for (int e = 0; e < n_; ++e) {
      const double trend = (x[e] - xold1_[e]) * (xold1_[e] - xold2_[e]);
      const double gamma = trend > 0.0 ? kAsyIncr : trend < 0.0 ? kAsyDecr : 1.0;
      low_[e] = x[e] - gamma * (xold1_[e] - low_[e]);
      upp_[e] = x[e] + gamma * (upp_[e] - xold1_[e]);
      low_[e] = std::clamp(low_[e], x[e] - 10.0, x[e] - 0.01);
      upp_[e] = std::clamp(upp_[e], x[e] + 0.01, x[e] + 10.0);
    }
  }
  xold2_ = iter_ >= 2 ? xold1_ : x;
  xold1_ = x;
  xlast_ = x;
  return resolve(x, dfdx, g, dgdx);
}

}  // namespace rto
