#include "rto/study.hpp"

#include <algorithm>
#include <cmath>

#include "rto/errors.hpp"
#include "rto/random.hpp"

namespace rto {

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InvalidInput("ks_statistic: empty sample set");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  size_t ia = 0, ib = 0;
  double d = 0.0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] <= b[ib])
      ++ia;
    else
      ++ib;
    const double fa = static_cast<double>(ia) / a.size();
    const double fb = static_cast<double>(ib) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

SuperpositionStudy superposition_study(const RtoProblem& problem,
                                       const Eigen::VectorXd& rho_phys,
                                       int n_samples, int m_direct,
                                       std::uint64_t seed) {
  if (n_samples < 1) throw InvalidInput("superposition_study: n_samples must be >= 1");
  const KLBasis& basis = problem.basis();
  if (m_direct < basis.order())
    throw InvalidInput("superposition_study: the direct expansion must keep at "
                       "least as many terms as the working basis");

  ExponentialKernel kernel{basis.sigma, basis.L, basis.a};
  const KLBasis rich = kl_basis(kernel, m_direct);

  const auto eval = problem.evaluate(rho_phys);
  const auto xs = load_edge_coordinates(problem.mesh());
  const int m = basis.order();

  SuperpositionStudy study;
  study.m_super = m;
  study.m_direct = m_direct;
  study.c_direct.reserve(n_samples);
  study.c_super.reserve(n_samples);

  NormalStream normals(seed);
  std::vector<double> mags(xs.size());
  Eigen::VectorXd xi(m_direct + 1);
  for (int s = 0; s < n_samples; ++s) {
    for (int i = 0; i <= m_direct; ++i) xi[i] = normals.next();

    // direct route: realize the rich field, lump, solve, take f.u
    for (size_t j = 0; j < xs.size(); ++j) {
      double v = problem.mu_ref() * xi[0];
      for (int i = 0; i < m_direct; ++i)
        v += std::sqrt(rich.terms[i].lambda) * rich.eval_eigenfunction(i, xs[j]) *
             xi[i + 1];
      mags[j] = v;
    }
    const Eigen::VectorXd f = lump_edge_load(problem.mesh(), mags);
    const Eigen::VectorXd u = eval.stiffness.solve(f);
    study.c_direct.push_back(f.dot(u));

    // superposition route: quadratic form over the working basis
    double c2 = 0.0;
    for (int i = 0; i <= m; ++i)
      for (int j = 0; j <= m; ++j) c2 += xi[i] * xi[j] * eval.c.c(i, j);
    study.c_super.push_back(c2);
  }

  double num = 0.0, den = 0.0, maxdiff = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    const double diff = std::abs(study.c_direct[s] - study.c_super[s]);
    num += diff;
    den += std::abs(study.c_direct[s]);
    maxdiff = std::max(maxdiff, diff);
  }
  study.rel_l1_error = den > 0.0 ? num / den : 0.0;
  study.max_rel_error = den > 0.0 ? maxdiff / (den / n_samples) : 0.0;
  study.ks_distance = ks_statistic(study.c_direct, study.c_super);
  return study;
}

}  // namespace rto
