#include "rto/moments.hpp"

#include <cmath>

#include "rto/errors.hpp"
#include "rto/random.hpp"

namespace rto {

double fourth_moment(int i, int j, int k, int l, std::span<const double> sigmas) {
  const int n = static_cast<int>(sigmas.size());
  if (i < 0 || j < 0 || k < 0 || l < 0 || i >= n || j >= n || k >= n || l >= n)
    throw InvalidInput("fourth_moment: index out of range");
  const double si2 = sigmas[i] * sigmas[i];
  if (i == j && j == k && k == l) return 3.0 * si2 * si2;
  if (i == k && j == l && i != j) return si2 * sigmas[j] * sigmas[j];
  if (i == l && j == k && i != j) return si2 * sigmas[j] * sigmas[j];
  if (i == j && k == l && i != k) return si2 * sigmas[k] * sigmas[k];
  return 0.0;
}

double mean_compliance(const ComplianceMatrix& C) { return C.c.trace(); }

double variance_compliance(const ComplianceMatrix& C, VarianceMode mode) {
  const int m = static_cast<int>(C.c.rows());
  double sum = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (mode == VarianceMode::OffDiagonal && i == j) continue;
      sum += C.c(i, j) * C.c(i, j);
    }
  return 2.0 * sum;
}

double objective_value(double mean, double std_dev, double beta) {
  if (!(std_dev >= 0.0)) throw InvalidInput("objective: std_dev must be >= 0");
  if (!(beta >= 0.0)) throw InvalidInput("objective: beta must be >= 0");
  return mean + beta * std_dev;
}

McResult mc_compliance_oracle(const ComplianceMatrix& C, int n, std::uint64_t seed,
                              bool keep_samples) {
  if (n < 1) throw InvalidInput("mc_compliance_oracle: n must be >= 1");
  const int m = static_cast<int>(C.c.rows());
  NormalStream normals(seed);
  McResult out;
  if (keep_samples) out.samples.reserve(n);
  double sum = 0.0, sumsq = 0.0;
  Eigen::VectorXd xi(m);
  for (int s = 0; s < n; ++s) {
    for (int i = 0; i < m; ++i) xi[i] = normals.next();
    const double c = xi.dot(C.c * xi);
    sum += c;
    sumsq += c * c;
    if (keep_samples) out.samples.push_back(c);
  }
  out.mean = sum / n;
  out.variance = n > 1 ? (sumsq - sum * sum / n) / (n - 1) : 0.0;
  return out;
}

}  // namespace rto
