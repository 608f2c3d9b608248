#include "rto/kl.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "rto/errors.hpp"

namespace rto {
namespace {

// Pole-free residual forms of the two root equations. Both change sign
// exactly once inside their tan branch.
double cosine_residual(double w, double a, double L) {
  // tan(wa) = 1/(wL)  <=>  wL sin(wa) - cos(wa) = 0
  return w * L * std::sin(w * a) - std::cos(w * a);
}

double sine_residual(double w, double a, double L) {
  // tan(wa) = -wL  <=>  sin(wa) + wL cos(wa) = 0
  return std::sin(w * a) + w * L * std::cos(w * a);
}

double bisect_root(double lo, double hi, double a, double L, EigenParity parity) {
  auto f = [&](double w) {
    return parity == EigenParity::Cosine ? cosine_residual(w, a, L)
                                         : sine_residual(w, a, L);
  };
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((flo < 0.0) == (fmid < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-12 * lo) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void ExponentialKernel::validate() const {
  if (!(L > 0.0)) throw InvalidInput("kernel: correlation length must be positive");
  if (!(a > 0.0)) throw InvalidInput("kernel: domain half-width must be positive");
  if (!(sigma >= 0.0)) throw InvalidInput("kernel: sigma must be nonnegative");
}

std::vector<double> kl_family_roots(double a, double L, int count, EigenParity parity) {
  if (!(a > 0.0 && L > 0.0)) throw InvalidInput("kl_family_roots: need a, L > 0");
  if (count < 1) throw InvalidInput("kl_family_roots: count must be >= 1");
  const double pi = 3.14159265358979323846;
  std::vector<double> roots;
  roots.reserve(count);
  // Branch k of tan(wa): cosine roots live in ((k-1)pi, (k-1/2)pi)/a,
  // sine roots in ((k-1/2)pi, k pi)/a. Tiny endpoint offsets keep the
  // residual signs clean.
  for (int k = 1; k <= count; ++k) {
    double lo, hi;
    if (parity == EigenParity::Cosine) {
      lo = (k - 1) * pi / a;
      hi = (k - 0.5) * pi / a;
    } else {
      lo = (k - 0.5) * pi / a;
      hi = k * pi / a;
    }
    const double eps = 1e-12 * (hi - lo) + 1e-300;
    roots.push_back(bisect_root(lo + eps, hi - eps, a, L, parity));
  }
  return roots;
}

std::vector<double> kl_frequencies(double a, double L, int M) {
  if (M < 1) throw InvalidInput("kl_frequencies: M must be >= 1");
  // The families interlace (cos_k < sin_k < cos_{k+1}), so M/2 + 1 per
  // family always covers the M smallest merged roots.
  const int per_family = M / 2 + 1;
  auto cos_roots = kl_family_roots(a, L, per_family, EigenParity::Cosine);
  auto sin_roots = kl_family_roots(a, L, per_family, EigenParity::Sine);
  std::vector<double> merged;
  merged.reserve(2 * per_family);
  merged.insert(merged.end(), cos_roots.begin(), cos_roots.end());
  merged.insert(merged.end(), sin_roots.begin(), sin_roots.end());
  std::sort(merged.begin(), merged.end());
  merged.resize(M);
  return merged;
}

double KLBasis::eval_eigenfunction(int i, double x) const {
  const KLTerm& t = terms.at(i);
  return t.parity == EigenParity::Cosine ? std::cos(t.freq * x) * t.norm
                                         : std::sin(t.freq * x) * t.norm;
}

std::vector<double> KLBasis::lambdas() const {
  std::vector<double> out(terms.size());
  for (size_t i = 0; i < terms.size(); ++i) out[i] = terms[i].lambda;
  return out;
}

KLBasis kl_basis(const ExponentialKernel& kernel, int M) {
  kernel.validate();
  if (M < 0) throw InvalidInput("kl_basis: M must be >= 0");
  KLBasis basis;
  basis.a = kernel.a;
  basis.L = kernel.L;
  basis.sigma = kernel.sigma;
  if (M == 0) {
    basis.energy_fraction = 0.0;
    return basis;
  }
  const double a = kernel.a, L = kernel.L;
  const int per_family = M / 2 + 1;
  const double s2 = kernel.sigma * kernel.sigma;
  std::vector<KLTerm> all;
  for (EigenParity parity : {EigenParity::Cosine, EigenParity::Sine}) {
    for (double w : kl_family_roots(a, L, per_family, parity)) {
      KLTerm t;
      t.freq = w;
      t.parity = parity;
      t.lambda = 2.0 * s2 * L / (1.0 + w * w * L * L);
      const double sw = std::sin(2.0 * w * a) / (2.0 * w);
      t.norm = parity == EigenParity::Cosine ? 1.0 / std::sqrt(a + sw)
                                             : 1.0 / std::sqrt(a - sw);
      all.push_back(t);
    }
  }
  // lambda decreases with frequency, so descending lambda = ascending freq
  std::sort(all.begin(), all.end(),
            [](const KLTerm& x, const KLTerm& y) { return x.lambda > y.lambda; });
  all.resize(M);
  basis.terms = std::move(all);
  double sum = 0.0;
  for (const KLTerm& t : basis.terms) sum += t.lambda;
  basis.energy_fraction = kernel.sigma > 0.0 ? sum / kernel.trace() : 0.0;
  return basis;
}

NystromEigen nystrom_eigenpairs(const ExponentialKernel& kernel, int n_quad, int M) {
  kernel.validate();
  if (M < 1) throw InvalidInput("nystrom_eigenpairs: M must be >= 1");
  if (n_quad < 10 * M)
    throw InvalidInput("nystrom_eigenpairs: n_quad must be at least 10*M");
  const double h = 2.0 * kernel.a / n_quad;
  NystromEigen out;
  out.weight = h;
  out.nodes.resize(n_quad);
  for (int i = 0; i < n_quad; ++i) out.nodes[i] = -kernel.a + (i + 0.5) * h;

  Eigen::MatrixXd A(n_quad, n_quad);
  for (int i = 0; i < n_quad; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = kernel(out.nodes[i], out.nodes[j]) * h;
      A(i, j) = v;
      A(j, i) = v;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success)
    throw NumericalError("nystrom_eigenpairs: eigen decomposition failed");
  out.lambdas.resize(M);
  out.eigvecs.resize(n_quad, M);
  for (int k = 0; k < M; ++k) {
    const int src = n_quad - 1 - k;  // Eigen sorts ascending
    out.lambdas[k] = es.eigenvalues()[src];
    out.eigvecs.col(k) = es.eigenvectors().col(src);
  }
  return out;
}

int significance_order(const std::vector<double>& lambdas_desc, double s0,
                       double full_trace, std::string* warning) {
  if (!(s0 > 0.0 && s0 <= 1.0))
    throw InvalidInput("significance_order: s0 must lie in (0,1]");
  if (lambdas_desc.empty())
    throw InvalidInput("significance_order: empty eigenvalue list");
  if (!(full_trace > 0.0))
    throw InvalidInput("significance_order: full_trace must be positive");
  double cum = 0.0;
  for (size_t i = 0; i < lambdas_desc.size(); ++i) {
    cum += lambdas_desc[i];
    if (cum / full_trace >= s0) return static_cast<int>(i) + 1;
  }
  if (warning)
    *warning = "significance_order: threshold unreachable with " +
               std::to_string(lambdas_desc.size()) + " terms, using all of them";
  return static_cast<int>(lambdas_desc.size());
}

FieldRealization realize_field(const KLBasis& basis, double mu,
                               const Eigen::VectorXd& xi,
                               std::span<const double> xs) {
  if (xi.size() != basis.order())
    throw InvalidInput("realize_field: xi length must equal basis order");
  const double tol = 1e-12 * std::max(1.0, basis.a);
  FieldRealization real;
  real.xi = xi;
  real.xs.assign(xs.begin(), xs.end());
  real.values.resize(xs.size());
  for (size_t j = 0; j < xs.size(); ++j) {
    const double x = xs[j];
    if (x < -basis.a - tol || x > basis.a + tol)
      throw InvalidInput("realize_field: coordinate outside [-a, a]");
    double v = mu;
    for (int i = 0; i < basis.order(); ++i)
      v += std::sqrt(basis.terms[i].lambda) * basis.eval_eigenfunction(i, x) * xi[i];
    real.values[j] = v;
  }
  return real;
}

}  // namespace rto
