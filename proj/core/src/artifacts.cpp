#include "rto/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rto/config.hpp"
#include "rto/errors.hpp"

namespace rto {
namespace {

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s = "0x";
  for (int shift = 60; shift >= 0; shift -= 4)
    s += digits[(v >> shift) & 0xf];
  return s;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  return out;
}

}  // namespace

std::vector<std::string> ArtifactStamp::lines() const {
  return {"# config_hash = " + hex64(config_hash),
          "# seed = " + std::to_string(seed)};
}

void write_density_pgm(const std::filesystem::path& path,
                       const Eigen::VectorXd& rho_phys, const Mesh& mesh,
                       const ArtifactStamp& stamp) {
  if (rho_phys.size() != mesh.n_elems())
    throw InvalidInput("write_density_pgm: field size mismatch");
  auto out = open_out(path);
  out << "P2\n";
  for (const auto& l : stamp.lines()) out << l << "\n";
  out << mesh.nx << " " << mesh.ny << "\n255\n";
  for (int ey = mesh.ny - 1; ey >= 0; --ey) {
    for (int ex = 0; ex < mesh.nx; ++ex) {
      const double rho = rho_phys[mesh.elem_id(ex, ey)];
      const int pixel = static_cast<int>(std::lround((1.0 - rho) * 255.0));
      out << std::clamp(pixel, 0, 255);
      out << (ex + 1 == mesh.nx ? '\n' : ' ');
    }
  }
}

void write_density_csv(const std::filesystem::path& path,
                       const Eigen::VectorXd& rho_phys, const Mesh& mesh,
                       const ArtifactStamp& stamp) {
  if (rho_phys.size() != mesh.n_elems())
    throw InvalidInput("write_density_csv: field size mismatch");
  auto out = open_out(path);
  for (const auto& l : stamp.lines()) out << l << "\n";
  for (int ey = mesh.ny - 1; ey >= 0; --ey) {
    for (int ex = 0; ex < mesh.nx; ++ex) {
      out << format_double(rho_phys[mesh.elem_id(ex, ey)]);
      out << (ex + 1 == mesh.nx ? '\n' : ',');
    }
  }
}

Eigen::VectorXd read_density_csv(const std::filesystem::path& path, const Mesh& mesh) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("read_density_csv: file not found: " + path.string());
  Eigen::VectorXd rho(mesh.n_elems());
  std::string line;
  int ey = mesh.ny - 1;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (ey < 0) throw InvalidInput("read_density_csv: too many rows");
    std::istringstream iss(line);
    std::string tok;
    for (int ex = 0; ex < mesh.nx; ++ex) {
      if (!std::getline(iss, tok, ','))
        throw InvalidInput("read_density_csv: short row");
      rho[mesh.elem_id(ex, ey)] = std::stod(tok);
    }
    --ey;
  }
  if (ey != -1) throw InvalidInput("read_density_csv: missing rows");
  return rho;
}

void write_history_csv(const std::filesystem::path& path,
                       const std::vector<IterationRecord>& history,
                       const ArtifactStamp& stamp) {
  auto out = open_out(path);
  for (const auto& l : stamp.lines()) out << l << "\n";
  out << "iter,J_lo,J_hi,mu_lo,mu_hi,sigma_lo,sigma_hi,volfrac,max_change\n";
  for (const auto& r : history) {
    out << r.iter << ',' << format_double(r.j_lo) << ',' << format_double(r.j_hi)
        << ',' << format_double(r.mu_lo) << ',' << format_double(r.mu_hi) << ','
        << format_double(r.sigma_lo) << ',' << format_double(r.sigma_hi) << ','
        << format_double(r.volfrac) << ',' << format_double(r.max_change) << '\n';
  }
}

void write_bounds_report(const std::filesystem::path& path,
                         const MomentBounds& bounds, const PBox& box,
                         const ArtifactStamp& stamp) {
  auto out = open_out(path);
  for (const auto& l : stamp.lines()) out << l << "\n";
  out << "engine = " << to_string(bounds.engine) << "\n";
  out << "engine_seed = " << bounds.seed << "\n";
  out << "pbox_mu = " << format_double(box.mu_lo) << " " << format_double(box.mu_hi)
      << "\n";
  out << "pbox_sigma = " << format_double(box.sigma_lo) << " "
      << format_double(box.sigma_hi) << "\n";
  auto quantity = [&](const char* name, const QuantityBounds& q) {
    out << name << "_lo = " << format_double(q.lo) << "\n";
    out << name << "_hi = " << format_double(q.hi) << "\n";
    out << name << "_arg_lo = " << format_double(q.arg_lo.mu) << " "
        << format_double(q.arg_lo.sigma) << "\n";
    out << name << "_arg_hi = " << format_double(q.arg_hi.mu) << " "
        << format_double(q.arg_hi.sigma) << "\n";
  };
  quantity("mean", bounds.mean);
  quantity("stddev", bounds.stddev);
  quantity("objective", bounds.objective);
}

void write_monotonicity_report(const std::filesystem::path& path,
                               const MonotonicityReport& report,
                               const ArtifactStamp& stamp) {
  auto out = open_out(path);
  for (const auto& l : stamp.lines()) out << l << "\n";
  static const char* inputs[2] = {"mu_f", "sigma_f"};
  static const char* outputs[2] = {"mean_c", "std_c"};
  out << "n_sweep = " << report.n_sweep << "\n";
  for (int i = 0; i < 2; ++i)
    for (int o = 0; o < 2; ++o) {
      const auto& e = report.entries[i][o];
      out << outputs[o] << "_vs_" << inputs[i] << " = "
          << (e.monotone ? "monotone" : "non-monotone") << " sign "
          << e.sign << "\n";
    }
  out << "all_monotone = " << (report.all_monotone() ? "true" : "false") << "\n";
}

void write_field_csv(const std::filesystem::path& path,
                     const std::vector<double>& xs,
                     const std::vector<std::vector<double>>& realizations,
                     const ArtifactStamp& stamp) {
  for (const auto& r : realizations)
    if (r.size() != xs.size())
      throw InvalidInput("write_field_csv: realization length mismatch");
  auto out = open_out(path);
  for (const auto& l : stamp.lines()) out << l << "\n";
  out << "x";
  for (size_t r = 0; r < realizations.size(); ++r) out << ",value_" << r;
  out << "\n";
  for (size_t j = 0; j < xs.size(); ++j) {
    out << format_double(xs[j]);
    for (const auto& r : realizations) out << ',' << format_double(r[j]);
    out << "\n";
  }
}

double silverman_bandwidth(std::vector<double> samples) {
  const size_t n = samples.size();
  if (n < 2) return 1.0;
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1));
  std::sort(samples.begin(), samples.end());
  auto quantile = [&](double p) {
    const double idx = p * (n - 1);
    const size_t i = static_cast<size_t>(idx);
    const double frac = idx - i;
    return i + 1 < n ? samples[i] * (1.0 - frac) + samples[i + 1] * frac
                     : samples[i];
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (spread <= 0.0) spread = sd > 0.0 ? sd : 1.0;
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

EnvelopeData distribution_envelopes(const ComplianceMatrix& c_ref, double mu_ref,
                                    double sigma_ref, const MomentBounds& bounds,
                                    int n_samples, std::uint64_t seed,
                                    int grid_points) {
  if (n_samples < 100)
    throw InvalidInput("distribution_envelopes: need at least 100 samples");
  const ParamPoint up = bounds.objective.arg_hi;
  const ParamPoint lo = bounds.objective.arg_lo;
  const auto c_up = scale_compliance(c_ref, mu_ref, sigma_ref, up.mu, up.sigma);
  const auto c_lo = scale_compliance(c_ref, mu_ref, sigma_ref, lo.mu, lo.sigma);
  auto upper = mc_compliance_oracle(c_up, n_samples, seed);
  auto lower = mc_compliance_oracle(c_lo, n_samples, seed);

  EnvelopeData env;
  env.bandwidth_upper = silverman_bandwidth(upper.samples);
  env.bandwidth_lower = silverman_bandwidth(lower.samples);

  double tmin = upper.samples[0], tmax = tmin;
  for (double v : upper.samples) { tmin = std::min(tmin, v); tmax = std::max(tmax, v); }
  for (double v : lower.samples) { tmin = std::min(tmin, v); tmax = std::max(tmax, v); }
  const double pad = 3.0 * std::max(env.bandwidth_upper, env.bandwidth_lower);
  tmin -= pad;
  tmax += pad;

  env.grid.resize(grid_points);
  for (int k = 0; k < grid_points; ++k)
    env.grid[k] = tmin + (tmax - tmin) * k / (grid_points - 1);

  auto build = [&](std::vector<double>& samples, double bw,
                   std::vector<double>& pdf, std::vector<double>& cdf) {
    std::sort(samples.begin(), samples.end());
    pdf.resize(grid_points);
    cdf.resize(grid_points);
    const double norm = 1.0 / (samples.size() * bw * std::sqrt(2.0 * 3.14159265358979323846));
    for (int k = 0; k < grid_points; ++k) {
      const double t = env.grid[k];
      double acc = 0.0;
      for (double v : samples) {
        const double z = (t - v) / bw;
        acc += std::exp(-0.5 * z * z);
      }
      pdf[k] = norm * acc;
      cdf[k] = static_cast<double>(
                   std::upper_bound(samples.begin(), samples.end(), t) -
                   samples.begin()) /
               samples.size();
    }
  };
  build(upper.samples, env.bandwidth_upper, env.pdf_upper, env.cdf_upper);
  build(lower.samples, env.bandwidth_lower, env.pdf_lower, env.cdf_lower);
  return env;
}

void write_envelopes_csv(const std::filesystem::path& path, const EnvelopeData& env,
                         const ArtifactStamp& stamp) {
  auto out = open_out(path);
  for (const auto& l : stamp.lines()) out << l << "\n";
  out << "# kde_bandwidth_upper = " << format_double(env.bandwidth_upper) << "\n";
  out << "# kde_bandwidth_lower = " << format_double(env.bandwidth_lower) << "\n";
  out << "t,pdf_upper,cdf_upper,pdf_lower,cdf_lower\n";
  for (size_t k = 0; k < env.grid.size(); ++k) {
    out << format_double(env.grid[k]) << ',' << format_double(env.pdf_upper[k])
        << ',' << format_double(env.cdf_upper[k]) << ','
        << format_double(env.pdf_lower[k]) << ','
        << format_double(env.cdf_lower[k]) << '\n';
  }
}

}  // namespace rto
