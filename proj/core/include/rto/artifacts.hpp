#ifndef RTO_ARTIFACTS_HPP
#define RTO_ARTIFACTS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "rto/bounds.hpp"
#include "rto/optimizer.hpp"

namespace rto {

// Comment lines stamped into every artifact so a run is reproducible
// from its outputs alone.
struct ArtifactStamp {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;

  std::vector<std::string> lines() const;
};

// Plain-text portable graymap: 0 = solid, 255 = void, rows written top
// to bottom. Bit-exact for identical inputs.
void write_density_pgm(const std::filesystem::path& path,
                       const Eigen::VectorXd& rho_phys, const Mesh& mesh,
                       const ArtifactStamp& stamp);

// Full-precision CSV of the raw density values, one mesh row per line,
// same top-to-bottom orientation as the graymap.
void write_density_csv(const std::filesystem::path& path,
                       const Eigen::VectorXd& rho_phys, const Mesh& mesh,
                       const ArtifactStamp& stamp);
Eigen::VectorXd read_density_csv(const std::filesystem::path& path, const Mesh& mesh);

void write_history_csv(const std::filesystem::path& path,
                       const std::vector<IterationRecord>& history,
                       const ArtifactStamp& stamp);

void write_bounds_report(const std::filesystem::path& path,
                         const MomentBounds& bounds, const PBox& box,
                         const ArtifactStamp& stamp);

void write_monotonicity_report(const std::filesystem::path& path,
                               const MonotonicityReport& report,
                               const ArtifactStamp& stamp);

// K-L realizations on a coordinate grid, one column per realization.
void write_field_csv(const std::filesystem::path& path,
                     const std::vector<double>& xs,
                     const std::vector<std::vector<double>>& realizations,
                     const ArtifactStamp& stamp);

// Empirical CDF and Gaussian-kernel density (Silverman bandwidth) of the
// compliance samples at the two objective-extreme corners of the p-box.
struct EnvelopeData {
  std::vector<double> grid;
  std::vector<double> pdf_upper, cdf_upper;
  std::vector<double> pdf_lower, cdf_lower;
  double bandwidth_upper = 0.0, bandwidth_lower = 0.0;
};

EnvelopeData distribution_envelopes(const ComplianceMatrix& c_ref, double mu_ref,
                                    double sigma_ref, const MomentBounds& bounds,
                                    int n_samples, std::uint64_t seed,
                                    int grid_points = 201);

void write_envelopes_csv(const std::filesystem::path& path, const EnvelopeData& env,
                         const ArtifactStamp& stamp);

// Silverman's rule-of-thumb bandwidth for a Gaussian kernel.
double silverman_bandwidth(std::vector<double> samples);

}  // namespace rto

#endif
