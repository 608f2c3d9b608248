#ifndef RTO_CONFIG_HPP
#define RTO_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rto/bounds.hpp"
#include "rto/fem.hpp"
#include "rto/mesh.hpp"
#include "rto/moments.hpp"
#include "rto/pbox.hpp"

namespace rto {

struct MeshConfig {
  int nx = 0;
  int ny = 0;
  double elem_size = 1.0;
  std::string preset = "carrier-plate";  // carrier-plate | cantilever | michell | custom
  int load_span = -1;                    // elements; -1 = full edge
  int load_offset = 0;                   // elements below the top (cantilever)
  std::string load_edge_side = "top";    // custom preset only
  double load_dir_x = 0.0;
  double load_dir_y = 1.0;
  std::vector<int> fixed_dofs;           // custom preset only
};

struct FilterConfig {
  double radius = 3.0;
  double alpha0 = 1.0;
  int alpha_double_every = 30;  // iterations between sharpness doublings
  double alpha_max = 64.0;
};

struct UncertaintyConfig {
  bool direct = false;  // p-box given as intervals
  double mu_lo = 0.0, mu_hi = 0.0;
  double sigma_lo = 0.0, sigma_hi = 0.0;
  std::string samples_file;  // alternative: observations + ci level
  double ci = 0.90;
  double corr_length = 1.0;
  double s0 = 0.90;   // energy threshold when m_terms < 0
  int m_terms = -1;   // explicit truncation order; -1 = choose via s0
  int m_max = 64;     // eigenvalue list length offered to the threshold rule
};

struct ObjectiveConfig {
  double beta = 1.0;
  double w1 = 1.0;
  double w2 = 0.0;
  VarianceMode mode = VarianceMode::Full;
};

struct BoundsConfig {
  BoundsEngine engine = BoundsEngine::CA;
  int qmcs_points = 10000;
  SwarmConfig swarm;
  bool check_monotonicity = true;
  int monotonicity_sweep = 9;
};

struct OptimizerConfig {
  double volfrac = 0.0;
  double tol_change = 0.01;
  int max_iter = 200;
  int cells_x = 0;  // periodic layout; 0 = off
  int cells_y = 0;
  bool conservative = false;
};

struct OutputConfig {
  std::string dir = "out";
  std::uint64_t seed = 0;
  int envelope_samples = 20000;
};

struct RunConfig {
  MeshConfig mesh;
  SimpParams material;
  FilterConfig filter;
  UncertaintyConfig uncertainty;
  ObjectiveConfig objective;
  BoundsConfig bounds;
  OptimizerConfig optimizer;
  OutputConfig output;

  void validate() const;
  Mesh build_mesh() const;
  // Resolves the p-box, reading and reducing the samples file if needed.
  PBox resolve_pbox(std::string* warning = nullptr) const;
};

// Parses the structured key-value run configuration. Unknown sections or
// keys are errors; every diagnostic carries the offending key path.
RunConfig parse_config(const std::filesystem::path& path);

// Full echo of a configuration with every default made explicit;
// re-parsing the text reproduces the configuration exactly.
std::string resolved_config_text(const RunConfig& cfg);

// Hash of the resolved text, stamped into every output artifact.
std::uint64_t config_hash(const RunConfig& cfg);

std::vector<double> read_sample_file(const std::filesystem::path& path);

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace rto

#endif
