#include "rto/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rto/errors.hpp"

namespace rto {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw InvalidInput("config: " + where + ": " + msg);
}

double to_double(const std::string& where, const std::string& s) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) fail(where, "trailing characters in number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(where, "expected a number, got '" + s + "'");
  }
}

int to_int(const std::string& where, const std::string& s) {
  try {
    size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) fail(where, "trailing characters in integer '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(where, "expected an integer, got '" + s + "'");
  }
}

std::uint64_t to_u64(const std::string& where, const std::string& s) {
  try {
    size_t pos = 0;
    const std::uint64_t v = std::stoull(s, &pos);
    if (pos != s.size()) fail(where, "trailing characters in integer '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(where, "expected an unsigned integer, got '" + s + "'");
  }
}

bool to_bool(const std::string& where, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  fail(where, "expected true/false, got '" + s + "'");
}

std::pair<double, double> to_pair(const std::string& where, const std::string& s) {
  const auto toks = split_ws(s);
  if (toks.size() != 2) fail(where, "expected two numbers, got '" + s + "'");
  return {to_double(where, toks[0]), to_double(where, toks[1])};
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<double> read_sample_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("samples file not found: " + path.string());
  std::vector<double> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    for (char& c : line)
      if (c == ',' || c == ';') c = ' ';
    for (const auto& tok : split_ws(line))
      out.push_back(to_double("samples:" + path.string(), tok));
  }
  return out;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("config: file not found: " + path.string());

  RunConfig cfg;
  bool saw_mu = false, saw_sigma = false, saw_uncertainty_key = false;
  bool saw_w1 = false, saw_w2 = false;

  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        fail(path.string() + ":" + std::to_string(lineno), "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"mesh",      "material",  "filter",
                                    "uncertainty", "objective", "bounds",
                                    "optimizer", "output"};
      bool ok = false;
      for (const char* k : known) ok = ok || section == k;
      if (!ok) fail("[" + section + "]", "unknown section");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(path.string() + ":" + std::to_string(lineno), "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const std::string where = section + "." + key;
    if (section.empty()) fail(key, "key outside any section");
    if (val.empty()) fail(where, "empty value");

    if (section == "mesh") {
      if (key == "nx") cfg.mesh.nx = to_int(where, val);
      else if (key == "ny") cfg.mesh.ny = to_int(where, val);
      else if (key == "elem_size") cfg.mesh.elem_size = to_double(where, val);
      else if (key == "preset") cfg.mesh.preset = val;
      else if (key == "load_span") cfg.mesh.load_span = to_int(where, val);
      else if (key == "load_offset") cfg.mesh.load_offset = to_int(where, val);
      else if (key == "load_edge") cfg.mesh.load_edge_side = val;
      else if (key == "load_dir") {
        const auto p = to_pair(where, val);
        cfg.mesh.load_dir_x = p.first;
        cfg.mesh.load_dir_y = p.second;
      } else if (key == "fixed_dofs") {
        cfg.mesh.fixed_dofs.clear();
        for (const auto& tok : split_ws(val))
          cfg.mesh.fixed_dofs.push_back(to_int(where, tok));
      } else fail(where, "unknown key");
    } else if (section == "material") {
      if (key == "e0") cfg.material.E0 = to_double(where, val);
      else if (key == "emin") cfg.material.Emin = to_double(where, val);
      else if (key == "nu") cfg.material.nu = to_double(where, val);
      else if (key == "penal") cfg.material.p = to_double(where, val);
      else fail(where, "unknown key");
    } else if (section == "filter") {
      if (key == "radius") cfg.filter.radius = to_double(where, val);
      else if (key == "alpha0") cfg.filter.alpha0 = to_double(where, val);
      else if (key == "alpha_double_every") cfg.filter.alpha_double_every = to_int(where, val);
      else if (key == "alpha_max") cfg.filter.alpha_max = to_double(where, val);
      else fail(where, "unknown key");
    } else if (section == "uncertainty") {
      saw_uncertainty_key = true;
      if (key == "mu") {
        const auto p = to_pair(where, val);
        cfg.uncertainty.mu_lo = p.first;
        cfg.uncertainty.mu_hi = p.second;
        saw_mu = true;
      } else if (key == "sigma") {
        const auto p = to_pair(where, val);
        cfg.uncertainty.sigma_lo = p.first;
        cfg.uncertainty.sigma_hi = p.second;
        saw_sigma = true;
      } else if (key == "samples_file") cfg.uncertainty.samples_file = val;
      else if (key == "ci") cfg.uncertainty.ci = to_double(where, val);
      else if (key == "corr_length") cfg.uncertainty.corr_length = to_double(where, val);
      else if (key == "s0") cfg.uncertainty.s0 = to_double(where, val);
      else if (key == "m_terms") cfg.uncertainty.m_terms = to_int(where, val);
      else if (key == "m_max") cfg.uncertainty.m_max = to_int(where, val);
      else fail(where, "unknown key");
    } else if (section == "objective") {
      if (key == "beta") cfg.objective.beta = to_double(where, val);
      else if (key == "w1") { cfg.objective.w1 = to_double(where, val); saw_w1 = true; }
      else if (key == "w2") { cfg.objective.w2 = to_double(where, val); saw_w2 = true; }
      else if (key == "variance_mode") {
        if (val == "full") cfg.objective.mode = VarianceMode::Full;
        else if (val == "offdiag") cfg.objective.mode = VarianceMode::OffDiagonal;
        else fail(where, "expected full or offdiag");
      } else fail(where, "unknown key");
    } else if (section == "bounds") {
      if (key == "engine") {
        if (val == "ca") cfg.bounds.engine = BoundsEngine::CA;
        else if (val == "qmcs") cfg.bounds.engine = BoundsEngine::QMCS;
        else if (val == "pso") cfg.bounds.engine = BoundsEngine::PSO;
        else fail(where, "expected ca, qmcs or pso");
      } else if (key == "qmcs_points") cfg.bounds.qmcs_points = to_int(where, val);
      else if (key == "pso_particles") cfg.bounds.swarm.n_particles = to_int(where, val);
      else if (key == "pso_iters") cfg.bounds.swarm.n_iters = to_int(where, val);
      else if (key == "check_monotonicity") cfg.bounds.check_monotonicity = to_bool(where, val);
      else if (key == "monotonicity_sweep") cfg.bounds.monotonicity_sweep = to_int(where, val);
      else fail(where, "unknown key");
    } else if (section == "optimizer") {
      if (key == "volfrac") cfg.optimizer.volfrac = to_double(where, val);
      else if (key == "tol_change") cfg.optimizer.tol_change = to_double(where, val);
      else if (key == "max_iter") cfg.optimizer.max_iter = to_int(where, val);
      else if (key == "periodic") {
        const auto toks = split_ws(val);
        if (toks.size() != 2) fail(where, "expected two cell counts");
        cfg.optimizer.cells_x = to_int(where, toks[0]);
        cfg.optimizer.cells_y = to_int(where, toks[1]);
      } else if (key == "conservative") cfg.optimizer.conservative = to_bool(where, val);
      else fail(where, "unknown key");
    } else if (section == "output") {
      if (key == "dir") cfg.output.dir = val;
      else if (key == "seed") cfg.output.seed = to_u64(where, val);
      else if (key == "envelope_samples") cfg.output.envelope_samples = to_int(where, val);
      else fail(where, "unknown key");
    }
  }

  if (saw_mu != saw_sigma)
    fail("uncertainty", "mu and sigma intervals must be given together");
  cfg.uncertainty.direct = saw_mu;
  if (!saw_uncertainty_key)
    fail("uncertainty", "block is empty: give mu/sigma intervals or samples_file");
  if (!cfg.uncertainty.direct && cfg.uncertainty.samples_file.empty())
    fail("uncertainty", "give either mu/sigma intervals or samples_file");
  if ((saw_w1 || saw_w2) && !(saw_w1 && saw_w2))
    fail("objective", "w1 and w2 must be given together");

  cfg.validate();
  return cfg;
}

void RunConfig::validate() const {
  if (mesh.nx < 1 || mesh.ny < 1)
    throw InvalidInput("config: mesh.nx/mesh.ny must be >= 1");
  if (!(mesh.elem_size > 0.0))
    throw InvalidInput("config: mesh.elem_size must be positive");
  if (mesh.preset != "carrier-plate" && mesh.preset != "cantilever" &&
      mesh.preset != "michell" && mesh.preset != "custom")
    throw InvalidInput("config: mesh.preset unknown '" + mesh.preset + "'");
  material.validate();
  if (!(filter.radius > 0.0))
    throw InvalidInput("config: filter.radius must be positive");
  if (!(filter.alpha0 >= 0.0) || !(filter.alpha_max >= filter.alpha0))
    throw InvalidInput("config: filter.alpha schedule invalid");
  if (filter.alpha_double_every < 1)
    throw InvalidInput("config: filter.alpha_double_every must be >= 1");
  if (uncertainty.direct) {
    if (!(uncertainty.mu_lo <= uncertainty.mu_hi))
      throw InvalidInput("config: uncertainty.mu interval reversed");
    if (!(0.0 <= uncertainty.sigma_lo && uncertainty.sigma_lo <= uncertainty.sigma_hi))
      throw InvalidInput("config: uncertainty.sigma interval invalid");
  } else if (!(uncertainty.ci > 0.0 && uncertainty.ci < 1.0)) {
    throw InvalidInput("config: uncertainty.ci must lie in (0,1)");
  }
  if (!(uncertainty.corr_length > 0.0))
    throw InvalidInput("config: uncertainty.corr_length must be positive");
  if (uncertainty.m_terms < 0 && !(uncertainty.s0 > 0.0 && uncertainty.s0 <= 1.0))
    throw InvalidInput("config: uncertainty.s0 must lie in (0,1]");
  if (uncertainty.m_max < 1)
    throw InvalidInput("config: uncertainty.m_max must be >= 1");
  if (!(objective.beta >= 0.0))
    throw InvalidInput("config: objective.beta must be >= 0");
  if (!(objective.w1 >= 0.0 && objective.w2 >= 0.0 &&
        std::abs(objective.w1 + objective.w2 - 1.0) < 1e-9))
    throw InvalidInput("config: objective weights must be nonnegative and w1 + w2 = 1");
  if (bounds.qmcs_points < 1)
    throw InvalidInput("config: bounds.qmcs_points must be >= 1");
  bounds.swarm.validate();
  if (bounds.monotonicity_sweep < 3)
    throw InvalidInput("config: bounds.monotonicity_sweep must be >= 3");
  if (!(optimizer.volfrac > 0.0 && optimizer.volfrac <= 1.0))
    throw InvalidInput("config: optimizer.volfrac must lie in (0,1]");
  if (!(optimizer.tol_change > 0.0))
    throw InvalidInput("config: optimizer.tol_change must be positive");
  if (optimizer.max_iter < 1)
    throw InvalidInput("config: optimizer.max_iter must be >= 1");
  if ((optimizer.cells_x > 0) != (optimizer.cells_y > 0))
    throw InvalidInput("config: optimizer.periodic needs both cell counts");
  if (optimizer.cells_x > 0 &&
      (mesh.nx % optimizer.cells_x != 0 || mesh.ny % optimizer.cells_y != 0))
    throw InvalidInput("config: periodic cell counts must divide the mesh");
  if (output.envelope_samples < 100)
    throw InvalidInput("config: output.envelope_samples must be >= 100");
}

Mesh RunConfig::build_mesh() const {
  const int nx = mesh.nx, ny = mesh.ny;
  if (mesh.preset == "carrier-plate") {
    Mesh m = make_carrier_plate(nx, ny, mesh.elem_size);
    return m;
  }
  if (mesh.preset == "cantilever") {
    const int span = mesh.load_span > 0 ? mesh.load_span : ny;
    return make_cantilever(nx, ny, span, mesh.load_offset, mesh.elem_size);
  }
  if (mesh.preset == "michell") {
    return make_michell(nx, ny, mesh.elem_size);
  }
  // custom
  Mesh m;
  m.nx = nx;
  m.ny = ny;
  m.elem_size = mesh.elem_size;
  m.fixed_dofs = mesh.fixed_dofs;
  std::sort(m.fixed_dofs.begin(), m.fixed_dofs.end());
  m.fixed_dofs.erase(std::unique(m.fixed_dofs.begin(), m.fixed_dofs.end()),
                     m.fixed_dofs.end());
  const std::string side = mesh.load_edge_side;
  const int offset = mesh.load_offset;
  int span = mesh.load_span;
  if (side == "top" || side == "bottom") {
    if (span <= 0) span = nx;
    const int iy = side == "top" ? ny : 0;
    for (int ix = offset; ix <= offset + span; ++ix)
      m.load_edge.nodes.push_back(m.node_id(ix, iy));
  } else if (side == "left" || side == "right") {
    if (span <= 0) span = ny;
    const int ix = side == "left" ? 0 : nx;
    for (int iy = offset; iy <= offset + span; ++iy)
      m.load_edge.nodes.push_back(m.node_id(ix, iy));
  } else {
    throw InvalidInput("config: mesh.load_edge unknown side '" + side + "'");
  }
  m.load_edge.dir_x = mesh.load_dir_x;
  m.load_edge.dir_y = mesh.load_dir_y;
  m.validate();
  return m;
}

PBox RunConfig::resolve_pbox(std::string* warning) const {
  if (uncertainty.direct) {
    PBox box;
    box.mu_lo = uncertainty.mu_lo;
    box.mu_hi = uncertainty.mu_hi;
    box.sigma_lo = uncertainty.sigma_lo;
    box.sigma_hi = uncertainty.sigma_hi;
    box.validate();
    return box;
  }
  const auto samples = read_sample_file(uncertainty.samples_file);
  return pbox_from_samples(samples, uncertainty.ci, warning);
}

std::string resolved_config_text(const RunConfig& cfg) {
  std::ostringstream os;
  os << "[mesh]\n";
  os << "nx = " << cfg.mesh.nx << "\n";
  os << "ny = " << cfg.mesh.ny << "\n";
  os << "elem_size = " << format_double(cfg.mesh.elem_size) << "\n";
  os << "preset = " << cfg.mesh.preset << "\n";
  if (cfg.mesh.load_span > 0) os << "load_span = " << cfg.mesh.load_span << "\n";
  if (cfg.mesh.load_offset > 0) os << "load_offset = " << cfg.mesh.load_offset << "\n";
  if (cfg.mesh.preset == "custom") {
    os << "load_edge = " << cfg.mesh.load_edge_side << "\n";
    os << "load_dir = " << format_double(cfg.mesh.load_dir_x) << " "
       << format_double(cfg.mesh.load_dir_y) << "\n";
    os << "fixed_dofs =";
    for (int d : cfg.mesh.fixed_dofs) os << " " << d;
    os << "\n";
  }
  os << "\n[material]\n";
  os << "e0 = " << format_double(cfg.material.E0) << "\n";
  os << "emin = " << format_double(cfg.material.Emin) << "\n";
  os << "nu = " << format_double(cfg.material.nu) << "\n";
  os << "penal = " << format_double(cfg.material.p) << "\n";
  os << "\n[filter]\n";
  os << "radius = " << format_double(cfg.filter.radius) << "\n";
  os << "alpha0 = " << format_double(cfg.filter.alpha0) << "\n";
  os << "alpha_double_every = " << cfg.filter.alpha_double_every << "\n";
  os << "alpha_max = " << format_double(cfg.filter.alpha_max) << "\n";
  os << "\n[uncertainty]\n";
  if (cfg.uncertainty.direct) {
    os << "mu = " << format_double(cfg.uncertainty.mu_lo) << " "
       << format_double(cfg.uncertainty.mu_hi) << "\n";
    os << "sigma = " << format_double(cfg.uncertainty.sigma_lo) << " "
       << format_double(cfg.uncertainty.sigma_hi) << "\n";
  } else {
    os << "samples_file = " << cfg.uncertainty.samples_file << "\n";
    os << "ci = " << format_double(cfg.uncertainty.ci) << "\n";
  }
  os << "corr_length = " << format_double(cfg.uncertainty.corr_length) << "\n";
  if (cfg.uncertainty.m_terms >= 0)
    os << "m_terms = " << cfg.uncertainty.m_terms << "\n";
  else
    os << "s0 = " << format_double(cfg.uncertainty.s0) << "\n";
  os << "m_max = " << cfg.uncertainty.m_max << "\n";
  os << "\n[objective]\n";
  os << "beta = " << format_double(cfg.objective.beta) << "\n";
  os << "w1 = " << format_double(cfg.objective.w1) << "\n";
  os << "w2 = " << format_double(cfg.objective.w2) << "\n";
  os << "variance_mode = "
     << (cfg.objective.mode == VarianceMode::Full ? "full" : "offdiag") << "\n";
  os << "\n[bounds]\n";
  os << "engine = " << to_string(cfg.bounds.engine) << "\n";
  os << "qmcs_points = " << cfg.bounds.qmcs_points << "\n";
  os << "pso_particles = " << cfg.bounds.swarm.n_particles << "\n";
  os << "pso_iters = " << cfg.bounds.swarm.n_iters << "\n";
  os << "check_monotonicity = " << (cfg.bounds.check_monotonicity ? "true" : "false")
     << "\n";
  os << "monotonicity_sweep = " << cfg.bounds.monotonicity_sweep << "\n";
  os << "\n[optimizer]\n";
  os << "volfrac = " << format_double(cfg.optimizer.volfrac) << "\n";
  os << "tol_change = " << format_double(cfg.optimizer.tol_change) << "\n";
  os << "max_iter = " << cfg.optimizer.max_iter << "\n";
  if (cfg.optimizer.cells_x > 0)
    os << "periodic = " << cfg.optimizer.cells_x << " " << cfg.optimizer.cells_y
       << "\n";
  os << "conservative = " << (cfg.optimizer.conservative ? "true" : "false") << "\n";
  os << "\n[output]\n";
  os << "dir = " << cfg.output.dir << "\n";
  os << "seed = " << cfg.output.seed << "\n";
  os << "envelope_samples = " << cfg.output.envelope_samples << "\n";
  return os.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
  const std::string text = resolved_config_text(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace rto
