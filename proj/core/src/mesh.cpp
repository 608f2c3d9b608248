#include "rto/mesh.hpp"

#include <algorithm>

#include "rto/errors.hpp"

namespace rto {

void Mesh::validate() const {
  if (nx < 1 || ny < 1) throw InvalidInput("mesh: nx and ny must be >= 1");
  if (!(elem_size > 0.0)) throw InvalidInput("mesh: element size must be positive");
  if (fixed_dofs.empty())
    throw StructuralError("mesh: no constrained dofs, structure has rigid modes");
  for (int d : fixed_dofs)
    if (d < 0 || d >= n_dofs()) throw InvalidInput("mesh: fixed dof out of range");
  if (!std::is_sorted(fixed_dofs.begin(), fixed_dofs.end()))
    throw InvalidInput("mesh: fixed dofs must be sorted");
  if (std::adjacent_find(fixed_dofs.begin(), fixed_dofs.end()) != fixed_dofs.end())
    throw InvalidInput("mesh: duplicate fixed dofs");
  if (load_edge.nodes.size() < 2)
    throw InvalidInput("mesh: load edge needs at least two nodes");
  for (int nid : load_edge.nodes)
    if (nid < 0 || nid >= n_nodes())
      throw InvalidInput("mesh: load edge node out of range");
}

namespace {
std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}
}  // namespace

Mesh make_carrier_plate(int nx, int ny, double elem_size) {
  Mesh m;
  m.nx = nx;
  m.ny = ny;
  m.elem_size = elem_size;
  std::vector<int> fixed;
  for (int ix = 0; ix <= nx; ++ix) {
    const int n = m.node_id(ix, 0);
    fixed.push_back(2 * n);
    fixed.push_back(2 * n + 1);
  }
  m.fixed_dofs = sorted_unique(std::move(fixed));
  for (int ix = 0; ix <= nx; ++ix) m.load_edge.nodes.push_back(m.node_id(ix, ny));
  m.load_edge.dir_x = 0.0;
  m.load_edge.dir_y = 1.0;
  m.validate();
  return m;
}

Mesh make_cantilever(int nx, int ny, int span, int offset, double elem_size) {
  if (span < 1 || offset < 0 || offset + span > ny)
    throw InvalidInput("cantilever: load span does not fit the left edge");
  Mesh m;
  m.nx = nx;
  m.ny = ny;
  m.elem_size = elem_size;
  std::vector<int> fixed;
  for (int iy = 0; iy <= ny; ++iy) {
    const int n = m.node_id(nx, iy);
    fixed.push_back(2 * n);
    fixed.push_back(2 * n + 1);
  }
  m.fixed_dofs = sorted_unique(std::move(fixed));
  const int top = ny - offset;
  for (int iy = top - span; iy <= top; ++iy)
    m.load_edge.nodes.push_back(m.node_id(0, iy));
  m.load_edge.dir_x = 0.0;
  m.load_edge.dir_y = 1.0;
  m.validate();
  return m;
}

Mesh make_michell(int nx, int ny, double elem_size) {
  Mesh m;
  m.nx = nx;
  m.ny = ny;
  m.elem_size = elem_size;
  const int left = m.node_id(0, 0);
  const int right = m.node_id(nx, 0);
  m.fixed_dofs = sorted_unique(
      {2 * left, 2 * left + 1, 2 * right, 2 * right + 1});
  for (int ix = 0; ix <= nx; ++ix) m.load_edge.nodes.push_back(m.node_id(ix, 0));
  m.load_edge.dir_x = 0.0;
  m.load_edge.dir_y = 1.0;
  m.validate();
  return m;
}

}  // namespace rto
