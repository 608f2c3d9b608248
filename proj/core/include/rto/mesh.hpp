#ifndef RTO_MESH_HPP
#define RTO_MESH_HPP

#include <array>
#include <vector>

namespace rto {

// Node span carrying the distributed load, listed in order along the
// edge, plus the load direction (unit vector in the xy plane).
struct LoadEdge {
  std::vector<int> nodes;
  double dir_x = 0.0;
  double dir_y = 1.0;

  int span_elements() const { return static_cast<int>(nodes.size()) - 1; }
};

// Regular grid of square bilinear elements, nx by ny, node (ix, iy) at
// (ix*h, iy*h) with iy = 0 the bottom row. Two dofs per node, x then y.
struct Mesh {
  int nx = 1;
  int ny = 1;
  double elem_size = 1.0;
  std::vector<int> fixed_dofs;  // sorted, unique
  LoadEdge load_edge;

  int n_nodes() const { return (nx + 1) * (ny + 1); }
  int n_dofs() const { return 2 * n_nodes(); }
  int n_elems() const { return nx * ny; }
  int node_id(int ix, int iy) const { return ix * (ny + 1) + iy; }
  int elem_id(int ex, int ey) const { return ex * ny + ey; }

  // Corner nodes counterclockwise from bottom-left.
  std::array<int, 4> element_nodes(int ex, int ey) const {
    return {node_id(ex, ey), node_id(ex + 1, ey), node_id(ex + 1, ey + 1),
            node_id(ex, ey + 1)};
  }
  std::array<int, 8> element_dofs(int ex, int ey) const {
    const auto n = element_nodes(ex, ey);
    return {2 * n[0], 2 * n[0] + 1, 2 * n[1], 2 * n[1] + 1,
            2 * n[2], 2 * n[2] + 1, 2 * n[3], 2 * n[3] + 1};
  }
  double elem_volume() const { return elem_size * elem_size; }
  double total_volume() const { return n_elems() * elem_volume(); }

  void validate() const;
};

// Bottom edge fully fixed, load across the whole top edge.
Mesh make_carrier_plate(int nx, int ny, double elem_size = 1.0);

// Right edge fully fixed, load on the left edge over `span` elements
// starting `offset` elements below the top.
Mesh make_cantilever(int nx, int ny, int span, int offset, double elem_size = 1.0);

// Both bottom corners pinned, load across the whole bottom edge.
Mesh make_michell(int nx, int ny, double elem_size = 1.0);

}  // namespace rto

#endif
