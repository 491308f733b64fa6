#include "shdtn/mesh.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace shdtn {

namespace {

// Find the smallest nx >= requested for which the crack tips +-c/2 fall on
// corner-node grid lines: c/dx integral (within 0.1% of a spacing) with
// nx - c/dx even.
int snap_elems_x(double crack_length, double a, int requested) {
  if (crack_length <= 0.0) return requested;
  const int cap = std::max(requested * 64, requested + 64);
  for (int nx = requested; nx <= cap; ++nx) {
    const double p = crack_length * nx / (2.0 * a);
    const int p_round = int(std::lround(p));
    if (p_round < 1 || p_round > nx - 2) continue;
    if (std::abs(p - p_round) > 1e-3) continue;
    if ((nx - p_round) % 2 != 0) continue;
    return nx;
  }
  throw std::runtime_error("cannot snap crack tips onto the x grid within 0.1% spacing");
}

}  // namespace

Mesh build_mesh(const BilayerPlate& plate, int elems_x, int elems_y_a, int elems_y_b) {
  if (elems_x < 1 || elems_y_a < 1 || elems_y_b < 1)
    throw std::invalid_argument("element counts must be >= 1");
  const double a = plate.a_virtual;
  const double c = plate.crack_length;
  if (c / 2.0 >= a) throw std::invalid_argument("crack half-length must be below a_virtual");

  Mesh mesh;
  mesh.elems_x = snap_elems_x(c, a, elems_x);
  mesh.elems_y_a = elems_y_a;
  mesh.elems_y_b = elems_y_b;
  mesh.a = a;
  mesh.h_a = plate.h_a;
  mesh.h_b = plate.h_b;
  mesh.crack_length = c;
  mesh.dx = 2.0 * a / mesh.elems_x;
  mesh.dy_a = plate.h_a / elems_y_a;
  mesh.dy_b = plate.h_b / elems_y_b;

  const int nx = mesh.elems_x;
  const int ny = elems_y_a + elems_y_b;
  const int p = (c > 0.0) ? int(std::lround(c * nx / (2.0 * a))) : 0;
  const int m = (c > 0.0) ? (nx - p) / 2 : 0;  // left tip column index

  // Endpoint-exact grid lines: the faces land exactly on +-h and the
  // interface row exactly on x2 = 0.
  auto corner_y = [&](int r) {
    if (r == elems_y_b) return 0.0;
    return r < elems_y_b ? -plate.h_b * double(elems_y_b - r) / elems_y_b
                         : plate.h_a * double(r - elems_y_b) / elems_y_a;
  };
  auto level_x = [&](int level) {
    if (level == 0) return -a;
    if (level == nx) return 0.0;
    if (level == 2 * nx) return a;
    return a * double(level - nx) / nx;
  };

  // Welded nodes, level by level (left to right), bottom to top in each level.
  std::vector<int> level_base(2 * nx + 1);
  auto add_node = [&](int level, int slot, double x1, double x2) {
    const int id = int(mesh.nodes.size());
    mesh.nodes.push_back({id, x1, x2});
    mesh.level_of.push_back(level);
    mesh.slot_of.push_back(slot);
    mesh.is_upper_dup.push_back(0);
    return id;
  };
  for (int level = 0; level <= 2 * nx; ++level) {
    level_base[level] = int(mesh.nodes.size());
    const double x1 = level_x(level);
    if (level % 2 == 0) {
      for (int r = 0; r <= ny; ++r) {
        add_node(level, 2 * r, x1, corner_y(r));
        if (r < ny) add_node(level, 2 * r + 1, x1, 0.5 * (corner_y(r) + corner_y(r + 1)));
      }
    } else {
      for (int r = 0; r <= ny; ++r) add_node(level, r, x1, corner_y(r));
    }
  }

  auto corner_id = [&](int i, int r) { return level_base[2 * i] + 2 * r; };
  auto vmid_id = [&](int i, int r) { return level_base[2 * i] + 2 * r + 1; };
  auto hmid_id = [&](int i, int r) { return level_base[2 * i + 1] + r; };

  // Upper-face duplicates along the open debond segment; tips stay shared.
  std::unordered_map<int, int> upper_at_level;  // x-level -> duplicate id
  if (p > 0) {
    const int r_int = elems_y_b;  // interface corner row
    for (int level = 2 * m; level <= 2 * (m + p); ++level) {
      const bool is_tip = (level == 2 * m) || (level == 2 * (m + p));
      if (is_tip) continue;
      const int welded =
          (level % 2 == 0) ? corner_id(level / 2, r_int) : hmid_id(level / 2, r_int);
      const int dup = add_node(level, mesh.slot_of[welded], mesh.nodes[welded].x1,
                               mesh.nodes[welded].x2);
      mesh.is_upper_dup.back() = 1;
      upper_at_level[level] = dup;
    }
  }
  auto interface_upper = [&](int level, int welded) {
    auto it = upper_at_level.find(level);
    return it == upper_at_level.end() ? welded : it->second;
  };

  // Elements
  for (int j = 0; j < ny; ++j) {
    const Layer layer = j < elems_y_b ? Layer::B : Layer::A;
    for (int i = 0; i < nx; ++i) {
      Q8Element e;
      e.layer = layer;
      int n1 = corner_id(i, j), n2 = corner_id(i + 1, j);
      int n5 = hmid_id(i, j);
      if (layer == Layer::A && j == elems_y_b && p > 0 && i >= m && i < m + p) {
        n1 = interface_upper(2 * i, n1);
        n2 = interface_upper(2 * (i + 1), n2);
        n5 = interface_upper(2 * i + 1, n5);
      }
      e.node_ids = {n1,
                    n2,
                    corner_id(i + 1, j + 1),
                    corner_id(i, j + 1),
                    n5,
                    vmid_id(i + 1, j),
                    hmid_id(i, j + 1),
                    vmid_id(i, j)};
      mesh.elements.push_back(e);
    }
  }

  // Boundary node sets
  for (int s = 0; s <= 2 * ny; ++s) mesh.gamma1.push_back(level_base[0] + s);
  for (int s = 0; s <= 2 * ny; ++s) mesh.gamma2.push_back(level_base[2 * nx] + s);
  for (int level = 0; level <= 2 * nx; ++level) {
    mesh.bottom.push_back(level_base[level]);
    mesh.top.push_back(level_base[level] + (level % 2 == 0 ? 2 * ny : ny));
  }
  if (p > 0) {
    const int r_int = elems_y_b;
    for (int i = m; i <= m + p; ++i) {
      const int cw = corner_id(i, r_int);
      mesh.crack_lower.push_back(cw);
      mesh.crack_upper.push_back(interface_upper(2 * i, cw));
      if (i < m + p) {
        const int hw = hmid_id(i, r_int);
        mesh.crack_lower.push_back(hw);
        mesh.crack_upper.push_back(interface_upper(2 * i + 1, hw));
      }
    }
  }
  return mesh;
}

std::vector<BoundaryEdge> Mesh::boundary_edges(Side side) const {
  const std::vector<int>& g = (side == Side::Gamma1) ? gamma1 : gamma2;
  std::vector<BoundaryEdge> edges;
  const int ny = elems_y();
  edges.reserve(ny);
  for (int j = 0; j < ny; ++j) {
    BoundaryEdge e;
    e.n0 = g[2 * j];
    e.n_mid = g[2 * j + 1];
    e.n1 = g[2 * j + 2];
    e.layer = j < elems_y_b ? Layer::B : Layer::A;
    e.y0 = nodes[e.n0].x2;
    e.y1 = nodes[e.n1].x2;
    edges.push_back(e);
  }
  return edges;
}

void write_mesh_csv(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file: " + path);
  out << "node_id,x1_m,x2_m\n";
  out.precision(17);
  for (const Node& n : mesh.nodes) out << n.id << "," << n.x1 << "," << n.x2 << "\n";
  out << "elem_id,n1,n2,n3,n4,n5,n6,n7,n8,layer\n";
  for (size_t e = 0; e < mesh.elements.size(); ++e) {
    out << e;
    for (int id : mesh.elements[e].node_ids) out << "," << id;
    out << "," << (mesh.elements[e].layer == Layer::A ? "A" : "B") << "\n";
  }
}

}  // namespace shdtn
