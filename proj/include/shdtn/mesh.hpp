#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "shdtn/material.hpp"

namespace shdtn {

struct Node {
  int id = -1;
  double x1 = 0.0;
  double x2 = 0.0;
};

// 8-node serendipity quadrilateral; corners counterclockwise from bottom-left,
// then the four mid-edge nodes (bottom, right, top, left).
struct Q8Element {
  std::array<int, 8> node_ids{};
  Layer layer = Layer::A;
};

// One quadratic boundary edge on a virtual boundary, nodes ordered by x2.
struct BoundaryEdge {
  int n0 = -1, n_mid = -1, n1 = -1;
  Layer layer = Layer::A;
  double y0 = 0.0, y1 = 0.0;
};

enum class Side { Gamma1, Gamma2 };  // x1 = -a and x1 = +a

// Structured Q8 mesh of |x1| <= a, -h_b <= x2 <= h_a with a seam crack
// (duplicated nodes, closed tips) along the debonded interface segment.
struct Mesh {
  std::vector<Node> nodes;
  std::vector<Q8Element> elements;

  std::vector<int> gamma1;       // x1 = -a, sorted by x2
  std::vector<int> gamma2;       // x1 = +a, sorted by x2
  std::vector<int> top;          // x2 = h_a, sorted by x1
  std::vector<int> bottom;       // x2 = -h_b, sorted by x1
  std::vector<int> crack_upper;  // debond faces incl. shared tip nodes,
  std::vector<int> crack_lower;  // sorted by x1, pairwise coincident

  // grid metadata
  int elems_x = 0, elems_y_a = 0, elems_y_b = 0;
  double dx = 0.0, dy_a = 0.0, dy_b = 0.0;
  double a = 0.0, h_a = 0.0, h_b = 0.0, crack_length = 0.0;

  // per-node structured-grid position (x-level 0..2*elems_x, y-slot within
  // the level) and whether the node is an upper-crack-face duplicate
  std::vector<int> level_of, slot_of;
  std::vector<std::uint8_t> is_upper_dup;

  int n_nodes() const { return int(nodes.size()); }
  int elems_y() const { return elems_y_a + elems_y_b; }

  std::vector<BoundaryEdge> boundary_edges(Side side) const;
};

// Generates the mesh, snapping elems_x upward until the crack tips land on
// corner-node grid lines. Throws on impossible geometry or snapping failure.
Mesh build_mesh(const BilayerPlate& plate, int elems_x, int elems_y_a, int elems_y_b);

// Node and element tables for debugging (see README for the format).
void write_mesh_csv(const std::string& path, const Mesh& mesh);

}  // namespace shdtn
