#include "shdtn/dtn.hpp"

#include <stdexcept>

#include "shdtn/quadrature.hpp"

namespace shdtn {

namespace {

using cd = std::complex<double>;

// Quadratic trace of the Q8 shape functions on a vertical boundary edge.
inline void edge_shape(double eta, double out[3]) {
  out[0] = 0.5 * eta * (eta - 1.0);
  out[1] = 1.0 - eta * eta;
  out[2] = 0.5 * eta * (eta + 1.0);
}

// Accumulates integral of mu(x2) f(mode, x2) N_J over the side's edges into
// per-node slots via a visitor(sub-node-col, mode, value).
template <typename Fn>
void integrate_side(const Mesh& mesh, const std::vector<GuidedMode>& modes, Side side,
                    Fn&& emit) {
  const GaussRule& rule = gauss_legendre(3);
  for (const BoundaryEdge& edge : mesh.boundary_edges(side)) {
    const double half = 0.5 * (edge.y1 - edge.y0);
    const double mid = 0.5 * (edge.y1 + edge.y0);
    const int ids[3] = {edge.n0, edge.n_mid, edge.n1};
    for (size_t g = 0; g < rule.points.size(); ++g) {
      const double x2 = mid + half * rule.points[g];
      double n3[3];
      edge_shape(rule.points[g], n3);
      for (size_t m = 0; m < modes.size(); ++m) {
        const double mu = edge.layer == Layer::A ? modes[m].layer_a.mu : modes[m].layer_b.mu;
        const double u = modes[m].shape_in_layer(edge.layer, x2);
        const double common = rule.weights[g] * half * mu * u;
        for (int j = 0; j < 3; ++j) emit(ids[j], int(m), common * n3[j]);
      }
    }
  }
}

std::vector<int> side_nodes(const Mesh& mesh, Side side) {
  return side == Side::Gamma1 ? mesh.gamma1 : mesh.gamma2;
}

}  // namespace

Eigen::VectorXcd projection_diagonal(const std::vector<GuidedMode>& modes, double a) {
  if (modes.empty()) throw std::invalid_argument("projection_diagonal: empty mode list");
  Eigen::VectorXcd r(modes.size());
  double largest = 0.0;
  for (size_t n = 0; n < modes.size(); ++n) {
    r[n] = modes[n].gram_diag * std::exp(cd(0.0, modes[n].k * a));
    largest = std::max(largest, std::abs(r[n]));
  }
  for (size_t n = 0; n < modes.size(); ++n)
    if (std::abs(r[n]) < 1e-12 * largest)
      throw std::runtime_error("degenerate modal projection diagonal at mode " +
                               std::to_string(n + 1));
  return r;
}

BoundaryBlock assemble_projection(const Mesh& mesh, const std::vector<GuidedMode>& modes,
                                  Side side) {
  BoundaryBlock block;
  block.side = side;
  block.node_ids = side_nodes(mesh, side);
  block.m = Eigen::MatrixXcd::Zero(int(modes.size()), int(block.node_ids.size()));

  std::vector<int> col(mesh.n_nodes(), -1);
  for (size_t j = 0; j < block.node_ids.size(); ++j) col[block.node_ids[j]] = int(j);

  integrate_side(mesh, modes, side,
                 [&](int node, int m, double v) { block.m(m, col[node]) += v; });
  return block;
}

BoundaryBlock modal_force_columns(const Mesh& mesh, const std::vector<GuidedMode>& modes,
                                  Side side) {
  BoundaryBlock block;
  block.side = side;
  block.node_ids = side_nodes(mesh, side);
  block.m = Eigen::MatrixXcd::Zero(int(block.node_ids.size()), int(modes.size()));

  std::vector<int> col(mesh.n_nodes(), -1);
  for (size_t j = 0; j < block.node_ids.size(); ++j) col[block.node_ids[j]] = int(j);

  Eigen::VectorXcd factor(modes.size());
  for (size_t n = 0; n < modes.size(); ++n)
    factor[n] = cd(0.0, modes[n].k) * std::exp(cd(0.0, modes[n].k * mesh.a));

  integrate_side(mesh, modes, side, [&](int node, int n, double v) {
    block.m(col[node], n) += v * factor[n];
  });
  return block;
}

DtnOperator::DtnOperator(const Mesh& mesh, const std::vector<GuidedMode>& modes, double a)
    : a_(a),
      r_diag_(projection_diagonal(modes, a)),
      ghat_plus_(assemble_projection(mesh, modes, Side::Gamma2)),
      ghat_minus_(assemble_projection(mesh, modes, Side::Gamma1)),
      fg_plus_(modal_force_columns(mesh, modes, Side::Gamma2)),
      fg_minus_(modal_force_columns(mesh, modes, Side::Gamma1)) {
  if (std::abs(a - mesh.a) > 1e-12 * mesh.a)
    throw std::invalid_argument("DtN boundary distance disagrees with the mesh");

  // The full projection matrix must be diagonal to orthogonality accuracy;
  // this is the operational check that the modal basis is consistent.
  Eigen::MatrixXd gram = gram_matrix(modes);
  double min_diag = gram.diagonal().cwiseAbs().minCoeff();
  for (int m = 0; m < gram.rows(); ++m)
    for (int n = 0; n < gram.cols(); ++n)
      if (m != n && std::abs(gram(m, n)) > 1e-8 * min_diag)
        throw std::runtime_error("modal projection matrix is not diagonal (orthogonality)");
}

Eigen::VectorXcd DtnOperator::project(Side side, const Eigen::VectorXcd& u) const {
  const BoundaryBlock& g = ghat(side);
  Eigen::VectorXcd trace(g.node_ids.size());
  for (size_t j = 0; j < g.node_ids.size(); ++j) trace[j] = u[g.node_ids[j]];
  Eigen::VectorXcd alpha = g.m * trace;
  return alpha.cwiseQuotient(r_diag_);
}

Eigen::VectorXcd DtnOperator::apply(const Eigen::VectorXcd& u) const {
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(u.size());
  for (Side side : {Side::Gamma2, Side::Gamma1}) {
    const Eigen::VectorXcd alpha = project(side, u);
    const BoundaryBlock& fg = force_columns(side);
    Eigen::VectorXcd local = fg.m * alpha;
    for (size_t j = 0; j < fg.node_ids.size(); ++j) f[fg.node_ids[j]] += local[j];
  }
  return f;
}

Eigen::VectorXcd DtnOperator::modal_force(Side side, int mode_idx, int total_nodes) const {
  const BoundaryBlock& fg = force_columns(side);
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(total_nodes);
  for (size_t j = 0; j < fg.node_ids.size(); ++j) f[fg.node_ids[j]] = fg.m(j, mode_idx);
  return f;
}

DtnOperator build_dtn(const Mesh& mesh, const std::vector<GuidedMode>& modes, double a) {
  return DtnOperator(mesh, modes, a);
}

}  // namespace shdtn
