#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "shdtn/dispersion.hpp"
#include "shdtn/mesh.hpp"

namespace shdtn {

// Compact matrix acting on (or producing) values at one virtual boundary's
// nodes; column/row j of `m` corresponds to mesh node node_ids[j].
struct BoundaryBlock {
  Side side = Side::Gamma2;
  std::vector<int> node_ids;
  Eigen::MatrixXcd m;
};

// Diagonal of the modal projection matrix: R_nn = (int mu u3_n^2 dx2) e^{i k_n a}.
// Throws if a mode's diagonal modulus is degenerate.
Eigen::VectorXcd projection_diagonal(const std::vector<GuidedMode>& modes, double a);

// Rows m: nodal quadrature of mu(x2) u3_m(x2) N_J over the side's edges
// (n_modes x n_boundary_nodes).
BoundaryBlock assemble_projection(const Mesh& mesh, const std::vector<GuidedMode>& modes,
                                  Side side);

// Columns n: equivalent nodal forces of the outgoing mode-n boundary traction
// t3 = sigma_31 n1 on that side (n_boundary_nodes x n_modes). With the outward
// normal folded in, both sides carry the integrand
// +mu(x2) i k_n u3_n(x2) e^{i k_n a} N_J.
BoundaryBlock modal_force_columns(const Mesh& mesh, const std::vector<GuidedMode>& modes,
                                  Side side);

// The assembled DtN map kept in low-rank factored form:
// F = fg_plus R^-1 ghat_plus U + fg_minus R^-1 ghat_minus U.
class DtnOperator {
 public:
  DtnOperator(const Mesh& mesh, const std::vector<GuidedMode>& modes, double a);

  int n_modes() const { return int(r_diag_.size()); }
  double boundary_distance() const { return a_; }
  const Eigen::VectorXcd& r_diag() const { return r_diag_; }
  const BoundaryBlock& ghat(Side side) const {
    return side == Side::Gamma2 ? ghat_plus_ : ghat_minus_;
  }
  const BoundaryBlock& force_columns(Side side) const {
    return side == Side::Gamma2 ? fg_plus_ : fg_minus_;
  }

  // alpha = R^-1 ghat(side) U for a full-length nodal vector U.
  Eigen::VectorXcd project(Side side, const Eigen::VectorXcd& u) const;

  // F^sca(U) without ever forming the P x P product.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& u) const;

  // Nodal force vector of a single outgoing mode with unit coefficient.
  Eigen::VectorXcd modal_force(Side side, int mode_idx, int total_nodes) const;

 private:
  double a_;
  Eigen::VectorXcd r_diag_;
  BoundaryBlock ghat_plus_, ghat_minus_;
  BoundaryBlock fg_plus_, fg_minus_;
};

DtnOperator build_dtn(const Mesh& mesh, const std::vector<GuidedMode>& modes, double a);

}  // namespace shdtn
