#include "shdtn/fem_assembly.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "shdtn/quadrature.hpp"

namespace shdtn {

ShapeValues shape_functions(double xi, double eta) {
  ShapeValues s;
  static constexpr double cx[4] = {-1.0, 1.0, 1.0, -1.0};
  static constexpr double cy[4] = {-1.0, -1.0, 1.0, 1.0};
  for (int j = 0; j < 4; ++j) {
    const double xj = cx[j], yj = cy[j];
    s.n[j] = 0.25 * (1.0 + xi * xj) * (1.0 + eta * yj) * (xi * xj + eta * yj - 1.0);
    s.dn[j][0] = 0.25 * xj * (1.0 + eta * yj) * (2.0 * xi * xj + eta * yj);
    s.dn[j][1] = 0.25 * yj * (1.0 + xi * xj) * (xi * xj + 2.0 * eta * yj);
  }
  // mid-edge: bottom (0,-1), right (1,0), top (0,1), left (-1,0)
  s.n[4] = 0.5 * (1.0 - xi * xi) * (1.0 - eta);
  s.dn[4][0] = -xi * (1.0 - eta);
  s.dn[4][1] = -0.5 * (1.0 - xi * xi);
  s.n[5] = 0.5 * (1.0 + xi) * (1.0 - eta * eta);
  s.dn[5][0] = 0.5 * (1.0 - eta * eta);
  s.dn[5][1] = -eta * (1.0 + xi);
  s.n[6] = 0.5 * (1.0 - xi * xi) * (1.0 + eta);
  s.dn[6][0] = -xi * (1.0 + eta);
  s.dn[6][1] = 0.5 * (1.0 - xi * xi);
  s.n[7] = 0.5 * (1.0 - xi) * (1.0 - eta * eta);
  s.dn[7][0] = -0.5 * (1.0 - eta * eta);
  s.dn[7][1] = -eta * (1.0 - xi);
  return s;
}

ElementMatrices element_matrices(const Q8Element& elem, const Mesh& mesh,
                                 const Material& mat, int quadrature_order) {
  ElementMatrices out;
  out.ke.setZero();
  out.me.setZero();
  const GaussRule& rule = gauss_legendre(quadrature_order);

  Eigen::Matrix<double, 8, 2> coords;
  for (int j = 0; j < 8; ++j) {
    const Node& nd = mesh.nodes[elem.node_ids[j]];
    coords(j, 0) = nd.x1;
    coords(j, 1) = nd.x2;
  }

  for (int gx = 0; gx < quadrature_order; ++gx) {
    for (int gy = 0; gy < quadrature_order; ++gy) {
      const ShapeValues s = shape_functions(rule.points[gx], rule.points[gy]);
      Eigen::Matrix2d jac = Eigen::Matrix2d::Zero();
      for (int j = 0; j < 8; ++j) {
        jac(0, 0) += s.dn[j][0] * coords(j, 0);
        jac(0, 1) += s.dn[j][0] * coords(j, 1);
        jac(1, 0) += s.dn[j][1] * coords(j, 0);
        jac(1, 1) += s.dn[j][1] * coords(j, 1);
      }
      const double det = jac.determinant();
      if (!(det > 0.0))
        throw std::runtime_error("non-positive Jacobian in element quadrature");
      const Eigen::Matrix2d inv_t = jac.inverse().transpose();
      const double w = rule.weights[gx] * rule.weights[gy] * det;

      Eigen::Matrix<double, 8, 2> grad;  // physical gradients of N_J
      for (int j = 0; j < 8; ++j) {
        const Eigen::Vector2d g = inv_t * Eigen::Vector2d(s.dn[j][0], s.dn[j][1]);
        grad(j, 0) = g(0);
        grad(j, 1) = g(1);
      }
      Eigen::Map<const Eigen::Matrix<double, 8, 1>> nvec(s.n.data());
      out.ke.noalias() += (w * mat.mu) * (grad * grad.transpose());
      out.me.noalias() += (w * mat.rho) * (nvec * nvec.transpose());
    }
  }
  // vectorized accumulation is symmetric only to rounding; mirror exactly
  for (int r = 0; r < 8; ++r)
    for (int c = r + 1; c < 8; ++c) {
      out.ke(r, c) = out.ke(c, r);
      out.me(r, c) = out.me(c, r);
    }
  return out;
}

std::shared_ptr<const StiffnessMass> assemble_operators(const Mesh& mesh,
                                                        const BilayerPlate& plate,
                                                        int quadrature_order) {
  const int n = mesh.n_nodes();

  // Solver ordering: sweep x-levels left to right, bottom to top, with each
  // crack duplicate immediately after its welded partner.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (mesh.level_of[a] != mesh.level_of[b]) return mesh.level_of[a] < mesh.level_of[b];
    if (mesh.slot_of[a] != mesh.slot_of[b]) return mesh.slot_of[a] < mesh.slot_of[b];
    return mesh.is_upper_dup[a] < mesh.is_upper_dup[b];
  });
  std::vector<int> perm(n);
  for (int pos = 0; pos < n; ++pos) perm[order[pos]] = pos;

  int bw = 0;
  for (const Q8Element& e : mesh.elements) {
    int lo = n, hi = 0;
    for (int id : e.node_ids) {
      lo = std::min(lo, perm[id]);
      hi = std::max(hi, perm[id]);
    }
    bw = std::max(bw, hi - lo);
  }

  auto km = std::make_shared<StiffnessMass>(
      StiffnessMass{BandedMatrix(n, bw), BandedMatrix(n, bw), std::move(perm), bw});

  for (const Q8Element& e : mesh.elements) {
    const Material& mat = plate.material(e.layer);
    const ElementMatrices em = element_matrices(e, mesh, mat, quadrature_order);
    for (int r = 0; r < 8; ++r) {
      const int gr = km->perm[e.node_ids[r]];
      for (int c = 0; c < 8; ++c) {
        const int gc = km->perm[e.node_ids[c]];
        km->k.add(gr, gc, em.ke(r, c));
        km->m.add(gr, gc, em.me(r, c));
      }
    }
  }
  return km;
}

GlobalSystem::GlobalSystem(std::shared_ptr<const StiffnessMass> km, double omega)
    : km_(std::move(km)), omega_(omega) {}

Eigen::VectorXcd GlobalSystem::apply(const Eigen::VectorXcd& x) const {
  const std::vector<int>& perm = km_->perm;
  Eigen::VectorXcd xs(x.size());
  for (int i = 0; i < x.size(); ++i) xs[perm[i]] = x[i];
  Eigen::VectorXcd ys = km_->k.multiply(xs) - (omega_ * omega_) * km_->m.multiply(xs);
  Eigen::VectorXcd y(x.size());
  for (int i = 0; i < x.size(); ++i) y[i] = ys[perm[i]];
  return y;
}

double GlobalSystem::coeff(int i, int j) const {
  const int pi = km_->perm[i], pj = km_->perm[j];
  return km_->k.coeff(pi, pj) - omega_ * omega_ * km_->m.coeff(pi, pj);
}

SystemFactor::SystemFactor(const StiffnessMass& km, double omega)
    : perm_(&km.perm), lu_([&] {
        BandedMatrix s = km.k;
        s.axpy_scaled(-omega * omega, km.m);
        return BandedLU(s);
      }()) {}

Eigen::VectorXcd SystemFactor::solve(const Eigen::VectorXcd& b_mesh) const {
  const std::vector<int>& perm = *perm_;
  Eigen::VectorXcd bs(b_mesh.size());
  for (int i = 0; i < b_mesh.size(); ++i) bs[perm[i]] = b_mesh[i];
  Eigen::VectorXcd xs = lu_.solve(bs);
  Eigen::VectorXcd x(b_mesh.size());
  for (int i = 0; i < b_mesh.size(); ++i) x[i] = xs[perm[i]];
  return x;
}

Eigen::MatrixXcd SystemFactor::solve(const Eigen::MatrixXcd& b_mesh) const {
  const std::vector<int>& perm = *perm_;
  Eigen::MatrixXcd bs(b_mesh.rows(), b_mesh.cols());
  for (int i = 0; i < b_mesh.rows(); ++i) bs.row(perm[i]) = b_mesh.row(i);
  Eigen::MatrixXcd xs = lu_.solve(bs);
  Eigen::MatrixXcd x(b_mesh.rows(), b_mesh.cols());
  for (int i = 0; i < b_mesh.rows(); ++i) x.row(i) = xs.row(perm[i]);
  return x;
}

GlobalSystem assemble_global(const Mesh& mesh, const BilayerPlate& plate, double omega,
                             int quadrature_order) {
  return GlobalSystem(assemble_operators(mesh, plate, quadrature_order), omega);
}

}  // namespace shdtn
