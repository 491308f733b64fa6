#pragma once

#include <array>
#include <memory>

#include <Eigen/Dense>

#include "shdtn/banded.hpp"
#include "shdtn/mesh.hpp"

namespace shdtn {

struct ShapeValues {
  std::array<double, 8> n{};                  // N_J
  std::array<std::array<double, 2>, 8> dn{};  // dN_J/dxi, dN_J/deta
};

// Standard 8-node serendipity shape functions on the reference square.
ShapeValues shape_functions(double xi, double eta);

struct ElementMatrices {
  Eigen::Matrix<double, 8, 8> ke;  // stiffness, antiplane shear
  Eigen::Matrix<double, 8, 8> me;  // consistent mass
};

// Gauss-quadrature element matrices; throws on a non-positive Jacobian.
ElementMatrices element_matrices(const Q8Element& elem, const Mesh& mesh,
                                 const Material& mat, int quadrature_order);

// Assembled stiffness and mass in a bandwidth-reducing internal node order.
// The permutation maps mesh node ids to solver positions; crack-face
// duplicates sit next to their partners so the band stays narrow even though
// the mesh appends them at the end.
struct StiffnessMass {
  BandedMatrix k;
  BandedMatrix m;
  std::vector<int> perm;  // mesh id -> solver position
  int half_bandwidth = 0;
};

std::shared_ptr<const StiffnessMass> assemble_operators(const Mesh& mesh,
                                                        const BilayerPlate& plate,
                                                        int quadrature_order = 3);

// Factorized S = K - omega^2 M; solves right-hand sides given in mesh order.
class SystemFactor {
 public:
  SystemFactor(const StiffnessMass& km, double omega);

  Eigen::VectorXcd solve(const Eigen::VectorXcd& b_mesh) const;
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& b_mesh) const;

 private:
  const std::vector<int>* perm_;
  BandedLU lu_;
};

// S = K - omega^2 M; real-valued storage, complex application. All public
// vectors are in mesh node order.
class GlobalSystem {
 public:
  GlobalSystem(std::shared_ptr<const StiffnessMass> km, double omega);

  int size() const { return km_->k.size(); }
  double omega() const { return omega_; }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
  double coeff(int i, int j) const;

  SystemFactor factor() const { return SystemFactor(*km_, omega_); }
  const StiffnessMass& operators() const { return *km_; }

 private:
  std::shared_ptr<const StiffnessMass> km_;
  double omega_;
};

GlobalSystem assemble_global(const Mesh& mesh, const BilayerPlate& plate, double omega,
                             int quadrature_order = 3);

}  // namespace shdtn
