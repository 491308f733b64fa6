#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "shdtn/dtn.hpp"
#include "shdtn/fem_assembly.hpp"

namespace shdtn {

// Right-going incident guided wave sampled at the mesh nodes.
struct IncidentField {
  GuidedMode mode;
  std::complex<double> amplitude{1.0, 0.0};
  Eigen::VectorXcd u_inc;
};

struct ScatterSolution {
  Eigen::VectorXcd u_sca;
  Eigen::VectorXcd alpha_plus;
  Eigen::VectorXcd alpha_minus;
  double omega = 0.0;
  IncidentField incident;
  std::vector<GuidedMode> modes;
};

IncidentField incident_nodal_field(const GuidedMode& mode, const Mesh& mesh,
                                   std::complex<double> amplitude);

// rhs = F^inc - S U^inc, with F^inc the incident-traction nodal forces on the
// virtual boundaries. Up to discretization error the result is supported on
// the crack faces and the virtual boundaries.
Eigen::VectorXcd build_rhs(const GlobalSystem& system, const DtnOperator& dtn,
                           const IncidentField& inc);

// Solves (S - F_dtn) u = rhs by a banded real factorization of S plus a
// rank-2N correction from the DtN factors. Verifies the residual to
// 1e-10 * |rhs| and throws otherwise.
Eigen::VectorXcd solve_scattered(const GlobalSystem& system, const DtnOperator& dtn,
                                 const Eigen::VectorXcd& rhs);

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> extract_alpha(const Eigen::VectorXcd& u_sca,
                                                            const DtnOperator& dtn);

// Full pipeline at one frequency on a prebuilt mesh/operator set. Emits
// wavelength-clearance and mesh-density warnings to stderr when `warn` is set.
ScatterSolution run_scatter(const BilayerPlate& plate, const Mesh& mesh,
                            const std::vector<GuidedMode>& modes,
                            std::shared_ptr<const StiffnessMass> operators, double omega,
                            int incident_mode_index,
                            std::complex<double> amplitude = {1.0, 0.0}, bool warn = true);

}  // namespace shdtn
