#include "shdtn/scatter.hpp"

#include <algorithm>
#include <iostream>
#include <stdexcept>

namespace shdtn {

using cd = std::complex<double>;

IncidentField incident_nodal_field(const GuidedMode& mode, const Mesh& mesh,
                                   std::complex<double> amplitude) {
  IncidentField inc;
  inc.mode = mode;
  inc.amplitude = amplitude;
  inc.u_inc.resize(mesh.n_nodes());
  for (const Node& n : mesh.nodes)
    inc.u_inc[n.id] = amplitude * mode.shape(n.x2) * std::exp(cd(0.0, mode.k * n.x1));
  return inc;
}

Eigen::VectorXcd build_rhs(const GlobalSystem& system, const DtnOperator& dtn,
                           const IncidentField& inc) {
  if (system.size() != inc.u_inc.size())
    throw std::invalid_argument("build_rhs: system/incident size mismatch");
  const int n0 = inc.mode.index - 1;
  if (n0 < 0 || n0 >= dtn.n_modes())
    throw std::invalid_argument("build_rhs: incident mode not in the DtN basis");

  const int p = system.size();
  const double ka = inc.mode.k * dtn.boundary_distance();
  // Incident tractions: +sigma_31 on Gamma2 and -sigma_31 on Gamma1; both are
  // the right-going mode evaluated at x1 = +-a, expressed via the stored
  // outgoing-mode force columns.
  Eigen::VectorXcd f_inc = inc.amplitude * dtn.modal_force(Side::Gamma2, n0, p);
  f_inc -= inc.amplitude * std::exp(cd(0.0, -2.0 * ka)) * dtn.modal_force(Side::Gamma1, n0, p);
  return f_inc - system.apply(inc.u_inc);
}

Eigen::VectorXcd solve_scattered(const GlobalSystem& system, const DtnOperator& dtn,
                                 const Eigen::VectorXcd& rhs) {
  if (system.size() != rhs.size())
    throw std::invalid_argument("solve_scattered: dimension mismatch");
  const int p = system.size();
  const int n = dtn.n_modes();

  const SystemFactor factor = system.factor();

  // Low-rank factors: W = [fg+ fg-] (P x 2N), Z = [R^-1 ghat+; R^-1 ghat-].
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(p, 2 * n);
  for (int j = 0; j < n; ++j) {
    w.col(j) = dtn.modal_force(Side::Gamma2, j, p);
    w.col(n + j) = dtn.modal_force(Side::Gamma1, j, p);
  }

  auto apply_z = [&](const Eigen::MatrixXcd& x) {
    Eigen::MatrixXcd zx(2 * n, x.cols());
    for (int c = 0; c < x.cols(); ++c) {
      zx.col(c).head(n) = dtn.project(Side::Gamma2, x.col(c));
      zx.col(c).tail(n) = dtn.project(Side::Gamma1, x.col(c));
    }
    return zx;
  };

  const Eigen::MatrixXcd x_w = factor.solve(w);
  Eigen::MatrixXcd cap = Eigen::MatrixXcd::Identity(2 * n, 2 * n) - apply_z(x_w);
  Eigen::PartialPivLU<Eigen::MatrixXcd> cap_lu(cap);

  const Eigen::VectorXcd x0 = factor.solve(rhs);
  const Eigen::VectorXcd correction = cap_lu.solve(apply_z(x0));
  Eigen::VectorXcd u = x0 + x_w * correction;

  const double rhs_norm = rhs.norm();
  if (rhs_norm > 0.0) {
    const double res = (system.apply(u) - dtn.apply(u) - rhs).norm();
    if (!(res <= 1e-10 * rhs_norm))
      throw std::runtime_error("scattered solve residual " + std::to_string(res / rhs_norm) +
                               " exceeds 1e-10 at omega=" + std::to_string(system.omega()));
  }
  return u;
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> extract_alpha(const Eigen::VectorXcd& u_sca,
                                                            const DtnOperator& dtn) {
  return {dtn.project(Side::Gamma2, u_sca), dtn.project(Side::Gamma1, u_sca)};
}

ScatterSolution run_scatter(const BilayerPlate& plate, const Mesh& mesh,
                            const std::vector<GuidedMode>& modes,
                            std::shared_ptr<const StiffnessMass> operators, double omega,
                            int incident_mode_index, std::complex<double> amplitude,
                            bool warn) {
  if (incident_mode_index < 1 || incident_mode_index > int(modes.size()))
    throw std::invalid_argument("incident mode index " + std::to_string(incident_mode_index) +
                                " exceeds propagating mode count N=" +
                                std::to_string(modes.size()));
  if (warn) {
    const double lambda1 = 2.0 * M_PI / modes.front().k;
    const double clearance = plate.a_virtual - 0.5 * plate.crack_length;
    if (clearance < 2.0 * lambda1)
      std::cerr << "warning: virtual-boundary clearance " << clearance
                << " m is below 2*lambda_1 = " << 2.0 * lambda1
                << " m at f = " << omega / (2.0 * M_PI) << " Hz\n";
    const double spacing =
        std::max({0.5 * mesh.dx, 0.5 * mesh.dy_a, 0.5 * mesh.dy_b});
    if (lambda1 < 10.0 * spacing)
      std::cerr << "warning: fewer than 10 nodes per wavelength (lambda_1 = " << lambda1
                << " m, node spacing = " << spacing << " m)\n";
  }

  ScatterSolution sol;
  sol.omega = omega;
  sol.modes = modes;
  sol.incident = incident_nodal_field(modes[incident_mode_index - 1], mesh, amplitude);

  const DtnOperator dtn = build_dtn(mesh, modes, plate.a_virtual);
  const GlobalSystem system(std::move(operators), omega);
  const Eigen::VectorXcd rhs = build_rhs(system, dtn, sol.incident);
  sol.u_sca = solve_scattered(system, dtn, rhs);
  std::tie(sol.alpha_plus, sol.alpha_minus) = extract_alpha(sol.u_sca, dtn);
  return sol;
}

}  // namespace shdtn
