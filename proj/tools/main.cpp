#include <CLI11.hpp>

#include <cmath>
#include <iostream>

#include "shdtn/config_io.hpp"
#include "shdtn/postprocess.hpp"

namespace {

int run_dispersion(const std::string& scenario_path, const std::string& out_path) {
  const shdtn::Scenario scenario = shdtn::load_scenario(scenario_path);
  const auto rows = shdtn::dispersion_table(scenario);
  shdtn::write_dispersion_csv(out_path, rows);
  std::cout << "wrote " << rows.size() << " dispersion rows to " << out_path << "\n";
  return 0;
}

int run_solve(const std::string& scenario_path, double freq_mhz, const std::string& out_path,
              const std::string& field_path, const std::string& normalized_path,
              const std::string& mesh_dump_path, int field_nx, int field_ny) {
  shdtn::Scenario scenario = shdtn::load_scenario(scenario_path);
  const double freq = freq_mhz > 0.0 ? freq_mhz * 1e6 : scenario.frequencies.front();
  const double omega = 2.0 * M_PI * freq;

  const shdtn::Mesh mesh = shdtn::build_mesh(scenario.plate, scenario.mesh.elems_x,
                                             scenario.mesh.elems_y_a, scenario.mesh.elems_y_b);
  if (!mesh_dump_path.empty()) shdtn::write_mesh_csv(mesh_dump_path, mesh);

  const auto modes = shdtn::find_propagating_modes(omega, scenario.plate);
  const auto operators =
      shdtn::assemble_operators(mesh, scenario.plate, scenario.mesh.quadrature_order);
  const shdtn::ScatterSolution sol = shdtn::run_scatter(
      scenario.plate, mesh, modes, operators, omega, scenario.incident_mode_index);
  const shdtn::ModalCoefficients coeffs = shdtn::rt_coefficients(sol);
  shdtn::write_result_json(out_path, sol, coeffs);

  std::cout << "f = " << freq / 1e6 << " MHz, N = " << modes.size()
            << " modes, energy error = " << coeffs.energy_error << "\n";
  for (int i = 0; i < coeffs.reflection.size(); ++i)
    std::cout << "  mode " << i + 1 << ": R = " << coeffs.reflection[i]
              << ", T = " << coeffs.transmission[i] << "\n";

  if (!field_path.empty())
    shdtn::write_field_csv(field_path, shdtn::total_field_grid(sol, mesh, field_nx, field_ny));
  if (!normalized_path.empty())
    shdtn::write_normalized_csv(
        normalized_path,
        shdtn::normalized_boundary_displacement(sol, mesh, shdtn::Surface::Top),
        shdtn::normalized_boundary_displacement(sol, mesh, shdtn::Surface::Bottom));
  return 0;
}

int run_sweep(const std::string& scenario_path, const std::string& out_path) {
  const shdtn::Scenario scenario = shdtn::load_scenario(scenario_path);
  const shdtn::SweepTable table = shdtn::frequency_sweep(scenario);
  shdtn::write_sweep_csv(out_path, table);
  int failures = 0;
  for (const auto& row : table.rows)
    if (row.status != "ok") ++failures;
  std::cout << "wrote " << table.rows.size() << " sweep rows to " << out_path;
  if (failures > 0) std::cout << " (" << failures << " failed frequencies)";
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DtN-FEM scattering of SH guided waves by an interface debond"};
  app.require_subcommand(1);

  std::string scenario_path, out_path;
  std::string field_path, normalized_path, mesh_dump_path;
  double freq_mhz = -1.0;
  int field_nx = 301, field_ny = 41;

  CLI::App* disp = app.add_subcommand("dispersion", "propagating-mode table (CSV)");
  disp->add_option("--scenario", scenario_path, "scenario JSON")->required();
  disp->add_option("--out", out_path, "output CSV")->required();

  CLI::App* solve = app.add_subcommand("solve", "single-frequency scattering solve");
  solve->add_option("--scenario", scenario_path, "scenario JSON")->required();
  solve->add_option("--freq-mhz", freq_mhz, "frequency [MHz] (default: first in scenario)");
  solve->add_option("--out", out_path, "result JSON")->required();
  solve->add_option("--field", field_path, "total-field grid CSV");
  solve->add_option("--field-nx", field_nx, "field grid points along x1");
  solve->add_option("--field-ny", field_ny, "field grid points along x2");
  solve->add_option("--normalized", normalized_path, "normalized surface displacement CSV");
  solve->add_option("--mesh-dump", mesh_dump_path, "mesh tables CSV");

  CLI::App* sweep = app.add_subcommand("sweep", "frequency sweep (CSV)");
  sweep->add_option("--scenario", scenario_path, "scenario JSON")->required();
  sweep->add_option("--out", out_path, "output CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (disp->parsed()) return run_dispersion(scenario_path, out_path);
    if (solve->parsed())
      return run_solve(scenario_path, freq_mhz, out_path, field_path, normalized_path,
                       mesh_dump_path, field_nx, field_ny);
    if (sweep->parsed()) return run_sweep(scenario_path, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
