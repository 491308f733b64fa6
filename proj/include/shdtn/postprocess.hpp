#pragma once

#include <string>
#include <vector>

#include "shdtn/scatter.hpp"
#include "shdtn/scenario.hpp"

namespace shdtn {

// Reported quantities for one solve, in the incident-normalized modal basis.
struct ModalCoefficients {
  Eigen::VectorXd reflection;           // R_n = |alpha-_n| / |A|
  Eigen::VectorXd transmission;         // T_n = |alpha+_n + delta_{n,n0} A| / |A|
  Eigen::VectorXd energy_reflected;     // per-mode fraction of incident power
  Eigen::VectorXd energy_transmitted;
  double energy_error = 0.0;            // 1 - sum of the fractions
};

ModalCoefficients rt_coefficients(const ScatterSolution& sol);
double energy_balance(const ScatterSolution& sol, const std::vector<GuidedMode>& modes);

struct SurfacePoint {
  double x1 = 0.0;
  double value = 0.0;
};

enum class Surface { Top, Bottom };

// |u_sca| over |modal reconstruction| on a free surface, excluding the crack
// neighbourhood and points where the reconstruction vanishes.
std::vector<SurfacePoint> normalized_boundary_displacement(const ScatterSolution& sol,
                                                           const Mesh& mesh,
                                                           Surface surface);

struct FieldGrid {
  std::vector<double> x1s;                  // size nx
  std::vector<double> x2s;                  // size ny
  std::vector<std::complex<double>> values; // values[j*nx + i], j indexes x2
};

// Total field u_inc + u_sca interpolated onto a regular grid via the element
// shape functions; points on the crack line use the upper-face element.
FieldGrid total_field_grid(const ScatterSolution& sol, const Mesh& mesh, int nx, int ny);

struct SweepRow {
  double freq_hz = 0.0;
  int n_modes = 0;
  int incident_mode = 0;
  int mode_index = 0;  // 0 on a failed frequency
  double k = 0.0;
  double refl = 0.0, trans = 0.0;
  double e_refl = 0.0, e_trans = 0.0;
  double energy_error = 0.0;
  std::string status = "ok";
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

// One solve per scenario frequency (run concurrently), one output row per
// (frequency, mode). Per-frequency failures become error rows, not aborts.
SweepTable frequency_sweep(const Scenario& scenario);

struct DispersionRow {
  double freq_hz = 0.0;
  int mode_index = 0;
  double k = 0.0;
  double phase_velocity = 0.0;
  double power = 0.0;
};

std::vector<DispersionRow> dispersion_table(const Scenario& scenario);

void write_dispersion_csv(const std::string& path, const std::vector<DispersionRow>& rows);
void write_sweep_csv(const std::string& path, const SweepTable& table);
void write_field_csv(const std::string& path, const FieldGrid& grid);
void write_normalized_csv(const std::string& path,
                          const std::vector<SurfacePoint>& top,
                          const std::vector<SurfacePoint>& bottom);
void write_result_json(const std::string& path, const ScatterSolution& sol,
                       const ModalCoefficients& coeffs);

}  // namespace shdtn
