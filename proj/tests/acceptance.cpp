// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shdtn/postprocess.hpp"
#include "test_helpers.hpp"

using namespace shdtn;
using namespace shdtn::testing;
using cd = std::complex<double>;

namespace {

int g_failures = 0;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

void report(int number, const std::string& name, bool pass, double seconds,
            const std::string& detail) {
  std::printf("%s  %d. %-28s (%6.2f s)  %s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              seconds, detail.c_str());
  if (!pass) ++g_failures;
}

void run(int number, const std::string& name, double budget_s,
         const std::function<std::pair<bool, std::string>()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    std::tie(pass, detail) = body();
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0.0 && seconds > budget_s) {
    pass = false;
    detail += " [over " + std::to_string(budget_s) + " s budget]";
  }
  report(number, name, pass, seconds, detail);
}

MeshSpec default_mesh() { return MeshSpec{}; }

ScatterSolution solve_once(const BilayerPlate& plate, const Mesh& mesh,
                           std::shared_ptr<const StiffnessMass> ops, double f_hz,
                           int incident) {
  const double omega = 2.0 * M_PI * f_hz;
  const auto modes = find_propagating_modes(omega, plate);
  return run_scatter(plate, mesh, modes, std::move(ops), omega, incident, cd(1.0), false);
}

// ---------------------------------------------------------------- criterion 1
std::pair<bool, std::string> dispersion_oracle() {
  const BilayerPlate plate = make_plate("steel", "steel");
  const double c = plate.layer_a.shear_speed();
  const double d = plate.total_thickness();
  double worst = 0.0;
  for (double f_mhz : {0.5, 1.0, 2.0, 3.0, 5.0}) {
    const double omega = 2.0 * M_PI * f_mhz * 1e6;
    const auto modes = find_propagating_modes(omega, plate);
    const size_t expected_count = 1 + size_t(std::floor(2.0 * d * f_mhz * 1e6 / c));
    if (modes.size() != expected_count)
      return {false, "mode count mismatch at " + std::to_string(f_mhz) + " MHz"};
    const auto expected = homogeneous_wavenumbers(omega, c, d);
    for (size_t i = 0; i < modes.size(); ++i)
      worst = std::max(worst, std::abs(modes[i].k - expected[i]) / expected[i]);
  }
  return {worst <= 1e-8, "max rel k error = " + sci(worst)};
}

// ---------------------------------------------------------------- criterion 2
std::pair<bool, std::string> orthogonality() {
  double worst = 0.0;
  for (const char* upper : {"steel", "aluminum", "titanium"})
    for (double f : {2e6, 5e6}) {
      const BilayerPlate plate = make_plate(upper, "steel");
      const auto modes = find_propagating_modes(2.0 * M_PI * f, plate);
      const Eigen::MatrixXd g = gram_matrix(modes);
      const double min_diag = g.diagonal().minCoeff();
      for (int r = 0; r < g.rows(); ++r)
        for (int c = 0; c < g.cols(); ++c)
          if (r != c) worst = std::max(worst, std::abs(g(r, c)) / min_diag);
    }
  return {worst <= 1e-8, "max offdiag/diag = " + sci(worst)};
}

// ---------------------------------------------------------------- criterion 3
std::pair<bool, std::string> no_crack_identity() {
  const BilayerPlate plate = make_plate("aluminum", "steel", 0.0);
  const MeshSpec ms = default_mesh();
  const Mesh mesh = build_mesh(plate, ms.elems_x, ms.elems_y_a, ms.elems_y_b);
  const auto ops = assemble_operators(mesh, plate, ms.quadrature_order);

  double worst_t = 0.0, worst_other = 0.0, worst_u = 0.0;
  int cases = 0, skipped = 0;
  for (double f_mhz : {1.0, 2.0, 3.5, 5.0}) {
    const double omega = 2.0 * M_PI * f_mhz * 1e6;
    const auto modes = find_propagating_modes(omega, plate);
    for (int inc : {1, 2}) {
      if (inc > int(modes.size())) {
        ++skipped;  // mode 2 does not propagate below its cutoff
        continue;
      }
      const auto sol = run_scatter(plate, mesh, modes, ops, omega, inc, cd(1.0), false);
      const auto mc = rt_coefficients(sol);
      worst_t = std::max(worst_t, std::abs(mc.transmission[inc - 1] - 1.0));
      for (int n = 0; n < mc.reflection.size(); ++n) {
        worst_other = std::max(worst_other, mc.reflection[n]);
        if (n != inc - 1) worst_other = std::max(worst_other, mc.transmission[n]);
      }
      worst_u = std::max(worst_u, sol.u_sca.cwiseAbs().maxCoeff() /
                                      sol.incident.u_inc.cwiseAbs().maxCoeff());
      ++cases;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%d cases (%d below cutoff): |T0-1|<=%.1e, others<=%.1e, |Usca|/|Uinc|<=%.1e",
                cases, skipped, worst_t, worst_other, worst_u);
  return {worst_t <= 1e-3 && worst_other <= 1e-3 && worst_u <= 1e-3, buf};
}

// ----------------------------------------------------------- criteria 4 and 9
struct SweepOutcome {
  SweepTable table;
  std::vector<double> freqs;
};

SweepOutcome run_energy_sweep() {
  Scenario scenario;
  scenario.plate = make_plate("aluminum", "steel", 0.5e-3);  // crack = h
  scenario.incident_mode_index = 2;
  scenario.mesh = default_mesh();
  for (int i = 0; i < 40; ++i)
    scenario.frequencies.push_back(0.5e6 + (5e6 - 0.5e6) * double(i) / 39.0);
  SweepOutcome out;
  out.freqs = scenario.frequencies;
  out.table = frequency_sweep(scenario);
  return out;
}

std::pair<bool, std::string> energy_balance_sweep(const SweepOutcome& sweep) {
  double max_eps = 0.0, sum_eps = 0.0;
  int valid = 0, failed = 0;
  std::map<double, bool> seen;
  for (const SweepRow& row : sweep.table.rows) {
    if (row.status != "ok") {
      ++failed;
      continue;
    }
    if (seen.emplace(row.freq_hz, true).second) {
      max_eps = std::max(max_eps, std::abs(row.energy_error));
      sum_eps += std::abs(row.energy_error);
      ++valid;
    }
  }
  if (valid == 0) return {false, "no valid sweep rows"};
  const double mean_eps = sum_eps / valid;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%d valid freqs (%d below mode-2 cutoff): max|eps|=%.3e mean=%.3e", valid,
                failed, max_eps, mean_eps);
  return {max_eps <= 5e-3 && mean_eps <= 1e-3, buf};
}

std::pair<bool, std::string> cutoff_fluctuation(const SweepOutcome& sweep) {
  const BilayerPlate plate = make_plate("aluminum", "steel", 0.5e-3);
  const auto& freqs = sweep.freqs;
  const int nf = int(freqs.size());
  const double df = freqs[1] - freqs[0];

  // R/T series per mode index over the frequency grid (NaN where missing)
  std::map<int, std::vector<double>> refl, trans;
  std::vector<bool> row_ok(nf, false);
  for (const SweepRow& row : sweep.table.rows) {
    if (row.status != "ok") continue;
    const int fi = int(std::lround((row.freq_hz - freqs[0]) / df));
    row_ok[fi] = true;
    auto& r = refl[row.mode_index];
    auto& t = trans[row.mode_index];
    if (r.empty()) r.assign(nf, std::nan(""));
    if (t.empty()) t.assign(nf, std::nan(""));
    r[fi] = row.refl;
    t[fi] = row.trans;
  }

  int first_ok = nf;
  for (int i = 0; i < nf; ++i)
    if (row_ok[i]) {
      first_ok = i;
      break;
    }

  // new-mode cutoffs strictly inside the usable window
  std::vector<double> cutoffs;
  for (double fc : new_mode_frequencies(plate, freqs[0], freqs[nf - 1]))
    if (fc > freqs[first_ok] + 2.0 * df && fc < freqs[nf - 1] - 2.0 * df) cutoffs.push_back(fc);
  if (cutoffs.empty()) return {false, "no interior cutoffs to test"};

  std::string detail;
  bool all_found = true;
  for (double fc : cutoffs) {
    const int ic = int(std::lround((fc - freqs[0]) / df));
    bool found = false;
    for (const auto& series_map : {refl, trans}) {
      for (const auto& [mode, series] : series_map) {
        // discrete derivative sign change within +-2 steps of the cutoff
        for (int i = std::max(first_ok, ic - 2); i + 2 <= std::min(nf - 1, ic + 2); ++i) {
          const double d1 = series[i + 1] - series[i];
          const double d2 = series[i + 2] - series[i + 1];
          if (std::isfinite(d1) && std::isfinite(d2) && d1 * d2 < 0.0) {
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (found) break;
    }
    detail += (detail.empty() ? "" : ", ") + std::to_string(fc / 1e6) + " MHz " +
              (found ? "ok" : "missed");
    all_found = all_found && found;
  }
  return {all_found, "cutoffs: " + detail};
}

// ---------------------------------------------------------------- criterion 5
std::pair<bool, std::string> far_field_normalization() {
  const BilayerPlate plate = make_plate("aluminum", "steel", 0.5e-3);
  const MeshSpec ms = default_mesh();
  const Mesh mesh = build_mesh(plate, ms.elems_x, ms.elems_y_a, ms.elems_y_b);
  const auto ops = assemble_operators(mesh, plate, ms.quadrature_order);

  double worst = 0.0;
  for (double f : {2e6, 5e6}) {
    const ScatterSolution sol = solve_once(plate, mesh, ops, f, 1);
    for (Surface surf : {Surface::Top, Surface::Bottom}) {
      const auto points = normalized_boundary_displacement(sol, mesh, surf);
      if (points.empty()) return {false, "no surface points"};
      // outermost points on each side sit on the virtual boundaries
      double left = 0.0, right = 0.0;
      double x_left = 0.0, x_right = 0.0;
      for (const SurfacePoint& pt : points) {
        if (pt.x1 <= x_left) {
          x_left = pt.x1;
          left = pt.value;
        }
        if (pt.x1 >= x_right) {
          x_right = pt.x1;
          right = pt.value;
        }
      }
      worst = std::max({worst, std::abs(left - 1.0), std::abs(right - 1.0)});
    }
  }
  return {worst <= 0.02, "max |normalized - 1| at the boundaries = " + sci(worst)};
}

// ---------------------------------------------------------------- criterion 6
std::pair<bool, std::string> near_total_transmission() {
  const BilayerPlate plate = make_plate("aluminum", "steel", 0.5e-3);
  const MeshSpec ms = default_mesh();
  const Mesh mesh = build_mesh(plate, ms.elems_x, ms.elems_y_a, ms.elems_y_b);
  const ScatterSolution sol =
      solve_once(plate, mesh, assemble_operators(mesh, plate), 2e6, 1);
  const ModalCoefficients mc = rt_coefficients(sol);
  char buf[80];
  std::snprintf(buf, sizeof(buf), "R1=%.4f T1=%.4f", mc.reflection[0], mc.transmission[0]);
  return {mc.reflection[0] < 0.1 && mc.transmission[0] > 0.95, buf};
}

// ---------------------------------------------------------------- criterion 7
std::pair<bool, std::string> antisymmetry() {
  const BilayerPlate plate = make_plate("steel", "steel", 0.5e-3);
  const MeshSpec ms = default_mesh();
  const Mesh mesh = build_mesh(plate, ms.elems_x, ms.elems_y_a, ms.elems_y_b);
  const ScatterSolution sol =
      solve_once(plate, mesh, assemble_operators(mesh, plate), 2e6, 2);
  // even row count: no grid row sits on the interface, where the field
  // legitimately jumps across the open crack
  const FieldGrid grid = total_field_grid(sol, mesh, 301, 40);

  const int nx = int(grid.x1s.size());
  const int ny = int(grid.x2s.size());
  double peak = 0.0;
  for (const cd& v : grid.values) peak = std::max(peak, std::abs(v));
  double worst = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const cd sum = grid.values[size_t(j) * nx + i] + grid.values[size_t(ny - 1 - j) * nx + i];
      worst = std::max(worst, std::abs(sum));
    }
  return {worst <= 0.01 * peak,
          "max |u(x2)+u(-x2)| / max|u| = " + sci(worst / peak)};
}

// ---------------------------------------------------------------- criterion 8
std::pair<bool, std::string> mesh_convergence() {
  const BilayerPlate plate = make_plate("aluminum", "steel", 0.5e-3);
  const MeshSpec ms = default_mesh();

  auto alphas = [&](int nx, int nya, int nyb) {
    const Mesh mesh = build_mesh(plate, nx, nya, nyb);
    return solve_once(plate, mesh, assemble_operators(mesh, plate, ms.quadrature_order), 2e6,
                      2);
  };
  const ScatterSolution coarse = alphas(ms.elems_x, ms.elems_y_a, ms.elems_y_b);
  const ScatterSolution fine = alphas(2 * ms.elems_x, 2 * ms.elems_y_a, 2 * ms.elems_y_b);

  double worst = 0.0;
  for (int n = 0; n < coarse.alpha_plus.size(); ++n) {
    const double dp = std::abs(std::abs(coarse.alpha_plus[n]) - std::abs(fine.alpha_plus[n]));
    const double dm =
        std::abs(std::abs(coarse.alpha_minus[n]) - std::abs(fine.alpha_minus[n]));
    worst = std::max(worst, dp / std::max(std::abs(fine.alpha_plus[n]), 1e-6));
    worst = std::max(worst, dm / std::max(std::abs(fine.alpha_minus[n]), 1e-6));
  }
  return {worst <= 0.01, "max relative |alpha| change = " + sci(worst)};
}

}  // namespace

int main() {
  std::printf("acceptance criteria\n");
  run(1, "dispersion oracle", 1.0, dispersion_oracle);
  run(2, "mode orthogonality", 1.0, orthogonality);
  run(3, "no-crack identity", 30.0, no_crack_identity);

  SweepOutcome sweep;
  run(4, "energy balance sweep", 300.0, [&] {
    sweep = run_energy_sweep();
    return energy_balance_sweep(sweep);
  });
  run(5, "far-field normalization", 0.0, far_field_normalization);
  run(6, "near-total transmission", 0.0, near_total_transmission);
  run(7, "field antisymmetry", 0.0, antisymmetry);
  run(8, "mesh convergence", 0.0, mesh_convergence);
  run(9, "cutoff fluctuation", 0.0, [&] { return cutoff_fluctuation(sweep); });

  std::printf("%d of 9 criteria passed\n", 9 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
