#include "shdtn/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "shdtn/fem_assembly.hpp"

namespace shdtn {

using cd = std::complex<double>;

ModalCoefficients rt_coefficients(const ScatterSolution& sol) {
  const cd amp = sol.incident.amplitude;
  const double amp_abs = std::abs(amp);
  if (!(amp_abs > 0.0)) throw std::invalid_argument("rt_coefficients: zero incident amplitude");

  const int n = int(sol.modes.size());
  const int n0 = sol.incident.mode.index - 1;
  const double p_inc = sol.modes[n0].power * amp_abs * amp_abs;

  ModalCoefficients out;
  out.reflection.resize(n);
  out.transmission.resize(n);
  out.energy_reflected.resize(n);
  out.energy_transmitted.resize(n);
  double balance = 0.0;
  for (int i = 0; i < n; ++i) {
    const cd back = sol.alpha_minus[i];
    const cd fwd = sol.alpha_plus[i] + (i == n0 ? amp : cd(0.0));
    out.reflection[i] = std::abs(back) / amp_abs;
    out.transmission[i] = std::abs(fwd) / amp_abs;
    out.energy_reflected[i] = sol.modes[i].power * std::norm(back) / p_inc;
    out.energy_transmitted[i] = sol.modes[i].power * std::norm(fwd) / p_inc;
    balance += out.energy_reflected[i] + out.energy_transmitted[i];
  }
  out.energy_error = 1.0 - balance;
  return out;
}

double energy_balance(const ScatterSolution& sol, const std::vector<GuidedMode>& modes) {
  if (modes.size() != sol.modes.size())
    throw std::invalid_argument("energy_balance: mode list size mismatch");
  return rt_coefficients(sol).energy_error;
}

std::vector<SurfacePoint> normalized_boundary_displacement(const ScatterSolution& sol,
                                                           const Mesh& mesh,
                                                           Surface surface) {
  const std::vector<int>& ids = surface == Surface::Top ? mesh.top : mesh.bottom;
  const double x2_surf = surface == Surface::Top ? mesh.h_a : -mesh.h_b;
  const double exclude = 0.5 * mesh.crack_length + mesh.dx;

  const int n = int(sol.modes.size());
  std::vector<double> shape_surf(n);
  for (int i = 0; i < n; ++i) shape_surf[i] = sol.modes[i].shape(x2_surf);

  struct Raw {
    double x1, num, den;
  };
  std::vector<Raw> raw;
  double den_max = 0.0;
  for (int id : ids) {
    const double x1 = mesh.nodes[id].x1;
    if (std::abs(x1) < exclude) continue;
    cd recon(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
      const double k = sol.modes[i].k;
      if (x1 >= 0.0)
        recon += sol.alpha_plus[i] * shape_surf[i] * std::exp(cd(0.0, k * x1));
      else
        recon += sol.alpha_minus[i] * shape_surf[i] * std::exp(cd(0.0, -k * x1));
    }
    const double den = std::abs(recon);
    den_max = std::max(den_max, den);
    raw.push_back({x1, std::abs(sol.u_sca[id]), den});
  }

  std::vector<SurfacePoint> out;
  if (den_max == 0.0) return out;
  for (const Raw& r : raw)
    if (r.den >= 1e-12 * den_max) out.push_back({r.x1, r.num / r.den});
  return out;
}

namespace {

cd interpolate_total(const Mesh& mesh, const Eigen::VectorXcd& u_total, double x1,
                     double x2) {
  const int nx = mesh.elems_x;
  const int i = std::clamp(int(std::floor((x1 + mesh.a) / mesh.dx)), 0, nx - 1);
  int j;
  double yc, dy;
  if (x2 >= 0.0) {
    const int ja = std::clamp(int(std::floor(x2 / mesh.dy_a)), 0, mesh.elems_y_a - 1);
    j = mesh.elems_y_b + ja;
    yc = (ja + 0.5) * mesh.dy_a;
    dy = mesh.dy_a;
  } else {
    j = std::clamp(int(std::floor((x2 + mesh.h_b) / mesh.dy_b)), 0, mesh.elems_y_b - 1);
    yc = -mesh.h_b + (j + 0.5) * mesh.dy_b;
    dy = mesh.dy_b;
  }
  const double xc = -mesh.a + (i + 0.5) * mesh.dx;
  const double xi = std::clamp(2.0 * (x1 - xc) / mesh.dx, -1.0, 1.0);
  const double eta = std::clamp(2.0 * (x2 - yc) / dy, -1.0, 1.0);

  const Q8Element& elem = mesh.elements[size_t(j) * nx + i];
  const ShapeValues s = shape_functions(xi, eta);
  cd value(0.0, 0.0);
  for (int c = 0; c < 8; ++c) value += s.n[c] * u_total[elem.node_ids[c]];
  return value;
}

}  // namespace

FieldGrid total_field_grid(const ScatterSolution& sol, const Mesh& mesh, int nx, int ny) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("total_field_grid: nx, ny must be >= 2");
  FieldGrid grid;
  grid.x1s.resize(nx);
  grid.x2s.resize(ny);
  grid.values.resize(size_t(nx) * ny);
  for (int i = 0; i < nx; ++i)
    grid.x1s[i] = -mesh.a + 2.0 * mesh.a * double(i) / double(nx - 1);
  for (int j = 0; j < ny; ++j)
    grid.x2s[j] = -mesh.h_b + (mesh.h_a + mesh.h_b) * double(j) / double(ny - 1);

  const Eigen::VectorXcd u_total = sol.incident.u_inc + sol.u_sca;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      grid.values[size_t(j) * nx + i] =
          interpolate_total(mesh, u_total, grid.x1s[i], grid.x2s[j]);
  return grid;
}

SweepTable frequency_sweep(const Scenario& scenario) {
  const BilayerPlate& plate = scenario.plate;
  const Mesh mesh =
      build_mesh(plate, scenario.mesh.elems_x, scenario.mesh.elems_y_a, scenario.mesh.elems_y_b);
  const auto operators = assemble_operators(mesh, plate, scenario.mesh.quadrature_order);

  const int nf = int(scenario.frequencies.size());
  std::vector<std::vector<SweepRow>> slots(nf);

  auto solve_one = [&](int fi) {
    const double f = scenario.frequencies[fi];
    const double omega = 2.0 * M_PI * f;
    std::vector<SweepRow>& rows = slots[fi];
    try {
      const std::vector<GuidedMode> modes = find_propagating_modes(omega, plate);
      const ScatterSolution sol =
          run_scatter(plate, mesh, modes, operators, omega, scenario.incident_mode_index,
                      {1.0, 0.0}, /*warn=*/false);
      const ModalCoefficients mc = rt_coefficients(sol);
      for (size_t i = 0; i < modes.size(); ++i) {
        SweepRow row;
        row.freq_hz = f;
        row.n_modes = int(modes.size());
        row.incident_mode = scenario.incident_mode_index;
        row.mode_index = int(i) + 1;
        row.k = modes[i].k;
        row.refl = mc.reflection[int(i)];
        row.trans = mc.transmission[int(i)];
        row.e_refl = mc.energy_reflected[int(i)];
        row.e_trans = mc.energy_transmitted[int(i)];
        row.energy_error = mc.energy_error;
        rows.push_back(row);
      }
    } catch (const std::exception& e) {
      SweepRow row;
      row.freq_hz = f;
      row.incident_mode = scenario.incident_mode_index;
      row.k = row.refl = row.trans = row.e_refl = row.e_trans = row.energy_error =
          std::nan("");
      row.status = e.what();
      rows.push_back(row);
    }
  };

  const int n_workers =
      std::max(1, std::min<int>(int(std::thread::hardware_concurrency()), nf));
  if (n_workers <= 1) {
    for (int fi = 0; fi < nf; ++fi) solve_one(fi);
  } else {
    std::vector<std::thread> pool;
    std::mutex next_mutex;
    int next = 0;
    for (int w = 0; w < n_workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          int fi;
          {
            std::lock_guard<std::mutex> lock(next_mutex);
            if (next >= nf) return;
            fi = next++;
          }
          solve_one(fi);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  SweepTable table;
  int prev_n_modes = -1;
  for (const auto& rows : slots) {
    for (const SweepRow& row : rows) {
      if (row.status == "ok") {
        if (prev_n_modes > 0 && row.n_modes != prev_n_modes)
          std::cerr << "warning: propagating mode count changed from " << prev_n_modes
                    << " to " << row.n_modes << " at " << row.freq_hz
                    << " Hz; incident mode " << row.incident_mode
                    << " is tracked by sorted-k position\n";
        prev_n_modes = row.n_modes;
        break;
      }
    }
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  }
  return table;
}

std::vector<DispersionRow> dispersion_table(const Scenario& scenario) {
  std::vector<DispersionRow> rows;
  for (double f : scenario.frequencies) {
    const std::vector<GuidedMode> modes =
        find_propagating_modes(2.0 * M_PI * f, scenario.plate);
    for (const GuidedMode& m : modes)
      rows.push_back({f, m.index, m.k, m.omega / m.k, m.power});
  }
  return rows;
}

namespace {

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n') c = ';';
  return s;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out.precision(12);
  return out;
}

}  // namespace

void write_dispersion_csv(const std::string& path, const std::vector<DispersionRow>& rows) {
  std::ofstream out = open_out(path);
  out << "freq_hz,mode_index,k_rad_per_m,phase_velocity_m_per_s,power_w_per_m\n";
  for (const DispersionRow& r : rows)
    out << r.freq_hz << "," << r.mode_index << "," << r.k << "," << r.phase_velocity << ","
        << r.power << "\n";
}

void write_sweep_csv(const std::string& path, const SweepTable& table) {
  std::ofstream out = open_out(path);
  out << "freq_hz,n_modes,incident_mode,mode_index,k_rad_per_m,refl_abs,trans_abs,"
         "energy_refl_frac,energy_trans_frac,energy_error,status\n";
  for (const SweepRow& r : table.rows)
    out << r.freq_hz << "," << r.n_modes << "," << r.incident_mode << "," << r.mode_index
        << "," << r.k << "," << r.refl << "," << r.trans << "," << r.e_refl << ","
        << r.e_trans << "," << r.energy_error << "," << sanitize(r.status) << "\n";
}

void write_field_csv(const std::string& path, const FieldGrid& grid) {
  std::ofstream out = open_out(path);
  out << "x1_m,x2_m,re_u3,im_u3,abs_u3\n";
  for (size_t j = 0; j < grid.x2s.size(); ++j)
    for (size_t i = 0; i < grid.x1s.size(); ++i) {
      const cd v = grid.values[j * grid.x1s.size() + i];
      out << grid.x1s[i] << "," << grid.x2s[j] << "," << v.real() << "," << v.imag() << ","
          << std::abs(v) << "\n";
    }
}

void write_normalized_csv(const std::string& path, const std::vector<SurfacePoint>& top,
                          const std::vector<SurfacePoint>& bottom) {
  std::ofstream out = open_out(path);
  out << "surface,x1_m,normalized_abs\n";
  for (const SurfacePoint& p : top) out << "top," << p.x1 << "," << p.value << "\n";
  for (const SurfacePoint& p : bottom) out << "bottom," << p.x1 << "," << p.value << "\n";
}

void write_result_json(const std::string& path, const ScatterSolution& sol,
                       const ModalCoefficients& coeffs) {
  nlohmann::json j;
  j["freq_hz"] = sol.omega / (2.0 * M_PI);
  j["n_modes"] = int(sol.modes.size());
  auto complex_list = [](const Eigen::VectorXcd& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back({v[i].real(), v[i].imag()});
    return arr;
  };
  j["alpha_plus"] = complex_list(sol.alpha_plus);
  j["alpha_minus"] = complex_list(sol.alpha_minus);
  j["reflection"] = std::vector<double>(coeffs.reflection.begin(), coeffs.reflection.end());
  j["transmission"] =
      std::vector<double>(coeffs.transmission.begin(), coeffs.transmission.end());
  j["energy_error"] = coeffs.energy_error;

  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace shdtn
