#include "shdtn/config_io.hpp"

#include <fstream>
#include <stdexcept>

namespace shdtn {

using nlohmann::json;

namespace {

constexpr double kGPa = 1.0e9;
constexpr double kGcc = 1.0e3;   // g/cm^3 -> kg/m^3
constexpr double kMm = 1.0e-3;
constexpr double kMHz = 1.0e6;

Material material_from_json(const json& j, const std::string& which) {
  if (j.contains("name")) {
    Material m = builtin_material(j.at("name").get<std::string>());
    if (j.contains("mu_gpa")) m.mu = j.at("mu_gpa").get<double>() * kGPa;
    if (j.contains("rho_gcc")) m.rho = j.at("rho_gcc").get<double>() * kGcc;
    if (j.contains("lambda_gpa")) m.lambda_lame = j.at("lambda_gpa").get<double>() * kGPa;
    return m;
  }
  if (!j.contains("mu_gpa") || !j.contains("rho_gcc"))
    throw std::invalid_argument(which + " needs either \"name\" or \"mu_gpa\"+\"rho_gcc\"");
  Material m;
  m.name = j.value("label", "custom");
  m.mu = j.at("mu_gpa").get<double>() * kGPa;
  m.rho = j.at("rho_gcc").get<double>() * kGcc;
  m.lambda_lame = j.value("lambda_gpa", 0.0) * kGPa;
  return m;
}

json material_to_json(const Material& m) {
  json j;
  j["name"] = m.name.empty() ? "custom" : m.name;
  j["mu_gpa"] = m.mu / kGPa;
  j["rho_gcc"] = m.rho / kGcc;
  j["lambda_gpa"] = m.lambda_lame / kGPa;
  return j;
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  Scenario s;
  // Geometry defaults: 1 mm plate split evenly, domain 30h long with the
  // virtual boundaries halfway out (h = 0.5 mm).
  const double h = 0.5;  // mm
  if (j.contains("plate")) {
    const json& p = j.at("plate");
    s.plate.layer_a = p.contains("layer_a") ? material_from_json(p.at("layer_a"), "layer_a")
                                            : builtin_material("steel");
    s.plate.layer_b = p.contains("layer_b") ? material_from_json(p.at("layer_b"), "layer_b")
                                            : builtin_material("steel");
    s.plate.h_a = p.value("h_a_mm", h) * kMm;
    s.plate.h_b = p.value("h_b_mm", h) * kMm;
    s.plate.crack_length = p.value("crack_length_mm", 0.0) * kMm;
    s.plate.a_virtual = p.value("a_virtual_mm", 7.5 * h) * kMm;
    s.plate.plate_half_length = p.value("plate_half_length_mm", 15.0 * h) * kMm;
  } else {
    s.plate.layer_a = builtin_material("steel");
    s.plate.layer_b = builtin_material("steel");
    s.plate.h_a = h * kMm;
    s.plate.h_b = h * kMm;
    s.plate.crack_length = 0.0;
    s.plate.a_virtual = 7.5 * h * kMm;
    s.plate.plate_half_length = 15.0 * h * kMm;
  }

  s.frequencies.clear();
  for (double f : j.value("frequencies_mhz", std::vector<double>{2.0}))
    s.frequencies.push_back(f * kMHz);
  s.incident_mode_index = j.value("incident_mode", 1);

  if (j.contains("mesh")) {
    const json& m = j.at("mesh");
    s.mesh.elems_x = m.value("elems_x", s.mesh.elems_x);
    s.mesh.elems_y_a = m.value("elems_y_a", s.mesh.elems_y_a);
    s.mesh.elems_y_b = m.value("elems_y_b", s.mesh.elems_y_b);
    s.mesh.quadrature_order = m.value("quadrature_order", s.mesh.quadrature_order);
  }

  s.validate();
  return s;
}

json scenario_to_json(const Scenario& s) {
  json j;
  json p;
  p["layer_a"] = material_to_json(s.plate.layer_a);
  p["layer_b"] = material_to_json(s.plate.layer_b);
  p["h_a_mm"] = s.plate.h_a / kMm;
  p["h_b_mm"] = s.plate.h_b / kMm;
  p["crack_length_mm"] = s.plate.crack_length / kMm;
  p["a_virtual_mm"] = s.plate.a_virtual / kMm;
  p["plate_half_length_mm"] = s.plate.plate_half_length / kMm;
  j["plate"] = p;

  std::vector<double> f_mhz;
  for (double f : s.frequencies) f_mhz.push_back(f / kMHz);
  j["frequencies_mhz"] = f_mhz;
  j["incident_mode"] = s.incident_mode_index;

  json m;
  m["elems_x"] = s.mesh.elems_x;
  m["elems_y_a"] = s.mesh.elems_y_a;
  m["elems_y_b"] = s.mesh.elems_y_b;
  m["quadrature_order"] = s.mesh.quadrature_order;
  j["mesh"] = m;
  return j;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("scenario parse error in " + path + ": " + e.what());
  }
  return scenario_from_json(j);
}

void write_scenario(const std::string& path, const Scenario& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scenario file: " + path);
  out << scenario_to_json(s).dump(2) << "\n";
}

void Scenario::validate() const {
  plate.validate();
  if (frequencies.empty()) throw std::invalid_argument("frequencies must be non-empty");
  for (double f : frequencies)
    if (!(f > 0.0)) throw std::invalid_argument("frequencies must all be positive");
  if (incident_mode_index < 1)
    throw std::invalid_argument("incident_mode must be >= 1");
  if (mesh.elems_x < 2 || mesh.elems_y_a < 2 || mesh.elems_y_b < 2)
    throw std::invalid_argument("mesh element counts must be >= 2");
  if (mesh.quadrature_order < 3)
    throw std::invalid_argument("quadrature_order must be >= 3");
}

}  // namespace shdtn
