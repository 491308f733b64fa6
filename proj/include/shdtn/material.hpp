#pragma once

#include <cmath>
#include <string>

namespace shdtn {

// Isotropic layer material. Antiplane shear motion only involves mu and rho;
// lambda_lame is carried along for completeness but never enters the physics.
struct Material {
  std::string name;
  double mu = 0.0;           // shear modulus [Pa]
  double rho = 0.0;          // density [kg/m^3]
  double lambda_lame = 0.0;  // first Lame constant [Pa], unused

  double shear_speed() const { return std::sqrt(mu / rho); }
};

// Returns one of the built-in records (steel, aluminum, titanium) in SI units.
// Throws std::invalid_argument for unknown names.
Material builtin_material(const std::string& name);

enum class Layer { A, B };  // A above the interface (x2 > 0), B below

// Two perfectly bonded layers with a centered interface debond of length
// crack_length, truncated by virtual boundaries at x1 = +-a_virtual.
struct BilayerPlate {
  Material layer_a;
  Material layer_b;
  double h_a = 0.0;               // thickness of layer A [m]
  double h_b = 0.0;               // thickness of layer B [m]
  double crack_length = 0.0;      // debond length, centered at x1 = 0 [m]
  double a_virtual = 0.0;         // half-distance to each virtual boundary [m]
  double plate_half_length = 0.0; // L/2 [m]

  double total_thickness() const { return h_a + h_b; }
  const Material& material(Layer l) const { return l == Layer::A ? layer_a : layer_b; }
  // x2 = 0 resolves to layer A; callers needing the B-side value at the
  // interface must ask for it explicitly.
  const Material& material_at(double x2) const { return x2 >= 0.0 ? layer_a : layer_b; }
  double min_shear_speed() const {
    return std::min(layer_a.shear_speed(), layer_b.shear_speed());
  }

  // Throws std::invalid_argument naming the first violated invariant.
  void validate() const;
};

}  // namespace shdtn
