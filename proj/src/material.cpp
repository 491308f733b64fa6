#include "shdtn/material.hpp"

#include <algorithm>
#include <stdexcept>

namespace shdtn {

Material builtin_material(const std::string& name) {
  std::string key = name;
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (key == "steel") return {"steel", 79.0e9, 7800.0, 115.5e9};
  if (key == "aluminum") return {"aluminum", 26.1e9, 2700.0, 58.2e9};
  if (key == "titanium") return {"titanium", 44.6e9, 4500.0, 66.9e9};
  throw std::invalid_argument("unknown material '" + name +
                              "' (valid: steel, aluminum, titanium)");
}

void BilayerPlate::validate() const {
  auto check_material = [](const Material& m, const std::string& which) {
    if (!(m.mu > 0.0)) throw std::invalid_argument(which + ".mu must be positive");
    if (!(m.rho > 0.0)) throw std::invalid_argument(which + ".rho must be positive");
  };
  check_material(layer_a, "layer_a");
  check_material(layer_b, "layer_b");
  if (!(h_a > 0.0)) throw std::invalid_argument("h_a must be positive");
  if (!(h_b > 0.0)) throw std::invalid_argument("h_b must be positive");
  if (crack_length < 0.0) throw std::invalid_argument("crack_length must be non-negative");
  if (!(crack_length < 2.0 * a_virtual))
    throw std::invalid_argument("crack_length must be less than 2*a_virtual");
  if (!(a_virtual < plate_half_length))
    throw std::invalid_argument("a_virtual must be less than plate_half_length");
}

}  // namespace shdtn
