#pragma once

#include <vector>

#include "shdtn/material.hpp"

namespace shdtn {

struct MeshSpec {
  int elems_x = 320;     // elements along x1 over [-a, a] (may be snapped up)
  int elems_y_a = 12;    // elements through layer A
  int elems_y_b = 12;    // elements through layer B
  int quadrature_order = 3;
};

// A full problem description: geometry, frequency grid, incidence, mesh density.
struct Scenario {
  BilayerPlate plate;
  std::vector<double> frequencies;  // [Hz]
  int incident_mode_index = 1;      // 1-based, mode 1 = largest wavenumber
  MeshSpec mesh;

  void validate() const;
};

}  // namespace shdtn
