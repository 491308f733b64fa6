#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "shdtn/material.hpp"

namespace shdtn {

// Transverse behaviour of one mode inside one layer. The coordinate t is the
// distance from that layer's traction-free face, so the face condition
// d(shape)/dt = 0 at t = 0 holds by construction.
struct LayerWave {
  double mu = 0.0;        // layer shear modulus [Pa]
  double h = 0.0;         // layer thickness [m]
  double gamma = 0.0;     // |transverse wavenumber| [rad/m]
  bool oscillatory = true;
  double amp = 0.0;

  double value(double t) const {
    return amp * (oscillatory ? std::cos(gamma * t) : std::cosh(gamma * t));
  }
  double deriv(double t) const {  // d/dt
    return amp * gamma * (oscillatory ? -std::sin(gamma * t) : std::sinh(gamma * t));
  }
};

// One propagating SH guided mode of the intact plate, normalized to
// max |u3(x2)| = 1. Modes are indexed 1-based in order of decreasing k.
struct GuidedMode {
  int index = 0;
  double omega = 0.0;      // [rad/s]
  double k = 0.0;          // [rad/m]
  LayerWave layer_a;       // x2 in [0, h_a]
  LayerWave layer_b;       // x2 in [-h_b, 0]
  double norm = 1.0;       // scale applied to the raw amplitudes
  double gram_diag = 0.0;  // integral of mu * u3^2 over the thickness
  double power = 0.0;      // time-averaged flux per unit width [W/m]

  double h_a() const { return layer_a.h; }
  double h_b() const { return layer_b.h; }

  // u3(x2); throws std::domain_error outside [-h_b, h_a].
  double shape(double x2) const;
  // Same, but forcing the named layer's formula (only differs at x2 = 0).
  double shape_in_layer(Layer l, double x2) const;
  // d u3 / d x2
  double shape_derivative(double x2) const;

  // sigma_31 amplitude = direction * i * mu(x2) * k * u3(x2).
  // direction +1 for +x1 propagation, -1 for -x1 (Layer picks mu at x2 = 0).
  std::complex<double> stress(double x2, int direction) const;
  std::complex<double> stress(double x2, int direction, Layer l) const;
};

// Real dispersion function for the bilayer SH problem, continuous in k, whose
// zeros on (0, omega/min(c_A, c_B)] are exactly the propagating wavenumbers.
// Written in a product form that stays finite where a bare
// mu*gamma*tan(gamma*h) sum would hit a pole.
double dispersion_residual(double k, double omega, const BilayerPlate& plate);

// All propagating modes at omega, sorted by decreasing k (mode 1 first).
// tol is the relative root tolerance. Throws std::runtime_error if the scan
// cannot stabilize the root count.
std::vector<GuidedMode> find_propagating_modes(double omega, const BilayerPlate& plate,
                                               double tol = 1e-12);

double mode_shape_eval(const GuidedMode& mode, double x2);
std::complex<double> mode_stress(const GuidedMode& mode, double x2, int direction);

// G[m][n] = integral of mu(x2) * u3^m(x2) * u3^n(x2) over the thickness.
Eigen::MatrixXd gram_matrix(const std::vector<GuidedMode>& modes);

// Recomputes the flux integral (omega*k/2) * int mu*u3^2 dx2.
double mode_power(const GuidedMode& mode);

// Frequencies in (f_lo, f_hi) where the propagating-mode count increments,
// located by bisection on the count over an nf-point scan.
std::vector<double> new_mode_frequencies(const BilayerPlate& plate, double f_lo,
                                         double f_hi, int nf = 400);

}  // namespace shdtn
