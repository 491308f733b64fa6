#include "shdtn/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "shdtn/quadrature.hpp"

namespace shdtn {

namespace {

struct LayerTerms {
  double gamma = 0.0;
  bool oscillatory = true;
  double c = 0.0;  // cos(gamma h) or cosh(gamma h)
  double p = 0.0;  // mu * gamma * sin(gamma h), analytically continued
};

LayerTerms layer_terms(double k, double omega, const Material& mat, double h) {
  LayerTerms t;
  const double c_t = mat.shear_speed();
  const double q = (omega / c_t) * (omega / c_t) - k * k;
  if (q >= 0.0) {
    t.gamma = std::sqrt(q);
    t.oscillatory = true;
    t.c = std::cos(t.gamma * h);
    t.p = mat.mu * t.gamma * std::sin(t.gamma * h);
  } else {
    t.gamma = std::sqrt(-q);
    t.oscillatory = false;
    t.c = std::cosh(t.gamma * h);
    t.p = -mat.mu * t.gamma * std::sinh(t.gamma * h);
  }
  return t;
}

// Same terms with cosh/sinh damped by exp(-gamma h); both c and p of a layer
// share the factor, so the residual's zeros and signs are unchanged.
LayerTerms layer_terms_scaled(double k, double omega, const Material& mat, double h) {
  LayerTerms t = layer_terms(k, omega, mat, h);
  if (!t.oscillatory) {
    const double e = std::exp(-2.0 * t.gamma * h);
    t.c = 0.5 * (1.0 + e);
    t.p = -mat.mu * t.gamma * 0.5 * (1.0 - e);
  }
  return t;
}

// Per-layer transverse thickness integral of f(x2)*g(x2) weighted by mu,
// using 32-point Gauss-Legendre in each layer.
template <typename FA, typename FB>
double thickness_integral_mu(const BilayerPlate& plate, FA fa, FB fb) {
  const GaussRule& rule = gauss_legendre(32);
  double sum = 0.0;
  // layer B: x2 in [-h_b, 0]
  for (size_t i = 0; i < rule.points.size(); ++i) {
    const double x2 = -plate.h_b * 0.5 * (1.0 - rule.points[i]);
    sum += rule.weights[i] * 0.5 * plate.h_b * plate.layer_b.mu * fb(x2);
  }
  // layer A: x2 in [0, h_a]
  for (size_t i = 0; i < rule.points.size(); ++i) {
    const double x2 = plate.h_a * 0.5 * (1.0 + rule.points[i]);
    sum += rule.weights[i] * 0.5 * plate.h_a * plate.layer_a.mu * fa(x2);
  }
  return sum;
}

GuidedMode build_mode(double omega, double k, const BilayerPlate& plate, int index) {
  GuidedMode m;
  m.index = index;
  m.omega = omega;
  m.k = k;

  const LayerTerms ta = layer_terms(k, omega, plate.layer_a, plate.h_a);
  const LayerTerms tb = layer_terms(k, omega, plate.layer_b, plate.h_b);

  m.layer_a = {plate.layer_a.mu, plate.h_a, ta.gamma, ta.oscillatory, 0.0};
  m.layer_b = {plate.layer_b.mu, plate.h_b, tb.gamma, tb.oscillatory, 0.0};

  // The interface conditions form a rank-1 2x2 system for the layer
  // amplitudes; take the null vector of whichever row is better conditioned.
  // Row 1 (displacement): (c_a, -c_b), row 2 (traction): (p_a, p_b).
  const double r_cos = std::max(std::abs(ta.c), std::abs(tb.c));
  double amp_a, amp_b;
  if (r_cos >= 1e-3) {
    amp_a = tb.c;
    amp_b = ta.c;
  } else {
    amp_a = -tb.p;
    amp_b = ta.p;
  }

  // Normalize max |u3| = 1. Oscillatory layers peak at their free face
  // (t = 0), decaying layers at the interface (t = h).
  const double max_a = std::abs(amp_a) * (ta.oscillatory ? 1.0 : std::cosh(ta.gamma * plate.h_a));
  const double max_b = std::abs(amp_b) * (tb.oscillatory ? 1.0 : std::cosh(tb.gamma * plate.h_b));
  const double peak = std::max(max_a, max_b);
  if (!(peak > 0.0)) throw std::runtime_error("degenerate mode shape at k = " + std::to_string(k));
  if (amp_a < 0.0) {  // fix the sign so u3 > 0 at the top face
    amp_a = -amp_a;
    amp_b = -amp_b;
  }
  m.norm = 1.0 / peak;
  m.layer_a.amp = amp_a * m.norm;
  m.layer_b.amp = amp_b * m.norm;

  m.gram_diag = thickness_integral_mu(
      plate, [&](double x2) { const double u = m.layer_a.value(plate.h_a - x2); return u * u; },
      [&](double x2) { const double u = m.layer_b.value(x2 + plate.h_b); return u * u; });
  m.power = 0.5 * omega * k * m.gram_diag;
  return m;
}

}  // namespace

double dispersion_residual(double k, double omega, const BilayerPlate& plate) {
  const LayerTerms a = layer_terms_scaled(k, omega, plate.layer_a, plate.h_a);
  const LayerTerms b = layer_terms_scaled(k, omega, plate.layer_b, plate.h_b);
  return a.p * b.c + b.p * a.c;
}

namespace {

std::vector<double> scan_roots(double omega, const BilayerPlate& plate, int n_scan,
                               double tol) {
  const double k_max = omega / plate.min_shear_speed();
  const double k_lo = k_max * 1e-8;
  const double k_hi = k_max * (1.0 + 1e-9);

  auto f = [&](double k) { return dispersion_residual(k, omega, plate); };

  std::vector<double> roots;
  double k_prev = k_lo;
  double f_prev = f(k_prev);
  for (int i = 1; i <= n_scan; ++i) {
    const double k_i = k_lo + (k_hi - k_lo) * double(i) / double(n_scan);
    const double f_i = f(k_i);
    if (f_i == 0.0) {
      roots.push_back(k_i);
    } else if (f_prev != 0.0 && std::signbit(f_prev) != std::signbit(f_i)) {
      double lo = k_prev, hi = k_i, flo = f_prev;
      while (hi - lo > tol * k_max) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (std::signbit(fm) == std::signbit(flo)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      double root = 0.5 * (lo + hi);
      // Newton polish with a central difference pushes the residual to
      // rounding level; interface continuity of the mode shapes needs it.
      for (int it = 0; it < 2; ++it) {
        const double delta = 1e-7 * k_max;
        const double df = (f(root + delta) - f(root - delta)) / (2.0 * delta);
        if (df == 0.0) break;
        const double step = f(root) / df;
        if (!std::isfinite(step) || std::abs(step) > (hi - lo) + delta) break;
        root -= step;
      }
      roots.push_back(root);
    }
    k_prev = k_i;
    f_prev = f_i;
  }
  // Deduplicate near-coincident roots (a bracket split across grid points).
  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots)
    if (unique.empty() || r - unique.back() > 1e-9 * k_max) unique.push_back(r);
  return unique;
}

}  // namespace

std::vector<GuidedMode> find_propagating_modes(double omega, const BilayerPlate& plate,
                                               double tol) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");

  std::vector<double> roots = scan_roots(omega, plate, 2048, tol);
  std::vector<double> refined = scan_roots(omega, plate, 8192, tol);
  if (refined.size() != roots.size()) {
    roots = std::move(refined);
    refined = scan_roots(omega, plate, 32768, tol);
    if (refined.size() != roots.size())
      throw std::runtime_error("dispersion root count did not stabilize under scan refinement");
  }
  roots = std::move(refined);
  if (roots.empty())
    throw std::runtime_error("no propagating modes found (unexpected for SH waves)");

  std::sort(roots.begin(), roots.end(), std::greater<double>());
  std::vector<GuidedMode> modes;
  modes.reserve(roots.size());
  for (size_t i = 0; i < roots.size(); ++i)
    modes.push_back(build_mode(omega, roots[i], plate, int(i) + 1));
  return modes;
}

double GuidedMode::shape_in_layer(Layer l, double x2) const {
  const double slack = 1e-9 * (h_a() + h_b());
  if (x2 < -h_b() - slack || x2 > h_a() + slack)
    throw std::domain_error("x2 outside the plate thickness");
  if (l == Layer::A) return layer_a.value(std::max(0.0, h_a() - x2));
  return layer_b.value(std::max(0.0, x2 + h_b()));
}

double GuidedMode::shape(double x2) const {
  return shape_in_layer(x2 >= 0.0 ? Layer::A : Layer::B, x2);
}

double GuidedMode::shape_derivative(double x2) const {
  const double slack = 1e-9 * (h_a() + h_b());
  if (x2 < -h_b() - slack || x2 > h_a() + slack)
    throw std::domain_error("x2 outside the plate thickness");
  if (x2 >= 0.0) return -layer_a.deriv(std::max(0.0, h_a() - x2));
  return layer_b.deriv(x2 + h_b());
}

std::complex<double> GuidedMode::stress(double x2, int direction, Layer l) const {
  const double mu = (l == Layer::A) ? layer_a.mu : layer_b.mu;
  return std::complex<double>(0.0, direction * mu * k) * shape_in_layer(l, x2);
}

std::complex<double> GuidedMode::stress(double x2, int direction) const {
  return stress(x2, direction, x2 >= 0.0 ? Layer::A : Layer::B);
}

double mode_shape_eval(const GuidedMode& mode, double x2) { return mode.shape(x2); }

std::complex<double> mode_stress(const GuidedMode& mode, double x2, int direction) {
  return mode.stress(x2, direction);
}

Eigen::MatrixXd gram_matrix(const std::vector<GuidedMode>& modes) {
  const int n = int(modes.size());
  Eigen::MatrixXd g(n, n);
  const GaussRule& rule = gauss_legendre(32);
  for (int m = 0; m < n; ++m) {
    for (int j = m; j < n; ++j) {
      const GuidedMode& um = modes[m];
      const GuidedMode& un = modes[j];
      double sum = 0.0;
      for (size_t i = 0; i < rule.points.size(); ++i) {
        const double tb = un.h_b() * 0.5 * (1.0 + rule.points[i]);
        sum += rule.weights[i] * 0.5 * un.h_b() * un.layer_b.mu * um.layer_b.value(tb) *
               un.layer_b.value(tb);
        const double ta = un.h_a() * 0.5 * (1.0 + rule.points[i]);
        sum += rule.weights[i] * 0.5 * un.h_a() * un.layer_a.mu * um.layer_a.value(ta) *
               un.layer_a.value(ta);
      }
      g(m, j) = sum;
      g(j, m) = sum;
    }
  }
  return g;
}

double mode_power(const GuidedMode& mode) {
  const GaussRule& rule = gauss_legendre(32);
  double sum = 0.0;
  for (size_t i = 0; i < rule.points.size(); ++i) {
    const double tb = mode.h_b() * 0.5 * (1.0 + rule.points[i]);
    const double ub = mode.layer_b.value(tb);
    sum += rule.weights[i] * 0.5 * mode.h_b() * mode.layer_b.mu * ub * ub;
    const double ta = mode.h_a() * 0.5 * (1.0 + rule.points[i]);
    const double ua = mode.layer_a.value(ta);
    sum += rule.weights[i] * 0.5 * mode.h_a() * mode.layer_a.mu * ua * ua;
  }
  return 0.5 * mode.omega * mode.k * sum;
}

std::vector<double> new_mode_frequencies(const BilayerPlate& plate, double f_lo,
                                         double f_hi, int nf) {
  auto count_at = [&](double f) {
    return int(find_propagating_modes(2.0 * M_PI * f, plate).size());
  };
  std::vector<double> cutoffs;
  double f_prev = f_lo;
  int n_prev = count_at(f_prev);
  for (int i = 1; i <= nf; ++i) {
    const double f_i = f_lo + (f_hi - f_lo) * double(i) / double(nf);
    const int n_i = count_at(f_i);
    if (n_i != n_prev) {
      double lo = f_prev, hi = f_i;
      for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (count_at(mid) == n_prev)
          lo = mid;
        else
          hi = mid;
      }
      cutoffs.push_back(0.5 * (lo + hi));
    }
    f_prev = f_i;
    n_prev = n_i;
  }
  return cutoffs;
}

}  // namespace shdtn
