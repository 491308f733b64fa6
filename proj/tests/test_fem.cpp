#include <doctest.h>

#include <random>

#include "shdtn/fem_assembly.hpp"
#include "shdtn/dispersion.hpp"
#include "test_helpers.hpp"

using namespace shdtn;
using namespace shdtn::testing;

TEST_CASE("serendipity shape functions interpolate and partition unity") {
  // corner (-1,-1) is local node 0
  const ShapeValues corner = shape_functions(-1.0, -1.0);
  CHECK(corner.n[0] == doctest::Approx(1.0));
  for (int j = 1; j < 8; ++j) CHECK(corner.n[j] == doctest::Approx(0.0));

  const ShapeValues center = shape_functions(0.0, 0.0);
  for (int j = 0; j < 4; ++j) CHECK(center.n[j] == doctest::Approx(-0.25));
  for (int j = 4; j < 8; ++j) CHECK(center.n[j] == doctest::Approx(0.5));

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const ShapeValues s = shape_functions(unit(rng), unit(rng));
    double sum = 0.0, dsum_xi = 0.0, dsum_eta = 0.0;
    for (int j = 0; j < 8; ++j) {
      sum += s.n[j];
      dsum_xi += s.dn[j][0];
      dsum_eta += s.dn[j][1];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dsum_xi == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(dsum_eta == doctest::Approx(0.0).epsilon(1e-13));
  }
}

namespace {

// A standalone one-element mesh over [x0,x0+w] x [y0,y0+h].
Mesh single_element(double x0, double y0, double w, double h) {
  Mesh mesh;
  auto add = [&](double x, double y) {
    mesh.nodes.push_back({int(mesh.nodes.size()), x, y});
    return mesh.nodes.back().id;
  };
  Q8Element e;
  e.node_ids = {add(x0, y0),
                add(x0 + w, y0),
                add(x0 + w, y0 + h),
                add(x0, y0 + h),
                add(x0 + w / 2, y0),
                add(x0 + w, y0 + h / 2),
                add(x0 + w / 2, y0 + h),
                add(x0, y0 + h / 2)};
  e.layer = Layer::A;
  mesh.elements.push_back(e);
  return mesh;
}

// 10-point Gauss-Legendre abscissae/weights (frozen table) so the reference
// stiffness below does not share the project's quadrature code.
constexpr double kGl10X[10] = {
    -0.9739065285171717, -0.8650633666889845, -0.6794095682990244,
    -0.4333953941292472, -0.1488743389816312, 0.1488743389816312,
    0.4333953941292472,  0.6794095682990244,  0.8650633666889845,
    0.9739065285171717};
constexpr double kGl10W[10] = {
    0.0666713443086881, 0.1494513491505806, 0.2190863625159820,
    0.2692667193099963, 0.2955242247147529, 0.2955242247147529,
    0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
    0.0666713443086881};

Eigen::Matrix<double, 8, 8> reference_stiffness(const Mesh& mesh, double mu) {
  Eigen::Matrix<double, 8, 8> ke = Eigen::Matrix<double, 8, 8>::Zero();
  const Q8Element& e = mesh.elements[0];
  for (int gx = 0; gx < 10; ++gx)
    for (int gy = 0; gy < 10; ++gy) {
      const ShapeValues s = shape_functions(kGl10X[gx], kGl10X[gy]);
      Eigen::Matrix2d jac = Eigen::Matrix2d::Zero();
      for (int j = 0; j < 8; ++j) {
        const Node& nd = mesh.nodes[e.node_ids[j]];
        jac(0, 0) += s.dn[j][0] * nd.x1;
        jac(0, 1) += s.dn[j][0] * nd.x2;
        jac(1, 0) += s.dn[j][1] * nd.x1;
        jac(1, 1) += s.dn[j][1] * nd.x2;
      }
      const Eigen::Matrix2d inv_t = jac.inverse().transpose();
      Eigen::Matrix<double, 8, 2> grad;
      for (int j = 0; j < 8; ++j)
        grad.row(j) = (inv_t * Eigen::Vector2d(s.dn[j][0], s.dn[j][1])).transpose();
      ke += kGl10W[gx] * kGl10W[gy] * jac.determinant() * mu * grad * grad.transpose();
    }
  return ke;
}

}  // namespace

TEST_CASE("element matrices: rigid mode, mass sum, symmetry, spectra") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> len(0.2e-3, 2.0e-3);
  for (int trial = 0; trial < 20; ++trial) {
    const double w = len(rng), h = len(rng);
    const Mesh mesh = single_element(len(rng), len(rng), w, h);
    const Material mat = builtin_material("titanium");
    const ElementMatrices em = element_matrices(mesh.elements[0], mesh, mat, 3);

    CHECK((em.ke - em.ke.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((em.me - em.me.transpose()).cwiseAbs().maxCoeff() == 0.0);

    const Eigen::Matrix<double, 8, 1> ones = Eigen::Matrix<double, 8, 1>::Ones();
    CHECK((em.ke * ones).cwiseAbs().maxCoeff() <= 1e-9 * em.ke.cwiseAbs().maxCoeff());

    CHECK(em.me.sum() == doctest::Approx(mat.rho * w * h).epsilon(1e-12));

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 8, 8>> ke_eig(em.ke);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 8, 8>> me_eig(em.me);
    const double ke_scale = ke_eig.eigenvalues().maxCoeff();
    CHECK(ke_eig.eigenvalues()(0) >= -1e-12 * ke_scale);       // PSD
    CHECK(std::abs(ke_eig.eigenvalues()(0)) <= 1e-12 * ke_scale);  // one zero mode
    CHECK(ke_eig.eigenvalues()(1) > 1e-6 * ke_scale);          // and only one
    CHECK(me_eig.eigenvalues()(0) > 0.0);                      // mass PD
  }
}

TEST_CASE("unit-square stiffness matches an independent 10x10 quadrature") {
  const Mesh mesh = single_element(0.0, 0.0, 1.0, 1.0);
  Material mat = builtin_material("steel");
  mat.mu = 1.0;
  const ElementMatrices em = element_matrices(mesh.elements[0], mesh, mat, 3);
  const Eigen::Matrix<double, 8, 8> ref = reference_stiffness(mesh, 1.0);
  CHECK((em.ke - ref).cwiseAbs().maxCoeff() <= 1e-12 * ref.cwiseAbs().maxCoeff());
}

TEST_CASE("degenerate elements are rejected") {
  Mesh mesh = single_element(0.0, 0.0, 1e-3, 1e-3);
  // collapse the right edge onto the left one
  mesh.nodes[1].x1 = mesh.nodes[0].x1;
  mesh.nodes[2].x1 = mesh.nodes[3].x1;
  mesh.nodes[4].x1 = mesh.nodes[0].x1;
  mesh.nodes[5].x1 = mesh.nodes[7].x1;
  mesh.nodes[6].x1 = mesh.nodes[3].x1;
  CHECK_THROWS_WITH_AS(
      (void)element_matrices(mesh.elements[0], mesh, builtin_material("steel"), 3),
      doctest::Contains("Jacobian"), std::runtime_error);
}

TEST_CASE("assembly: symmetry and frequency linearity") {
  const BilayerPlate plate = make_plate("aluminum", "steel", 0.5e-3);
  const Mesh mesh = build_mesh(plate, 20, 3, 3);
  const double w1 = 2.0 * M_PI * 1.3e6, w2 = 2.0 * M_PI * 2.9e6, w3 = 2.0 * M_PI * 4.1e6;
  const GlobalSystem s1 = assemble_global(mesh, plate, w1);
  const GlobalSystem s2 = assemble_global(mesh, plate, w2);
  const GlobalSystem s3 = assemble_global(mesh, plate, w3);

  std::mt19937 rng(3);
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd x(mesh.n_nodes());
  for (int i = 0; i < x.size(); ++i) x[i] = {gauss(rng), gauss(rng)};

  // M x recovered from two omegas predicts the third assembly exactly:
  // S(w) = K - w^2 M for the same mesh.
  const Eigen::VectorXcd s1x = s1.apply(x), s2x = s2.apply(x), s3x = s3.apply(x);
  const Eigen::VectorXcd mx = (s1x - s2x) / (w2 * w2 - w1 * w1);
  const Eigen::VectorXcd predicted = s1x - (w3 * w3 - w1 * w1) * mx;
  CHECK((s3x - predicted).norm() <= 1e-12 * s3x.norm());

  // symmetry through coeff on sampled pairs
  std::uniform_int_distribution<int> pick(0, mesh.n_nodes() - 1);
  for (int t = 0; t < 200; ++t) {
    const int i = pick(rng), j = pick(rng);
    CHECK(s1.coeff(i, j) == s1.coeff(j, i));
  }
}

TEST_CASE("solver ordering keeps the band at the structured-grid bound") {
  const BilayerPlate plate = make_plate("aluminum", "steel", 1.0e-3);
  const Mesh mesh = build_mesh(plate, 40, 4, 4);
  const auto ops = assemble_operators(mesh, plate);
  // an element spans three x-levels: (2ny+1) + (ny+1) + (2ny+1) node slots,
  // plus at most two adjacent crack duplicates
  const int ny = mesh.elems_y();
  CHECK(ops->half_bandwidth <= 5 * ny + 6);
}

TEST_CASE("welded mesh equals zero-length-crack mesh") {
  const BilayerPlate intact = make_plate("aluminum", "steel", 0.0);
  const Mesh mesh = build_mesh(intact, 16, 2, 2);
  // identical grids with and without the (empty) crack
  CHECK(mesh.crack_upper.empty());
  const GlobalSystem sys = assemble_global(mesh, intact, 2.0 * M_PI * 2e6);
  CHECK(sys.size() == mesh.n_nodes());
}

TEST_CASE("discrete residual of an exact plane mode converges at ~4th order") {
  const BilayerPlate plate = make_plate("steel", "steel");
  const double omega = 2.0 * M_PI * 1e6;
  const auto modes = find_propagating_modes(omega, plate);
  const GuidedMode& fundamental = modes[0];

  auto interior_residual = [&](int nx, int ny) {
    const Mesh mesh = build_mesh(plate, nx, ny, ny);
    const GlobalSystem sys = assemble_global(mesh, plate, omega);
    Eigen::VectorXcd u(mesh.n_nodes());
    for (const Node& n : mesh.nodes)
      u[n.id] = fundamental.shape(n.x2) *
                std::exp(std::complex<double>(0.0, fundamental.k * n.x1));
    const Eigen::VectorXcd r = sys.apply(u);
    std::vector<bool> boundary(mesh.n_nodes(), false);
    for (const auto* s : {&mesh.gamma1, &mesh.gamma2, &mesh.top, &mesh.bottom})
      for (int id : *s) boundary[id] = true;
    // top/bottom rows carry no boundary term (traction-free mode); only the
    // vertical boundaries see the truncated weak form
    for (int id : mesh.gamma1) boundary[id] = true;
    double norm = 0.0;
    int count = 0;
    for (int i = 0; i < r.size(); ++i)
      if (!boundary[i]) {
        norm += std::norm(r[i]);
        ++count;
      }
    return std::sqrt(norm / count);
  };

  const double r1 = interior_residual(24, 3);
  const double r2 = interior_residual(48, 6);
  const double rate = std::log2(r1 / r2);
  MESSAGE("plane-mode interior residual rate = ", rate);
  CHECK(rate > 3.0);
  CHECK(rate < 5.5);
}
