#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fewfermi/numerics.hpp"
#include "fewfermi/svm.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

namespace svm = fewfermi::svm;
namespace num = fewfermi::numerics;

namespace {

double gaussian_value(const svm::GaussianElement& e, double x, double y) {
  const Eigen::Vector2d w(x, y);
  const Eigen::Vector2d d = w - e.s;
  return std::exp(-d.dot(e.a * d));
}

// Quadrature oracle for a contact line delta(u . w): reduce to a 1D integral
// along the line direction.
double delta_quadrature(const svm::GaussianElement& a,
                        const svm::GaussianElement& b,
                        const Eigen::Vector2d& u) {
  const Eigen::Vector2d dir = Eigen::Vector2d(-u(1), u(0)).normalized();
  const double scale = 1.0 / u.norm();
  return scale * oracles::integrate_1d(
                     [&](double t) {
                       const double x = t * dir(0);
                       const double y = t * dir(1);
                       return gaussian_value(a, x, y) * gaussian_value(b, x, y);
                     },
                     -9.0, 9.0, 600);
}

svm::GaussianElement random_spd_element(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::Matrix2d l;
  l << 0.4 + std::abs(uni(rng)) * 1.4, uni(rng), 0.0,
      0.4 + std::abs(uni(rng)) * 1.4;
  svm::GaussianElement e;
  e.a = l.transpose() * l + 0.05 * Eigen::Matrix2d::Identity();
  e.s << uni(rng), uni(rng);
  return e;
}

}  // namespace

TEST_CASE("convention masses") {
  const auto equal = svm::convention_masses(1.0);
  CHECK(equal[0] == doctest::Approx(1.0));
  CHECK(equal[1] == doctest::Approx(1.0));
  // Imbalanced: geometric-mean unit, eta(masses) = 1.
  const auto m2 = svm::convention_masses(2.0);
  const double eta = std::sqrt(m2[0] * m2[1] * m2[2] / (m2[0] + m2[1] + m2[2]));
  CHECK(eta == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(m2[0] / m2[1] == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("jacobi transform") {
  for (double mr : {1.0, 0.5, 2.0}) {
    const auto masses = svm::convention_masses(mr);
    const Eigen::Matrix3d j = svm::jacobi_transform(masses);
    // Kinetic metric: J M^{-1} J^T = I / mu (equals I in eta units).
    const double mu =
        std::sqrt(masses[0] * masses[1] * masses[2] /
                  (masses[0] + masses[1] + masses[2]));
    Eigen::Matrix3d minv = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i) minv(i, i) = 1.0 / masses[i];
    const Eigen::Matrix3d metric = j * minv * j.transpose();
    CHECK((metric - Eigen::Matrix3d::Identity() / mu).cwiseAbs().maxCoeff() <
          1e-12);
    // CM row is the mass-weighted average (up to the scale convention).
    for (int c = 0; c < 3; ++c) {
      CHECK(j(2, c) * masses[1] == doctest::Approx(j(2, 1) * masses[c]));
    }
    // The x1 - x2 contact line maps onto phi = -theta0 (no CM component).
    const Eigen::Vector3d normal =
        j.inverse().transpose() * Eigen::Vector3d(1.0, -1.0, 0.0);
    CHECK(std::abs(normal(2)) < 1e-12);
    const double line_angle = std::atan(-normal(0) / normal(1));
    const double t0 = std::atan(std::sqrt(mr / (2.0 + mr)));
    CHECK(std::abs(std::abs(line_angle) - t0) < 1e-12);
  }
  CHECK_THROWS_AS(svm::jacobi_transform({1.0, -1.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("pair matrix elements against 2D quadrature") {
  const auto masses = svm::convention_masses(2.0);
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_spd_element(rng);
    const auto b = random_spd_element(rng);
    const double g = 1.7;
    const auto el = svm::pair_matrix_elements(a, b, g, masses);

    const double s_quad = oracles::integrate_2d(
        [&](double x, double y) {
          return gaussian_value(a, x, y) * gaussian_value(b, x, y);
        },
        -8.0, 8.0, -8.0, 8.0, 120);
    CHECK(el.overlap == doctest::Approx(s_quad).epsilon(1e-8));

    const double trap_quad = oracles::integrate_2d(
        [&](double x, double y) {
          return 0.5 * (x * x + y * y) * gaussian_value(a, x, y) *
                 gaussian_value(b, x, y);
        },
        -8.0, 8.0, -8.0, 8.0, 120);
    CHECK(el.trap == doctest::Approx(trap_quad).epsilon(1e-8));

    // Kinetic via the gradient form (1/2) int grad a . grad b.
    const double kin_quad = oracles::integrate_2d(
        [&](double x, double y) {
          const Eigen::Vector2d w(x, y);
          const Eigen::Vector2d ga = -2.0 * (a.a * (w - a.s));
          const Eigen::Vector2d gb = -2.0 * (b.a * (w - b.s));
          return 0.5 * ga.dot(gb) * gaussian_value(a, x, y) *
                 gaussian_value(b, x, y);
        },
        -8.0, 8.0, -8.0, 8.0, 120);
    CHECK(el.kinetic == doctest::Approx(kin_quad).epsilon(1e-8));
  }
}

TEST_CASE("interaction elements against line quadrature") {
  // Rebuild the three contact terms for M/m = 2 and compare with the closed
  // form through a fresh pair of elements.
  const auto masses = svm::convention_masses(2.0);
  const double m23r = masses[1] * masses[2] / (masses[1] + masses[2]);
  const double m123r =
      masses[0] * (masses[1] + masses[2]) / (masses[0] + masses[1] + masses[2]);
  const double c = 0.5 * std::sqrt(m123r / m23r);
  std::mt19937_64 rng(77);
  const auto a = random_spd_element(rng);
  const auto b = random_spd_element(rng);
  const double g = 2.3;
  const auto el = svm::pair_matrix_elements(a, b, g, masses);
  const double quad =
      g * (std::sqrt(m23r) * delta_quadrature(a, b, {1.0, 0.0}) +
           std::sqrt(m123r) * delta_quadrature(a, b, {-c, 1.0}) +
           std::sqrt(m123r) * delta_quadrature(a, b, {c, 1.0}));
  CHECK(el.interaction == doctest::Approx(quad).epsilon(1e-8));

  // g = 0 switches the interaction off.
  CHECK(svm::pair_matrix_elements(a, b, 0.0, masses).interaction ==
        doctest::Approx(0.0));
}

TEST_CASE("unit Gaussian closed forms") {
  svm::GaussianElement e;
  e.a = 0.5 * Eigen::Matrix2d::Identity();
  e.s.setZero();
  const auto masses = svm::convention_masses(1.0);
  const auto el = svm::pair_matrix_elements(e, e, 0.0, masses);
  CHECK(el.overlap == doctest::Approx(M_PI).epsilon(1e-13));
  // <T> = <Vtrap> = pi/2 for this element: H phi = phi in 2D.
  CHECK(el.kinetic == doctest::Approx(0.5 * M_PI).epsilon(1e-13));
  CHECK(el.trap == doctest::Approx(0.5 * M_PI).epsilon(1e-13));
}

TEST_CASE("non positive definite pair is rejected") {
  svm::GaussianElement a;
  a.a << 1.0, 0.0, 0.0, -2.0;
  a.s.setZero();
  CHECK_THROWS_AS(
      svm::pair_matrix_elements(a, a, 1.0, svm::convention_masses(1.0)),
      std::domain_error);
}

TEST_CASE("free-fermion limit of the variational energy") {
  svm::SvmConfig cfg;
  cfg.alpha_trials = 60;
  cfg.beta_growth_rounds = 60;
  cfg.basis_cap = 80;
  cfg.refine_sweeps = 2;
  cfg.seed = 11;
  cfg.parity = -1;
  const auto res = svm::svm_ground_energy(0.0, 1.0, cfg);
  CHECK(res.energy == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(res.energy >= 2.0 - 1e-12);  // variational
}

TEST_CASE("growth is monotone and seed deterministic") {
  svm::SvmConfig cfg;
  cfg.alpha_trials = 20;
  cfg.beta_growth_rounds = 20;
  cfg.basis_cap = 30;
  cfg.refine_sweeps = 1;
  cfg.seed = 5;
  cfg.parity = -1;
  const auto a = svm::svm_ground_energy(2.0, 1.0, cfg);
  const auto b = svm::svm_ground_energy(2.0, 1.0, cfg);
  CHECK(a.energy == b.energy);
  REQUIRE(a.round_energies.size() == b.round_energies.size());
  for (std::size_t i = 1; i < a.round_energies.size(); ++i) {
    CHECK(a.round_energies[i] <= a.round_energies[i - 1] + 1e-12);
    CHECK(a.round_energies[i] == b.round_energies[i]);
  }
  svm::SvmConfig other = cfg;
  other.seed = 6;
  const auto d = svm::svm_ground_energy(2.0, 1.0, other);
  CHECK(d.energy != a.energy);
}

TEST_CASE("parity sectors are ordered as expected at strong coupling") {
  // Equal mass, g = 8: the odd sector holds the ground state.
  svm::SvmConfig cfg;
  cfg.alpha_trials = 40;
  cfg.beta_growth_rounds = 40;
  cfg.basis_cap = 60;
  cfg.refine_sweeps = 1;
  cfg.seed = 3;
  cfg.parity = -1;
  const auto odd = svm::svm_ground_energy(8.0, 1.0, cfg);
  cfg.parity = +1;
  const auto even = svm::svm_ground_energy(8.0, 1.0, cfg);
  CHECK(odd.energy < even.energy);
  // Both lie between the free and fermionised limits.
  CHECK(odd.energy > 2.0);
  CHECK(odd.energy < 4.0);
}
