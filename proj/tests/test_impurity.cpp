#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fewfermi/ansatz.hpp"
#include "fewfermi/impurity.hpp"
#include "fewfermi/numerics.hpp"
#include "oracles.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <random>

namespace im = fewfermi::impurity;
namespace az = fewfermi::ansatz;
namespace num = fewfermi::numerics;

TEST_CASE("slater_ground basics") {
  // Coincident coordinates annihilate the determinant.
  const std::array<double, 3> xs{0.4, 0.4, -1.0};
  CHECK(im::slater_ground(xs) == doctest::Approx(0.0));

  // N = 2 against the explicit 2x2 determinant.
  const std::array<double, 2> x2{0.0, 1.0};
  const double expected =
      (num::ho_eigenfunction(0, 0.0) * num::ho_eigenfunction(1, 1.0) -
       num::ho_eigenfunction(1, 0.0) * num::ho_eigenfunction(0, 1.0)) /
      std::sqrt(2.0);
  CHECK(im::slater_ground(x2) == doctest::Approx(expected).epsilon(1e-13));

  // Ordered-region normalisation: integral over x1 < x2 equals 1/2!.
  // Rotate to u = (x2-x1)/sqrt2 > 0, v unrestricted (Jacobian 1).
  const double region = oracles::integrate_2d(
      [](double u, double v) {
        const double x1 = (v - u) / std::sqrt(2.0);
        const double x2c = (v + u) / std::sqrt(2.0);
        const std::array<double, 2> x{x1, x2c};
        const double f = im::slater_ground(x);
        return f * f;
      },
      0.0, 6.0, -6.0, 6.0);
  CHECK(region == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("limit energies") {
  CHECK(im::e0(3) == doctest::Approx(2.5));
  CHECK(im::einf(3) == doctest::Approx(4.5));
  CHECK(im::e0(2) == doctest::Approx(1.0));
  CHECK(im::einf(2) == doctest::Approx(2.0));
  CHECK(im::e0(6) == doctest::Approx(13.0));
  CHECK(im::einf(6) == doctest::Approx(18.0));
  CHECK_THROWS_AS(im::e0(7), std::invalid_argument);
}

TEST_CASE("v00 closed form") {
  CHECK(im::v00_closed_form(2) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-13));
  CHECK(im::v00_closed_form(3) ==
        doctest::Approx(3.0 / (2.0 * std::sqrt(2.0 * M_PI))).epsilon(1e-13));
  CHECK(im::v00_closed_form(4) ==
        doctest::Approx(15.0 * std::sqrt(2.0) / (16.0 * std::sqrt(M_PI)))
            .epsilon(1e-13));
}

TEST_CASE("v00 against the coincidence-integral quadrature") {
  // N = 2: integral psi0(x)^4 dx.
  const double n2 = oracles::integrate_1d(
      [](double x) { return std::pow(num::ho_eigenfunction(0, x), 4); }, -7.0,
      7.0);
  CHECK(im::v00_closed_form(2) == doctest::Approx(n2).epsilon(1e-10));

  // N = 3: (N-1) int dx1 dx3 [psi0(x1) F(psi0,psi1; x1, x3)]^2.
  const double n3 = 2.0 * oracles::integrate_2d(
                              [](double x1, double x3) {
                                const std::array<double, 2> pairx{x1, x3};
                                const double f = im::slater_ground(pairx);
                                const double p0 = num::ho_eigenfunction(0, x1);
                                return p0 * p0 * f * f;
                              },
                              -6.5, 6.5, -6.5, 6.5);
  CHECK(im::v00_closed_form(3) == doctest::Approx(n3).epsilon(1e-8));
}

TEST_CASE("partial overlaps") {
  for (int n = 2; n <= 6; ++n) {
    const auto v = im::partial_overlaps(n);
    REQUIRE(static_cast<int>(v.size()) == n);
    double sum = 0.0;
    for (double x : v) sum += x;
    // Full overlap of symmetric x antisymmetric vanishes.
    CHECK(std::abs(sum) < 1e-10);
    // Reflection pattern v_k = (-1)^{N-1} v_{N+1-k}.
    const double sign = (n % 2 == 0) ? -1.0 : 1.0;
    for (int k = 0; k < n; ++k) {
      CHECK(v[k] == doctest::Approx(sign * v[n - 1 - k]).epsilon(1e-9));
    }
  }

  // N = 2 closed form: v = (1/sqrt(2 pi), -1/sqrt(2 pi)).
  const auto v2 = im::partial_overlaps(2);
  CHECK(v2[0] == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-11));
  CHECK(2.0 * (v2[0] * v2[0] + v2[1] * v2[1]) ==
        doctest::Approx(2.0 / M_PI).epsilon(1e-11));
}

TEST_CASE("slope matrix structure and N = 2 values") {
  for (int n = 2; n <= 6; ++n) {
    const auto sm = im::slope_matrix(n);
    // Bisymmetry of the alpha coefficients.
    for (std::size_t k = 0; k < sm.alphas.size(); ++k) {
      CHECK(sm.alphas[k] ==
            doctest::Approx(sm.alphas[sm.alphas.size() - 1 - k]).epsilon(1e-10));
    }
    // Zero row sums and positive semidefiniteness with one null mode.
    const Eigen::VectorXd row_sums = sm.matrix.rowwise().sum();
    CHECK(row_sums.cwiseAbs().maxCoeff() < 1e-12);
    const auto eig = num::symmetric_eig(sm.matrix);
    CHECK(std::abs(eig.values(0)) < 1e-10);
    CHECK(eig.values(1) > 1e-3);
  }

  const auto sm2 = im::slope_matrix(2);
  CHECK(sm2.alphas[0] == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-11));
  const auto slope2 = im::exact_strong_slope(2);
  CHECK(slope2.k_exact ==
        doctest::Approx(2.0 * std::sqrt(2.0 / M_PI)).epsilon(1e-10));
  // a proportional to (1, -1), sign fixed by the first entry.
  CHECK(slope2.a(0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(slope2.a(1) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("optimal overlap maximises over random coefficient vectors") {
  std::mt19937_64 rng(20240817ULL);
  std::normal_distribution<double> gauss;
  for (int n : {2, 3, 4, 5, 6}) {
    const auto opt = im::optimal_overlap(n);
    if (n == 2) CHECK(opt.value == doctest::Approx(2.0 / M_PI).epsilon(1e-11));
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd a(n);
      for (int i = 0; i < n; ++i) a(i) = gauss(rng);
      a.normalize();
      CHECK(im::overlap_sq_from_a(n, a) <= opt.value + 1e-12);
    }
  }
}

TEST_CASE("optimal overlap stays below the modified-ansatz lambda") {
  for (int n = 3; n <= 6; ++n) {
    const auto pair = im::limit_pair(n);
    const double lambda = az::modified_lambda(pair);
    CHECK(lambda > 0.0);
    CHECK(lambda < 1.0);
    CHECK(im::optimal_overlap(n).value < lambda);
    // True-eigenstate overlap is below the optimal one by construction.
    CHECK(pair.overlap * pair.overlap <= im::optimal_overlap(n).value + 1e-12);
  }
}

TEST_CASE("ground energy endpoints and bounds") {
  for (int n = 2; n <= 6; ++n) {
    CHECK(im::ground_energy(n, 0.0, im::Method::ansatz).energy ==
          doctest::Approx(im::e0(n)).epsilon(1e-13));
    const double infinity = std::numeric_limits<double>::infinity();
    CHECK(im::ground_energy(n, infinity, im::Method::ansatz).energy ==
          doctest::Approx(im::einf(n)).epsilon(1e-13));
    // Modified lies at or below the variational ansatz for repulsive g.
    for (double g : {0.5, 2.0, 8.0}) {
      const double e_ans = im::ground_energy(n, g, im::Method::ansatz).energy;
      const double e_mod = im::ground_energy(n, g, im::Method::modified).energy;
      CHECK(e_mod <= e_ans + 1e-12);
      CHECK(e_ans > im::e0(n));
      CHECK(e_ans < im::einf(n));
    }
  }
  CHECK_THROWS_AS(im::ground_energy(3, -1.0, im::Method::ansatz),
                  std::invalid_argument);
}

TEST_CASE("modified ansatz reproduces the exact slope at q = 0") {
  for (int n = 2; n <= 6; ++n) {
    const auto pair = im::limit_pair(n);
    const double lambda = az::modified_lambda(pair);
    const double k_exact = im::exact_strong_slope(n).k_exact;
    const auto e_of_q = [&](double q) {
      return az::optimal_energy(pair, az::CouplingPoint::from_q(q), lambda)
          .energy;
    };
    const double h = 1e-5;
    const double d1 = (e_of_q(0.0) - e_of_q(-h)) / h;
    const double d2 = (e_of_q(0.0) - e_of_q(-h / 2)) / (h / 2);
    CHECK(2.0 * d2 - d1 == doctest::Approx(k_exact).epsilon(1e-6));
  }
}

TEST_CASE("anderson overlap curve") {
  std::vector<double> grid;
  for (double g = 0.0; g <= 20.0; g += 0.5) grid.push_back(g);
  double prev_at_20 = 2.0;
  for (int n = 3; n <= 6; ++n) {
    const auto curve = im::anderson_overlap_curve(n, grid);
    CHECK(curve.front().anderson_sq == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 1; i < curve.size(); ++i) {
      CHECK(curve[i].anderson_sq <= curve[i - 1].anderson_sq + 1e-10);
    }
    // Limit value at strong coupling.
    const auto pair = im::limit_pair(n);
    const auto strong = im::anderson_overlap_curve(n, {1e9}).front();
    CHECK(strong.anderson_sq ==
          doctest::Approx(pair.overlap * pair.overlap).epsilon(1e-6));
    // Finite-size echo of the orthogonality catastrophe.
    CHECK(curve.back().anderson_sq < prev_at_20);
    prev_at_20 = curve.back().anderson_sq;
  }
}

TEST_CASE("use_amax option") {
  const auto def = im::limit_pair(4, false);
  const auto amax = im::limit_pair(4, true);
  CHECK(amax.overlap >= def.overlap);
  // Larger overlap lowers the minus-branch minimum.
  const double e_def = im::ground_energy(4, 3.0, im::Method::ansatz).energy;
  const double e_amax =
      im::ground_energy(4, 3.0, im::Method::ansatz, true).energy;
  CHECK(e_amax <= e_def + 1e-12);
}
