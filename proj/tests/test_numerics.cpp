#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fewfermi/numerics.hpp"

#include <cmath>

namespace num = fewfermi::numerics;

TEST_CASE("log_gamma values and signs") {
  const auto half = num::log_gamma(0.5);
  CHECK(half.sign == 1);
  CHECK(half.log_abs == doctest::Approx(std::log(std::sqrt(M_PI))).epsilon(1e-14));

  // Gamma(-1/2) = -2 sqrt(pi)
  const auto neg_half = num::log_gamma(-0.5);
  CHECK(neg_half.sign == -1);
  CHECK(neg_half.log_abs ==
        doctest::Approx(std::log(2.0 * std::sqrt(M_PI))).epsilon(1e-14));

  // Gamma(2.5) = 3 sqrt(pi) / 4 by the recurrence from Gamma(1/2).
  const auto x = num::log_gamma(2.5);
  CHECK(x.sign == 1);
  CHECK(x.log_abs ==
        doctest::Approx(std::log(0.75 * std::sqrt(M_PI))).epsilon(1e-14));

  CHECK_THROWS_AS(num::log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(num::log_gamma(-3.0), std::domain_error);
}

TEST_CASE("kummer_1f1 basic identities") {
  CHECK(num::kummer_1f1(1.7, 0.5, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  // 1F1(a;a;x) = e^x
  CHECK(num::kummer_1f1(0.5, 0.5, 1.0) ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  // Terminating polynomial: 1F1(-1; 1/2; x) = 1 - 2x
  CHECK(num::kummer_1f1(-1.0, 0.5, 0.25) == doctest::Approx(0.5).epsilon(1e-12));
  // Kummer transform consistency at negative argument.
  const double lhs = num::kummer_1f1(0.3, 1.7, -8.0);
  const double rhs = std::exp(-8.0) * num::kummer_1f1(1.4, 1.7, 8.0);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

  CHECK_THROWS_AS(num::kummer_1f1(1.0, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(num::kummer_1f1(1.0, 0.5, 51.0), std::domain_error);
}

TEST_CASE("harmonic oscillator eigenfunctions") {
  CHECK(num::ho_eigenfunction(0, 0.0) ==
        doctest::Approx(std::pow(M_PI, -0.25)).epsilon(1e-14));
  CHECK(num::ho_eigenfunction(1, 0.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(num::ho_eigenfunction(61, 0.0), std::domain_error);

  // Orthonormality under a 40-node Gauss-Hermite rule.
  const auto rule = num::gauss_hermite(40);
  double norm = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double h2 = num::ho_eigenfunction_scaled(2, rule.nodes[i]);
    norm += rule.weights[i] * h2 * h2;
  }
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ho_eigenfunction orthonormality matrix under 80 nodes") {
  const auto rule = num::gauss_hermite(80);
  for (int m = 0; m <= 20; m += 5) {
    for (int n = m; n <= 20; n += 5) {
      double ov = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        ov += rule.weights[i] * num::ho_eigenfunction_scaled(m, rule.nodes[i]) *
              num::ho_eigenfunction_scaled(n, rule.nodes[i]);
      }
      CHECK(std::abs(ov - (m == n ? 1.0 : 0.0)) < 1e-10);
    }
  }
}

TEST_CASE("generalised Laguerre polynomials") {
  CHECK(num::laguerre_general(0, 2.3, 1.7) == doctest::Approx(1.0));
  CHECK(num::laguerre_general(1, 3.0, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
  // L_2(x) = (x^2 - 4x + 2)/2 at x = 1.
  CHECK(num::laguerre_general(2, 0.0, 1.0) ==
        doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("find_root") {
  const auto f = [](double x) { return x * x - 2.0; };
  const double r = num::find_root(f, {1.0, 2.0}, 1e-12);
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  // Deterministic: identical inputs give bit-identical outputs.
  CHECK(num::find_root(f, {1.0, 2.0}, 1e-12) == r);

  const double mu = num::find_root([](double m) { return std::cos(m * M_PI / 2); },
                                   {0.5, 1.5}, 1e-13);
  CHECK(mu == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(num::find_root(f, {2.0, 3.0}, 1e-12), std::invalid_argument);
}

TEST_CASE("Gauss-Hermite moments are exact") {
  // integral x^{2k} e^{-x^2} = (2k-1)!! sqrt(pi) / 2^k, exact for 2k <= 2n-2.
  for (int n : {5, 12, 40}) {
    const auto rule = num::gauss_hermite(n);
    double moment_exact = std::sqrt(M_PI);
    for (int k = 0; 2 * k <= 2 * n - 2; ++k) {
      if (k > 0) moment_exact *= (2.0 * k - 1.0) / 2.0;
      double got = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        got += rule.weights[i] * std::pow(rule.nodes[i], 2 * k);
      }
      CHECK(std::abs(got - moment_exact) <= 1e-12 * moment_exact);
    }
  }
}

TEST_CASE("Gauss-Legendre on [a,b]") {
  const auto rule = num::gauss_legendre(24, 0.0, M_PI);
  double got = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    got += rule.weights[i] * std::sin(rule.nodes[i]);
  }
  CHECK(got == doctest::Approx(2.0).epsilon(1e-13));
  // Nodes strictly increasing.
  for (std::size_t i = 1; i < rule.nodes.size(); ++i) {
    CHECK(rule.nodes[i] > rule.nodes[i - 1]);
  }
}

TEST_CASE("symmetric_eig") {
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
  const auto eig_id = num::symmetric_eig(id);
  for (int i = 0; i < 3; ++i) CHECK(eig_id.values(i) == doctest::Approx(1.0));

  const double a = std::sqrt(2.0 / M_PI);
  Eigen::MatrixXd m(2, 2);
  m << a, -a, -a, a;
  const auto eig = num::symmetric_eig(m);
  CHECK(eig.values(0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(eig.values(1) == doctest::Approx(2.0 * a).epsilon(1e-14));

  // Rank-1 structure N u u^T.
  Eigen::VectorXd u(4);
  u << 0.3, -0.1, 0.7, 0.2;
  Eigen::MatrixXd rank1 = 4.0 * u * u.transpose();
  const auto eig1 = num::symmetric_eig(rank1);
  CHECK(eig1.values(3) == doctest::Approx(4.0 * u.squaredNorm()).epsilon(1e-12));
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(eig1.values(i)) < 1e-12);
  }

  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 3.0, 1.0;
  CHECK_THROWS_AS(num::symmetric_eig(bad), std::invalid_argument);
}

TEST_CASE("generalized_eig_lowest") {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, 2);
  h(0, 0) = 1.0;
  h(1, 1) = 2.0;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2, 2);
  s(0, 0) = 1.0;
  s(1, 1) = 4.0;
  const auto res = num::generalized_eig_lowest(h, s);
  CHECK(res.value == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(res.vector(0)) < 1e-14);
  CHECK(std::abs(res.vector(1)) == doctest::Approx(0.5).epsilon(1e-13));

  // S = I reduces to the ordinary problem.
  Eigen::MatrixXd sym(2, 2);
  sym << 2.0, -1.0, -1.0, 2.0;
  const auto plain = num::symmetric_eig(sym);
  const auto gen = num::generalized_eig_lowest(sym, Eigen::MatrixXd::Identity(2, 2));
  CHECK(gen.value == doctest::Approx(plain.values(0)).epsilon(1e-14));

  Eigen::MatrixXd singular = Eigen::MatrixXd::Ones(2, 2);
  CHECK_THROWS_AS(num::generalized_eig_lowest(h, singular), std::runtime_error);
}
