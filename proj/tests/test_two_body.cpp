#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fewfermi/ansatz.hpp"
#include "fewfermi/numerics.hpp"
#include "fewfermi/two_body.hpp"
#include "oracles.hpp"

#include <cmath>

namespace tb = fewfermi::twobody;
namespace az = fewfermi::ansatz;
namespace num = fewfermi::numerics;

TEST_CASE("busch_energy at the exact points") {
  // q = 0 energies are 2k + 3/2 exactly.
  for (int k = 0; k < 4; ++k) {
    CHECK(tb::busch_energy(0.0, k) == doctest::Approx(2.0 * k + 1.5));
  }
  // Residual of the defining relation.
  for (double q : {-3.0, -1.0, -0.3, 0.3, 1.0, 3.0}) {
    for (int k = 0; k < 4; ++k) {
      if (q > 0.0 && k == 0 && q < 0.63) continue;  // below the window range
      const double e = tb::busch_energy(q, k);
      CHECK(std::abs(tb::busch_q_of_energy(e) - q) < 1e-10);
    }
  }
}

TEST_CASE("busch_energy weak-coupling expansion") {
  // E ~ 1/2 + g/sqrt(2 pi) for small repulsive g.
  const double g = 0.01;
  const double e = tb::busch_energy(-1.0 / g, 0);
  CHECK(std::abs(e - 0.5 - g / std::sqrt(2.0 * M_PI)) < 2e-5);  // O(g^2) term
}

TEST_CASE("busch_energy deep branch") {
  // g = -10: E close to -g^2/4 (within the 2% trap correction).
  const double g = -10.0;
  const double e = tb::busch_energy(-1.0 / g, 0, true);
  CHECK(std::abs(e - (-25.0)) < 0.5);
  CHECK(std::abs(tb::busch_q_of_energy(e) - 0.1) < 1e-10);

  // Without the deep flag level 0 has no root at small q > 0.
  CHECK_THROWS_AS(tb::busch_energy(0.1, 0), std::domain_error);
}

TEST_CASE("busch_wavefunction symmetry and nodes") {
  for (double x : {0.3, 1.1, 2.7}) {
    CHECK(tb::busch_wavefunction(2.1, x) ==
          doctest::Approx(tb::busch_wavefunction(2.1, -x)).epsilon(1e-12));
  }
  // At 1/g = 0 the wave function vanishes at contact.
  CHECK(tb::busch_wavefunction(1.5, 0.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(tb::busch_wavefunction(1.5, 8.0), std::domain_error);
}

TEST_CASE("busch exact slope at q = 0") {
  CHECK(tb::busch_exact_slope(0) ==
        doctest::Approx(2.0 * std::sqrt(2.0 / M_PI)).epsilon(1e-13));
  // Finite-difference oracle on the exact relation.
  for (int k : {0, 1, 2}) {
    const double fd = oracles::derivative(
        [&](double q) {
          return q <= 0.0 ? tb::busch_energy(q, k) : tb::busch_energy(q, k + 1);
        },
        0.0, 1e-4);
    CHECK(tb::busch_exact_slope(k) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("two_body limit pair ground values") {
  const auto pair = tb::limit_pair({0, tb::Sign::repulsive});
  CHECK(pair.e0 == doctest::Approx(0.5));
  CHECK(pair.e_inf == doctest::Approx(1.5));
  CHECK(pair.k0 == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-13));
  CHECK(pair.overlap == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-12));
  CHECK(pair.k_exact_inf.value() ==
        doctest::Approx(2.0 * std::sqrt(2.0 / M_PI)).epsilon(1e-12));

  // Independent quadrature for the sgn overlap.
  const double s_quad = 2.0 * oracles::integrate_1d(
                                  [](double x) {
                                    return num::ho_eigenfunction(0, x) *
                                           num::ho_eigenfunction(1, x);
                                  },
                                  0.0, 7.0);
  CHECK(pair.overlap == doctest::Approx(s_quad).epsilon(1e-12));
}

TEST_CASE("odd levels are interaction-inert") {
  const auto pair = tb::limit_pair({1, tb::Sign::repulsive});
  CHECK(pair.k0 == doctest::Approx(0.0));
  CHECK(pair.overlap == doctest::Approx(0.0));
}

TEST_CASE("excited repulsive pair overlap stays below one") {
  const auto pair = tb::limit_pair({2, tb::Sign::repulsive});
  CHECK(std::abs(pair.overlap) < 1.0);
  CHECK(std::abs(pair.overlap) > 0.1);
  // n1 = 2 attractive pair: s = 1/sqrt(pi) in closed form.
  const auto att = tb::limit_pair({2, tb::Sign::attractive});
  CHECK(att.overlap == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("ansatz accuracy against the exact solution") {
  // Repulsive side, ground state: |E_opt - E_exact| < 0.006 for q in [-3, 0),
  // greatest near q ~ -0.4.
  const auto ground = tb::limit_pair({0, tb::Sign::repulsive});
  double max_dev = 0.0;
  for (double q = -3.0; q <= -1e-9; q += 0.05) {
    const double e_ans =
        az::optimal_energy(ground, az::CouplingPoint::from_q(q)).energy;
    const double e_exact = tb::busch_energy(q, 0);
    CHECK(e_ans >= e_exact - 1e-12);  // variational on the repulsive side
    max_dev = std::max(max_dev, std::abs(e_ans - e_exact));
  }
  CHECK(max_dev < 0.006);

  // Attractive continuation of the ground state: within 0.05, max near 0.4.
  az::LimitPair att = tb::limit_pair({2, tb::Sign::attractive});
  double max_dev_att = 0.0;
  double arg_max = 0.0;
  for (double q = 0.05; q <= 3.0; q += 0.05) {
    const double e_ans =
        az::optimal_energy(att, az::CouplingPoint::from_q(q)).energy;
    const double e_exact = tb::busch_energy(q, 1);
    if (std::abs(e_ans - e_exact) > max_dev_att) {
      max_dev_att = std::abs(e_ans - e_exact);
      arg_max = q;
    }
  }
  CHECK(max_dev_att < 0.05);
  CHECK(arg_max > 0.2);
  CHECK(arg_max < 0.8);
}

TEST_CASE("normalised ansatz wave function against the exact one at g = 1") {
  const double e_exact = tb::busch_energy(-1.0, 0);
  const double norm_exact = 2.0 * oracles::integrate_1d(
                                      [&](double x) {
                                        const double p =
                                            tb::busch_wavefunction(e_exact, x);
                                        return p * p;
                                      },
                                      0.0, 7.0);
  const double l2 = 2.0 * oracles::integrate_1d(
                              [&](double x) {
                                const double exact =
                                    tb::busch_wavefunction(e_exact, x) /
                                    std::sqrt(norm_exact);
                                const double ans = tb::ansatz_wavefunction(
                                    {0, tb::Sign::repulsive}, 1.0, x);
                                const double d = exact - ans;
                                return d * d;
                              },
                              0.0, 7.0);
  CHECK(std::sqrt(l2) < 0.05);
}

namespace {

// Minus branch (energy minimum) of the two-state {psi_0, sgn psi_1} problem
// at g < 0: the naive deeply-bound approximant.
double naive_deep_energy(double g) {
  const auto pair = tb::limit_pair({0, tb::Sign::repulsive});
  const double v00 = g * pair.k0;
  const double s2 = pair.overlap * pair.overlap;
  const double sum = v00 + 1.0;
  return pair.e0 + (sum - std::sqrt(sum * sum - 4.0 * v00 * (1.0 - s2))) /
                       (2.0 * (1.0 - s2));
}

}  // namespace

TEST_CASE("extended deep ansatz") {
  // g -> 0-: the three-state energy approaches the naive two-state value
  // from below (small alpha_delta admixture).
  const auto weak = tb::extended_deep_ansatz(-0.4);
  const double two_minus = naive_deep_energy(-0.4);
  CHECK(weak.energy <= two_minus + 1e-10);
  CHECK(weak.energy > two_minus - 0.06);

  // g = -10: within 1% of the exact deeply bound energy.
  const auto deep = tb::extended_deep_ansatz(-10.0);
  const double e_exact = tb::busch_energy(0.1, 0, true);
  CHECK(deep.energy >= e_exact - 1e-9);  // variational upper bound
  CHECK(std::abs(deep.energy - e_exact) < 0.01 * std::abs(e_exact));

  // Wave-function comparison at g = -10. The exact form combines two
  // exponentially large hypergeometric pieces, so restrict to |x| <= 3 where
  // the cancellation still leaves ~10 digits; the state itself has decayed
  // to e^{-21} there.
  const double cut = 3.0;
  const double norm_exact = 2.0 * oracles::integrate_1d(
                                      [&](double x) {
                                        const double p =
                                            tb::busch_wavefunction(e_exact, x);
                                        return p * p;
                                      },
                                      0.0, cut);
  // Fix the relative sign at the origin.
  const double sign =
      (tb::busch_wavefunction(e_exact, 0.0) / std::sqrt(norm_exact)) *
              tb::deep_ansatz_wavefunction(deep, -10.0, 0.0) >
          0.0
          ? 1.0
          : -1.0;
  const double l2 = 2.0 * oracles::integrate_1d(
                              [&](double x) {
                                const double exact =
                                    tb::busch_wavefunction(e_exact, x) /
                                    std::sqrt(norm_exact);
                                const double ans = sign *
                                    tb::deep_ansatz_wavefunction(deep, -10.0, x);
                                const double d = exact - ans;
                                return d * d;
                              },
                              0.0, cut, 600);
  CHECK(std::sqrt(l2) < 0.05);

  CHECK_THROWS_AS(tb::extended_deep_ansatz(0.5), std::invalid_argument);
}

TEST_CASE("variational ordering of the deep extension for g < 0") {
  // Three-state lowest eigenvalue never exceeds the two-state minus branch.
  const auto pair = tb::limit_pair({0, tb::Sign::repulsive});
  for (double g : {-0.5, -1.0, -2.0, -5.0, -10.0}) {
    const double three = tb::extended_deep_ansatz(g).energy;
    const double two =
        az::optimal_energy(pair, az::CouplingPoint::from_g(g)).energy;
    // branch minus at g < 0 is the energy minimum of the two-state problem
    const double two_minus =
        pair.e0 + (g * pair.k0 + 1.0 -
                   std::sqrt(std::pow(g * pair.k0 + 1.0, 2) -
                             4.0 * g * pair.k0 * (1.0 - 2.0 / M_PI))) /
                      (2.0 * (1.0 - 2.0 / M_PI));
    (void)two;
    CHECK(three <= two_minus + 1e-9);
  }
}

TEST_CASE("ansatz excited states stay within the stated windows") {
  // Repulsive side: excited-state error bounded by 0.03.
  for (int n1 : {2, 4}) {
    const auto pair = tb::limit_pair({n1, tb::Sign::repulsive});
    for (double q = -3.0; q <= -0.05; q += 0.1) {
      const double e_ans =
          az::optimal_energy(pair, az::CouplingPoint::from_q(q)).energy;
      const double e_exact = tb::busch_energy(q, n1 / 2);
      CHECK(std::abs(e_ans - e_exact) < 0.03);
    }
  }
  // Attractive side: the error only shrinks moving up from the 0.05 of the
  // ground continuation.
  for (int n1 : {4, 6}) {
    const auto pair = tb::limit_pair({n1, tb::Sign::attractive});
    for (double q = 0.05; q <= 3.0; q += 0.1) {
      const double e_ans =
          az::optimal_energy(pair, az::CouplingPoint::from_q(q)).energy;
      const double e_exact = tb::busch_energy(q, n1 / 2);
      CHECK(std::abs(e_ans - e_exact) < 0.05);
    }
  }
}
