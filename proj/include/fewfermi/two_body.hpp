#pragma once

#include "fewfermi/ansatz.hpp"

#include <array>

// Two distinguishable fermions in a harmonic trap, relative coordinate
// x = (x1 - x2)/sqrt(2). The contact interaction g delta(x1 - x2) becomes
// (g/sqrt(2)) delta(x) in this coordinate; energies below are relative
// energies (add 1/2 for the centre of mass).
namespace fewfermi::twobody {

enum class Sign { repulsive, attractive };

// One interacting level: n1 is the g = 0 relative quantum number (even; odd
// states are untouched by the interaction), n2 = n1 +- 1 its 1/g = 0 partner.
struct TwoBodyLevel {
  int n1 = 0;
  Sign sign = Sign::repulsive;

  int n2() const { return sign == Sign::repulsive ? n1 + 1 : n1 - 1; }
};

// Right-hand side of the exact-energy relation,
//   q = (1/(2 sqrt 2)) Gamma((1-2E)/4) / Gamma((3-2E)/4).
double busch_q_of_energy(double energy);

// Solve the relation for E at given q within the level-k window
// (2k - 1/2, 2k + 3/2]; level k gives E = 2k + 3/2 exactly at q = 0.
// With deep = true (k must be 0, q > 0) the molecular branch E < 1/2 is
// followed instead; it behaves as E ~ -g^2/4 for g << 0.
double busch_energy(double q, int level, bool deep = false);

// Unnormalised eigenfunction at energy E (even in x, |x| <= 7):
//   psi = (-sqrt(2) q 1F1((1-2E)/4;1/2;x^2) + |x| 1F1((3-2E)/4;3/2;x^2)) e^{-x^2/2}.
double busch_wavefunction(double energy, double x);

// Exact slope dE/dq at q = 0 for the level with E(0) = 2k + 3/2.
double busch_exact_slope(int level);

// LimitPair for one interacting level: E0 = n1 + 1/2, Einf = n2 + 1/2,
// K^0 = |psi_n1(0)|^2/sqrt(2), s = <psi_n1|sgn|psi_n2>, plus the exact
// strong-coupling slope from the relation above. Odd n1 gives k0 = 0
// (interaction-inert).
ansatz::LimitPair limit_pair(TwoBodyLevel level);

// Normalised trial-state wave function at the optimal coefficients.
double ansatz_wavefunction(TwoBodyLevel level, double g, double x);

struct DeepAnsatzResult {
  double energy;
  std::array<double, 3> coefficients;  // (alpha0, alpha_inf, alpha_delta)
};

// Three-state ansatz {psi_0, sgn psi_1, sqrt(kappa) e^{-kappa|x|}} with
// kappa = |g|/sqrt(2) for the deeply bound molecular state, g < 0. Matrix
// elements by quadrature, energy from the lowest generalized eigenpair.
DeepAnsatzResult extended_deep_ansatz(double g);

// Wave function of the extended deep ansatz, normalised.
double deep_ansatz_wavefunction(const DeepAnsatzResult& r, double g, double x);

}  // namespace fewfermi::twobody
