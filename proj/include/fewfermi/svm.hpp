#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

// Stochastic variational method with shifted correlated Gaussians for the
// (mass-imbalanced) 2+1 system in the two mass-scaled relative Jacobi
// coordinates. Basis functions are exp(-(w-s)^T A (w-s)) projected onto
// majority-exchange antisymmetry and definite parity; all matrix elements
// are closed-form 2D Gaussian integrals.
namespace fewfermi::svm {

struct GaussianElement {
  Eigen::Matrix2d a;  // symmetric positive definite
  Eigen::Vector2d s;  // shift (s' = s)
};

struct SvmConfig {
  int alpha_trials = 500;        // trials for the initial basis
  int beta_growth_rounds = 500;  // candidate trials per added element
  std::uint64_t seed = 1;
  int basis_cap = 150;           // final basis size l
  int parity = -1;               // projected parity sector
  int initial_size = 1;
  int refine_sweeps = 2;         // element re-optimisation passes
};

// Masses (m1, m2, m3) = (M, m, m) expressed in the sigma-defining unit:
// the majority mass m for equal masses, eta = (m1 m2 m3 / M_tot)^{1/2}
// otherwise (the convention switch used for the mass-imbalanced figures).
std::array<double, 3> convention_masses(double mass_ratio);

// Jacobi transformation matrix x' = J x for the given masses.
Eigen::Matrix3d jacobi_transform(const std::array<double, 3>& masses);

struct PairElements {
  double overlap;
  double kinetic;
  double trap;
  double interaction;  // g times the three contact-line elements
};

// Closed-form elements between two primitive (unprojected) Gaussians for the
// contact lines of the given mass setup.
PairElements pair_matrix_elements(const GaussianElement& a,
                                  const GaussianElement& b, double g,
                                  const std::array<double, 3>& masses);

struct SvmResult {
  double energy = 0.0;                 // relative energy (no CM zero point)
  std::vector<double> round_energies;  // after the initial pick and each growth
  std::vector<GaussianElement> basis;
  std::vector<double> spectrum;        // lowest eigenvalues of the final basis
};

// Variational upper bound for the ground state of the relative Hamiltonian
// in the requested parity sector. Deterministic for a fixed config.
SvmResult svm_ground_energy(double g, double mass_ratio, const SvmConfig& config);

}  // namespace fewfermi::svm
