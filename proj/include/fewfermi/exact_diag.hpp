#pragma once

#include "fewfermi/ansatz.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

// Effective-interaction configuration interaction for N_A + N_B trapped
// fermions with equal masses. The two-body relative interaction is unitarily
// transformed so that its truncated spectrum reproduces the exact two-body
// energies (non-deep branches), and a Lawson penalty pushes centre-of-mass
// excitations out of the low spectrum. Energies are total trap energies.
namespace fewfermi::ci {

struct FockBasisState {
  std::vector<int> up;    // strictly decreasing mode numbers
  std::vector<int> down;

  int quanta() const;
};

struct ModelSpace {
  int n_max_rel = 40;        // two-body relative cutoff
  int e_max_quanta = 14;     // many-body total-quanta truncation (absolute)
  double lawson_weight = 50.0;
};

// Defaults used by the high-level drivers: the truncation is the Pauli floor
// of the (N-1, 1) system plus 14 excitation quanta for N <= 4 and plus 10
// for N = 5, 6.
ModelSpace default_model_space(int n_a, int n_b);

// Effective two-body Hamiltonian (kinetic + trap included) on the relative
// oscillator levels 0..n_max_rel. Its eigenvalues are exactly the two-body
// energies of the adiabatic (non-deep) branches at this coupling; odd levels
// are untouched by the contact interaction.
Eigen::MatrixXd effective_two_body(int n_max_rel, ansatz::CouplingPoint coupling);
Eigen::MatrixXd effective_two_body(int n_max_rel, double g);

// 1D harmonic-oscillator Moshinsky bracket <n_rel N_cm | n1 n2> for the
// equal-mass pair transformation x_rel = (x1 - x2)/sqrt(2).
double moshinsky_bracket_1d(int n1, int n2, int n_rel, int n_cm);

// All basis states with total quanta <= e_max_quanta, deterministic order.
std::vector<FockBasisState> build_basis(int n_a, int n_b, int e_max_quanta);

Eigen::SparseMatrix<double> assemble_hamiltonian(
    const std::vector<FockBasisState>& basis, ansatz::CouplingPoint coupling,
    const ModelSpace& space);

// k lowest eigenpairs: dense solve below dimension 2000, Lanczos with full
// reorthogonalisation above; residuals below 1e-8.
std::vector<std::pair<double, Eigen::VectorXd>> lowest_states(
    const Eigen::SparseMatrix<double>& h, int k);

struct IntrinsicState {
  double energy;          // total trap energy, CM in its ground state
  int parity;             // +-1
  double cm_excitation;   // <A^dagger A>, < 1e-6 for reported states
};

// Lowest k intrinsic (CM-ground) states.
std::vector<IntrinsicState> intrinsic_states(int n_a, int n_b,
                                             ansatz::CouplingPoint coupling,
                                             const ModelSpace& space, int k);

// Total ground energy with the CM in its ground state.
double intrinsic_ground_energy(int n_a, int n_b, ansatz::CouplingPoint coupling,
                               const ModelSpace& space);
double intrinsic_ground_energy(int n_a, int n_b, double g,
                               const ModelSpace& space);

}  // namespace fewfermi::ci
