#pragma once

#include "fewfermi/ansatz.hpp"

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

// N - 1 majority fermions plus one impurity (particle 1) in a harmonic trap,
// V = g sum_k delta(x1 - xk), repulsive ground state. Energies are total trap
// energies. All ordered-region integrals are evaluated deterministically by
// expanding the Vandermonde factors and reducing to running error-function
// moments; no stochastic integration is involved for any N <= 6.
namespace fewfermi::impurity {

inline constexpr int kMaxN = 6;

// Normalised N-orbital ground-state Slater determinant via the Vandermonde
// closed form.
double slater_ground(std::span<const double> x);

double e0(int n_total);    // (N_up^2 + 1)/2
double einf(int n_total);  // N^2/2

// K^0 = <g0|V|g0>/g = sqrt(2) Gamma(N - 1/2) / (pi (N-2)!).
double v00_closed_form(int n_total);

// Partial overlaps <g0|gA>_n, n = 1..N (impurity n-th from the left).
std::vector<double> partial_overlaps(int n_total);

struct SlopeMatrix {
  std::vector<double> alphas;  // alpha_1..alpha_{N-1}
  Eigen::MatrixXd matrix;      // N x N bisymmetric tridiagonal
};

SlopeMatrix slope_matrix(int n_total);

struct ExactSlope {
  double k_exact;     // greatest eigenvalue of the slope matrix
  Eigen::VectorXd a;  // matching eigenvector, sign fixed by a(0) > 0
};

ExactSlope exact_strong_slope(int n_total);

// All eigenvalues of the slope matrix, ascending. For N = 3 these are the
// exact strong-coupling slopes {0, alpha_1, 3 alpha_1} of the ground
// multiplet (trivial, even, odd states).
Eigen::VectorXd slope_matrix_spectrum(int n_total);

// Squared overlap <g0|ginf(a)>^2 = N (a.v)^2 / |a|^2 with v the partial
// overlaps.
double overlap_sq_from_a(int n_total, const Eigen::VectorXd& a);

struct OptimalOverlap {
  double value;          // N sum_m v_m^2
  Eigen::VectorXd a_max; // proportional to v, sign fixed by first entry > 0
};

OptimalOverlap optimal_overlap(int n_total);

enum class Method { ansatz, modified };

// LimitPair for the ground state. The overlap uses the true-eigenstate
// coefficients from the slope matrix by default; use_amax switches to the
// overlap-optimal vector.
ansatz::LimitPair limit_pair(int n_total, bool use_amax = false);

// Ground-state energy at repulsive coupling g >= 0.
ansatz::AnsatzResult ground_energy(int n_total, double g, Method method,
                                   bool use_amax = false);

struct AndersonPoint {
  double g;
  double anderson_sq;
};

// <g0|gamma>^2 of the optimised trial state over a repulsive grid.
std::vector<AndersonPoint> anderson_overlap_curve(
    int n_total, const std::vector<double>& g_grid);

}  // namespace fewfermi::impurity
