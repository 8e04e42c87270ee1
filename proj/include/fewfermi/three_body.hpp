#pragma once

#include "fewfermi/ansatz.hpp"

#include <optional>
#include <string>
#include <vector>

// 2+1 fermions (two identical spin-up, one spin-down) in hyperspherical
// coordinates (rho, phi) on the two mass-scaled relative Jacobi coordinates.
// Energies are relative energies E = 2 nu + mu + 1.
//
// Units: for equal masses the coupling g and all energies use the oscillator
// length sqrt(hbar/(m omega)); for unequal masses the length scale switches
// to sqrt(hbar/(eta omega)) with eta = sqrt(m1 m2 m3 / M), matching the
// treatment of each case in the literature this follows.
namespace fewfermi::threebody {

enum class Limit { g0, ginf };

enum class AngularKind {
  noninteracting,
  infinite_equal_mass,
  infinite_imbalanced_two_region,
  infinite_imbalanced_middle_region,
};

struct HypersphericalState {
  int nu = 0;
  double mu = 1.0;
  int parity = -1;
  double mass_ratio = 1.0;  // M/m, impurity over majority

  double energy() const { return 2.0 * nu + mu + 1.0; }
};

// Half-angle of the impurity-majority delta lines measured from the
// majority-pair axis: arctan(sqrt(M/(2m+M))).
double theta0(double mass_ratio);

struct MuRoot {
  double mu;
  // Which factor of the 1/g = 0 condition vanished: 0 for the
  // sin(mu (pi/2 - theta0)) family (outer-region modes), 1 for the
  // theta0 family (middle-region modes). -1 for g = 0 roots.
  int family;
};

// Ascending positive roots (with multiplicity across families) of the
// angular quantum-number condition in the requested limit, mu <= 40.
std::vector<MuRoot> mu_roots(Limit limit, int parity, double mass_ratio,
                             int count);

// branch_index-th root (0-based) of mu_roots.
double solve_mu_limit(Limit limit, int parity, double mass_ratio,
                      int branch_index);

// Equal-mass |delta mu| = (3 + (-1)^{mu_inf} p)/2 between adiabatically
// connected angular quantum numbers. mu0 < mu_inf on the repulsive side.
int delta_mu(int parity, int mu_inf);

// Normalised angular eigenfunction on [-pi, pi).
struct AngularFunction {
  AngularKind kind = AngularKind::noninteracting;
  double mu = 1.0;
  int parity = -1;
  double theta0 = 0.0;
  double norm = 1.0;

  double operator()(double phi) const;
};

AngularFunction make_angular(AngularKind kind, double mu, int parity,
                             double mass_ratio);

// Full relative wave function: radial Laguerre factor times the angular
// function appropriate for the limit (kind resolved from the state unless
// given). Normalised over rho drho dphi.
double wavefunction(const HypersphericalState& state, Limit limit, double rho,
                    double phi,
                    std::optional<AngularKind> kind = std::nullopt);

// One adiabatic spectral curve: at q < 0 it interpolates (mu0_rep -> mu_inf),
// at q > 0 (mu_inf -> mu0_att). Trivial states have mu0 = mu_inf and stay
// flat for all g.
struct AdiabaticState {
  int nu = 0;
  int parity = -1;
  double mu_inf = 3.0;
  double mu0_rep = 1.0;
  double mu0_att = 5.0;
  bool trivial = false;
  int family = 0;  // MuRoot family of mu_inf (imbalanced); 0 for equal mass
};

// All curves with E_inf <= e_max (relative energy), ordered by E_inf.
std::vector<AdiabaticState> enumerate_states(double mass_ratio, double e_max);

// <1/rho> over the squared radial density of the (nu, mu) state.
double radial_inverse_moment(int nu, double mu);
// <R_{nu,mu_a} | R_{nu,mu_b}> radial overlap.
double radial_overlap(int nu, double mu_a, double mu_b);

enum class Side { repulsive, attractive };

// LimitPair for one side of an adiabatic curve. k_exact_inf is left empty;
// spectrum sweeps fill it from the exact ground-multiplet slopes or a CI
// finite difference where requested.
ansatz::LimitPair limit_pair(const AdiabaticState& state, Side side,
                             double mass_ratio);

struct SpectrumRow {
  double q;
  double g;
  std::string label;
  int parity;
  int nu;
  double energy;
  std::string method;  // "ansatz" or "modified"
  double anderson_sq;  // NaN when absent
};

// Ansatz (and, for equal masses, modified-ansatz) curves for every state
// with limit energies below e_max, over the q grid.
std::vector<SpectrumRow> spectrum(double mass_ratio,
                                  const std::vector<double>& q_grid,
                                  double e_max, bool include_modified = true);

// Exact strong-coupling slope dE/dq at q = 0 for an equal-mass state, when
// available: ground-multiplet slopes come from the impurity slope matrix,
// higher multiplets from a finite difference of the CI oracle.
std::optional<double> equal_mass_exact_slope(const AdiabaticState& state);

}  // namespace fewfermi::threebody
