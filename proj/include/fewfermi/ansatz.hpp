#pragma once

#include <optional>

// Two-state interpolatory ansatz between the g = 0 and 1/g = 0 eigenstates
// of a trapped 1D system with zero-range interactions, plus the modified
// (perturbatively correct) variant. All inputs live in a LimitPair; couplings
// are expressed either as g or as q = -1/g.
namespace fewfermi::ansatz {

enum class Branch { minus, plus };

// Interaction strength g and the reciprocal coordinate q = -1/g.
// q = 0 represents |g| = infinity; g = 0 maps to q = -+infinity.
struct CouplingPoint {
  double g;
  double q;

  static CouplingPoint from_g(double g);
  static CouplingPoint from_q(double q);
  bool infinite_g() const { return q == 0.0; }
};

// Data defining one ansatz instance:
//   e0       eigenenergy at g = 0
//   e_inf    eigenenergy at 1/g = 0
//   k0       K^0 = <g0|V|g0>/g, the weak-coupling energy slope
//   overlap  s = <g0|ginf>
//   k_exact_inf  slope of the exact energy in q at q = 0, when known
struct LimitPair {
  double e0 = 0.0;
  double e_inf = 0.0;
  double k0 = 0.0;
  double overlap = 0.0;
  std::optional<double> k_exact_inf;

  double delta_e() const { return e_inf - e0; }
};

struct AnsatzResult {
  double energy = 0.0;
  double alpha_ratio = 0.0;  // (alpha0/alpha_inf)_opt; +-inf at g = 0
  Branch branch = Branch::minus;
  // <g0|gamma>^2 of the optimised trial state. NaN when a lambda override is
  // in effect: the modified ansatz carries no trial state.
  double anderson_sq = 0.0;
  bool has_trial_state = true;
};

// Energy of the unoptimised trial state alpha0|g0> + alpha_inf|ginf>.
double trial_energy(const LimitPair& pair, double g, double alpha0,
                    double alpha_inf);

// Stationary coefficient ratio (alpha0/alpha_inf) for the requested branch.
// Returns +-infinity in the degenerate limits (pure |g0> trial state).
double optimal_coefficients(const LimitPair& pair, double g, Branch branch);

// Optimal ansatz energy at the given coupling. Branch: minus for g > 0
// (energy minimum), plus for g < 0 (energy maximum); at q = 0 both give
// e_inf. lambda_override replaces overlap^2 in the energy formula (the
// modified ansatz); the result then carries no trial state.
AnsatzResult optimal_energy(const LimitPair& pair, CouplingPoint coupling,
                            std::optional<double> lambda_override = std::nullopt);

// Strong-coupling slope of the ansatz energy, dE/dq at q = 0:
// DeltaE^2 * s^2 / K^0.
double strong_slope(const LimitPair& pair);

// lambda = K^0 K_exact^inf / DeltaE^2; feeding it to optimal_energy as
// lambda_override makes the q = 0 slope exact.
double modified_lambda(const LimitPair& pair);

}  // namespace fewfermi::ansatz
