#include "fewfermi/ansatz.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fewfermi::ansatz {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

CouplingPoint CouplingPoint::from_g(double g) {
  if (std::isnan(g)) throw std::invalid_argument("CouplingPoint: g is NaN");
  if (std::isinf(g)) return {g, 0.0};
  if (g == 0.0) return {0.0, -kInf};
  return {g, -1.0 / g};
}

CouplingPoint CouplingPoint::from_q(double q) {
  if (std::isnan(q)) throw std::invalid_argument("CouplingPoint: q is NaN");
  if (q == 0.0) return {kInf, 0.0};
  if (std::isinf(q)) return {0.0, q};
  return {-1.0 / q, q};
}

double trial_energy(const LimitPair& pair, double g, double alpha0,
                    double alpha_inf) {
  if (alpha0 == 0.0 && alpha_inf == 0.0) {
    throw std::invalid_argument("trial_energy: (alpha0, alpha_inf) = (0,0)");
  }
  const double denom = alpha0 * alpha0 + alpha_inf * alpha_inf +
                       2.0 * pair.overlap * alpha0 * alpha_inf;
  if (denom <= 1e-14) {
    throw std::domain_error("trial_energy: degenerate trial-state norm");
  }
  const double v00 = g * pair.k0;
  return pair.e0 +
         (v00 * alpha0 * alpha0 + pair.delta_e() * alpha_inf * alpha_inf) / denom;
}

double optimal_coefficients(const LimitPair& pair, double g, Branch branch) {
  const double v00 = g * pair.k0;
  const double de = pair.delta_e();
  const double s = pair.overlap;
  if (v00 == 0.0) {
    // Trial state collapses onto |g0> for the perturbative branch.
    return (branch == Branch::minus) == (de > 0.0) ? kInf : 0.0;
  }
  if (s == 0.0) {
    // Stationary states are the basis states themselves.
    const bool wants_minimum = branch == Branch::minus;
    return wants_minimum == (v00 < de) ? kInf : 0.0;
  }
  double disc = (de - v00) * (de - v00) + 4.0 * v00 * de * s * s;
  if (disc < 0.0) {
    if (disc > -1e-12 * (de * de + v00 * v00)) {
      disc = 0.0;
    } else {
      throw std::domain_error("optimal_coefficients: negative discriminant");
    }
  }
  const double root = std::sqrt(disc);
  // Eq. for (alpha0/alpha_inf)^(+-): minus branch takes +root.
  const double sign = (branch == Branch::minus) ? 1.0 : -1.0;
  const double num = de - v00 + sign * root;
  // Cancellation-safe form when num is a difference of close numbers.
  if (std::abs(num) < 1e-8 * (std::abs(de - v00) + root)) {
    // num * conj = -(4 v00 de s^2) => ratio = -2 de s / conj
    const double conj = de - v00 - sign * root;
    if (conj == 0.0) return 0.0;
    return -2.0 * de * s / conj;
  }
  return num / (2.0 * v00 * s);
}

namespace {

// E - e0 for the requested branch with lambda in place of s^2, written with
// conjugate factors so large |v00| does not lose precision.
double optimal_shift(double v00, double de, double lambda, Branch branch) {
  const double sum = v00 + de;
  const double p = 4.0 * v00 * de * (1.0 - lambda);
  double disc = sum * sum - p;
  if (disc < 0.0) {
    if (disc > -1e-12 * std::max(sum * sum, std::abs(p))) {
      disc = 0.0;
    } else {
      throw std::domain_error("optimal_energy: negative discriminant");
    }
  }
  const double root = std::sqrt(disc);
  const double one_minus = 1.0 - lambda;
  if (branch == Branch::minus) {
    if (sum >= 0.0) {
      // sum - root = p / (sum + root)
      const double denom = sum + root;
      if (denom == 0.0) return 0.0;
      return p / denom / (2.0 * one_minus);
    }
    return (sum - root) / (2.0 * one_minus);
  }
  if (sum <= 0.0) {
    const double denom = sum - root;
    if (denom == 0.0) return 0.0;
    return p / denom / (2.0 * one_minus);
  }
  return (sum + root) / (2.0 * one_minus);
}

}  // namespace

AnsatzResult optimal_energy(const LimitPair& pair, CouplingPoint coupling,
                            std::optional<double> lambda_override) {
  const double s = pair.overlap;
  if (std::abs(s) > 1.0) {
    throw std::domain_error("optimal_energy: |overlap| > 1");
  }
  if (std::abs(s) >= 1.0 - 1e-12) {
    throw std::domain_error("optimal_energy: overlap-degenerate limit states");
  }
  const double lambda = lambda_override.value_or(s * s);
  if (lambda >= 1.0 - 1e-12) {
    throw std::domain_error("optimal_energy: lambda too close to 1");
  }

  AnsatzResult out;
  out.has_trial_state = !lambda_override.has_value();
  if (!out.has_trial_state) out.anderson_sq = kNaN;

  if (coupling.infinite_g()) {
    out.energy = pair.e_inf;
    out.branch = (coupling.g < 0.0) ? Branch::plus : Branch::minus;
    out.alpha_ratio = 0.0;
    if (out.has_trial_state) {
      // Pure |ginf> trial state.
      out.anderson_sq = s * s;
    }
    return out;
  }

  const double g = coupling.g;
  out.branch = (g >= 0.0) ? Branch::minus : Branch::plus;
  const double v00 = g * pair.k0;
  const double de = pair.delta_e();
  if (v00 == 0.0 && de == 0.0) {
    // Interaction-inert state (e.g. the flat "trivial" levels).
    out.energy = pair.e0;
    out.alpha_ratio = kInf;
    if (out.has_trial_state) out.anderson_sq = 1.0;
    return out;
  }
  out.energy = pair.e0 + optimal_shift(v00, de, lambda, out.branch);

  if (out.has_trial_state) {
    out.alpha_ratio = optimal_coefficients(pair, g, out.branch);
    if (std::isinf(out.alpha_ratio)) {
      out.anderson_sq = 1.0;
    } else {
      const double r = out.alpha_ratio;
      const double num = (r + s) * (r + s);
      const double den = r * r + 1.0 + 2.0 * s * r;
      out.anderson_sq = num / den;
    }
  } else {
    out.alpha_ratio = kNaN;
  }
  return out;
}

double strong_slope(const LimitPair& pair) {
  if (!(pair.k0 > 0.0)) {
    throw std::domain_error(
        "strong_slope: k0 must be positive (state untouched by interaction)");
  }
  const double de = pair.delta_e();
  return de * de * pair.overlap * pair.overlap / pair.k0;
}

double modified_lambda(const LimitPair& pair) {
  if (!pair.k_exact_inf.has_value()) {
    throw std::domain_error("modified_lambda: exact strong-coupling slope missing");
  }
  const double de = pair.delta_e();
  if (de == 0.0) {
    throw std::domain_error("modified_lambda: DeltaE = 0");
  }
  return pair.k0 * pair.k_exact_inf.value() / (de * de);
}

}  // namespace fewfermi::ansatz
