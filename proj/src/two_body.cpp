#include "fewfermi/two_body.hpp"

#include "fewfermi/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fewfermi::twobody {

namespace num = fewfermi::numerics;

double busch_q_of_energy(double energy) {
  return num::gamma_ratio(0.25 * (1.0 - 2.0 * energy),
                          0.25 * (3.0 - 2.0 * energy)) /
         (2.0 * std::sqrt(2.0));
}

namespace {

// Root window just inside (lo, hi); q(E) is monotone between the poles.
double solve_in_window(double q, double lo, double hi) {
  const double pad = 1e-9 * (hi - lo);
  const auto f = [q](double e) { return busch_q_of_energy(e) - q; };
  return num::find_root(f, {lo + pad, hi - pad}, 1e-13);
}

}  // namespace

double busch_energy(double q, int level, bool deep) {
  if (level < 0) throw std::invalid_argument("busch_energy: level < 0");
  if (deep) {
    if (level != 0 || q <= 0.0) {
      throw std::invalid_argument(
          "busch_energy: deep branch requires level 0 and q > 0");
    }
    const double g = -1.0 / q;
    // E ~ -g^2/4 far below the window; widen downward if needed.
    double lo = -0.5 * g * g - 1.0;
    const double hi = 0.5 - 1e-8;
    const auto f = [q](double e) { return busch_q_of_energy(e) - q; };
    for (int attempt = 0; attempt < 8; ++attempt) {
      if (f(lo) < 0.0) return num::find_root(f, {lo, hi}, 1e-13);
      lo = 2.0 * lo - 1.0;
    }
    throw std::runtime_error("busch_energy: deep bracket not found");
  }
  if (q == 0.0) return 2.0 * level + 1.5;
  if (q < 0.0) {
    // Repulsive side of the level: E in (2k + 1/2, 2k + 3/2).
    return solve_in_window(q, 2.0 * level + 0.5, 2.0 * level + 1.5);
  }
  // Attractive side: E in (2k - 1/2, 2k + 1/2). For level 0 this is the
  // shallow part of the molecular branch; it exists only for q large enough.
  const double lo = 2.0 * level - 0.5;
  const double hi = 2.0 * level + 0.5;
  const double pad = 1e-9;
  const double q_lo = busch_q_of_energy(lo + pad);
  if (q <= q_lo && level == 0) {
    throw std::domain_error("busch_energy: q=" + std::to_string(q) +
                            " outside the level-0 window (use the deep flag)");
  }
  return solve_in_window(q, lo, hi);
}

double busch_wavefunction(double energy, double x) {
  if (std::abs(x) > 7.0) {
    throw std::domain_error("busch_wavefunction: |x| > 7");
  }
  const double q = busch_q_of_energy(energy);
  const double x2 = x * x;
  const double f1 = num::kummer_1f1(0.25 * (1.0 - 2.0 * energy), 0.5, x2);
  const double f2 = num::kummer_1f1(0.25 * (3.0 - 2.0 * energy), 1.5, x2);
  return (-std::sqrt(2.0) * q * f1 + std::abs(x) * f2) * std::exp(-0.5 * x2);
}

double busch_exact_slope(int level) {
  if (level < 0) throw std::invalid_argument("busch_exact_slope: level < 0");
  // Near E* = 2k + 3/2 the relation is q = C (E* - E)/2 with
  // C = (-1)^k k! Gamma(-k - 1/2) / (2 sqrt 2), so dE/dq = -2/C.
  const auto lg = num::log_gamma(-level - 0.5);
  double log_c = lg.log_abs + std::lgamma(level + 1.0) - 0.5 * std::log(8.0);
  double sign = lg.sign * ((level % 2 == 0) ? 1.0 : -1.0);
  return -2.0 * sign * std::exp(-log_c);
}

namespace {

// <psi_a | sgn(x) | psi_b> by split quadrature: sgn breaks smoothness at 0,
// so integrate on [0, 7] and double (nonzero only for opposite parities).
double sgn_overlap(int a, int b) {
  if ((a + b) % 2 == 0) return 0.0;
  static const num::QuadratureRule rule = num::gauss_legendre(200, 0.0, 7.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    sum += rule.weights[i] * num::ho_eigenfunction(a, x) *
           num::ho_eigenfunction(b, x);
  }
  return 2.0 * sum;
}

}  // namespace

ansatz::LimitPair limit_pair(TwoBodyLevel level) {
  if (level.n1 < 0 || level.n2() < 0) {
    throw std::invalid_argument("two-body limit_pair: invalid level");
  }
  ansatz::LimitPair pair;
  pair.e0 = level.n1 + 0.5;
  pair.e_inf = level.n2() + 0.5;
  const double psi0 = num::ho_eigenfunction(level.n1, 0.0);
  pair.k0 = psi0 * psi0 / std::sqrt(2.0);  // delta rescaling for x = (x1-x2)/sqrt(2)
  if (level.n1 % 2 == 1) {
    // Odd states are untouched: no coupling, no partner mixing.
    pair.k0 = 0.0;
    pair.overlap = 0.0;
    pair.k_exact_inf = 0.0;
    return pair;
  }
  pair.overlap = sgn_overlap(level.n1, level.n2());
  // The 1/g = 0 energies sit at E = 2k + 3/2 with k from n2 = 2k + 1.
  pair.k_exact_inf = busch_exact_slope((level.n2() - 1) / 2);
  return pair;
}

double ansatz_wavefunction(TwoBodyLevel level, double g, double x) {
  const ansatz::LimitPair pair = limit_pair(level);
  const auto res = ansatz::optimal_energy(pair, ansatz::CouplingPoint::from_g(g));
  double a0;
  double ainf;
  if (std::isinf(res.alpha_ratio)) {
    a0 = 1.0;
    ainf = 0.0;
  } else {
    a0 = res.alpha_ratio;
    ainf = 1.0;
  }
  const double sgn = (x > 0.0) - (x < 0.0);
  const double value = a0 * num::ho_eigenfunction(level.n1, x) +
                       ainf * sgn * num::ho_eigenfunction(level.n2(), x);
  const double norm2 = a0 * a0 + ainf * ainf + 2.0 * pair.overlap * a0 * ainf;
  return value / std::sqrt(norm2);
}

namespace {

struct DeepBasis {
  double g;
  double kappa;

  // b0 = psi_0, b1 = sgn psi_1, b2 = normalised delta-well bound state.
  double value(int i, double x) const {
    switch (i) {
      case 0:
        return num::ho_eigenfunction(0, x);
      case 1: {
        const double s = (x > 0.0) - (x < 0.0);
        return s * num::ho_eigenfunction(1, x);
      }
      default:
        return std::sqrt(kappa) * std::exp(-kappa * std::abs(x));
    }
  }

  double derivative(int i, double x) const {
    switch (i) {
      case 0:
        return -x * num::ho_eigenfunction(0, x);
      case 1: {
        // d/dx [sgn(x) psi_1(x)]; psi_1(0) = 0 so the kink carries no delta.
        const double s = (x > 0.0) - (x < 0.0);
        const double c1 = std::sqrt(2.0) * num::ho_eigenfunction(0, 0.0);
        return s * (c1 * std::exp(-0.5 * x * x) - x * num::ho_eigenfunction(1, x));
      }
      default: {
        const double s = (x > 0.0) - (x < 0.0);
        return -kappa * s * std::sqrt(kappa) * std::exp(-kappa * std::abs(x));
      }
    }
  }
};

}  // namespace

DeepAnsatzResult extended_deep_ansatz(double g) {
  if (!(g < 0.0)) {
    throw std::invalid_argument("extended_deep_ansatz: requires g < 0");
  }
  const DeepBasis basis{g, std::abs(g) / std::sqrt(2.0)};
  // Integrands are even; quadrature on [0, L] with L covering both the trap
  // scale and the 1/kappa well scale.
  const double length = std::max(9.0, 9.0 / basis.kappa);
  const num::QuadratureRule rule = num::gauss_legendre(400, 0.0, length);

  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d s = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      double sij = 0.0;
      double tij = 0.0;
      double uij = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double x = rule.nodes[k];
        const double w = rule.weights[k];
        const double fi = basis.value(i, x);
        const double fj = basis.value(j, x);
        sij += w * fi * fj;
        tij += w * basis.derivative(i, x) * basis.derivative(j, x);
        uij += w * x * x * fi * fj;
      }
      // Even integrands: double the half-line result. The weak form
      // (1/2) int f' g' handles the kinks at x = 0; the contact term is
      // (g/sqrt(2)) f(0) g(0).
      sij *= 2.0;
      tij *= 2.0;
      uij *= 2.0;
      const double contact =
          (g / std::sqrt(2.0)) * basis.value(i, 0.0) * basis.value(j, 0.0);
      s(i, j) = s(j, i) = sij;
      h(i, j) = h(j, i) = 0.5 * tij + 0.5 * uij + contact;
    }
  }
  const auto lowest = num::generalized_eig_lowest(h, s);
  return {lowest.value,
          {lowest.vector(0), lowest.vector(1), lowest.vector(2)}};
}

double deep_ansatz_wavefunction(const DeepAnsatzResult& r, double g, double x) {
  const DeepBasis basis{g, std::abs(g) / std::sqrt(2.0)};
  double value = 0.0;
  for (int i = 0; i < 3; ++i) value += r.coefficients[i] * basis.value(i, x);
  return value;  // v^T S v = 1 normalisation from the eigensolver
}

}  // namespace fewfermi::twobody
