#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

// Numerical kernel shared by all physics modules: special functions,
// bracketed root finding, Gaussian quadrature and small dense eigensolvers.
// Everything here is a pure function of its arguments; conventions are
// natural oscillator units (hbar = omega = 1) throughout the library.
namespace fewfermi::numerics {

// ln|Gamma(x)| together with the sign of Gamma(x).
struct SignedLogGamma {
  double log_abs;
  int sign;  // +1 or -1
};

// Throws std::domain_error at the poles x = 0, -1, -2, ...
SignedLogGamma log_gamma(double x);

// Gamma(a)/Gamma(b) evaluated through logs so that moderate arguments on
// either side of the poles stay in range.
double gamma_ratio(double a, double b);

// Confluent hypergeometric function 1F1(a;b;x) by direct series with Kahan
// summation. Supported for |x| <= 50 (negative x goes through the Kummer
// transform); b must not be a non-positive integer.
double kummer_1f1(double a, double b, double x);

// Harmonic-oscillator eigenfunction psi_n(x) = H_n(x) e^{-x^2/2} /
// sqrt(2^n n! sqrt(pi)), n <= 60, via the normalised recurrence.
double ho_eigenfunction(int n, double x);

// Same without the Gaussian factor, i.e. psi_n(x) * e^{x^2/2}. Useful under
// Gauss-Hermite quadrature where the weight carries the Gaussian.
double ho_eigenfunction_scaled(int n, double x);

// Generalised Laguerre polynomial L_nu^mu(x), mu > -1, three-term recurrence.
double laguerre_general(int nu, double mu, double x);

struct Bracket {
  double lo;
  double hi;
};

// Bisection-safeguarded superlinear root finder (Brent). Requires a sign
// change across the bracket; deterministic for identical inputs.
double find_root(const std::function<double(double)>& f, Bracket bracket,
                 double tol = 1e-12);

enum class QuadKind { gauss_hermite, gauss_legendre };

struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;
  QuadKind kind;
};

// n-point Gauss-Hermite rule for the weight e^{-x^2}:
//   integral f(x) e^{-x^2} dx  ~=  sum_i w_i f(x_i),
// exact for polynomials of degree <= 2n-1.
QuadratureRule gauss_hermite(int n);

// n-point Gauss-Legendre rule on [-1,1], or mapped onto [a,b].
QuadratureRule gauss_legendre(int n);
QuadratureRule gauss_legendre(int n, double a, double b);

// Convenience: integrate f against an (already mapped) rule.
double integrate(const QuadratureRule& rule,
                 const std::function<double(double)>& f);

struct EigResult {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthonormal columns
};

// Dense symmetric eigendecomposition. Throws if A deviates from symmetry by
// more than 1e-12 relative to its scale.
EigResult symmetric_eig(const Eigen::MatrixXd& a);

struct GenEigLowest {
  double value;
  Eigen::VectorXd vector;  // normalised so that v^T S v = 1
};

// Lowest eigenpair of H v = lambda S v for symmetric H and symmetric
// positive-definite S. Throws if S has an eigenvalue below 1e-12 (signals a
// linearly dependent basis).
GenEigLowest generalized_eig_lowest(const Eigen::MatrixXd& h,
                                    const Eigen::MatrixXd& s);

// All eigenpairs of the same generalized problem, ascending.
EigResult generalized_eig(const Eigen::MatrixXd& h, const Eigen::MatrixXd& s);

}  // namespace fewfermi::numerics
