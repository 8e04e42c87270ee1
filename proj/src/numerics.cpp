#include "fewfermi/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fewfermi::numerics {

namespace {

bool is_nonpositive_integer(double x) {
  return x <= 0.0 && x == std::floor(x);
}

}  // namespace

SignedLogGamma log_gamma(double x) {
  if (is_nonpositive_integer(x)) {
    throw std::domain_error("log_gamma: pole at non-positive integer x = " +
                            std::to_string(x));
  }
  int sign = 1;
  if (x < 0.0) {
    // Gamma alternates sign on the negative unit intervals:
    // negative on (-1,0), positive on (-2,-1), ...
    const long long k = static_cast<long long>(std::floor(-x));
    sign = (k % 2 == 0) ? -1 : 1;
  }
  return {std::lgamma(x), sign};
}

double gamma_ratio(double a, double b) {
  // A pole of Gamma(b) makes the ratio vanish.
  if (is_nonpositive_integer(b) && !is_nonpositive_integer(a)) return 0.0;
  const auto la = log_gamma(a);
  const auto lb = log_gamma(b);
  return la.sign * lb.sign * std::exp(la.log_abs - lb.log_abs);
}

double kummer_1f1(double a, double b, double x) {
  if (is_nonpositive_integer(b)) {
    throw std::domain_error("kummer_1f1: b must not be a non-positive integer");
  }
  if (std::abs(x) > 50.0) {
    throw std::domain_error("kummer_1f1: |x| > 50 outside supported range");
  }
  if (x < 0.0) {
    // Kummer transform keeps the series single-signed.
    return std::exp(x) * kummer_1f1(b - a, b, -x);
  }
  // Direct series with Kahan-compensated summation.
  double sum = 1.0;
  double comp = 0.0;
  double term = 1.0;
  for (int k = 0; k < 1000; ++k) {
    term *= (a + k) * x / ((b + k) * (k + 1));
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (std::abs(term) <= 1e-17 * std::abs(sum) && k > 3) return sum;
  }
  throw std::runtime_error("kummer_1f1: series did not converge");
}

double ho_eigenfunction_scaled(int n, double x) {
  if (n < 0 || n > 60) {
    throw std::domain_error("ho_eigenfunction: n outside [0,60]");
  }
  const double pi_quarter = 0.75112554446494248;  // pi^{-1/4}
  double hm1 = 0.0;
  double h = pi_quarter;
  for (int k = 0; k < n; ++k) {
    const double hp1 =
        std::sqrt(2.0 / (k + 1)) * x * h - std::sqrt(double(k) / (k + 1)) * hm1;
    hm1 = h;
    h = hp1;
  }
  return h;
}

double ho_eigenfunction(int n, double x) {
  return ho_eigenfunction_scaled(n, x) * std::exp(-0.5 * x * x);
}

double laguerre_general(int nu, double mu, double x) {
  if (mu <= -1.0) throw std::domain_error("laguerre_general: mu <= -1");
  if (nu < 0) throw std::domain_error("laguerre_general: nu < 0");
  if (nu == 0) return 1.0;
  double lm1 = 1.0;
  double l = 1.0 + mu - x;
  for (int k = 1; k < nu; ++k) {
    const double lp1 = ((2.0 * k + mu + 1.0 - x) * l - (k + mu) * lm1) / (k + 1);
    lm1 = l;
    l = lp1;
  }
  return l;
}

double find_root(const std::function<double(double)>& f, Bracket bracket,
                 double tol) {
  double a = bracket.lo;
  double b = bracket.hi;
  if (!(a < b)) throw std::invalid_argument("find_root: requires lo < hi");
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw std::invalid_argument("find_root: no sign change across bracket");
  }
  // Brent's method.
  double c = a, fc = fa;
  double d = b - a, e = d;
  const int max_iter = 200;
  for (int iter = 0; iter < max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // Inverse quadratic / secant step.
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  throw std::runtime_error("find_root: maximum iterations exceeded");
}

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n < 1");
  QuadratureRule rule;
  rule.kind = QuadKind::gauss_hermite;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const double pim4 = 0.75112554446494248;  // pi^{-1/4}
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    // Initial guesses, then Newton on the orthonormal Hermite recurrence.
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(double(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[n - 1];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[n - 2];
    } else {
      z = 2.0 * z - rule.nodes[n - i + 1];
    }
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(double(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    rule.nodes[n - 1 - i] = z;
    rule.nodes[i] = -z;
    rule.weights[i] = 2.0 / (pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
  QuadratureRule rule;
  rule.kind = QuadKind::gauss_legendre;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  QuadratureRule rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

double integrate(const QuadratureRule& rule,
                 const std::function<double(double)>& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(rule.nodes[i]);
  }
  return sum;
}

EigResult symmetric_eig(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("symmetric_eig: matrix not square");
  }
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("symmetric_eig: matrix not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("symmetric_eig: eigensolver failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

EigResult generalized_eig(const Eigen::MatrixXd& h, const Eigen::MatrixXd& s) {
  if (h.rows() != s.rows() || h.cols() != s.cols() || h.rows() != h.cols()) {
    throw std::invalid_argument("generalized_eig: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s_eig(s);
  if (s_eig.eigenvalues().minCoeff() <= 1e-12) {
    throw std::runtime_error(
        "generalized_eig: overlap matrix not positive definite "
        "(linearly dependent basis)");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, s);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("generalized_eig: eigensolver failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

GenEigLowest generalized_eig_lowest(const Eigen::MatrixXd& h,
                                    const Eigen::MatrixXd& s) {
  const EigResult all = generalized_eig(h, s);
  Eigen::VectorXd v = all.vectors.col(0);
  const double norm = std::sqrt(v.dot(s * v));
  v /= norm;
  return {all.values(0), v};
}

}  // namespace fewfermi::numerics
