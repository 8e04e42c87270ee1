#include "fewfermi/impurity.hpp"

#include "fewfermi/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace fewfermi::impurity {

namespace num = fewfermi::numerics;

namespace {

void check_n(int n_total) {
  if (n_total < 2 || n_total > kMaxN) {
    throw std::invalid_argument("impurity: N must lie in [2, 6]");
  }
}

// Normalisation constant of the N-orbital Slater ground state,
// F = C_N e^{-x^2/2} prod_{j<k} (x_k - x_j).
double slater_constant(int n) {
  double log_c = 0.25 * n * ((n - 1.0) * std::log(2.0) - std::log(M_PI));
  log_c -= 0.5 * std::lgamma(n + 1.0);
  for (int j = 0; j < n; ++j) log_c -= 0.5 * std::lgamma(j + 1.0);
  return std::exp(log_c);
}

// Sparse multivariate polynomial in up to 5 inner variables and the outer
// variable t. Key layout: [t_power, e_1, ..., e_5].
using Key = std::array<int, 6>;
using Poly = std::map<Key, double>;

Poly poly_const(double c) {
  Poly p;
  p[{0, 0, 0, 0, 0, 0}] = c;
  return p;
}

// var = 0 means t, var = 1..5 the inner variables.
Poly poly_linear(int var_plus, int var_minus) {
  Poly p;
  Key k{};
  k[var_plus] = 1;
  p[k] = 1.0;
  Key m{};
  m[var_minus] = 1;
  p[m] -= 1.0;
  return p;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ka, ca] : a) {
    for (const auto& [kb, cb] : b) {
      Key k;
      for (int i = 0; i < 6; ++i) k[i] = ka[i] + kb[i];
      out[k] += ca * cb;
    }
  }
  return out;
}

// prod_{1 <= i < j <= nvars} (v_j - v_i)
Poly vandermonde(int nvars) {
  Poly p = poly_const(1.0);
  for (int i = 1; i <= nvars; ++i) {
    for (int j = i + 1; j <= nvars; ++j) {
      p = poly_mul(p, poly_linear(j, i));
    }
  }
  return p;
}

struct MomentTables {
  // g[a], h[a]: running moments int_{-inf}^{t} v^a e^{-v^2} dv and its
  // complement, at a fixed t.
  std::array<double, 24> g;
  std::array<double, 24> h;

  explicit MomentTables(double t) {
    const double w = std::exp(-t * t);
    g[0] = 0.5 * std::sqrt(M_PI) * (1.0 + std::erf(t));
    h[0] = 0.5 * std::sqrt(M_PI) * std::erfc(t);
    g[1] = -0.5 * w;
    h[1] = 0.5 * w;
    double tp = t;  // t^{a-1}
    for (std::size_t a = 2; a < g.size(); ++a) {
      g[a] = 0.5 * (a - 1.0) * g[a - 2] - 0.5 * tp * w;
      h[a] = 0.5 * (a - 1.0) * h[a - 2] + 0.5 * tp * w;
      tp *= t;
    }
  }
};

// Integral of the polynomial over the product region where the first
// `below` inner variables run over (-inf, t) and the rest over (t, inf),
// each with weight e^{-v^2}; one value per below-count 0..nvars.
std::vector<double> integrate_splits(const Poly& poly, int nvars, double t) {
  const MomentTables mom(t);
  std::array<double, 24> tpow;
  tpow[0] = 1.0;
  for (std::size_t i = 1; i < tpow.size(); ++i) tpow[i] = tpow[i - 1] * t;

  std::vector<long double> acc(nvars + 1, 0.0L);
  std::array<double, 6> prefix;   // prefix[i] = prod_{j<=i} g[e_j]
  std::array<double, 6> suffix;   // suffix[i] = prod_{j>i} h[e_j]
  for (const auto& [key, coeff] : poly) {
    prefix[0] = 1.0;
    for (int i = 1; i <= nvars; ++i) prefix[i] = prefix[i - 1] * mom.g[key[i]];
    suffix[nvars] = 1.0;
    for (int i = nvars - 1; i >= 0; --i) {
      suffix[i] = suffix[i + 1] * mom.h[key[i + 1]];
    }
    const double base = coeff * tpow[key[0]];
    for (int b = 0; b <= nvars; ++b) {
      acc[b] += static_cast<long double>(base * prefix[b] * suffix[b]);
    }
  }
  std::vector<double> out(nvars + 1);
  for (int b = 0; b <= nvars; ++b) out[b] = static_cast<double>(acc[b]);
  return out;
}

double binomial(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                  std::lgamma(n - k + 1.0));
}

std::vector<double> compute_partial_overlaps(int n_total) {
  const int nvars = n_total - 1;  // x_2 .. x_N
  Poly poly = vandermonde(nvars);
  poly = poly_mul(poly, poly);
  for (int i = 1; i <= nvars; ++i) poly = poly_mul(poly, poly_linear(i, 0));

  const double c_prod = slater_constant(n_total - 1) * slater_constant(n_total);
  const double psi0_norm = std::pow(M_PI, -0.25);
  const num::QuadratureRule rule = num::gauss_legendre(320, -8.5, 8.5);

  std::vector<double> values(n_total, 0.0);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double t = rule.nodes[k];
    const double weight = rule.weights[k] * std::exp(-t * t);
    const auto splits = integrate_splits(poly, nvars, t);
    for (int n = 1; n <= n_total; ++n) {
      values[n - 1] += weight * splits[n - 1];
    }
  }
  for (int n = 1; n <= n_total; ++n) {
    values[n - 1] *= binomial(n_total - 1, n - 1) * c_prod * psi0_norm;
  }
  return values;
}

std::vector<double> compute_alphas(int n_total) {
  const int nvars = n_total - 2;  // x_3 .. x_N
  Poly poly = vandermonde(nvars);
  poly = poly_mul(poly, poly);
  for (int i = 1; i <= nvars; ++i) {
    const Poly lin = poly_linear(i, 0);
    const Poly lin2 = poly_mul(lin, lin);
    poly = poly_mul(poly, poly_mul(lin2, lin2));
  }

  const double c2 = slater_constant(n_total) * slater_constant(n_total);
  const num::QuadratureRule rule = num::gauss_legendre(320, -8.5, 8.5);

  std::vector<double> alphas(n_total - 1, 0.0);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double t = rule.nodes[k];
    const double weight = rule.weights[k] * std::exp(-2.0 * t * t);
    const auto splits = integrate_splits(poly, nvars, t);
    for (int n = 1; n <= n_total - 1; ++n) {
      alphas[n - 1] += weight * splits[n - 1];
    }
  }
  for (int n = 1; n <= n_total - 1; ++n) {
    const double pref = std::exp(std::lgamma(n_total + 1.0) -
                                 std::lgamma(static_cast<double>(n)) -
                                 std::lgamma(static_cast<double>(n_total - n)));
    alphas[n - 1] *= pref * c2;
  }
  return alphas;
}

template <typename F>
const std::vector<double>& cached(int n_total, std::map<int, std::vector<double>>& store,
                                  std::mutex& mutex, F&& compute) {
  std::lock_guard<std::mutex> lock(mutex);
  auto it = store.find(n_total);
  if (it == store.end()) {
    it = store.emplace(n_total, compute(n_total)).first;
  }
  return it->second;
}

std::map<int, std::vector<double>> overlap_cache;
std::map<int, std::vector<double>> alpha_cache;
std::mutex overlap_mutex;
std::mutex alpha_mutex;

}  // namespace

double slater_ground(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  if (n < 1 || n > kMaxN) {
    throw std::invalid_argument("slater_ground: need 1..6 coordinates");
  }
  double norm2 = 0.0;
  double vander = 1.0;
  for (int j = 0; j < n; ++j) {
    norm2 += x[j] * x[j];
    for (int k = j + 1; k < n; ++k) vander *= x[k] - x[j];
  }
  return slater_constant(n) * std::exp(-0.5 * norm2) * vander;
}

double e0(int n_total) {
  check_n(n_total);
  const double n_up = n_total - 1.0;
  return 0.5 * (n_up * n_up + 1.0);
}

double einf(int n_total) {
  check_n(n_total);
  return 0.5 * n_total * n_total;
}

double v00_closed_form(int n_total) {
  check_n(n_total);
  return std::sqrt(2.0) / M_PI *
         std::exp(std::lgamma(n_total - 0.5) - std::lgamma(n_total - 1.0));
}

std::vector<double> partial_overlaps(int n_total) {
  check_n(n_total);
  return cached(n_total, overlap_cache, overlap_mutex, compute_partial_overlaps);
}

SlopeMatrix slope_matrix(int n_total) {
  check_n(n_total);
  SlopeMatrix out;
  out.alphas = cached(n_total, alpha_cache, alpha_mutex, compute_alphas);
  const int n = n_total;
  out.matrix = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double left = (i > 0) ? out.alphas[i - 1] : 0.0;
    const double right = (i < n - 1) ? out.alphas[i] : 0.0;
    out.matrix(i, i) = left + right;
    if (i < n - 1) {
      out.matrix(i, i + 1) = -out.alphas[i];
      out.matrix(i + 1, i) = -out.alphas[i];
    }
  }
  return out;
}

ExactSlope exact_strong_slope(int n_total) {
  const SlopeMatrix sm = slope_matrix(n_total);
  const auto eig = num::symmetric_eig(sm.matrix);
  const int last = n_total - 1;
  Eigen::VectorXd a = eig.vectors.col(last);
  if (a(0) < 0.0) a = -a;
  return {eig.values(last), a};
}

Eigen::VectorXd slope_matrix_spectrum(int n_total) {
  const SlopeMatrix sm = slope_matrix(n_total);
  return num::symmetric_eig(sm.matrix).values;
}

double overlap_sq_from_a(int n_total, const Eigen::VectorXd& a) {
  check_n(n_total);
  if (a.size() != n_total) {
    throw std::invalid_argument("overlap_sq_from_a: wrong vector length");
  }
  const auto v = partial_overlaps(n_total);
  double dot = 0.0;
  for (int i = 0; i < n_total; ++i) dot += a(i) * v[i];
  return n_total * dot * dot / a.squaredNorm();
}

OptimalOverlap optimal_overlap(int n_total) {
  const auto v = partial_overlaps(n_total);
  double sum_sq = 0.0;
  for (double vi : v) sum_sq += vi * vi;
  Eigen::VectorXd a(n_total);
  for (int i = 0; i < n_total; ++i) a(i) = v[i];
  if (a(0) < 0.0) a = -a;
  a /= a.norm();
  return {n_total * sum_sq, a};
}

ansatz::LimitPair limit_pair(int n_total, bool use_amax) {
  check_n(n_total);
  ansatz::LimitPair pair;
  pair.e0 = e0(n_total);
  pair.e_inf = einf(n_total);
  pair.k0 = v00_closed_form(n_total);
  const ExactSlope slope = exact_strong_slope(n_total);
  pair.k_exact_inf = slope.k_exact;
  const double s_sq = use_amax ? optimal_overlap(n_total).value
                               : overlap_sq_from_a(n_total, slope.a);
  pair.overlap = std::sqrt(s_sq);
  return pair;
}

ansatz::AnsatzResult ground_energy(int n_total, double g, Method method,
                                   bool use_amax) {
  check_n(n_total);
  if (g < 0.0) {
    throw std::invalid_argument(
        "impurity ground_energy: attractive couplings not supported");
  }
  const ansatz::LimitPair pair = limit_pair(n_total, use_amax);
  const auto cp = ansatz::CouplingPoint::from_g(g);
  if (method == Method::modified) {
    return ansatz::optimal_energy(pair, cp, ansatz::modified_lambda(pair));
  }
  return ansatz::optimal_energy(pair, cp);
}

std::vector<AndersonPoint> anderson_overlap_curve(
    int n_total, const std::vector<double>& g_grid) {
  check_n(n_total);
  const ansatz::LimitPair pair = limit_pair(n_total);
  std::vector<AndersonPoint> out;
  out.reserve(g_grid.size());
  for (double g : g_grid) {
    if (g < 0.0) {
      throw std::invalid_argument("anderson_overlap_curve: g must be >= 0");
    }
    const auto res = ansatz::optimal_energy(pair, ansatz::CouplingPoint::from_g(g));
    out.push_back({g, res.anderson_sq});
  }
  return out;
}

}  // namespace fewfermi::impurity
