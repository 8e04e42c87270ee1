#include "fewfermi/svm.hpp"

#include "fewfermi/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fewfermi::svm {

namespace num = fewfermi::numerics;

std::array<double, 3> convention_masses(double mass_ratio) {
  if (!(mass_ratio > 0.0)) {
    throw std::invalid_argument("convention_masses: M/m <= 0");
  }
  if (std::abs(mass_ratio - 1.0) < 1e-12) return {1.0, 1.0, 1.0};
  const double eta =
      std::sqrt(mass_ratio * 1.0 * 1.0 / (mass_ratio + 2.0));
  return {mass_ratio / eta, 1.0 / eta, 1.0 / eta};
}

Eigen::Matrix3d jacobi_transform(const std::array<double, 3>& masses) {
  const double m1 = masses[0], m2 = masses[1], m3 = masses[2];
  if (!(m1 > 0.0 && m2 > 0.0 && m3 > 0.0)) {
    throw std::invalid_argument("jacobi_transform: masses must be positive");
  }
  const double m23 = m2 + m3;
  const double m123 = m1 + m2 + m3;
  const double mu23 = std::sqrt(m2 * m3 / m23);
  const double mu = std::sqrt(m1 * m2 * m3 / m123);
  Eigen::Matrix3d j;
  j << 0.0, mu23, -mu23,
      -mu / mu23, mu * m2 / (mu23 * m23), mu * m3 / (mu23 * m23),
      m1 / std::sqrt(m123), m2 / std::sqrt(m123), m3 / std::sqrt(m123);
  return j / std::sqrt(mu);
}

namespace {

// Contact lines delta(u . w) with couplings, in the mass-scaled relative
// coordinates w1 ~ (x2 - x3), w2 ~ impurity vs pair.
struct ContactLine {
  Eigen::Vector2d u;
  double prefactor;
};

std::vector<ContactLine> contact_lines(const std::array<double, 3>& masses) {
  const double m1 = masses[0], m2 = masses[1], m3 = masses[2];
  const double m23r = m2 * m3 / (m2 + m3);
  const double m123r = m1 * (m2 + m3) / (m1 + m2 + m3);
  const double c2 = m2 / (m2 + m3) * std::sqrt(m123r / m23r);
  const double c3 = m3 / (m2 + m3) * std::sqrt(m123r / m23r);
  std::vector<ContactLine> lines;
  // delta(x2 - x3): vanishes on antisymmetric states, kept for generality.
  lines.push_back({{1.0, 0.0}, std::sqrt(m23r)});
  // delta(x1 - x2), delta(x1 - x3).
  lines.push_back({{-c3, 1.0}, std::sqrt(m123r)});
  lines.push_back({{c2, 1.0}, std::sqrt(m123r)});
  return lines;
}

// Pair-separation directions (x_i - x_j) as linear forms on the relative
// coordinates; the random correlation widths attach to these.
std::array<Eigen::Vector2d, 3> pair_forms(const std::array<double, 3>& masses) {
  const double m1 = masses[0], m2 = masses[1], m3 = masses[2];
  const double m23r = m2 * m3 / (m2 + m3);
  const double m123r = m1 * (m2 + m3) / (m1 + m2 + m3);
  const double inv23 = 1.0 / std::sqrt(m23r);
  const double inv123 = 1.0 / std::sqrt(m123r);
  return {Eigen::Vector2d{inv23, 0.0},
          Eigen::Vector2d{-(m3 / (m2 + m3)) * inv23, inv123},
          Eigen::Vector2d{(m2 / (m2 + m3)) * inv23, inv123}};
}

struct Product {
  double s_val;          // overlap
  Eigen::Matrix2d b_inv;
  Eigen::Vector2d alpha; // centre of the product Gaussian
};

Product product_of(const GaussianElement& x, const GaussianElement& y) {
  const Eigen::Matrix2d b = x.a + y.a;
  const double det_b = b.determinant();
  if (!(det_b > 0.0) || !(b(0, 0) > 0.0)) {
    throw std::domain_error("pair_matrix_elements: A + A' not positive definite");
  }
  Product p;
  p.b_inv = b.inverse();
  const Eigen::Vector2d v = 2.0 * (x.a * x.s + y.a * y.s);
  p.alpha = 0.5 * p.b_inv * v;
  const double c = x.s.dot(x.a * x.s) + y.s.dot(y.a * y.s);
  p.s_val = M_PI / std::sqrt(det_b) * std::exp(p.alpha.dot(b * p.alpha) - c);
  return p;
}

double delta_element(const Product& p, const Eigen::Vector2d& u) {
  const double ubu = u.dot(p.b_inv * u);
  const double ua = u.dot(p.alpha);
  return p.s_val / std::sqrt(M_PI * ubu) * std::exp(-ua * ua / ubu);
}

}  // namespace

PairElements pair_matrix_elements(const GaussianElement& a,
                                  const GaussianElement& b, double g,
                                  const std::array<double, 3>& masses) {
  const Product p = product_of(a, b);
  PairElements out;
  out.overlap = p.s_val;
  // T = 2 <(w - s)^T A A' (w - s')> over the product Gaussian.
  const Eigen::Matrix2d aap = a.a * b.a;
  const Eigen::Vector2d da = p.alpha - a.s;
  const Eigen::Vector2d db = p.alpha - b.s;
  out.kinetic =
      2.0 * p.s_val * (0.5 * (aap * p.b_inv).trace() + da.dot(aap * db));
  out.trap = 0.5 * p.s_val * (0.5 * p.b_inv.trace() + p.alpha.squaredNorm());
  out.interaction = 0.0;
  for (const auto& line : contact_lines(masses)) {
    out.interaction += line.prefactor * delta_element(p, line.u);
  }
  out.interaction *= g;
  return out;
}

namespace {

// Counter-based generator: deterministic independent of evaluation order.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() {  // in (0, 1)
    return (next() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }
};

std::uint64_t mix_key(std::uint64_t seed, std::uint64_t round,
                      std::uint64_t trial) {
  SplitMix64 g(seed ^ (round * 0x9e3779b97f4a7c15ULL) ^
               (trial * 0xd1b54a32d192ed03ULL));
  g.next();
  return g.next();
}

double laplace_sample(SplitMix64& rng) {
  const double u = rng.uniform() - 0.5;
  return (u < 0.0 ? 1.0 : -1.0) * std::log(1.0 - 2.0 * std::abs(u));
}

GaussianElement random_element(std::uint64_t key,
                               const std::array<Eigen::Vector2d, 3>& forms) {
  SplitMix64 rng(key);
  // Correlation Gaussian exp(-sum_{i<j} (x_i-x_j)^2 / (2 b_ij^2)) with
  // log-uniform widths: the quadratic form stays aligned with the contact
  // lines, which is what resolves their cusps.
  GaussianElement e;
  e.a = 1e-3 * Eigen::Matrix2d::Identity();
  for (const auto& v : forms) {
    const double b = std::pow(10.0, -2.0 + 2.7 * rng.uniform());
    e.a += (0.5 / (b * b)) * (v * v.transpose());
  }
  if (rng.uniform() < 0.5) {
    // Centre on one of the contact lines, where the cusps live.
    const auto& u = forms[1 + (rng.next() % 2)];
    const Eigen::Vector2d along = Eigen::Vector2d(-u(1), u(0)).normalized();
    e.s = laplace_sample(rng) * along;
    e.s += 0.05 * laplace_sample(rng) * Eigen::Vector2d(u).normalized();
  } else {
    e.s << laplace_sample(rng), laplace_sample(rng);
  }
  return e;
}

GaussianElement mutate_element(std::uint64_t key, const GaussianElement& base) {
  SplitMix64 rng(key);
  GaussianElement e = base;
  const Eigen::Matrix2d t =
      Eigen::Vector2d(std::pow(10.0, 0.3 * (rng.uniform() - 0.5)),
                      std::pow(10.0, 0.3 * (rng.uniform() - 0.5)))
          .asDiagonal();
  e.a = t * base.a * t;
  e.s = base.s * std::pow(10.0, 0.3 * (rng.uniform() - 0.5));
  e.s(0) += 0.2 * laplace_sample(rng);
  e.s(1) += 0.2 * laplace_sample(rng);
  return e;
}

// Exchange antisymmetry plus parity projection: group {I, R1, P, PR1} with
// signs (1, -1, p, -p); one-sided application is enough since H commutes
// with the group.
struct Projector {
  int parity;

  std::array<std::pair<GaussianElement, double>, 4> images(
      const GaussianElement& e) const {
    const auto reflect = [](const GaussianElement& x, double r1, double r2) {
      GaussianElement y = x;
      const Eigen::Matrix2d r = Eigen::Vector2d(r1, r2).asDiagonal();
      y.a = r * x.a * r;
      y.s = r * x.s;
      return y;
    };
    const double p = parity;
    return {{{e, 1.0},
             {reflect(e, -1.0, 1.0), -1.0},
             {reflect(e, -1.0, -1.0), p},
             {reflect(e, 1.0, -1.0), -p}}};
  }
};

struct HsPair {
  double h;
  double s;
};

HsPair projected_element(const GaussianElement& bra, const GaussianElement& ket,
                         double g, const std::array<double, 3>& masses,
                         const Projector& proj) {
  HsPair out{0.0, 0.0};
  for (const auto& [image, sign] : proj.images(ket)) {
    const PairElements el = pair_matrix_elements(bra, image, g, masses);
    out.s += sign * el.overlap;
    out.h += sign * (el.kinetic + el.trap + el.interaction);
  }
  return out;
}

// Variational state over a growing basis of projected, unit-normalised
// Gaussians: matrices, their generalized eigendecomposition, and a bordered
// O(n^2) evaluation of candidate additions.
class VariationalBasis {
 public:
  VariationalBasis(double g, const std::array<double, 3>& masses, int parity,
                   int cap)
      : g_(g),
        masses_(masses),
        proj_{parity},
        h_(Eigen::MatrixXd::Zero(cap, cap)),
        s_(Eigen::MatrixXd::Zero(cap, cap)) {}

  int size() const { return static_cast<int>(elements_.size()); }
  double energy() const { return lambda_(0); }
  const std::vector<GaussianElement>& elements() const { return elements_; }
  const Eigen::VectorXd& spectrum() const { return lambda_; }

  // Normalised cross rows against the current basis; false when the
  // projection annihilates the candidate.
  bool candidate_rows(const GaussianElement& cand, Eigen::VectorXd* h_row,
                      Eigen::VectorXd* s_row, double* h_diag) const {
    const HsPair diag = projected_element(cand, cand, g_, masses_, proj_);
    const double raw = pair_matrix_elements(cand, cand, g_, masses_).overlap;
    if (!(diag.s > 1e-10 * raw)) return false;
    const double norm = 1.0 / std::sqrt(diag.s);
    const int n = size();
    h_row->resize(n);
    s_row->resize(n);
    for (int i = 0; i < n; ++i) {
      const HsPair el = projected_element(elements_[i], cand, g_, masses_, proj_);
      (*h_row)(i) = el.h * norm * norms_[i];
      (*s_row)(i) = el.s * norm * norms_[i];
    }
    *h_diag = diag.h * norm * norm;
    return true;
  }

  // Ground energy of the basis extended by the candidate, through the
  // bordered secular equation in the eigenbasis of the current problem.
  bool evaluate_addition(const Eigen::VectorXd& h_row,
                         const Eigen::VectorXd& s_row, double h_diag,
                         double* energy) const {
    if (size() == 0) {
      *energy = h_diag;
      return true;
    }
    const Eigen::VectorXd b = x_.transpose() * h_row;
    const Eigen::VectorXd d = x_.transpose() * s_row;
    const double ortho = 1.0 - d.squaredNorm();
    if (ortho < 1e-12) return false;  // conditioning gate
    const auto f = [&](double lam) {
      double value = h_diag - lam;
      for (int i = 0; i < b.size(); ++i) {
        const double num = b(i) - lam * d(i);
        value -= num * num / (lambda_(i) - lam);
      }
      return value;
    };
    const double lam1 = lambda_(0);
    double hi = lam1 - 1e-11 * std::max(1.0, std::abs(lam1));
    if (f(hi) >= 0.0) {
      *energy = lam1;  // no root below the current ground state
      return true;
    }
    double lo = lam1 - 1.0;
    for (int i = 0; i < 120 && f(lo) < 0.0; ++i) lo = lam1 - 2.0 * (lam1 - lo);
    if (f(lo) < 0.0) return false;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (f(mid) >= 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    *energy = 0.5 * (lo + hi);
    return true;
  }

  bool try_append(const GaussianElement& cand, double* energy) {
    Eigen::VectorXd h_row;
    Eigen::VectorXd s_row;
    double h_diag = 0.0;
    if (!candidate_rows(cand, &h_row, &s_row, &h_diag)) return false;
    if (!evaluate_addition(h_row, s_row, h_diag, energy)) return false;
    return true;
  }

  // Appends unconditionally (after a successful try_append) and refreshes
  // the eigen decomposition.
  void append(const GaussianElement& cand) {
    Eigen::VectorXd h_row;
    Eigen::VectorXd s_row;
    double h_diag = 0.0;
    if (!candidate_rows(cand, &h_row, &s_row, &h_diag)) {
      throw std::runtime_error("svm: appending an inadmissible element");
    }
    const HsPair diag = projected_element(cand, cand, g_, masses_, proj_);
    const int n = size();
    h_.block(n, 0, 1, n) = h_row.transpose();
    h_.block(0, n, n, 1) = h_row;
    s_.block(n, 0, 1, n) = s_row.transpose();
    s_.block(0, n, n, 1) = s_row;
    h_(n, n) = h_diag;
    s_(n, n) = 1.0;
    elements_.push_back(cand);
    norms_.push_back(1.0 / std::sqrt(diag.s));
    refresh();
  }

  void remove(int index) {
    const int n = size();
    for (int pass = 0; pass < 2; ++pass) {
      Eigen::MatrixXd& m = pass == 0 ? h_ : s_;
      for (int r = index; r + 1 < n; ++r) m.row(r) = m.row(r + 1);
      for (int c = index; c + 1 < n; ++c) m.col(c) = m.col(c + 1);
    }
    elements_.erase(elements_.begin() + index);
    norms_.erase(norms_.begin() + index);
    refresh();
  }

  void refresh() {
    const int n = size();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        h_.topLeftCorner(n, n), s_.topLeftCorner(n, n));
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("svm: generalized eigensolver failed");
    }
    lambda_ = solver.eigenvalues();
    x_ = solver.eigenvectors();
  }

 private:
  double g_;
  std::array<double, 3> masses_;
  Projector proj_;
  Eigen::MatrixXd h_;
  Eigen::MatrixXd s_;
  Eigen::MatrixXd x_;       // S-orthonormal eigenvectors
  Eigen::VectorXd lambda_;  // ascending
  std::vector<GaussianElement> elements_;
  std::vector<double> norms_;
};

}  // namespace

SvmResult svm_ground_energy(double g, double mass_ratio,
                            const SvmConfig& config) {
  if (config.alpha_trials < 1 || config.beta_growth_rounds < 1 ||
      config.basis_cap < config.initial_size || config.initial_size < 1) {
    throw std::invalid_argument("svm_ground_energy: invalid config");
  }
  const std::array<double, 3> masses = convention_masses(mass_ratio);
  const std::array<Eigen::Vector2d, 3> forms = pair_forms(masses);
  const int cap = config.basis_cap;

  VariationalBasis basis(g, masses, config.parity, cap);

  // Initial basis: alpha_trials random draws of the first element, then a
  // greedy start for the next few.
  {
    bool have = false;
    double best_energy = 0.0;
    GaussianElement best_el;
    for (int trial = 0; trial < config.alpha_trials; ++trial) {
      const GaussianElement cand =
          random_element(mix_key(config.seed, 0, trial + 1), forms);
      double energy;
      if (!basis.try_append(cand, &energy)) continue;
      if (!have || energy < best_energy) {
        have = true;
        best_energy = energy;
        best_el = cand;
      }
    }
    if (!have) {
      throw std::runtime_error("svm_ground_energy: no admissible initial basis");
    }
    basis.append(best_el);
  }

  SvmResult result;
  result.round_energies.push_back(basis.energy());

  // Growth: one element per round, beta candidate trials each.
  for (int size = 1; size < cap; ++size) {
    bool improved = false;
    GaussianElement best_candidate;
    double round_best = basis.energy();
    for (int trial = 0; trial < config.beta_growth_rounds; ++trial) {
      const GaussianElement cand =
          random_element(mix_key(config.seed, size, trial + 1), forms);
      double energy;
      if (!basis.try_append(cand, &energy)) continue;
      if (energy < round_best) {
        improved = true;
        round_best = energy;
        best_candidate = cand;
      }
    }
    if (!improved) break;  // every candidate hit the conditioning gate
    basis.append(best_candidate);
    result.round_energies.push_back(basis.energy());
  }

  // Refinement sweeps: re-optimise each element against mutations of itself
  // plus fresh draws. Removing and re-adding the original is always among
  // the candidates, so the energy cannot rise.
  for (int sweep = 0; sweep < config.refine_sweeps; ++sweep) {
    for (int index = 0; index < basis.size(); ++index) {
      const GaussianElement original = basis.elements()[index];
      basis.remove(index);
      GaussianElement best_candidate = original;
      double best_energy = 1e300;
      double energy;
      if (basis.try_append(original, &energy)) best_energy = energy;
      const std::uint64_t round_key =
          0xabcd0000ULL + sweep * 1000ULL + index;
      for (int trial = 0; trial < config.beta_growth_rounds; ++trial) {
        const GaussianElement cand =
            trial % 2 == 0
                ? mutate_element(mix_key(config.seed, round_key, trial + 1),
                                 original)
                : random_element(mix_key(config.seed, round_key, trial + 1),
                                 forms);
        if (!basis.try_append(cand, &energy)) continue;
        if (energy < best_energy) {
          best_energy = energy;
          best_candidate = cand;
        }
      }
      basis.append(best_candidate);
    }
    result.round_energies.push_back(basis.energy());
  }

  result.energy = basis.energy();
  result.basis = basis.elements();
  const int n_report = std::min<int>(6, basis.spectrum().size());
  result.spectrum.assign(basis.spectrum().data(),
                         basis.spectrum().data() + n_report);
  return result;
}

}  // namespace fewfermi::svm
