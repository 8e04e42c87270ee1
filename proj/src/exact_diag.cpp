#include "fewfermi/exact_diag.hpp"

#include "fewfermi/numerics.hpp"
#include "fewfermi/two_body.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

namespace fewfermi::ci {

namespace num = fewfermi::numerics;

int FockBasisState::quanta() const {
  return std::accumulate(up.begin(), up.end(), 0) +
         std::accumulate(down.begin(), down.end(), 0);
}

ModelSpace default_model_space(int n_a, int n_b) {
  const int floor_quanta = n_a * (n_a - 1) / 2 + n_b * (n_b - 1) / 2;
  const int n_total = n_a + n_b;
  ModelSpace space;
  space.e_max_quanta = floor_quanta + (n_total <= 4 ? 14 : 10);
  space.n_max_rel = 40;
  return space;
}

double moshinsky_bracket_1d(int n1, int n2, int n_rel, int n_cm) {
  if (n1 < 0 || n2 < 0 || n_rel < 0 || n_cm < 0) return 0.0;
  if (n_rel + n_cm != n1 + n2) return 0.0;
  const int q = n1 + n2;
  // From expanding (a1+)^{n1} (a2+)^{n2} in a_cm+ = (a1+ + a2+)/sqrt(2),
  // a_rel+ = (a1+ - a2+)/sqrt(2); long-double sum against the alternating
  // binomials.
  long double sum = 0.0L;
  const int i_lo = std::max(0, n_cm - n2);
  const int i_hi = std::min(n1, n_cm);
  for (int i = i_lo; i <= i_hi; ++i) {
    const int j = n_cm - i;
    long double term = std::exp((long double)(std::lgamma(n1 + 1.0) -
                                              std::lgamma(i + 1.0) -
                                              std::lgamma(n1 - i + 1.0) +
                                              std::lgamma(n2 + 1.0) -
                                              std::lgamma(j + 1.0) -
                                              std::lgamma(n2 - j + 1.0)));
    if ((n2 - j) % 2 != 0) term = -term;
    sum += term;
  }
  const long double log_norm =
      0.5L * (std::lgamma(n_cm + 1.0) + std::lgamma(n_rel + 1.0) -
              std::lgamma(n1 + 1.0) - std::lgamma(n2 + 1.0)) -
      0.5L * q * std::log(2.0L);
  return static_cast<double>(sum * std::exp(log_norm));
}

namespace {

// Busch eigenfunction projected onto the even oscillator levels of the
// truncated space, normalised within that space.
Eigen::VectorXd projected_busch_state(double energy,
                                      const std::vector<int>& even_levels) {
  static const num::QuadratureRule rule = num::gauss_legendre(420, 0.0, 7.0);
  Eigen::VectorXd coeffs(even_levels.size());
  // Normalise the exact wave function first.
  double norm2 = 0.0;
  std::vector<double> values(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    values[i] = twobody::busch_wavefunction(energy, rule.nodes[i]);
    norm2 += rule.weights[i] * values[i] * values[i];
  }
  norm2 *= 2.0;
  const double inv_norm = 1.0 / std::sqrt(norm2);
  for (std::size_t k = 0; k < even_levels.size(); ++k) {
    double ov = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      ov += rule.weights[i] * values[i] *
            num::ho_eigenfunction(even_levels[k], rule.nodes[i]);
    }
    coeffs(k) = 2.0 * ov * inv_norm;
  }
  return coeffs;
}

}  // namespace

Eigen::MatrixXd effective_two_body(int n_max_rel, ansatz::CouplingPoint coupling) {
  if (n_max_rel < 0 || n_max_rel > 60) {
    throw std::invalid_argument("effective_two_body: n_max_rel outside [0, 60]");
  }
  const int dim = n_max_rel + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n <= n_max_rel; ++n) h(n, n) = n + 0.5;
  if (coupling.g == 0.0) return h;

  std::vector<int> even_levels;
  for (int n = 0; n <= n_max_rel; n += 2) even_levels.push_back(n);
  const int ke = static_cast<int>(even_levels.size());

  // Exact interacting energies of the adiabatic branches and their
  // projections onto the truncated even-level space. On the attractive side
  // the tower starts at level 1: the level-0 branch is the molecular state,
  // which is excluded so that the many-body spectrum tracks the trap states
  // rather than dimer clusters.
  const int level_offset = (coupling.q > 0.0) ? 1 : 0;
  Eigen::MatrixXd u(ke, ke);
  Eigen::VectorXd energies(ke);
  for (int k = 0; k < ke; ++k) {
    const double e = twobody::busch_energy(coupling.q, k + level_offset);
    energies(k) = e;
    u.col(k) = projected_busch_state(e, even_levels);
  }
  // Loewdin-symmetric orthonormalisation keeps the eigenvalues exact:
  // H_eff = U (U^T U)^{-1/2} E [U (U^T U)^{-1/2}]^T.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram(u.transpose() * u);
  if (gram.eigenvalues().minCoeff() < 1e-10) {
    throw std::runtime_error(
        "effective_two_body: projected states nearly dependent");
  }
  const Eigen::MatrixXd inv_sqrt =
      gram.eigenvectors() *
      gram.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
      gram.eigenvectors().transpose();
  const Eigen::MatrixXd u_ortho = u * inv_sqrt;
  const Eigen::MatrixXd h_even =
      u_ortho * energies.asDiagonal() * u_ortho.transpose();
  for (int a = 0; a < ke; ++a) {
    for (int b = 0; b < ke; ++b) {
      h(even_levels[a], even_levels[b]) = h_even(a, b);
    }
  }
  return h;
}

Eigen::MatrixXd effective_two_body(int n_max_rel, double g) {
  return effective_two_body(n_max_rel, ansatz::CouplingPoint::from_g(g));
}

namespace {

void enumerate_species(int n_particles, int max_quanta,
                       std::vector<std::vector<int>>& out) {
  // Strictly decreasing mode lists, lexicographic by construction.
  std::vector<int> modes(n_particles);
  const std::function<void(int, int, int)> rec = [&](int slot, int max_mode,
                                                     int quanta_left) {
    if (slot < 0) {
      out.push_back(modes);
      return;
    }
    // The remaining `slot` lower slots need at least 0 + 1 + ... + (slot-1).
    for (int m = slot; m <= max_mode && m <= quanta_left - slot * (slot - 1) / 2;
         ++m) {
      modes[slot] = m;
      rec(slot - 1, m - 1, quanta_left - m);
    }
  };
  if (n_particles == 0) {
    out.push_back({});
    return;
  }
  rec(n_particles - 1, max_quanta, max_quanta);
}

}  // namespace

std::vector<FockBasisState> build_basis(int n_a, int n_b, int e_max_quanta) {
  if (n_a < 0 || n_b < 0 || n_a + n_b == 0) {
    throw std::invalid_argument("build_basis: invalid particle numbers");
  }
  std::vector<std::vector<int>> ups;
  std::vector<std::vector<int>> downs;
  enumerate_species(n_a, e_max_quanta, ups);
  enumerate_species(n_b, e_max_quanta, downs);
  std::vector<FockBasisState> basis;
  for (const auto& u : ups) {
    const int qu = std::accumulate(u.begin(), u.end(), 0);
    for (const auto& d : downs) {
      const int qd = std::accumulate(d.begin(), d.end(), 0);
      if (qu + qd <= e_max_quanta) {
        // Store modes descending to match the ordering convention.
        FockBasisState s;
        s.up.assign(u.rbegin(), u.rend());
        s.down.assign(d.rbegin(), d.rend());
        basis.push_back(std::move(s));
      }
    }
  }
  if (basis.size() > 2000000) {
    throw std::runtime_error("build_basis: dimension above 2e6");
  }
  std::sort(basis.begin(), basis.end(),
            [](const FockBasisState& a, const FockBasisState& b) {
              if (a.up != b.up) return a.up < b.up;
              return a.down < b.down;
            });
  return basis;
}

namespace {

// One-body transfer m -> m' on a strictly decreasing mode list; returns the
// fermionic sign, or 0 if forbidden.
int apply_transfer(const std::vector<int>& modes, int from, int to,
                   std::vector<int>& result) {
  const auto it = std::find(modes.begin(), modes.end(), from);
  if (it == modes.end()) return 0;
  if (to != from &&
      std::find(modes.begin(), modes.end(), to) != modes.end()) {
    return 0;
  }
  result = modes;
  const int pos_from = static_cast<int>(it - modes.begin());
  result.erase(result.begin() + pos_from);
  auto ins = std::lower_bound(result.begin(), result.end(), to,
                              std::greater<int>());
  const int pos_to = static_cast<int>(ins - result.begin());
  result.insert(ins, to);
  // Sign from moving the operator past the intervening occupied modes.
  const int swaps = pos_from + pos_to;
  return (swaps % 2 == 0) ? 1 : -1;
}

struct BasisIndex {
  std::map<std::pair<std::vector<int>, std::vector<int>>, int> lookup;

  explicit BasisIndex(const std::vector<FockBasisState>& basis) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      lookup[{basis[i].up, basis[i].down}] = static_cast<int>(i);
    }
  }

  int find(const std::vector<int>& up, const std::vector<int>& down) const {
    const auto it = lookup.find({up, down});
    return it == lookup.end() ? -1 : it->second;
  }
};

// Lab-frame pair elements v(m', k'; m, k) from the relative-frame effective
// interaction via the 1D oscillator brackets; the CM mode is a spectator.
// The full table is precomputed once per assembly.
class LabElements {
 public:
  LabElements(const Eigen::MatrixXd& v_rel, int mode_max)
      : modes_(mode_max + 1), table_((mode_max + 1ull) * (mode_max + 1ull) *
                                         (mode_max + 1ull) * (mode_max + 1ull),
                                     0.0) {
    const int n_rel_max = static_cast<int>(v_rel.rows()) - 1;
    for (int m = 0; m < modes_; ++m) {
      for (int k = 0; k < modes_; ++k) {
        const int q = m + k;
        for (int mp = 0; mp < modes_; ++mp) {
          for (int kp = 0; kp < modes_; ++kp) {
            const int qp = mp + kp;
            // Both relative quanta must be even with a shared cm mode, so
            // q and q' have equal parity.
            if (qp % 2 != q % 2) continue;
            if (flat(mp, kp, m, k) < flat(m, k, mp, kp)) continue;  // symmetry
            double sum = 0.0;
            const int ncm_hi = std::min(q, qp);
            for (int ncm = 0; ncm <= ncm_hi; ++ncm) {
              const int nr = q - ncm;
              const int nrp = qp - ncm;
              if (nr > n_rel_max || nrp > n_rel_max) continue;
              if (nr % 2 != 0 || nrp % 2 != 0) continue;
              const double v = v_rel(nrp, nr);
              if (v == 0.0) continue;
              sum += moshinsky_bracket_1d(mp, kp, nrp, ncm) *
                     moshinsky_bracket_1d(m, k, nr, ncm) * v;
            }
            table_[flat(mp, kp, m, k)] = sum;
            table_[flat(m, k, mp, kp)] = sum;
          }
        }
      }
    }
  }

  double operator()(int mp, int kp, int m, int k) const {
    if (mp >= modes_ || kp >= modes_ || m >= modes_ || k >= modes_) return 0.0;
    return table_[flat(mp, kp, m, k)];
  }

 private:
  std::size_t flat(int mp, int kp, int m, int k) const {
    return ((static_cast<std::size_t>(mp) * modes_ + kp) * modes_ + m) * modes_ +
           k;
  }

  int modes_;
  std::vector<double> table_;
};

}  // namespace

Eigen::SparseMatrix<double> assemble_hamiltonian(
    const std::vector<FockBasisState>& basis, ansatz::CouplingPoint coupling,
    const ModelSpace& space) {
  if (basis.empty()) {
    throw std::invalid_argument("assemble_hamiltonian: empty basis");
  }
  int e_max = 0;
  for (const auto& s : basis) e_max = std::max(e_max, s.quanta());
  if (e_max > space.e_max_quanta) {
    throw std::invalid_argument(
        "assemble_hamiltonian: basis exceeds the model-space truncation");
  }
  const int n_a = static_cast<int>(basis.front().up.size());
  const int n_b = static_cast<int>(basis.front().down.size());
  const int n_total = n_a + n_b;
  const int dim = static_cast<int>(basis.size());

  // Relative effective interaction, truncated to what the basis can reach.
  const int n_rel_used = std::min(space.n_max_rel, e_max);
  Eigen::MatrixXd h_rel = effective_two_body(n_rel_used, coupling);
  Eigen::MatrixXd v_rel = h_rel;
  for (int n = 0; n <= n_rel_used; ++n) v_rel(n, n) -= n + 0.5;
  const LabElements v_lab(v_rel, e_max);

  const BasisIndex index(basis);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(basis.size() * 32);

  std::vector<int> up_new;
  std::vector<int> down_new;
  for (int row = 0; row < dim; ++row) {
    const FockBasisState& s = basis[row];
    const double h0 = s.quanta() + 0.5 * n_total;
    triplets.emplace_back(row, row, h0);
    // Interaction: one up transfer times one down transfer (either may be
    // diagonal). Emit column >= row and mirror afterwards.
    for (int mu : s.up) {
      for (int mu_to = 0; mu_to <= e_max; ++mu_to) {
        const int sign_u = apply_transfer(s.up, mu, mu_to, up_new);
        if (sign_u == 0) continue;
        for (int kd : s.down) {
          for (int kd_to = 0; kd_to <= e_max; ++kd_to) {
            const int sign_d = apply_transfer(s.down, kd, kd_to, down_new);
            if (sign_d == 0) continue;
            const int col = index.find(up_new, down_new);
            if (col < 0 || col < row) continue;
            const double v = v_lab(mu_to, kd_to, mu, kd);
            if (v == 0.0) continue;
            triplets.emplace_back(row, col, sign_u * sign_d * v);
            if (col != row) triplets.emplace_back(col, row, sign_u * sign_d * v);
          }
        }
      }
    }
  }

  // Lawson penalty: w (A+ A) with A = (1/sqrt N) sum_i a_i, assembled as
  // (w/N) B^T B from the total lowering operator B.
  if (space.lawson_weight > 0.0) {
    std::vector<Eigen::Triplet<double>> b_triplets;
    for (int row = 0; row < dim; ++row) {
      const FockBasisState& s = basis[row];
      for (int m : s.up) {
        if (m == 0) continue;
        const int sign = apply_transfer(s.up, m, m - 1, up_new);
        if (sign == 0) continue;
        const int col = index.find(up_new, s.down);
        if (col >= 0) b_triplets.emplace_back(col, row, sign * std::sqrt(m));
      }
      for (int m : s.down) {
        if (m == 0) continue;
        const int sign = apply_transfer(s.down, m, m - 1, down_new);
        if (sign == 0) continue;
        const int col = index.find(s.up, down_new);
        if (col >= 0) b_triplets.emplace_back(col, row, sign * std::sqrt(m));
      }
    }
    Eigen::SparseMatrix<double> b(dim, dim);
    b.setFromTriplets(b_triplets.begin(), b_triplets.end());
    const Eigen::SparseMatrix<double> lawson =
        (space.lawson_weight / n_total) *
        Eigen::SparseMatrix<double>(b.transpose() * b);
    for (int k = 0; k < lawson.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(lawson, k); it; ++it) {
        triplets.emplace_back(it.row(), it.col(), it.value());
      }
    }
  }

  Eigen::SparseMatrix<double> h(dim, dim);
  h.setFromTriplets(triplets.begin(), triplets.end());
  return h;
}

namespace {

std::vector<std::pair<double, Eigen::VectorXd>> lanczos_lowest(
    const Eigen::SparseMatrix<double>& h, int k) {
  const int dim = static_cast<int>(h.rows());
  const int m_cap = std::min(dim, std::max(10 * k + 200, 400));
  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd v = Eigen::VectorXd::NullaryExpr(dim, [&](Eigen::Index) {
    return gauss(rng);
  });
  v.normalize();
  std::vector<Eigen::VectorXd> vs{v};
  std::vector<double> alpha;
  std::vector<double> beta;
  Eigen::VectorXd w;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  int steps = 0;
  bool exhausted = false;
  while (steps < m_cap && !exhausted) {
    const int target = std::min(m_cap, steps + 80);
    for (int j = steps; j < target; ++j) {
      w = h * vs[j];
      alpha.push_back(vs[j].dot(w));
      w -= alpha[j] * vs[j];
      if (j > 0) w -= beta[j - 1] * vs[j - 1];
      // Full reorthogonalisation keeps the small spectrum clean.
      for (const auto& prev : vs) w -= prev.dot(w) * prev;
      for (const auto& prev : vs) w -= prev.dot(w) * prev;
      const double norm = w.norm();
      if (norm < 1e-12) {
        exhausted = true;
        break;
      }
      beta.push_back(norm);
      vs.push_back(w / norm);
    }
    steps = static_cast<int>(alpha.size());
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(steps, steps);
    for (int i = 0; i < steps; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 < steps) {
        tri(i, i + 1) = beta[i];
        tri(i + 1, i) = beta[i];
      }
    }
    solver.compute(tri);
    if (exhausted || steps >= m_cap) break;
    // Ritz residual estimate |beta_m s_{m,i}| for the k lowest pairs.
    const double beta_last = beta.back();
    bool converged = true;
    for (int i = 0; i < std::min(k, steps); ++i) {
      if (beta_last * std::abs(solver.eigenvectors()(steps - 1, i)) > 1e-11) {
        converged = false;
        break;
      }
    }
    if (converged) break;
  }
  std::vector<std::pair<double, Eigen::VectorXd>> out;
  for (int i = 0; i < k && i < steps; ++i) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
    for (int j = 0; j < steps; ++j) x += solver.eigenvectors()(j, i) * vs[j];
    x.normalize();
    out.emplace_back(solver.eigenvalues()(i), x);
  }
  return out;
}

}  // namespace

std::vector<std::pair<double, Eigen::VectorXd>> lowest_states(
    const Eigen::SparseMatrix<double>& h, int k) {
  if (h.rows() != h.cols()) {
    throw std::invalid_argument("lowest_states: matrix not square");
  }
  const int dim = static_cast<int>(h.rows());
  k = std::min(k, dim);
  std::vector<std::pair<double, Eigen::VectorXd>> out;
  if (dim < 2000) {
    const Eigen::MatrixXd dense(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
    for (int i = 0; i < k; ++i) {
      out.emplace_back(solver.eigenvalues()(i), solver.eigenvectors().col(i));
    }
  } else {
    out = lanczos_lowest(h, k);
  }
  for (const auto& [e, vec] : out) {
    const double residual = (h * vec - e * vec).norm();
    if (residual > 1e-8 * std::max(1.0, std::abs(e))) {
      throw std::runtime_error("lowest_states: residual above tolerance");
    }
  }
  return out;
}

std::vector<IntrinsicState> intrinsic_states(int n_a, int n_b,
                                             ansatz::CouplingPoint coupling,
                                             const ModelSpace& space, int k) {
  const auto basis = build_basis(n_a, n_b, space.e_max_quanta);
  const auto h = assemble_hamiltonian(basis, coupling, space);
  // CM-excited states sit lawson_weight higher; ask for a few extra pairs in
  // case some slip under the window.
  const auto pairs = lowest_states(h, k + 6);

  // Diagonal parity (-1)^{total quanta} and the CM excitation number,
  // evaluated through the Lawson operator itself.
  const int dim = static_cast<int>(basis.size());
  Eigen::VectorXd parity_diag(dim);
  for (int i = 0; i < dim; ++i) {
    parity_diag(i) = (basis[i].quanta() % 2 == 0) ? 1.0 : -1.0;
  }
  ModelSpace unit_lawson = space;
  unit_lawson.lawson_weight = 0.0;
  const auto h0v = assemble_hamiltonian(basis, coupling, unit_lawson);
  const Eigen::SparseMatrix<double> lawson_only = h - h0v;

  std::vector<IntrinsicState> out;
  for (const auto& [e, vec] : pairs) {
    const double cm = vec.dot(lawson_only * vec) / std::max(space.lawson_weight, 1e-12);
    if (cm > 1e-6) continue;
    const double p = vec.dot(parity_diag.asDiagonal() * vec);
    out.push_back({e, p >= 0.0 ? 1 : -1, cm});
    if (static_cast<int>(out.size()) == k) break;
  }
  return out;
}

double intrinsic_ground_energy(int n_a, int n_b, ansatz::CouplingPoint coupling,
                               const ModelSpace& space) {
  const auto states = intrinsic_states(n_a, n_b, coupling, space, 1);
  if (states.empty()) {
    throw std::runtime_error("intrinsic_ground_energy: no CM-pure state found");
  }
  return states.front().energy;
}

double intrinsic_ground_energy(int n_a, int n_b, double g,
                               const ModelSpace& space) {
  return intrinsic_ground_energy(n_a, n_b, ansatz::CouplingPoint::from_g(g),
                                 space);
}

}  // namespace fewfermi::ci
