// Command-line front end: spectrum sweeps, oracle comparisons and
// figure-data tables for few-fermion systems in a 1D harmonic trap.
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include "fewfermi/ansatz.hpp"
#include "fewfermi/exact_diag.hpp"
#include "fewfermi/impurity.hpp"
#include "fewfermi/svm.hpp"
#include "fewfermi/table.hpp"
#include "fewfermi/three_body.hpp"
#include "fewfermi/two_body.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <mutex>
#include <thread>
#include <vector>

namespace az = fewfermi::ansatz;
namespace tb = fewfermi::twobody;
namespace th = fewfermi::threebody;
namespace im = fewfermi::impurity;
namespace ci = fewfermi::ci;
namespace svm = fewfermi::svm;
namespace tab = fewfermi::table;

namespace {

// JSON has no representation for non-finite numbers, so the g column is
// left empty at q = 0 (and q empty at g = 0).
tab::Cell finite_cell(double v) {
  return std::isfinite(v) ? tab::Cell::num(v) : tab::Cell::none();
}

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inclusive start:step:stop grid.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  const auto fail = [&](const std::string& why) {
    throw ValidationError("bad grid '" + text + "': " + why);
  };
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  try {
    if (parts.size() == 1) {
      out.push_back(std::stod(parts[0]));
      return out;
    }
    if (parts.size() != 3) fail("expected start:step:stop");
    const double start = std::stod(parts[0]);
    const double step = std::stod(parts[1]);
    const double stop = std::stod(parts[2]);
    if (!std::isfinite(start) || !std::isfinite(step) || !std::isfinite(stop)) {
      fail("values must be finite");
    }
    if (step <= 0.0) fail("step must be positive");
    if (stop < start) fail("stop below start");
    const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) out.push_back(start + i * step);
  } catch (const std::invalid_argument&) {
    fail("not a number");
  }
  return out;
}

int thread_budget() {
  if (const char* env = std::getenv("ANSATZ_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Grid points dispatched to a worker pool; results land in index order so
// the output is independent of scheduling. The first exception thrown by a
// worker is rethrown on the calling thread.
void parallel_for(int count, const std::function<void(int)>& body) {
  const int workers = std::min(thread_budget(), std::max(count, 1));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::mutex error_mutex;
  std::exception_ptr error;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (int i = w; i < count; i += workers) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

tab::Table spectrum_table() {
  tab::Table t;
  t.columns = {"q", "g", "state_label", "parity", "nu",
               "energy", "method", "anderson_sq"};
  return t;
}

tab::Table report_table(bool with_scaled) {
  tab::Table t;
  t.columns = {"q", "g", "state_label", "e_model", "e_oracle", "abs_dev"};
  if (with_scaled) t.columns.push_back("abs_dev_per_nup");
  t.columns.push_back("source");
  return t;
}

void emit(const tab::Table& t, const std::string& output,
          const std::string& format) {
  const std::string body = format == "json" ? tab::to_json(t) : tab::to_csv(t);
  if (output.empty() || output == "-") {
    std::cout << body;
  } else {
    tab::write_file(output, body);
  }
}

// Rows tagged source=experiment appended from a published-data overlay file
// with lines "g,energy,label". Values are external measurements; the file
// shipped with the repository documents the schema and is empty by default.
void append_overlay(tab::Table& t, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open overlay file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("g,", 0) == 0) continue;
    std::stringstream ss(line);
    std::string g_text, e_text, label;
    if (!std::getline(ss, g_text, ',') || !std::getline(ss, e_text, ',')) {
      throw ValidationError("malformed overlay line: " + line);
    }
    std::getline(ss, label, ',');
    const double g = std::stod(g_text);
    const double e = std::stod(e_text);
    const auto cp = az::CouplingPoint::from_g(g);
    if (t.columns.front() == "q" && t.columns.back() == "source") {
      std::vector<tab::Cell> row(t.columns.size(), tab::Cell::none());
      row[0] = finite_cell(cp.q);
      row[1] = tab::Cell::num(g);
      row[2] = tab::Cell::str(label.empty() ? "experiment" : label);
      row[4] = tab::Cell::num(e);  // e_oracle column
      row.back() = tab::Cell::str("experiment");
      t.add_row(row);
    }
  }
}

// ---------------------------------------------------------------- two-body
int run_two_body(const std::vector<double>& q_grid, int levels, bool deep,
                 const std::string& output, const std::string& format) {
  tab::Table t = spectrum_table();
  std::vector<std::vector<std::vector<tab::Cell>>> rows(q_grid.size());
  parallel_for(static_cast<int>(q_grid.size()), [&](int i) {
    const double q = q_grid[i];
    const auto cp = az::CouplingPoint::from_q(q);
    for (int level = 0; level < levels; ++level) {
      // Adiabatic continuation: (2k, 2k+1) on the repulsive side continues
      // through q = 0 into the (2k+2, 2k+1) attractive pair.
      const tb::TwoBodyLevel lv = q <= 0.0
          ? tb::TwoBodyLevel{2 * level, tb::Sign::repulsive}
          : tb::TwoBodyLevel{2 * level + 2, tb::Sign::attractive};
      const auto pair = tb::limit_pair(lv);
      const auto res = az::optimal_energy(pair, cp);
      rows[i].push_back({tab::Cell::num(q), finite_cell(cp.g),
                         tab::Cell::str("level" + std::to_string(level)),
                         tab::Cell::num(1), tab::Cell::none(),
                         tab::Cell::num(res.energy), tab::Cell::str("ansatz"),
                         tab::Cell::num(res.anderson_sq)});
    }
    if (deep && q > 0.0) {
      const auto res = tb::extended_deep_ansatz(cp.g);
      rows[i].push_back({tab::Cell::num(q), finite_cell(cp.g),
                         tab::Cell::str("deep"), tab::Cell::num(1),
                         tab::Cell::none(), tab::Cell::num(res.energy),
                         tab::Cell::str("extended"), tab::Cell::none()});
    }
  });
  for (auto& point_rows : rows) {
    for (auto& r : point_rows) t.add_row(std::move(r));
  }
  emit(t, output, format);
  return 0;
}

// --------------------------------------------------------------- three-body
int run_three_body(const std::vector<double>& q_grid, double mass_ratio,
                   double e_max, const std::string& method,
                   const std::string& output, const std::string& format) {
  const bool equal = std::abs(mass_ratio - 1.0) < 1e-12;
  if (method == "modified" && !equal) {
    throw ValidationError(
        "modified three-body curves need exact slopes, available for equal "
        "masses only");
  }
  const bool include_modified = method != "ansatz" && equal;
  const auto rows = th::spectrum(mass_ratio, q_grid, e_max, include_modified);
  tab::Table t = spectrum_table();
  for (const auto& r : rows) {
    if (method == "modified" && r.method != "modified") continue;
    if (method == "ansatz" && r.method != "ansatz") continue;
    t.add_row({finite_cell(r.q), finite_cell(r.g),
               tab::Cell::str(r.label), tab::Cell::num(r.parity),
               tab::Cell::num(r.nu), tab::Cell::num(r.energy),
               tab::Cell::str(r.method),
               std::isnan(r.anderson_sq) ? tab::Cell::none()
                                         : tab::Cell::num(r.anderson_sq)});
  }
  emit(t, output, format);
  return 0;
}

// ----------------------------------------------------------------- impurity
int run_impurity(const std::vector<double>& g_grid, int n, const std::string& method,
                 bool use_amax, const std::string& output,
                 const std::string& format) {
  for (double g : g_grid) {
    if (g < 0.0) {
      throw ValidationError(
          "impurity curves are restricted to repulsive couplings (g >= 0)");
    }
  }
  tab::Table t = spectrum_table();
  const std::string label = "ground_N" + std::to_string(n);
  std::vector<std::vector<std::vector<tab::Cell>>> rows(g_grid.size());
  parallel_for(static_cast<int>(g_grid.size()), [&](int i) {
    const double g = g_grid[i];
    const auto cp = az::CouplingPoint::from_g(g);
    const auto add = [&](const char* tag, const az::AnsatzResult& res) {
      rows[i].push_back({finite_cell(cp.q), tab::Cell::num(g),
                         tab::Cell::str(label), tab::Cell::none(),
                         tab::Cell::none(), tab::Cell::num(res.energy),
                         tab::Cell::str(tag),
                         res.has_trial_state ? tab::Cell::num(res.anderson_sq)
                                             : tab::Cell::none()});
    };
    if (method != "modified") {
      add("ansatz", im::ground_energy(n, g, im::Method::ansatz, use_amax));
    }
    if (method != "ansatz") {
      add("modified", im::ground_energy(n, g, im::Method::modified, use_amax));
    }
  });
  for (auto& point_rows : rows) {
    for (auto& r : point_rows) t.add_row(std::move(r));
  }
  emit(t, output, format);
  return 0;
}

// ---------------------------------------------------------------- oracle-ci
int run_oracle_ci(const std::vector<double>& grid, bool grid_is_q, int n_a,
                  int n_b, std::optional<int> e_max, std::optional<int> n_max_rel,
                  double lawson, int n_states, const std::string& output,
                  const std::string& format) {
  ci::ModelSpace space = ci::default_model_space(n_a, n_b);
  if (e_max.has_value()) space.e_max_quanta = *e_max;
  if (n_max_rel.has_value()) space.n_max_rel = *n_max_rel;
  space.lawson_weight = lawson;
  tab::Table t = spectrum_table();
  std::vector<std::vector<std::vector<tab::Cell>>> rows(grid.size());
  parallel_for(static_cast<int>(grid.size()), [&](int i) {
    const auto cp = grid_is_q ? az::CouplingPoint::from_q(grid[i])
                              : az::CouplingPoint::from_g(grid[i]);
    const auto states = ci::intrinsic_states(n_a, n_b, cp, space, n_states);
    for (std::size_t s = 0; s < states.size(); ++s) {
      rows[i].push_back({finite_cell(cp.q), finite_cell(cp.g),
                         tab::Cell::str("intrinsic" + std::to_string(s)),
                         tab::Cell::num(states[s].parity), tab::Cell::none(),
                         tab::Cell::num(states[s].energy), tab::Cell::str("ci"),
                         tab::Cell::none()});
    }
  });
  for (auto& point_rows : rows) {
    for (auto& r : point_rows) t.add_row(std::move(r));
  }
  emit(t, output, format);
  return 0;
}

// --------------------------------------------------------------- oracle-svm
int run_oracle_svm(const std::vector<double>& g_grid, double mass_ratio,
                   const svm::SvmConfig& config, const std::string& output,
                   const std::string& format) {
  tab::Table t = spectrum_table();
  std::vector<std::vector<tab::Cell>> rows(g_grid.size());
  parallel_for(static_cast<int>(g_grid.size()), [&](int i) {
    const auto res = svm::svm_ground_energy(g_grid[i], mass_ratio, config);
    const auto cp = az::CouplingPoint::from_g(g_grid[i]);
    rows[i] = {finite_cell(cp.q),
               tab::Cell::num(g_grid[i]),
               tab::Cell::str("svm_ground"),
               tab::Cell::num(config.parity),
               tab::Cell::none(),
               tab::Cell::num(res.energy),
               tab::Cell::str("svm"),
               tab::Cell::none()};
  });
  for (auto& r : rows) t.add_row(std::move(r));
  emit(t, output, format);
  return 0;
}

// ------------------------------------------------------------------ compare
struct ComparePoint {
  double q;
  double g;
  std::string label;
  double e_model;
  double e_oracle;
};

int finish_compare(std::vector<ComparePoint> points, bool impurity_scaled,
                   int n_up, const std::string& overlay,
                   const std::string& output, const std::string& format) {
  tab::Table t = report_table(impurity_scaled);
  double max_dev = 0.0;
  for (const auto& p : points) {
    const double dev = std::abs(p.e_model - p.e_oracle);
    max_dev = std::max(max_dev, dev);
    std::vector<tab::Cell> row{finite_cell(p.q),      finite_cell(p.g),
                               tab::Cell::str(p.label), tab::Cell::num(p.e_model),
                               tab::Cell::num(p.e_oracle), tab::Cell::num(dev)};
    if (impurity_scaled) row.push_back(tab::Cell::num(dev / n_up));
    row.push_back(tab::Cell::str("model"));
    t.add_row(std::move(row));
  }
  if (!overlay.empty()) append_overlay(t, overlay);
  emit(t, output, format);
  std::cerr << "max |dE| = " << max_dev << "\n";
  return 0;
}

int run_compare(const std::string& system, const std::string& oracle,
                const std::vector<double>& grid, bool grid_is_q, int n,
                double mass_ratio, const std::string& method, int levels,
                const svm::SvmConfig& svm_config, const std::string& overlay,
                const std::string& output, const std::string& format) {
  std::vector<ComparePoint> points;
  if (system == "twobody") {
    if (oracle != "busch") {
      throw ValidationError("two-body comparisons use the busch oracle");
    }
    for (double v : grid) {
      const double q = grid_is_q ? v : az::CouplingPoint::from_g(v).q;
      const auto cp = az::CouplingPoint::from_q(q);
      for (int level = 0; level < levels; ++level) {
        const tb::TwoBodyLevel lv = q <= 0.0
            ? tb::TwoBodyLevel{2 * level, tb::Sign::repulsive}
            : tb::TwoBodyLevel{2 * level + 2, tb::Sign::attractive};
        const double e_model = az::optimal_energy(tb::limit_pair(lv), cp).energy;
        const double e_exact =
            q <= 0.0 ? tb::busch_energy(q, level) : tb::busch_energy(q, level + 1);
        points.push_back({q, cp.g, "level" + std::to_string(level), e_model,
                          e_exact});
      }
    }
    return finish_compare(std::move(points), false, 0, overlay, output, format);
  }

  if (system == "2+1") {
    const bool equal = std::abs(mass_ratio - 1.0) < 1e-12;
    const auto states = th::enumerate_states(mass_ratio, 8.0);
    const th::AdiabaticState gs = states.front();
    const auto rep = th::limit_pair(gs, th::Side::repulsive, mass_ratio);
    const auto att = th::limit_pair(gs, th::Side::attractive, mass_ratio);
    std::optional<double> k_exact;
    if (method == "modified") {
      if (!equal) {
        throw ValidationError("modified curves require equal masses");
      }
      k_exact = th::equal_mass_exact_slope(gs);
    }
    const auto model_at = [&](az::CouplingPoint cp) {
      az::LimitPair pair = cp.q <= 0.0 ? rep : att;
      if (k_exact.has_value()) {
        pair.k_exact_inf = k_exact;
        return az::optimal_energy(pair, cp, az::modified_lambda(pair)).energy;
      }
      return az::optimal_energy(pair, cp).energy;
    };
    if (oracle == "ci") {
      if (!equal) {
        throw ValidationError("the CI oracle assumes equal masses");
      }
      const auto space = ci::default_model_space(2, 1);
      std::vector<ComparePoint> buffer(grid.size());
      parallel_for(static_cast<int>(grid.size()), [&](int i) {
        const auto cp = grid_is_q ? az::CouplingPoint::from_q(grid[i])
                                  : az::CouplingPoint::from_g(grid[i]);
        const double e_ci = ci::intrinsic_ground_energy(2, 1, cp, space) - 0.5;
        buffer[i] = {cp.q, cp.g, "ground", model_at(cp), e_ci};
      });
      points = std::move(buffer);
    } else if (oracle == "svm") {
      for (double v : grid) {
        const auto cp = grid_is_q ? az::CouplingPoint::from_q(v)
                                  : az::CouplingPoint::from_g(v);
        if (!(cp.g > 0.0) || cp.infinite_g()) {
          throw ValidationError("svm comparisons need finite g > 0");
        }
      }
      std::vector<ComparePoint> buffer(grid.size());
      parallel_for(static_cast<int>(grid.size()), [&](int i) {
        const auto cp = grid_is_q ? az::CouplingPoint::from_q(grid[i])
                                  : az::CouplingPoint::from_g(grid[i]);
        const auto res = svm::svm_ground_energy(cp.g, mass_ratio, svm_config);
        buffer[i] = {cp.q, cp.g, "ground", model_at(cp), res.energy};
      });
      points = std::move(buffer);
    } else {
      throw ValidationError("2+1 comparisons use the ci or svm oracle");
    }
    return finish_compare(std::move(points), false, 0, overlay, output, format);
  }

  if (system == "impurity") {
    if (oracle != "ci") {
      throw ValidationError("impurity comparisons use the ci oracle");
    }
    if (n < 2 || n > 6) throw ValidationError("impurity N must lie in [2, 6]");
    const auto space = ci::default_model_space(n - 1, 1);
    const im::Method m =
        method == "modified" ? im::Method::modified : im::Method::ansatz;
    for (double v : grid) {
      const auto cp = grid_is_q ? az::CouplingPoint::from_q(v)
                                : az::CouplingPoint::from_g(v);
      if (cp.g < 0.0) {
        throw ValidationError("impurity comparisons need g >= 0");
      }
    }
    std::vector<ComparePoint> buffer(grid.size());
    parallel_for(static_cast<int>(grid.size()), [&](int i) {
      const auto cp = grid_is_q ? az::CouplingPoint::from_q(grid[i])
                                : az::CouplingPoint::from_g(grid[i]);
      const double e_model = im::ground_energy(n, cp.g, m).energy;
      const double e_ci = ci::intrinsic_ground_energy(n - 1, 1, cp, space);
      buffer[i] = {cp.q, cp.g, "ground_N" + std::to_string(n), e_model, e_ci};
    });
    points = std::move(buffer);
    return finish_compare(std::move(points), true, n - 1, overlay, output,
                          format);
  }
  throw ValidationError("unknown system '" + system + "'");
}

// ----------------------------------------------------------------- anderson
int run_anderson(const std::vector<double>& g_grid, int n,
                 const std::string& output, const std::string& format) {
  const auto curve = im::anderson_overlap_curve(n, g_grid);
  tab::Table t;
  t.columns = {"g", "n", "anderson_sq"};
  for (const auto& p : curve) {
    t.add_row({tab::Cell::num(p.g), tab::Cell::num(n),
               tab::Cell::num(p.anderson_sq)});
  }
  emit(t, output, format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy spectra and oracle cross-checks for few-fermion "
               "systems in a 1D harmonic trap"};
  app.require_subcommand(1);

  std::string q_grid_text;
  std::string g_grid_text;
  std::string output;
  std::string format = "csv";
  std::uint64_t seed = 1;

  const auto add_common = [&](CLI::App* cmd, bool q_allowed, bool g_allowed) {
    if (q_allowed) cmd->add_option("--q-grid", q_grid_text, "grid start:step:stop in q = -1/g");
    if (g_allowed) cmd->add_option("--g-grid", g_grid_text, "grid start:step:stop in g");
    cmd->add_option("-o,--output", output, "output file (default stdout)");
    cmd->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", seed, "random seed for stochastic oracles");
  };

  // two-body
  auto* cmd_two = app.add_subcommand("two-body", "interpolatory-ansatz spectrum of two fermions");
  int levels = 4;
  bool deep = false;
  cmd_two->add_option("--levels", levels, "number of adiabatic levels")
      ->check(CLI::PositiveNumber);
  cmd_two->add_flag("--deep", deep, "include the extended deeply-bound curve for q > 0");
  add_common(cmd_two, true, false);

  // three-body
  auto* cmd_three = app.add_subcommand("three-body", "2+1 spectrum in hyperspherical coordinates");
  double mass_ratio = 1.0;
  double e_max_rel = 8.0;
  std::string method = "both";
  cmd_three->add_option("--mass-ratio", mass_ratio, "impurity-to-majority mass ratio M/m");
  cmd_three->add_option("--e-max", e_max_rel, "relative-energy window");
  cmd_three->add_option("--method", method, "ansatz, modified or both")
      ->check(CLI::IsMember({"ansatz", "modified", "both"}));
  add_common(cmd_three, true, false);

  // impurity
  auto* cmd_imp = app.add_subcommand("impurity", "impurity ground-state curves, N = 2..6");
  int n_total = 4;
  bool use_amax = false;
  cmd_imp->add_option("--n", n_total, "total particle number")->check(CLI::Range(2, 6));
  cmd_imp->add_option("--method", method, "ansatz, modified or both")
      ->check(CLI::IsMember({"ansatz", "modified", "both"}));
  cmd_imp->add_flag("--use-amax", use_amax, "use the overlap-optimal coefficient vector");
  add_common(cmd_imp, false, true);

  // oracle-ci
  auto* cmd_ci = app.add_subcommand("oracle-ci", "effective-interaction CI oracle");
  int n_a = 2;
  int n_b = 1;
  int n_states = 1;
  double lawson = 50.0;
  std::optional<int> e_max_quanta;
  std::optional<int> n_max_rel;
  cmd_ci->add_option("--na", n_a, "majority particle count")->check(CLI::PositiveNumber);
  cmd_ci->add_option("--nb", n_b, "minority particle count")->check(CLI::PositiveNumber);
  cmd_ci->add_option("--states", n_states, "intrinsic states per point");
  cmd_ci->add_option("--e-max", e_max_quanta, "total-quanta truncation");
  cmd_ci->add_option("--n-max-rel", n_max_rel, "two-body relative cutoff");
  cmd_ci->add_option("--lawson", lawson, "Lawson weight");
  add_common(cmd_ci, true, true);

  // oracle-svm
  auto* cmd_svm = app.add_subcommand("oracle-svm", "correlated-Gaussian variational oracle");
  svm::SvmConfig svm_config;
  svm_config.alpha_trials = 100;
  svm_config.beta_growth_rounds = 100;
  svm_config.basis_cap = 150;
  cmd_svm->add_option("--mass-ratio", mass_ratio, "impurity-to-majority mass ratio M/m");
  cmd_svm->add_option("--alpha", svm_config.alpha_trials, "initial-basis trials");
  cmd_svm->add_option("--beta", svm_config.beta_growth_rounds, "growth trials per element");
  cmd_svm->add_option("--cap", svm_config.basis_cap, "basis size cap");
  cmd_svm->add_option("--sweeps", svm_config.refine_sweeps, "refinement sweeps");
  cmd_svm->add_option("--parity", svm_config.parity, "parity sector (+1 or -1)")
      ->check(CLI::IsMember({-1, 1}));
  add_common(cmd_svm, false, true);

  // compare
  auto* cmd_cmp = app.add_subcommand("compare", "model vs oracle deviation report");
  std::string system = "twobody";
  std::string oracle = "busch";
  std::string overlay;
  cmd_cmp->add_option("--system", system, "twobody, 2+1 or impurity")
      ->check(CLI::IsMember({"twobody", "2+1", "impurity"}));
  cmd_cmp->add_option("--oracle", oracle, "busch, ci or svm")
      ->check(CLI::IsMember({"busch", "ci", "svm"}));
  cmd_cmp->add_option("--n", n_total, "impurity particle number")->check(CLI::Range(2, 6));
  cmd_cmp->add_option("--mass-ratio", mass_ratio, "mass ratio for 2+1 systems");
  cmd_cmp->add_option("--method", method, "ansatz or modified")
      ->check(CLI::IsMember({"ansatz", "modified"}));
  cmd_cmp->add_option("--levels", levels, "two-body levels to compare");
  cmd_cmp->add_option("--alpha", svm_config.alpha_trials, "svm initial trials");
  cmd_cmp->add_option("--beta", svm_config.beta_growth_rounds, "svm growth trials");
  cmd_cmp->add_option("--cap", svm_config.basis_cap, "svm basis cap");
  cmd_cmp->add_option("--overlay", overlay, "published-data overlay file (source=experiment)");
  add_common(cmd_cmp, true, true);

  // anderson
  auto* cmd_and = app.add_subcommand("anderson", "Anderson overlap of the trial state");
  cmd_and->add_option("--n", n_total, "total particle number")->check(CLI::Range(2, 6));
  add_common(cmd_and, false, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const bool has_q = !q_grid_text.empty();
    const bool has_g = !g_grid_text.empty();
    if (has_q == has_g) {
      throw ValidationError("exactly one of --q-grid/--g-grid is required");
    }
    const std::vector<double> grid =
        parse_grid(has_q ? q_grid_text : g_grid_text);
    if (method == "both" && cmd_cmp->parsed()) method = "ansatz";

    if (cmd_two->parsed()) {
      if (!has_q) throw ValidationError("two-body sweeps use --q-grid");
      return run_two_body(grid, levels, deep, output, format);
    }
    if (cmd_three->parsed()) {
      if (!has_q) throw ValidationError("three-body sweeps use --q-grid");
      return run_three_body(grid, mass_ratio, e_max_rel, method, output, format);
    }
    if (cmd_imp->parsed()) {
      if (!has_g) throw ValidationError("impurity sweeps use --g-grid");
      return run_impurity(grid, n_total, method, use_amax, output, format);
    }
    if (cmd_ci->parsed()) {
      return run_oracle_ci(grid, has_q, n_a, n_b, e_max_quanta, n_max_rel,
                           lawson, n_states, output, format);
    }
    if (cmd_svm->parsed()) {
      if (!has_g) throw ValidationError("svm sweeps use --g-grid");
      svm_config.seed = seed;
      return run_oracle_svm(grid, mass_ratio, svm_config, output, format);
    }
    if (cmd_cmp->parsed()) {
      svm_config.seed = seed;
      return run_compare(system, oracle, grid, has_q, n_total, mass_ratio,
                         method, levels, svm_config, overlay, output, format);
    }
    if (cmd_and->parsed()) {
      if (!has_g) throw ValidationError("anderson sweeps use --g-grid");
      return run_anderson(grid, n_total, output, format);
    }
    throw ValidationError("no subcommand given");
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
