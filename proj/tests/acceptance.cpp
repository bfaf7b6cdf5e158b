// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wsr/experiments.hpp"
#include "wsr/lowerbound.hpp"
#include "wsr/multiindex.hpp"
#include "wsr/recovery.hpp"
#include "wsr/rng.hpp"
#include "wsr/sampling.hpp"
#include "wsr/solver.hpp"
#include "wsr/wiener.hpp"

using namespace wsr;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

VectorXcd planted(Eigen::Index n, std::size_t s, Rng& rng) {
  VectorXcd x = VectorXcd::Zero(n);
  std::size_t placed = 0;
  while (placed < s) {
    const auto j = static_cast<Eigen::Index>(rng.uniform_below(static_cast<std::uint64_t>(n)));
    if (x(j) != Complex(0.0)) continue;
    x(j) = Complex(rng.normal(), rng.normal());
    ++placed;
  }
  return x / x.norm();
}

VectorXcd random_direction(Eigen::Index n, Rng& rng) {
  VectorXcd e(n);
  for (Eigen::Index i = 0; i < n; ++i) e(i) = Complex(rng.normal(), rng.normal());
  return e / e.norm();
}

MatrixXcd gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  MatrixXcd M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = Complex(rng.normal(), rng.normal());
  return M;
}

struct Run {
  BpdnProblem problem;
  SolverResult result;
};

// Runs collected for the certificate audit.
std::vector<Run> audit;

// Planted 3-sparse vectors on [-2, 2]^2 from 60 uniform samples.
void planted_recovery(int id, bool noisy) {
  const auto t0 = Clock::now();
  const IndexSet lam = cube_index_set(2, 2);
  const std::size_t m = 60;
  const double eta = noisy ? 0.01 * std::sqrt(static_cast<double>(m)) : 0.0;
  const double tol = noisy ? 10.0 * eta / std::sqrt(static_cast<double>(m)) : 1e-6;
  int good = 0;
  int converged = 0;
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const std::uint64_t seed = trial_seed(noisy ? 2000 : 1000, t);
    Rng rng(stream_seed(seed, 1));
    const VectorXcd x0 = planted(static_cast<Eigen::Index>(lam.size()), 3, rng);
    const MatrixXcd G = measurement_matrix(lam, draw_uniform(m, 2, stream_seed(seed, 2)));
    VectorXcd y = G * x0;
    if (noisy) y += eta * random_direction(static_cast<Eigen::Index>(m), rng);
    BpdnProblem p{G, y, eta};
    const auto r = solve_bpdn(p);
    const double err = (r.x - x0).norm() / (noisy ? 1.0 : x0.norm());
    worst = std::max(worst, err);
    if (r.status == SolverStatus::Converged) ++converged;
    if (r.status == SolverStatus::Converged && err <= tol) ++good;
    audit.push_back({std::move(p), r});
  }
  const double secs = seconds_since(t0);
  const bool ok = good >= 95 && (noisy || secs <= 60.0);
  if (noisy)
    report(id, ok, "noisy recovery", fmt("%d/100 within 10 eta/sqrt(m) = %.3g (need 95), max error %.3g, %d converged",
                                         good, tol, worst, converged));
  else
    report(id, ok, "exact sparse recovery",
           fmt("%d/100 with relative error <= 1e-6 (need 95), max %.3g, %d converged, %.2f s (limit 60)", good, worst,
               converged, secs));
}

void calibrated_pipeline() {
  CalibrationConfig cfg;
  cfg.spec = ClassSpec::log_class(2);
  cfg.truncation_radius = 3;
  cfg.support_radius = 6;
  cfg.gamma = std::exp(-1.0);
  cfg.options.eta_mode = EtaMode::ClassBound;
  cfg.seed = 3;
  const auto rep = calibrate_c_universal(cfg);
  const bool ok = rep.found && rep.holdout_rate >= 1.0 - cfg.gamma;
  // The smallest passing constant plans very few samples; a larger fixed one is
  // shown for comparison only.
  auto wide = cfg;
  wide.c_start = 4.0;
  wide.c_max = 4.0;
  const auto ref = calibrate_c_universal(wide);
  report(3, ok, "calibrated end-to-end recovery",
         fmt("c_universal %g, calibration rate %.2f, holdout rate %.2f over %zu trials (need %.4f), s=%zu m=%zu, "
             "%zu nonconverged; at c=4 (m=%zu) holdout rate %.2f",
             rep.c_universal, rep.calibration_rate, rep.holdout_rate, cfg.holdout_trials, 1.0 - cfg.gamma, rep.plan.s,
             rep.plan.m, rep.holdout_nonconverged, ref.plan.m, ref.holdout_rate));
}

MatrixXcd random_rank_n(Eigen::Index m, Eigen::Index n, int kind, Rng& rng) {
  if (n == 0) return MatrixXcd::Zero(m, m);
  if (kind == 0) return gaussian(m, n, rng) * gaussian(m, n, rng).adjoint() / static_cast<double>(m);
  const Eigen::HouseholderQR<MatrixXcd> qr(gaussian(m, n, rng));
  const MatrixXcd Q = qr.householderQ() * MatrixXcd::Identity(m, n);
  if (kind == 1) return Q * Q.adjoint();
  // Oblique: rank-n map with range Q and a random co-range.
  return Q * gaussian(n, m, rng);
}

void linear_lower_bound() {
  const auto t0 = Clock::now();
  const IndexSet lam = cube_index_set(2, 2);
  const auto ambient = static_cast<Eigen::Index>(lam.size());
  Rng rng(4);
  double min12 = 1e9;
  double min_le12 = 1e9;
  int maps = 0;
  bool ranks_ok = true;
  // The time limit applies to the bound itself; building the maps and checking their
  // ranks by SVD is harness work and is reported separately.
  double bound_secs = 0.0;
  auto check = [&](const LinearAlgorithmMatrix& alg) {
    const std::size_t r = numerical_rank(alg.T);
    ranks_ok = ranks_ok && r <= 12;
    const auto tb = Clock::now();
    const double w = worst_case_l1ball_error(alg).value;
    bound_secs += seconds_since(tb);
    min_le12 = std::min(min_le12, w);
    if (r == 12) min12 = std::min(min12, w);
    ++maps;
  };
  for (Eigen::Index n = 0; n <= 12; ++n)
    for (int trial = 0; trial < 60; ++trial) check({random_rank_n(ambient, n, trial % 3, rng), static_cast<std::size_t>(n)});
  // Sample-based linear reconstructions: truncated SVD of measurement matrices.
  for (std::size_t samples : {12u, 25u, 40u})
    for (std::uint64_t seed = 0; seed < 20; ++seed)
      check(truncated_svd_algorithm(measurement_matrix(lam, draw_uniform(samples, 2, seed)), 12));
  const double secs = seconds_since(t0);
  const double b12 = std::sqrt(13.0 / 25.0) - 1e-9;
  const double bhalf = 1.0 / std::sqrt(2.0) - 1e-9;
  const bool ok = ranks_ok && min12 >= b12 && min_le12 >= bhalf && bound_secs <= 1.0;
  report(4, ok, "linear lower bound",
         fmt("%d maps, min rank-12 worst case %.6f (need %.6f), min over rank <= 12 %.6f (need %.6f), "
             "bound evaluation %.4f s (limit 1), %.2f s including map construction and rank checks",
             maps, min12, b12 + 1e-9, min_le12, bhalf + 1e-9, bound_secs, secs));
}

void separation() {
  double worst_bpdn = 0.0;
  double min_linear = 1e9;
  bool all_ok = true;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = curse_demo(2, 12, seed, 40);
    worst_bpdn = std::max(worst_bpdn, r.bpdn_l2_error);
    min_linear = std::min(min_linear, r.linear_worst_case);
    all_ok = all_ok && r.witness_in_log_class && r.bpdn_status == SolverStatus::Converged && r.bpdn_l2_error <= 1e-6 &&
             r.linear_worst_case >= 0.72;
  }
  report(5, all_ok, "nonlinear beats linear",
         fmt("10 seeds, max BPDN L2 error %.3g (need <= 1e-6), min rank-12 linear worst case %.6f (need >= 0.72)",
             worst_bpdn, min_linear));
}

void formula_checks() {
  bool log_ok = true;
  double worst_ratio = 0.0;
  for (std::size_t d : {1u, 2u, 4u, 8u})
    for (double eps : {0.2, 0.5, 0.9}) {
      const auto b = plan_truncation(ClassSpec::log_class(d), eps);
      const double limit = 2.0 * static_cast<double>(d) / eps;
      worst_ratio = std::max(worst_ratio, b.log_cardinality / limit);
      log_ok = log_ok && b.log_cardinality <= limit && b.projection_error_bound <= eps;
    }

  int identity_ok = 0;
  int parseval_ok = 0;
  const ClassSpec spec = ClassSpec::log_class(2);
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto f = random_member(spec, 8 + t % 8, 6, trial_seed(6000, t));
    // sigma_s plus the s largest moduli is the Wiener norm, for every s.
    std::vector<double> mod;
    for (const auto& [k, v] : f.terms()) mod.push_back(std::abs(v));
    std::sort(mod.rbegin(), mod.rend());
    bool id = true;
    double head = 0.0;
    for (std::size_t s = 0; s <= mod.size(); ++s) {
      id = id && std::abs(sigma_s(f, s) + head - wiener_norm(f)) <= 1e-12 * std::max(1.0, wiener_norm(f));
      if (s < mod.size()) head += mod[s];
    }
    identity_ok += id;
    // Mean of |f|^2 at uniform points against the coefficient energy.
    double energy = 0.0;
    for (double a : mod) energy += a * a;
    const std::size_t n = 4096;
    const VectorXcd v = evaluate(f, draw_uniform(n, 2, trial_seed(7000, t)));
    const Eigen::ArrayXd sq = v.cwiseAbs2().array();
    const double mean = sq.mean();
    const double se = std::sqrt((sq - mean).square().sum() / static_cast<double>(n - 1) / static_cast<double>(n));
    const double exact = lp_error(f, CoefficientVector(2), 2.0).value;
    parseval_ok += std::abs(mean - energy) <= 3.0 * se && std::abs(exact * exact - energy) <= 1e-12 * energy;
  }
  const bool ok = log_ok && identity_ok == 50 && parseval_ok == 50;
  report(6, ok, "formula cross-checks",
         fmt("log N <= 2d/eps on 12 cells (%s, max ratio %.3f), sigma_s identity %d/50, Parseval within 3 SE %d/50",
             log_ok ? "yes" : "no", worst_ratio, identity_ok, parseval_ok));
}

void certificates() {
  // Underdetermined noisy instances in addition to the runs above.
  const IndexSet lam = cube_index_set(2, 4);
  for (std::uint64_t t = 0; t < 40; ++t) {
    Rng rng(trial_seed(8000, t));
    const VectorXcd x0 = planted(static_cast<Eigen::Index>(lam.size()), 2 + t % 6, rng);
    const std::size_t m = 30 + 5 * (t % 5);
    const MatrixXcd G = measurement_matrix(lam, draw_uniform(m, 2, trial_seed(8100, t)));
    const double eta = 0.05 * static_cast<double>(t % 3);
    VectorXcd y = G * x0 + 0.9 * eta * random_direction(static_cast<Eigen::Index>(m), rng);
    BpdnProblem p{G, y, eta};
    auto r = solve_bpdn(p);
    audit.push_back({std::move(p), std::move(r)});
  }
  const SolverConfig cfg;
  int converged = 0;
  int bad = 0;
  double worst_gap = -1e300;
  for (const auto& [p, r] : audit) {
    if (r.status != SolverStatus::Converged) continue;
    ++converged;
    const double scale = std::max(1.0, l1_norm(r.x));
    const double residual = (p.G * r.x - p.y).norm();
    const bool feasible = residual <= p.eta + cfg.feas_tol * std::max(1.0, p.y.norm());
    // Recomputed from the point alone, the gap is still an upper bound on suboptimality.
    const bool recomputed_ok = feasible && certificate_gap(p, r.x, std::nullopt, cfg.feas_tol) >= -1e-10;
    worst_gap = std::max(worst_gap, r.certificate_gap / scale);
    if (!recomputed_ok || r.certificate_gap > cfg.gap_tol * scale ||
        std::abs(r.objective - l1_norm(r.x)) > 1e-12 * scale)
      ++bad;
  }

  Rng rng(2025);
  int compared = 0;
  int mismatched = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int cols = 2 + static_cast<int>(rng.uniform_below(5));
    const int rows = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(cols + 2)));
    Eigen::MatrixXd G(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) G(i, j) = rng.normal();
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(cols);
    for (int j = 0; j < cols; ++j)
      if (rng.uniform01() < 0.5) x0(j) = rng.normal();
    Eigen::VectorXd noise(rows);
    for (int i = 0; i < rows; ++i) noise(i) = rng.normal();
    const double eta = (trial % 3 == 0) ? 0.0 : 0.3 * rng.uniform01() * std::max(1.0, (G * x0).norm());
    Eigen::VectorXd y = G * x0;
    if (eta > 0.0) y += noise * (0.9 * eta / noise.norm());
    if (eta == 0.0 && rows > cols) continue;
    const double ref = oracle::brute_force_bpdn(G, y, eta);
    if (!std::isfinite(ref)) continue;
    const auto r = solve_bpdn({G.cast<Complex>(), y.cast<Complex>(), eta});
    ++compared;
    if (r.status != SolverStatus::Converged || std::abs(r.objective - ref) > 1e-4 * std::max(1.0, ref)) ++mismatched;
  }
  const bool ok = bad == 0 && converged > 0 && mismatched == 0 && compared >= 100;
  report(7, ok, "solver certificates",
         fmt("%d converged runs audited, %d violations, max gap/max(1,|x|_1) %.2e (limit 1e-8); brute force %d/%d "
             "toys within 1e-4",
             converged, bad, worst_gap, compared - mismatched, compared));
}

nlohmann::json load(const std::string& name) {
  std::ifstream in(std::string(WSR_CONFIG_DIR) + "/" + name);
  return nlohmann::json::parse(in);
}

void determinism() {
  const std::vector<std::pair<std::string, std::string>> runs = {{"recover", "smoke_recover.json"},
                                                                 {"recover", "recover_eps_grid.json"},
                                                                 {"phase-transition", "phase_transition.json"},
                                                                 {"lower-bound", "lower_bound.json"},
                                                                 {"bound-table", "bound_table.json"}};
  int same = 0;
  std::string differing;
  for (const auto& [cmd, file] : runs) {
    const auto cfg = load(file);
    RunOptions one;
    RunOptions many;
    many.threads = 4;
    const auto a = run_command(cmd, cfg, one).csv;
    const auto b = run_command(cmd, cfg, one).csv;
    const auto c = run_command(cmd, cfg, many).csv;
    if (a == b && a == c && !a.empty()) ++same;
    else differing += " " + file;
  }
  report(8, same == static_cast<int>(runs.size()), "deterministic CSV",
         fmt("%d/%zu configs byte-identical across reruns and thread counts%s", same, runs.size(), differing.c_str()));
}

}  // namespace

int main() {
  try {
    planted_recovery(1, false);
    planted_recovery(2, true);
    calibrated_pipeline();
    linear_lower_bound();
    separation();
    formula_checks();
    certificates();
    determinism();
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance aborted: %s\n", e.what());
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
