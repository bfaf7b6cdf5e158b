#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "wsr/limits.hpp"
#include "wsr/multiindex.hpp"
#include "wsr/solver.hpp"
#include "wsr/wiener.hpp"

namespace wsr {

/// How the BPDN radius is chosen. ClassBound is the algorithm proper;
/// PerFunctionTail uses the actual tail of the ground truth and is a diagnostic.
enum class EtaMode { ClassBound, PerFunctionTail };
std::string to_string(EtaMode mode);
EtaMode eta_mode_from_string(const std::string& s);

struct RecoveryPlan {
  ClassSpec spec;
  double p = 2.0;
  double gamma = 0.0;
  double c_universal = 1.0;
  /// Target accuracy; for plans built from a truncation radius this is 2 c eps_tilde.
  double eps = 0.0;
  double eps_tilde = 0.0;
  std::int64_t truncation_radius = 0;
  double index_set_size = 0.0;
  std::size_t s = 0;
  std::size_t m = 0;
  double projection_bound = 0.0;
  /// Radius of the unnormalized BPDN constraint ||G x - y||_2 <= eta, i.e. bound * sqrt(m).
  double eta = 0.0;

  /// Lambda = [-R, R]^d with R = truncation_radius.
  IndexSet index_set(const Limits& limits = {}) const;
};

/// m = ceil(c ln(1/gamma) s ln^3(max(s, 2)) ln(#Lambda)), at least 1.
std::size_t sample_count(double c_universal, double gamma, std::size_t s, double index_set_size);

/// Plan for accuracy eps in L_p (2 <= p < inf): eps_tilde = eps / (2c), s = max(2, ceil(eps_tilde^-p)),
/// Lambda from plan_truncation(spec, eps_tilde^(p/2)).
RecoveryPlan plan_parameters(const ClassSpec& spec, double eps, double p, double gamma, double c_universal,
                             const Limits& limits = {});

/// Same sparsity / sample rule for a fixed truncation radius: E is the class bound at
/// that radius and eps_tilde = E^(2/p).
RecoveryPlan plan_for_truncation(const ClassSpec& spec, std::int64_t truncation_radius, double p, double gamma,
                                 double c_universal);

struct QuadratureConfig {
  std::size_t mc_points = 4096;
  std::size_t grid_per_dim = 64;
  std::uint64_t seed = 0;
};

struct LpErrorEstimate {
  double value = 0.0;
  /// Zero for the exact p = 2 path.
  double standard_error = 0.0;
  /// p = inf only: a guaranteed upper bound (grid max plus a Lipschitz correction,
  /// capped by the Wiener norm of the difference). Equals value otherwise.
  double upper_bound = 0.0;
};

/// ||f - g||_p for trigonometric polynomials given by coefficients. p = 2 exact,
/// 2 < p < inf Monte Carlo, p = inf grid maximum.
LpErrorEstimate lp_error(const CoefficientVector& c_true, const CoefficientVector& c_rec, double p,
                         const QuadratureConfig& quad = {}, const Limits& limits = {});

/// c s^(-1/p) sigma + c s^(1/2 - 1/p) E.
double error_bound_rhs(double s, double p, double sigma, double E, double c_universal);

struct RecoveryOptions {
  EtaMode eta_mode = EtaMode::ClassBound;
  QuadratureConfig quadrature;
  SolverConfig solver;
  Limits limits;
};

struct RecoveryReport {
  CoefficientVector recovered{1};
  LpErrorEstimate lp_error;
  double rhs_bound = 0.0;
  double sigma = 0.0;      // sigma_s of the ground truth
  double E = 0.0;          // projection error used on the right-hand side
  double eta = 0.0;        // BPDN radius actually used
  double tail = 0.0;       // Wiener tail of the ground truth outside Lambda
  std::size_t samples_used = 0;
  std::uint64_t seed = 0;
  EtaMode eta_mode = EtaMode::ClassBound;
  SolverResult solver;
  bool membership_checked = false;
  bool membership_sufficient_only = false;
  std::string warning;
  // Objective domination chain: recovered <= projection <= truth.
  double recovered_wiener_norm = 0.0;
  double projection_wiener_norm = 0.0;
  double truth_wiener_norm = 0.0;
  /// ||G P_Lambda f - y||_2, always <= tail * sqrt(m).
  double projection_residual = 0.0;
  double wall_ms = 0.0;

  bool converged() const { return solver.status == SolverStatus::Converged; }
};

/// Samples f at plan.m uniform points (seeded), solves BPDN on Lambda and measures the
/// L_p error of the recovered polynomial against f.
RecoveryReport recover(const CoefficientVector& f, const RecoveryPlan& plan, std::uint64_t seed,
                       const RecoveryOptions& options = {});

struct CalibrationConfig {
  ClassSpec spec;
  std::int64_t truncation_radius = 3;
  std::int64_t support_radius = 6;   // ground-truth frequencies in [-M, M]^d
  std::size_t support_budget = 8;
  double p = 2.0;
  double gamma = 0.36787944117144233;  // 1/e
  double c_start = 0.25;
  double c_max = 64.0;
  std::size_t calibration_trials = 50;
  std::size_t holdout_trials = 100;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  RecoveryOptions options;
};

struct CalibrationReport {
  double c_universal = 0.0;
  bool found = false;
  RecoveryPlan plan;
  double calibration_rate = 0.0;
  double holdout_rate = 0.0;
  std::size_t holdout_nonconverged = 0;
  /// Every c tried, with its calibration success rate.
  std::vector<std::pair<double, double>> history;
};

/// Doubles c_universal from c_start until the success rate (lp_error <= rhs_bound on
/// random class members) reaches 1 - gamma on calibration seeds, then measures the
/// rate on disjoint held-out seeds.
CalibrationReport calibrate_c_universal(const CalibrationConfig& cfg);

nlohmann::json to_json(const RecoveryPlan& plan);
nlohmann::json to_json(const RecoveryReport& report, bool include_coefficients = false);

}  // namespace wsr
