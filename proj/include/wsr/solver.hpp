#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "json.hpp"

namespace wsr {

/// min ||x||_1  subject to  ||G x - y||_2 <= eta, over complex x.
struct BpdnProblem {
  Eigen::MatrixXcd G;
  Eigen::VectorXcd y;
  double eta = 0.0;

  /// Shapes, eta >= 0, and finiteness of all entries. Throws PreconditionError.
  void validate() const;
};

enum class SolverStatus { Converged, MaxIter, InfeasibleDetected };

std::string to_string(SolverStatus s);

struct SolverConfig {
  double gap_tol = 1e-8;   // relative to max(1, ||x||_1)
  double feas_tol = 1e-9;  // relative to max(1, ||y||_2)
  int max_iter = 50'000;
  // Primal-dual step sizes are step_scale / ||A|| with A = G / sqrt(rows);
  // the norm comes from `power_iterations` rounds of power iteration.
  int power_iterations = 30;
  double step_scale = 0.95;
  /// Iterations between certificate checks / polishing attempts.
  int check_interval = 25;
  // Fallback: a log-barrier method on the dual, tried once after `barrier_after`
  // iterations without a certificate, when the dual has at most this many real unknowns.
  int barrier_after = 500;
  int barrier_max_dual_dim = 801;

  void validate() const;
};

struct SolverResult {
  Eigen::VectorXcd x;
  double objective = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  double certificate_gap = 0.0;
  SolverStatus status = SolverStatus::MaxIter;
  /// True when the returned point came from support-restricted refinement.
  bool polished = false;
};

/// Primal-dual first-order iterations with periodic support-restricted polishing;
/// a point is returned as converged only with a dual certificate.
SolverResult solve_bpdn(const BpdnProblem& problem, const SolverConfig& config = {});

/// Duality gap ||x||_1 - max_nu (Re<nu, y> - eta ||nu||_2) over a handful of dual
/// candidates scaled to ||G^* nu||_inf <= 1: the residual direction y - Gx, the
/// minimum-norm vectors interpolating the signs of x, and (if given) a dual hint
/// corrected onto the sign constraints. Every candidate is dual feasible, so the
/// result always bounds ||x||_1 - OPT from above.
/// Throws PreconditionError if x is infeasible beyond feas_tol.
double certificate_gap(const BpdnProblem& problem, const Eigen::VectorXcd& x,
                       const std::optional<Eigen::VectorXcd>& dual_hint = std::nullopt,
                       double feas_tol = SolverConfig{}.feas_tol);

/// Minimum-norm least-squares solution via a complete orthogonal decomposition.
Eigen::VectorXcd least_squares(const Eigen::MatrixXcd& G, const Eigen::VectorXcd& y);

/// Largest singular value estimate from power iteration on A^* A.
double estimate_operator_norm(const Eigen::MatrixXcd& A, int iterations);

double l1_norm(const Eigen::VectorXcd& x);

nlohmann::json to_json(const SolverResult& r, bool include_x = false);

}  // namespace wsr
