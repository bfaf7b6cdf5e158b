#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "json.hpp"
#include "wsr/limits.hpp"
#include "wsr/multiindex.hpp"
#include "wsr/solver.hpp"

namespace wsr {

/// A linear reconstruction map on C^Lambda acting on coefficient vectors.
struct LinearAlgorithmMatrix {
  Eigen::MatrixXcd T;
  std::size_t declared_rank = 0;
  /// Square and numerical rank <= declared_rank. Throws PreconditionError / DimensionError.
  void validate() const;
};

/// Number of singular values above rel_tol * sigma_max (0 for the zero matrix).
std::size_t numerical_rank(const Eigen::MatrixXcd& M, double rel_tol = 1e-10);

struct WorstCase {
  double value = 0.0;
  std::size_t witness = 0;  // column j attaining max_j ||(I - T) e_j||_2
};

/// max over ||x||_1 <= 1 of ||x - T x||_2, attained at a unit coordinate vector.
WorstCase worst_case_l1ball_error(const LinearAlgorithmMatrix& T);

/// sqrt((m - n) / m) for 0 <= n < m.
double gluskin_bound(std::size_t m, std::size_t n);

/// T = V_n V_n^* from the top-n right singular vectors of G: the least-squares
/// reconstruction from the samples G x restricted to n singular directions.
LinearAlgorithmMatrix truncated_svd_algorithm(const Eigen::MatrixXcd& G, std::size_t n);

struct SeparationReport {
  std::size_t d = 0;
  std::size_t n_rank = 0;
  std::size_t ambient = 0;  // 5^d
  std::size_t numerical_rank = 0;
  double gluskin = 0.0;
  double linear_worst_case = 0.0;
  bool gluskin_holds = false;
  /// n_rank <= 5^d / 2, where the 1/sqrt(2) floor applies.
  bool below_threshold = false;
  std::string note;
  MultiIndex witness_k;
  bool witness_in_log_class = false;
  /// max of |error function| over a 9^d grid; >= the L2 error for frequencies in [-2, 2]^d.
  double linear_linf_lower_bound = 0.0;
  std::size_t bpdn_samples = 0;
  double bpdn_l2_error = 0.0;
  SolverStatus bpdn_status = SolverStatus::MaxIter;
  std::uint64_t seed = 0;
};

/// Rank-n linear baseline vs. BPDN on Lambda = [-2, 2]^d.
SeparationReport curse_demo(std::size_t d, std::size_t n_rank, std::uint64_t seed, std::size_t bpdn_samples = 40,
                            const Limits& limits = {}, const SolverConfig& solver = {});

nlohmann::json to_json(const SeparationReport& r);

}  // namespace wsr
