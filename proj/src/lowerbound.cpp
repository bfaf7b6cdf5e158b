#include "wsr/lowerbound.hpp"

#include <cmath>

#include "wsr/errors.hpp"
#include "wsr/rng.hpp"
#include "wsr/sampling.hpp"
#include "wsr/wiener.hpp"

namespace wsr {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

std::size_t numerical_rank(const MatrixXcd& M, double rel_tol) {
  if (M.size() == 0) return 0;
  const Eigen::JacobiSVD<MatrixXcd> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(0) > 0.0)) return 0;
  std::size_t r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++r;
  return r;
}

void LinearAlgorithmMatrix::validate() const {
  if (T.rows() != T.cols() || T.rows() < 1) throw DimensionError("linear algorithm: T must be square and non-empty");
  if (!T.allFinite()) throw PreconditionError("linear algorithm: T has NaN or Inf entries");
  const auto r = numerical_rank(T);
  if (r > declared_rank)
    throw PreconditionError("linear algorithm: numerical rank " + std::to_string(r) + " exceeds declared rank " +
                            std::to_string(declared_rank));
}

WorstCase worst_case_l1ball_error(const LinearAlgorithmMatrix& alg) {
  if (alg.T.rows() != alg.T.cols() || alg.T.rows() < 1)
    throw DimensionError("worst_case_l1ball_error: T must be square and non-empty");
  const MatrixXcd E = MatrixXcd::Identity(alg.T.rows(), alg.T.cols()) - alg.T;
  WorstCase w;
  for (Index j = 0; j < E.cols(); ++j) {
    const double v = E.col(j).norm();
    if (v > w.value) {
      w.value = v;
      w.witness = static_cast<std::size_t>(j);
    }
  }
  return w;
}

double gluskin_bound(std::size_t m, std::size_t n) {
  if (n >= m) throw PreconditionError("gluskin_bound: need n < m");
  return std::sqrt(static_cast<double>(m - n) / static_cast<double>(m));
}

LinearAlgorithmMatrix truncated_svd_algorithm(const MatrixXcd& G, std::size_t n) {
  const Index cols = G.cols();
  LinearAlgorithmMatrix alg{MatrixXcd::Zero(cols, cols), n};
  if (n == 0 || G.rows() == 0) return alg;
  const Eigen::JacobiSVD<MatrixXcd> svd(G, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Index keep = 0;
  while (keep < sv.size() && keep < static_cast<Index>(n) && sv(keep) > 1e-10 * sv(0)) ++keep;
  const MatrixXcd V = svd.matrixV().leftCols(keep);
  alg.T = V * V.adjoint();
  return alg;
}

SeparationReport curse_demo(std::size_t d, std::size_t n_rank, std::uint64_t seed, std::size_t bpdn_samples,
                            const Limits& limits, const SolverConfig& solver) {
  if (d == 0) throw DimensionError("curse_demo: d must be >= 1");
  std::size_t ambient = 1;
  for (std::size_t i = 0; i < d; ++i) {
    ambient *= 5;
    if (ambient > static_cast<std::size_t>(limits.max_lower_bound_ambient))
      throw CapacityError("curse_demo: 5^d exceeds max_lower_bound_ambient = " +
                          std::to_string(limits.max_lower_bound_ambient));
  }
  if (n_rank >= ambient) throw PreconditionError("curse_demo: n_rank must be < 5^d");
  if (bpdn_samples < 1) throw PreconditionError("curse_demo: bpdn_samples must be >= 1");

  SeparationReport r;
  r.d = d;
  r.n_rank = n_rank;
  r.ambient = ambient;
  r.seed = seed;
  r.bpdn_samples = bpdn_samples;

  const IndexSet lambda = cube_index_set(d, 2, limits);
  MatrixXcd G_lin(0, static_cast<Index>(ambient));
  if (n_rank > 0) G_lin = measurement_matrix(lambda, draw_uniform(n_rank, d, stream_seed(seed, 1)), limits);
  const auto alg = truncated_svd_algorithm(G_lin, n_rank);
  alg.validate();
  r.numerical_rank = numerical_rank(alg.T);

  const auto wc = worst_case_l1ball_error(alg);
  r.linear_worst_case = wc.value;
  r.gluskin = gluskin_bound(ambient, n_rank);
  r.gluskin_holds = wc.value >= r.gluskin - 1e-9;
  r.below_threshold = 2 * n_rank <= ambient;
  if (!r.below_threshold) r.note = "budget above 5^d/2 threshold";

  r.witness_k = lambda[wc.witness];
  const CoefficientVector witness(d, {{r.witness_k, Complex(1.0, 0.0)}});
  r.witness_in_log_class = membership(ClassSpec::log_class(d), witness).member;

  // Error function of the linear map on the witness, sampled on a grid fine enough
  // that its mean square equals the L2 norm.
  const VectorXcd err = VectorXcd::Unit(static_cast<Index>(ambient), static_cast<Index>(wc.witness)) -
                        alg.T.col(static_cast<Index>(wc.witness));
  std::vector<Complex> err_values(err.data(), err.data() + err.size());
  const auto err_fn = CoefficientVector::from_dense(lambda, err_values);
  r.linear_linf_lower_bound =
      err_fn.empty() ? 0.0 : evaluate(err_fn, equispaced_grid(d, 9)).cwiseAbs().maxCoeff();

  const PointSet pts = draw_uniform(bpdn_samples, d, stream_seed(seed, 2));
  const BpdnProblem prob{measurement_matrix(lambda, pts, limits), evaluate(witness, pts), 0.0};
  const auto res = solve_bpdn(prob, solver);
  r.bpdn_status = res.status;
  r.bpdn_l2_error = (res.x - VectorXcd::Unit(static_cast<Index>(ambient), static_cast<Index>(wc.witness))).norm();
  return r;
}

nlohmann::json to_json(const SeparationReport& r) {
  return {{"d", r.d},
          {"n_rank", r.n_rank},
          {"ambient", r.ambient},
          {"numerical_rank", r.numerical_rank},
          {"gluskin_bound", r.gluskin},
          {"linear_worst_case", r.linear_worst_case},
          {"gluskin_holds", r.gluskin_holds},
          {"below_threshold", r.below_threshold},
          {"note", r.note},
          {"witness_k", to_json(r.witness_k)},
          {"witness_in_log_class", r.witness_in_log_class},
          {"linear_linf_lower_bound", r.linear_linf_lower_bound},
          {"bpdn_samples", r.bpdn_samples},
          {"bpdn_l2_error", r.bpdn_l2_error},
          {"bpdn_status", to_string(r.bpdn_status)},
          {"seed", r.seed}};
}

}  // namespace wsr
