#include "wsr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "wsr/errors.hpp"
#include "wsr/rng.hpp"

namespace wsr {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using Cod = Eigen::CompleteOrthogonalDecomposition<MatrixXcd>;
using Complex = std::complex<double>;

std::string to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Converged: return "converged";
    case SolverStatus::MaxIter: return "max_iter";
    case SolverStatus::InfeasibleDetected: return "infeasible_detected";
  }
  return "unknown";
}

double l1_norm(const VectorXcd& x) { return x.cwiseAbs().sum(); }

void BpdnProblem::validate() const {
  if (G.rows() < 1 || G.cols() < 1) throw PreconditionError("bpdn: G must be non-empty");
  if (y.size() != G.rows()) throw DimensionError("bpdn: length(y) must equal rows(G)");
  if (!std::isfinite(eta) || eta < 0.0) throw PreconditionError("bpdn: eta must be finite and >= 0");
  if (!G.allFinite() || !y.allFinite()) throw PreconditionError("bpdn: NaN or Inf in G or y");
}

void SolverConfig::validate() const {
  if (!(gap_tol > 0.0) || !(feas_tol > 0.0)) throw PreconditionError("solver: tolerances must be > 0");
  if (max_iter < 1 || power_iterations < 1 || check_interval < 1)
    throw PreconditionError("solver: iteration counts must be >= 1");
  if (!(step_scale > 0.0 && step_scale < 1.0)) throw PreconditionError("solver: step_scale must lie in (0, 1)");
}

VectorXcd least_squares(const MatrixXcd& G, const VectorXcd& y) {
  if (G.rows() < 1) throw PreconditionError("least_squares: G needs at least one row");
  if (y.size() != G.rows()) throw DimensionError("least_squares: length(y) must equal rows(G)");
  return Cod(G).solve(y);
}

double estimate_operator_norm(const MatrixXcd& A, int iterations) {
  Rng rng(0x0BADC0FFEEULL);
  VectorXcd v(A.cols());
  for (Index i = 0; i < v.size(); ++i) v(i) = Complex(rng.normal(), rng.normal());
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    VectorXcd w = A.adjoint() * (A * v);
    lambda = w.norm();
    if (lambda == 0.0) return 0.0;
    v = w / lambda;
  }
  return std::sqrt(lambda);
}

namespace {

// Builds dual-feasible points for the BPDN dual
//   max Re<nu, y> - eta ||nu||_2  s.t.  ||G^* nu||_inf <= 1
// and returns the best objective found (a lower bound on the primal optimum).
class DualCertifier {
 public:
  DualCertifier(const MatrixXcd& G, const VectorXcd& y, double eta) : G_(G), y_(y), eta_(eta) {}

  // Candidates are tried cheapest first; stops once the gap l1(x) - bound is <= enough.
  // The radius is max(eta, ||y - Gx||): a point accepted within feas_tol is exactly
  // feasible for that radius, so weak duality holds for it without rounding slack.
  double lower_bound(const VectorXcd& x, const VectorXcd* hint, double enough = -1.0) const {
    const double l1 = l1_norm(x);
    const VectorXcd r = y_ - G_ * x;
    const double radius = std::max(eta_, r.norm());
    auto value = [&](const VectorXcd& nu) { return direction_value(nu, radius); };
    double best = value(r);
    if (hint) best = std::max(best, value(*hint));
    if (l1 - best <= enough) return best;

    std::vector<Index> support;
    for (Index j = 0; j < x.size(); ++j)
      if (x(j) != Complex{}) support.push_back(j);
    if (support.empty()) return best;

    const auto k = static_cast<Index>(support.size());
    VectorXcd signs(k);
    MatrixXcd gs_adj(k, G_.rows());
    for (Index i = 0; i < k; ++i) {
      const auto j = support[static_cast<std::size_t>(i)];
      signs(i) = x(j) / std::abs(x(j));
      gs_adj.row(i) = G_.col(j).adjoint();
    }
    // (G_S^* nu = sign(x_S)) pins the dual on the support.
    const Cod cod(gs_adj);
    best = std::max(best, value(cod.solve(signs)));
    if (l1 - best <= enough) return best;
    if (hint) {
      const VectorXcd corrected = *hint + cod.solve(signs - gs_adj * *hint);
      best = std::max(best, value(corrected));
      if (l1 - best <= enough) return best;
    }
    // Additionally ask for G^* nu = 0 off the support (exact when G has full column rank).
    VectorXcd target = VectorXcd::Zero(G_.cols());
    for (Index i = 0; i < k; ++i) target(support[static_cast<std::size_t>(i)]) = signs(i);
    best = std::max(best, value(full_adjoint_cod().solve(target)));
    return best;
  }

 private:
  // max over t >= 0 with t ||G^* nu||_inf <= 1 of t (Re<nu, y> - radius ||nu||).
  double direction_value(const VectorXcd& nu, double radius) const {
    if (nu.size() != y_.size() || !nu.allFinite()) return 0.0;
    const double a = nu.dot(y_).real() - radius * nu.norm();
    if (!(a > 0.0)) return 0.0;
    const double s = (G_.adjoint() * nu).cwiseAbs().maxCoeff();
    if (!(s > 0.0)) return 0.0;
    return a / s;
  }

  const Cod& full_adjoint_cod() const {
    if (!full_cod_) full_cod_.emplace(G_.adjoint());
    return *full_cod_;
  }

  const MatrixXcd& G_;
  const VectorXcd& y_;
  double eta_;
  mutable std::optional<Cod> full_cod_;
};

double feasibility_slack(const BpdnProblem& p, double feas_tol) {
  return feas_tol * std::max(1.0, p.y.norm());
}

// Newton's method on the KKT system of the support-restricted problem
//   min sum_j |x_j|  s.t.  ||A_S x - b||^2 = eps^2,
// in real coordinates u = [Re x; Im x]:
//   x_j/|x_j| + lambda A_S^*(A_S x - b) = 0,  (||r||^2 - eps^2) / (2 eps) = 0.
struct NewtonOutcome {
  VectorXcd x;  // last iterate, also on failure
  double lambda = 0.0;
  bool ok = false;
};

NewtonOutcome newton_polish(const MatrixXcd& as, const VectorXcd& b, double eps, const VectorXcd& x0,
                            double lambda0) {
  const Index m = as.rows();
  const Index k = as.cols();
  MatrixXd R(2 * m, 2 * k);
  R << as.real(), -as.imag(), as.imag(), as.real();
  VectorXd beta(2 * m);
  beta << b.real(), b.imag();
  VectorXd u(2 * k);
  u << x0.real(), x0.imag();
  const MatrixXd rtr = R.transpose() * R;

  auto kkt = [&](const VectorXd& uu, double lam, VectorXd& F, VectorXd& g) {
    const VectorXd r = R * uu - beta;
    g = R.transpose() * r;
    F.resize(2 * k + 1);
    for (Index j = 0; j < k; ++j) {
      const double rho = std::hypot(uu(j), uu(k + j));
      if (!(rho > 0.0)) return false;
      F(j) = uu(j) / rho + lam * g(j);
      F(k + j) = uu(k + j) / rho + lam * g(k + j);
    }
    F(2 * k) = (r.squaredNorm() - eps * eps) / (2.0 * eps);
    return F.allFinite();
  };
  auto outcome = [&](double lam, bool ok) {
    NewtonOutcome o;
    o.x.resize(k);
    for (Index j = 0; j < k; ++j) o.x(j) = Complex(u(j), u(k + j));
    o.lambda = lam;
    o.ok = ok;
    return o;
  };

  VectorXd F, g;
  double lambda = lambda0;
  if (!kkt(u, 0.0, F, g)) return outcome(lambda, false);
  {
    // Least-squares fit of the stationarity condition for lambda.
    const VectorXd phi = F.head(2 * k);
    const double gg = g.squaredNorm();
    const double fit = gg > 0.0 ? -phi.dot(g) / gg : 0.0;
    if (fit > 0.0 && std::isfinite(fit)) lambda = fit;
    if (!(lambda > 0.0) || !std::isfinite(lambda)) lambda = 1.0;
  }
  if (!kkt(u, lambda, F, g)) return outcome(lambda, false);
  double fnorm = F.norm();

  for (int it = 0; it < 60 && fnorm > 1e-14; ++it) {
    MatrixXd J = MatrixXd::Zero(2 * k + 1, 2 * k + 1);
    J.topLeftCorner(2 * k, 2 * k) = lambda * rtr;
    for (Index j = 0; j < k; ++j) {
      const double a = u(j), c = u(k + j);
      const double rho = std::hypot(a, c);
      const double ua = a / rho, uc = c / rho;
      J(j, j) += (1.0 - ua * ua) / rho;
      J(k + j, k + j) += (1.0 - uc * uc) / rho;
      J(j, k + j) -= ua * uc / rho;
      J(k + j, j) -= ua * uc / rho;
    }
    J.topRightCorner(2 * k, 1) = g;
    J.bottomLeftCorner(1, 2 * k) = g.transpose() / eps;
    const VectorXd step = J.fullPivLu().solve(-F);
    if (!step.allFinite()) break;

    bool accepted = false;
    double t = 1.0;
    VectorXd Fn, gn;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      const VectorXd un = u + t * step.head(2 * k);
      const double ln = lambda + t * step(2 * k);
      if (!(ln > 0.0)) continue;
      if (!kkt(un, ln, Fn, gn)) continue;
      if (Fn.norm() <= (1.0 - 1e-4 * t) * fnorm) {
        u = un;
        lambda = ln;
        F = Fn;
        g = gn;
        fnorm = F.norm();
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return outcome(lambda, fnorm <= 1e-9);
}

MatrixXcd gather_columns(const MatrixXcd& A, const std::vector<Index>& support) {
  MatrixXcd as(A.rows(), static_cast<Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) as.col(static_cast<Index>(i)) = A.col(support[i]);
  return as;
}

VectorXcd scatter(const std::vector<Index>& support, const VectorXcd& xs, Index n) {
  VectorXcd full = VectorXcd::Zero(n);
  for (std::size_t i = 0; i < support.size(); ++i) full(support[i]) = xs(static_cast<Index>(i));
  return full;
}

// Active-set refinement for eps > 0: Newton on the current support, then add the
// column with the largest dual violation |lambda a_j^*(b - Ax)| > 1, or drop the
// smallest entry when Newton cannot keep all moduli positive.
std::optional<VectorXcd> active_set_polish(const MatrixXcd& A, const VectorXcd& b, double eps,
                                           std::vector<Index> support, VectorXcd xs,
                                           double lambda) {
  const Index n = A.cols();
  const int max_rounds = static_cast<int>(std::min<Index>(4 * n, 200));
  for (int round = 0; round < max_rounds && !support.empty(); ++round) {
    if (static_cast<Index>(support.size()) > A.rows()) return std::nullopt;
    const auto res = newton_polish(gather_columns(A, support), b, eps, xs, lambda);
    if (!res.ok) {
      Index drop = 0;
      res.x.cwiseAbs().minCoeff(&drop);
      support.erase(support.begin() + drop);
      VectorXcd shrunk(xs.size() - 1);
      for (Index i = 0, o = 0; i < xs.size(); ++i)
        if (i != drop) shrunk(o++) = res.x.allFinite() && res.x(i) != Complex{} ? res.x(i) : xs(i);
      xs = std::move(shrunk);
      continue;
    }
    lambda = res.lambda;
    const VectorXcd x = scatter(support, res.x, n);
    const VectorXcd corr = lambda * (A.adjoint() * (b - A * x));
    Index worst = -1;
    double worst_val = 1.0 + 1e-12;
    for (Index j = 0; j < n; ++j) {
      if (x(j) != Complex{}) continue;
      const double v = std::abs(corr(j));
      if (v > worst_val) {
        worst_val = v;
        worst = j;
      }
    }
    if (worst < 0) return x;
    const double seed_modulus = 1e-3 * res.x.cwiseAbs().minCoeff();
    auto pos = std::lower_bound(support.begin(), support.end(), worst);
    const auto at = pos - support.begin();
    support.insert(pos, worst);
    VectorXcd grown(res.x.size() + 1);
    grown << res.x.head(at), corr(worst) / std::abs(corr(worst)) * seed_modulus,
        res.x.tail(res.x.size() - at);
    xs = std::move(grown);
  }
  return std::nullopt;
}

// Support-restricted refinements of a first-order iterate (scaled problem).
std::vector<VectorXcd> polish_candidates(const MatrixXcd& A, const VectorXcd& b, double eps,
                                         const VectorXcd& x, double lambda_hint) {
  std::vector<VectorXcd> out;
  const double peak = x.cwiseAbs().maxCoeff();
  if (!(peak > 0.0)) return out;
  std::vector<Index> previous;
  for (double rel : {0.0, 1e-6, 1e-3}) {
    std::vector<Index> support;
    for (Index j = 0; j < x.size(); ++j)
      if (std::abs(x(j)) > rel * peak) support.push_back(j);
    if (support.empty() || support == previous) continue;
    previous = support;
    if (static_cast<Index>(support.size()) > A.rows()) continue;

    VectorXcd xs(static_cast<Index>(support.size()));
    for (std::size_t i = 0; i < support.size(); ++i) xs(static_cast<Index>(i)) = x(support[i]);
    std::optional<VectorXcd> refined;
    if (eps == 0.0)
      refined = scatter(support, Cod(gather_columns(A, support)).solve(b), x.size());
    else
      refined = active_set_polish(A, b, eps, support, xs, lambda_hint);
    if (refined && refined->allFinite()) out.push_back(std::move(*refined));
  }
  return out;
}


// Log-barrier method on the scaled dual
//   max Re<nu, b> - eps ||nu||  s.t.  |a_j^* nu| <= 1,
// with ||nu|| <= s as a second-order cone when eps > 0. nu = 0 is strictly feasible,
// so no phase one is needed. At a centered point for barrier weight t the primal
// x_j = (2/t) c_j / (1 - |c_j|^2), c = A^* nu, satisfies ||Ax - b|| <= eps.
struct BarrierResult {
  VectorXcd nu;  // strictly dual feasible whenever ok
  VectorXcd x;
  bool ok = false;
};

// `done` is offered the iterate after each outer step once the barrier gap is below
// `offer_gap`; returning true stops early.
BarrierResult dual_barrier(const MatrixXcd& A, const VectorXcd& b, double eps, double target_gap, double offer_gap,
                           const std::function<bool(const BarrierResult&)>& done) {
  const Index m = A.rows();
  const Index n = A.cols();
  const bool cone = eps > 0.0;
  const Index dim = 2 * m + (cone ? 1 : 0);
  // Real form: c = R^T v with v = [Re nu; Im nu], c = [Re c; Im c].
  MatrixXd R(2 * m, 2 * n);
  R << A.real(), -A.imag(), A.imag(), A.real();
  const MatrixXd U = R.leftCols(n);
  const MatrixXd V = R.rightCols(n);
  VectorXd bl(dim);
  bl.head(2 * m) << b.real(), b.imag();
  if (cone) bl(2 * m) = -eps;

  VectorXd z = VectorXd::Zero(dim);  // [v; s]
  if (cone) z(2 * m) = 1.0;

  auto barrier_value = [&](const VectorXd& zz, double& val) {
    const VectorXd c = R.transpose() * zz.head(2 * m);
    val = 0.0;
    for (Index j = 0; j < n; ++j) {
      const double q = c(j) * c(j) + c(n + j) * c(n + j);
      if (!(q < 1.0)) return false;
      val -= std::log1p(-q);
    }
    if (cone) {
      const double g = zz(2 * m) * zz(2 * m) - zz.head(2 * m).squaredNorm();
      if (!(g > 0.0) || !(zz(2 * m) > 0.0)) return false;
      val -= std::log(g);
    }
    return std::isfinite(val);
  };

  const double nu_barrier = static_cast<double>(n) + (cone ? 2.0 : 0.0);
  double t = 1.0;
  BarrierResult out;
  for (int outer = 0; outer < 40; ++outer) {
    for (int inner = 0; inner < 80; ++inner) {
      const VectorXd c = R.transpose() * z.head(2 * m);
      VectorXd gr(2 * n);
      VectorXd w_rr(n), w_ii(n), w_ri(n);
      for (Index j = 0; j < n; ++j) {
        const double cr = c(j), ci = c(n + j);
        const double den = 1.0 - cr * cr - ci * ci;
        const double alpha = 2.0 / den, beta = 4.0 / (den * den);
        gr(j) = alpha * cr;
        gr(n + j) = alpha * ci;
        w_rr(j) = alpha + beta * cr * cr;
        w_ii(j) = alpha + beta * ci * ci;
        w_ri(j) = beta * cr * ci;
      }
      VectorXd grad(dim);
      grad.head(2 * m) = R * gr;
      MatrixXd H(dim, dim);
      const MatrixXd cross = U * w_ri.asDiagonal() * V.transpose();
      H.topLeftCorner(2 * m, 2 * m) = U * w_rr.asDiagonal() * U.transpose() +
                                      V * w_ii.asDiagonal() * V.transpose() + cross + cross.transpose();
      if (cone) {
        const double sv = z(2 * m);
        const auto v = z.head(2 * m);
        const double g = sv * sv - v.squaredNorm();
        grad.head(2 * m) += 2.0 * v / g;
        grad(2 * m) = -2.0 * sv / g;
        H.topLeftCorner(2 * m, 2 * m) += (2.0 / g) * MatrixXd::Identity(2 * m, 2 * m) + (4.0 / (g * g)) * v * v.transpose();
        H.block(0, 2 * m, 2 * m, 1) = -(4.0 * sv / (g * g)) * v;
        H.block(2 * m, 0, 1, 2 * m) = H.block(0, 2 * m, 2 * m, 1).transpose();
        H(2 * m, 2 * m) = -2.0 / g + 4.0 * sv * sv / (g * g);
      }
      grad -= t * bl;
      const Eigen::LDLT<MatrixXd> ldlt(H);
      const VectorXd step = ldlt.solve(-grad);
      if (!step.allFinite()) return out;
      const double decrement = -grad.dot(step);
      if (decrement < 1e-9) break;
      // Backtracking on t <b, z> - barrier, staying strictly feasible.
      double f0;
      if (!barrier_value(z, f0)) return out;
      f0 -= t * bl.dot(z);
      double a = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls, a *= 0.5) {
        const VectorXd zn = z + a * step;
        double f1;
        if (!barrier_value(zn, f1)) continue;
        f1 -= t * bl.dot(zn);
        if (f1 <= f0 - 0.25 * a * decrement) {
          z = zn;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }

    const VectorXd c = R.transpose() * z.head(2 * m);
    out.nu.resize(m);
    for (Index i = 0; i < m; ++i) out.nu(i) = Complex(z(i), z(m + i));
    out.x.resize(n);
    for (Index j = 0; j < n; ++j) {
      const double den = 1.0 - c(j) * c(j) - c(n + j) * c(n + j);
      out.x(j) = Complex(c(j), c(n + j)) * (2.0 / (t * den));
    }
    out.ok = true;
    if (nu_barrier / t <= offer_gap && done(out)) break;
    if (nu_barrier / t <= target_gap) break;
    t *= 20.0;
  }
  return out;
}

// Primal points consistent with a (near-)optimal dual nu: on the active set
// S = {j : |c_j| ~ 1}, c = A^* nu, complementary slackness fixes the phases
// x_j = rho_j c_j / |c_j| and the residual b - A x = eps nu / ||nu||, leaving a
// real least-squares problem for rho >= 0.
std::vector<VectorXcd> primal_from_dual(const MatrixXcd& A, const VectorXcd& b, double eps, const VectorXcd& nu) {
  std::vector<VectorXcd> out;
  const VectorXcd c = A.adjoint() * nu;
  const double nn = nu.norm();
  const VectorXcd target = (eps > 0.0 && nn > 0.0) ? VectorXcd(b - (eps / nn) * nu) : b;
  const Index m = A.rows();
  std::vector<Index> previous;
  for (double tol : {1e-7, 1e-5, 1e-3}) {
    std::vector<Index> active;
    for (Index j = 0; j < c.size(); ++j)
      if (std::abs(c(j)) >= 1.0 - tol) active.push_back(j);
    for (int round = 0; round < 8 && !active.empty(); ++round) {
      if (active == previous) break;
      const auto k = static_cast<Index>(active.size());
      MatrixXd M(2 * m, k);
      for (Index i = 0; i < k; ++i) {
        const Index j = active[static_cast<std::size_t>(i)];
        const VectorXcd col = A.col(j) * (c(j) / std::abs(c(j)));
        M.col(i) << col.real(), col.imag();
      }
      VectorXd rhs(2 * m);
      rhs << target.real(), target.imag();
      const VectorXd rho = Eigen::CompleteOrthogonalDecomposition<MatrixXd>(M).solve(rhs);
      std::vector<Index> keep;
      for (Index i = 0; i < k; ++i)
        if (rho(i) > 0.0) keep.push_back(active[static_cast<std::size_t>(i)]);
      if (keep.size() == active.size()) {
        VectorXcd xs(k);
        for (Index i = 0; i < k; ++i) {
          const Index j = active[static_cast<std::size_t>(i)];
          xs(i) = rho(i) * c(j) / std::abs(c(j));
        }
        // Minimum-norm complex correction onto A_S x_S = target (the real fit leaves rounding-level residue).
        const MatrixXcd as = gather_columns(A, active);
        xs += Cod(as).solve(target - as * xs);
        out.push_back(scatter(active, xs, A.cols()));
        previous = active;
        break;
      }
      previous = active;
      active = std::move(keep);
    }
  }
  return out;
}

}  // namespace

double certificate_gap(const BpdnProblem& problem, const VectorXcd& x,
                       const std::optional<VectorXcd>& dual_hint, double feas_tol) {
  problem.validate();
  if (x.size() != problem.G.cols()) throw DimensionError("certificate_gap: length(x) must equal cols(G)");
  const double res = (problem.G * x - problem.y).norm();
  if (res > problem.eta + feasibility_slack(problem, feas_tol))
    throw PreconditionError("certificate_gap: x is infeasible (residual " + std::to_string(res) +
                            " > eta " + std::to_string(problem.eta) + ")");
  const DualCertifier cert(problem.G, problem.y, problem.eta);
  return l1_norm(x) - cert.lower_bound(x, dual_hint ? &*dual_hint : nullptr);
}

SolverResult solve_bpdn(const BpdnProblem& p, const SolverConfig& cfg) {
  p.validate();
  cfg.validate();
  const MatrixXcd& G = p.G;
  const VectorXcd& y = p.y;
  const Index m = G.rows();
  const Index n = G.cols();
  const double slack = feasibility_slack(p, cfg.feas_tol);
  const DualCertifier cert(G, y, p.eta);

  auto make_result = [&](VectorXcd x, SolverStatus status, int iters, bool polished,
                         double gap) {
    SolverResult r;
    r.objective = l1_norm(x);
    r.residual_norm = (G * x - y).norm();
    r.x = std::move(x);
    r.iterations = iters;
    r.status = status;
    r.polished = polished;
    r.certificate_gap = gap;
    return r;
  };
  auto accepted = [&](double gap, const VectorXcd& x) {
    return gap <= cfg.gap_tol * std::max(1.0, l1_norm(x));
  };

  if (y.norm() <= p.eta) return make_result(VectorXcd::Zero(n), SolverStatus::Converged, 0, false, 0.0);

  // Infeasibility check via least squares; deferred until the iteration has had a
  // chance to find a feasible point, since it costs a full factorization.
  bool feasibility_known = false;
  std::optional<VectorXcd> infeasible_ls;
  auto check_feasible = [&]() {
    feasibility_known = true;
    VectorXcd x_ls = least_squares(G, y);
    if ((G * x_ls - y).norm() > p.eta + slack) infeasible_ls = std::move(x_ls);
  };

  // Work with A = G / sqrt(m): the scaled matrix is a near-isometry on sparse vectors.
  const double root_m = std::sqrt(static_cast<double>(m));
  const MatrixXcd A = G / root_m;
  const MatrixXcd A_adj = A.adjoint();
  const VectorXcd b = y / root_m;
  const double eps = p.eta / root_m;
  const double op_norm = 1.05 * estimate_operator_norm(A, cfg.power_iterations);
  const double tau = cfg.step_scale / op_norm;
  const double sigma = cfg.step_scale / op_norm;

  VectorXcd x = VectorXcd::Zero(n);
  VectorXcd z = VectorXcd::Zero(m);

  struct Best {
    VectorXcd x;
    double gap = std::numeric_limits<double>::infinity();
    double excess = std::numeric_limits<double>::infinity();
    bool polished = false;
  } best;
  best.x = VectorXcd::Zero(n);
  bool barrier_tried = false;

  for (int it = 1; it <= cfg.max_iter; ++it) {
    // Primal: prox of tau ||.||_1 (complex soft thresholding on moduli).
    VectorXcd v = x - tau * (A_adj * z);
    for (Index j = 0; j < n; ++j) {
      const double a = std::abs(v(j));
      v(j) = a > tau ? v(j) * ((a - tau) / a) : Complex{};
    }
    const VectorXcd x_bar = 2.0 * v - x;
    x = std::move(v);
    // Dual: prox of sigma g^*, g the indicator of the ball B(b, eps), via Moreau.
    const VectorXcd w = z + sigma * (A * x_bar);
    VectorXcd proj = w / sigma - b;
    const double pn = proj.norm();
    if (pn > eps) proj *= (pn > 0.0 ? eps / pn : 0.0);
    z = w - sigma * (proj + b);

    if (it % cfg.check_interval != 0 && it != cfg.max_iter) continue;

    const VectorXcd hint = -z / root_m;
    const double r_now = (A * x - b).norm();
    const double lambda_hint = r_now > 0.0 ? z.norm() / r_now : 1.0;

    double last_gap = 0.0;
    auto consider = [&](const VectorXcd& cand, bool polished, const VectorXcd& dual) -> bool {
      const double excess = (G * cand - y).norm() - p.eta;
      if (excess > slack) {
        if (best.gap == std::numeric_limits<double>::infinity() && excess < best.excess) {
          best.x = cand;
          best.excess = excess;
          best.polished = polished;
        }
        return false;
      }
      const double gap = l1_norm(cand) - cert.lower_bound(cand, &dual, cfg.gap_tol * std::max(1.0, l1_norm(cand)));
      last_gap = gap;
      if (gap < best.gap) {
        best.x = cand;
        best.gap = gap;
        best.excess = excess;
        best.polished = polished;
      }
      return accepted(gap, cand);
    };

    if (consider(x, false, hint)) return make_result(x, SolverStatus::Converged, it, false, last_gap);
    for (const auto& cand : polish_candidates(A, b, eps, x, lambda_hint))
      if (consider(cand, true, hint)) return make_result(cand, SolverStatus::Converged, it, true, last_gap);

    if (!barrier_tried && it >= cfg.barrier_after && 2 * m + 1 <= cfg.barrier_max_dual_dim) {
      barrier_tried = true;
      const double scale = std::max(1.0, std::isfinite(best.gap) ? l1_norm(best.x) : l1_norm(x));
      std::optional<SolverResult> found;
      auto offer = [&](const BarrierResult& bar) {
        const VectorXcd dual = bar.nu / root_m;
        for (const auto& cand : primal_from_dual(A, b, eps, bar.nu))
          if (consider(cand, true, dual)) {
            found = make_result(cand, SolverStatus::Converged, it, true, last_gap);
            return true;
          }
        VectorXcd xb = bar.x;
        // Centering is inexact; pull the residual back inside the constraint.
        const VectorXcd r = b - A * xb;
        const double rn = r.norm();
        if (rn > eps) xb += Cod(A).solve(r) * (1.0 - eps / rn);
        const double rb = (A * xb - b).norm();
        const double lam = rb > 0.0 ? bar.nu.norm() / rb : 1.0;
        for (const auto& cand : polish_candidates(A, b, eps, xb, lam))
          if (consider(cand, true, dual)) {
            found = make_result(cand, SolverStatus::Converged, it, true, last_gap);
            return true;
          }
        if (consider(xb, false, dual)) {
          found = make_result(xb, SolverStatus::Converged, it, false, last_gap);
          return true;
        }
        return false;
      };
      dual_barrier(A, b, eps, 0.1 * cfg.gap_tol * scale, 1e-3 * scale, offer);
      if (found) return *found;
    }
    if (!feasibility_known && best.gap == std::numeric_limits<double>::infinity() &&
        it >= 8 * cfg.check_interval) {
      check_feasible();
      if (infeasible_ls)
        return make_result(*infeasible_ls, SolverStatus::InfeasibleDetected, it, false,
                           std::numeric_limits<double>::infinity());
    }
  }
  return make_result(best.x, SolverStatus::MaxIter, cfg.max_iter, best.polished, best.gap);
}

nlohmann::json to_json(const SolverResult& r, bool include_x) {
  nlohmann::json j = {{"status", to_string(r.status)},
                      {"objective", r.objective},
                      {"residual_norm", r.residual_norm},
                      {"iterations", r.iterations},
                      {"certificate_gap", std::isfinite(r.certificate_gap) ? nlohmann::json(r.certificate_gap)
                                                                           : nlohmann::json(nullptr)},
                      {"polished", r.polished}};
  if (include_x) {
    auto xs = nlohmann::json::array();
    for (Index i = 0; i < r.x.size(); ++i) xs.push_back({r.x(i).real(), r.x(i).imag()});
    j["x"] = xs;
  }
  return j;
}

}  // namespace wsr
