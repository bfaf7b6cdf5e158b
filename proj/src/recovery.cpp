#include "wsr/recovery.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "wsr/errors.hpp"
#include "wsr/parallel.hpp"
#include "wsr/rng.hpp"
#include "wsr/sampling.hpp"

namespace wsr {

namespace {

constexpr std::uint64_t kTruthStream = 1;
constexpr std::uint64_t kSampleStream = 2;
constexpr std::uint64_t kQuadratureStream = 3;
constexpr std::uint64_t kHoldoutOffset = std::uint64_t{1} << 32;

void check_common(const ClassSpec& spec, double p, double gamma, double c_universal) {
  spec.validate();
  if (spec.kind == ClassKind::WienerBall)
    throw PreconditionError("plan: the Wiener ball has no decaying projection bound; choose a smaller class");
  if (!(p >= 2.0) || !std::isfinite(p)) throw PreconditionError("plan: p must be finite and >= 2");
  if (!(gamma > 0.0 && gamma < 1.0)) throw PreconditionError("plan: gamma must lie in (0, 1)");
  if (!(c_universal > 0.0) || !std::isfinite(c_universal))
    throw PreconditionError("plan: c_universal must be finite and > 0");
}

std::size_t sparsity_for(double eps_tilde, double p) {
  const double raw = std::ceil(std::pow(eps_tilde, -p));
  if (!(raw < 1e15)) throw CapacityError("plan: sparsity eps_tilde^-p overflows");
  return std::max<std::size_t>(2, static_cast<std::size_t>(raw));
}

}  // namespace

std::string to_string(EtaMode mode) {
  return mode == EtaMode::ClassBound ? "class_bound" : "per_function_tail";
}

EtaMode eta_mode_from_string(const std::string& s) {
  if (s == "class_bound") return EtaMode::ClassBound;
  if (s == "per_function_tail") return EtaMode::PerFunctionTail;
  throw ConfigError("eta_mode must be \"class_bound\" or \"per_function_tail\", got \"" + s + "\"");
}

IndexSet RecoveryPlan::index_set(const Limits& limits) const {
  return cube_index_set(spec.dimension, truncation_radius, limits);
}

std::size_t sample_count(double c_universal, double gamma, std::size_t s, double index_set_size) {
  const double ls = std::log(static_cast<double>(std::max<std::size_t>(s, 2)));
  const double raw = std::ceil(c_universal * std::log(1.0 / gamma) * static_cast<double>(s) * ls * ls * ls *
                               std::log(index_set_size));
  if (!(raw < 1e15)) throw CapacityError("plan: sample count overflows");
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::max(raw, 0.0)));
}

RecoveryPlan plan_parameters(const ClassSpec& spec, double eps, double p, double gamma, double c_universal,
                             const Limits& limits) {
  check_common(spec, p, gamma, c_universal);
  if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("plan: eps must lie in (0, 1)");
  RecoveryPlan plan;
  plan.spec = spec;
  plan.p = p;
  plan.gamma = gamma;
  plan.c_universal = c_universal;
  plan.eps = eps;
  plan.eps_tilde = eps / (2.0 * c_universal);
  plan.s = sparsity_for(plan.eps_tilde, p);
  // eps_tilde >= 1 (small c) asks for a truncation error above 1; every class bound is <= 1 already.
  const double target = std::min(1.0, std::pow(plan.eps_tilde, p / 2.0));
  const auto trunc = plan_truncation(spec, target, limits);
  plan.truncation_radius = trunc.m;
  plan.projection_bound = trunc.projection_error_bound;
  plan.index_set_size = cube_cardinality(spec.dimension, trunc.m);
  plan.m = sample_count(c_universal, gamma, plan.s, plan.index_set_size);
  plan.eta = plan.projection_bound * std::sqrt(static_cast<double>(plan.m));
  return plan;
}

RecoveryPlan plan_for_truncation(const ClassSpec& spec, std::int64_t truncation_radius, double p, double gamma,
                                 double c_universal) {
  check_common(spec, p, gamma, c_universal);
  if (truncation_radius < 1) throw PreconditionError("plan: truncation radius must be >= 1");
  RecoveryPlan plan;
  plan.spec = spec;
  plan.p = p;
  plan.gamma = gamma;
  plan.c_universal = c_universal;
  plan.truncation_radius = truncation_radius;
  plan.projection_bound = projection_error_bound(spec, truncation_radius);
  plan.eps_tilde = std::pow(plan.projection_bound, 2.0 / p);
  plan.eps = 2.0 * c_universal * plan.eps_tilde;
  plan.s = sparsity_for(plan.eps_tilde, p);
  plan.index_set_size = cube_cardinality(spec.dimension, truncation_radius);
  plan.m = sample_count(c_universal, gamma, plan.s, plan.index_set_size);
  plan.eta = plan.projection_bound * std::sqrt(static_cast<double>(plan.m));
  return plan;
}

LpErrorEstimate lp_error(const CoefficientVector& c_true, const CoefficientVector& c_rec, double p,
                         const QuadratureConfig& quad, const Limits& limits) {
  if (c_true.dimension() != c_rec.dimension()) throw DimensionError("lp_error: dimension mismatch");
  if (!(p >= 2.0)) throw PreconditionError("lp_error: p must be >= 2");
  const CoefficientVector h = c_true - c_rec;
  LpErrorEstimate out;
  if (h.empty()) return out;

  if (p == 2.0) {
    double sq = 0.0;
    for (const auto& [k, v] : h.terms()) sq += std::norm(v);
    out.value = out.upper_bound = std::sqrt(sq);
    return out;
  }

  const std::size_t d = h.dimension();
  if (std::isinf(p)) {
    if (quad.grid_per_dim < 1) throw PreconditionError("lp_error: grid_per_dim must be >= 1");
    if (std::pow(static_cast<double>(quad.grid_per_dim), static_cast<double>(d)) >
        static_cast<double>(limits.max_index_set_size))
      throw CapacityError("lp_error: grid_per_dim^d exceeds max_index_set_size");
    const auto values = evaluate(h, equispaced_grid(d, quad.grid_per_dim));
    out.value = values.cwiseAbs().maxCoeff();
    // Every point is within 1/(2g) per coordinate of a grid node (periodically), and
    // |grad h| contributes at most sum |h_k| 2 pi |k|_1 / (2g).
    double lip = 0.0;
    for (const auto& [k, v] : h.terms()) lip += std::abs(v) * 2.0 * std::numbers::pi * static_cast<double>(k.l1_norm());
    out.upper_bound = std::min(wiener_norm(h), out.value + lip / (2.0 * static_cast<double>(quad.grid_per_dim)));
    out.upper_bound = std::max(out.upper_bound, out.value);
    return out;
  }

  if (quad.mc_points < 2) throw PreconditionError("lp_error: mc_points must be >= 2");
  const auto values = evaluate(h, draw_uniform(quad.mc_points, d, quad.seed));
  const double n = static_cast<double>(quad.mc_points);
  double mean = 0.0, m2 = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = std::pow(std::abs(values(i)), p);
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double se_mean = std::sqrt(m2 / (n - 1.0) / n);
  out.value = std::pow(mean, 1.0 / p);
  // Delta method for mean^(1/p).
  out.standard_error = mean > 0.0 ? std::pow(mean, 1.0 / p - 1.0) * se_mean / p : 0.0;
  out.upper_bound = out.value;
  return out;
}

double error_bound_rhs(double s, double p, double sigma, double E, double c_universal) {
  if (!(s >= 1.0)) throw PreconditionError("error_bound_rhs: s must be >= 1");
  if (!(p >= 2.0)) throw PreconditionError("error_bound_rhs: p must be >= 2");
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  return c_universal * std::pow(s, -inv_p) * sigma + c_universal * std::pow(s, 0.5 - inv_p) * E;
}

RecoveryReport recover(const CoefficientVector& f, const RecoveryPlan& plan, std::uint64_t seed,
                       const RecoveryOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t d = plan.spec.dimension;
  if (f.dimension() != d) throw DimensionError("recover: ground truth dimension differs from the plan");
  if (plan.m < 1 || plan.s < 1) throw PreconditionError("recover: plan needs m >= 1 and s >= 1");

  RecoveryReport rep;
  rep.seed = seed;
  rep.eta_mode = options.eta_mode;
  rep.samples_used = plan.m;

  const auto mem = membership(plan.spec, f);
  rep.membership_checked = true;
  rep.membership_sufficient_only = mem.sufficient_condition_only;
  if (!mem.member)
    rep.warning = mem.sufficient_condition_only
                      ? "ground truth fails the sufficient membership condition; it may still be a member"
                      : "ground truth is not a member of the class";

  const IndexSet lambda = plan.index_set(options.limits);
  const PointSet points = draw_uniform(plan.m, d, stream_seed(seed, kSampleStream));
  const auto G = measurement_matrix(lambda, points, options.limits);
  const Eigen::VectorXcd y = evaluate(f, points);

  rep.tail = tail_wiener_norm(f, lambda);
  const CoefficientVector proj = project(f, lambda);
  const double root_m = std::sqrt(static_cast<double>(plan.m));
  rep.projection_residual = (G * coefficients_on(proj, lambda) - y).norm();
  // |f(x) - P f(x)| <= tail pointwise, so this can only fail through a bug.
  const double allowance = rep.tail * root_m * (1.0 + 1e-9) + 1e-12 * std::max(1.0, y.norm());
  if (rep.projection_residual > allowance)
    throw std::logic_error("recover: projection residual exceeds the tail bound");

  rep.eta = options.eta_mode == EtaMode::ClassBound ? plan.eta : rep.tail * root_m;
  if (rep.projection_residual > rep.eta + options.solver.feas_tol * std::max(1.0, y.norm())) {
    if (!rep.warning.empty()) rep.warning += "; ";
    rep.warning += "projection of the ground truth violates the constraint";
  }

  rep.solver = solve_bpdn({G, y, rep.eta}, options.solver);
  std::vector<Complex> values(static_cast<std::size_t>(rep.solver.x.size()));
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = rep.solver.x(static_cast<Eigen::Index>(i));
  rep.recovered = CoefficientVector::from_dense(lambda, values);

  QuadratureConfig quad = options.quadrature;
  quad.seed = stream_seed(seed ^ options.quadrature.seed, kQuadratureStream);
  rep.lp_error = lp_error(f, rep.recovered, plan.p, quad, options.limits);

  rep.sigma = sigma_s(f, plan.s);
  // Ground truths inside Lambda have no projection error; otherwise the class bound applies.
  rep.E = rep.tail == 0.0 ? 0.0 : plan.projection_bound;
  rep.rhs_bound = error_bound_rhs(static_cast<double>(plan.s), plan.p, rep.sigma, rep.E, plan.c_universal);

  rep.recovered_wiener_norm = wiener_norm(rep.recovered);
  rep.projection_wiener_norm = wiener_norm(proj);
  rep.truth_wiener_norm = wiener_norm(f);
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

CalibrationReport calibrate_c_universal(const CalibrationConfig& cfg) {
  if (!(cfg.c_start > 0.0) || !(cfg.c_max >= cfg.c_start))
    throw PreconditionError("calibrate: need 0 < c_start <= c_max");
  if (cfg.calibration_trials < 1 || cfg.holdout_trials < 1)
    throw PreconditionError("calibrate: trial counts must be >= 1");

  struct Outcome {
    bool success;
    bool converged;
  };
  auto run = [&](const RecoveryPlan& plan, std::uint64_t first, std::size_t count) {
    return parallel_map(count, cfg.threads, [&](std::size_t i) {
      const std::uint64_t t = trial_seed(cfg.seed, first + i);
      const auto f = random_member(cfg.spec, cfg.support_budget, cfg.support_radius, stream_seed(t, kTruthStream));
      const auto rep = recover(f, plan, t, cfg.options);
      return Outcome{rep.converged() && rep.lp_error.value <= rep.rhs_bound, rep.converged()};
    });
  };
  auto rate = [](const std::vector<Outcome>& v) {
    std::size_t ok = 0;
    for (const auto& o : v) ok += o.success ? 1 : 0;
    return static_cast<double>(ok) / static_cast<double>(v.size());
  };

  CalibrationReport out;
  for (double c = cfg.c_start; c <= cfg.c_max * (1.0 + 1e-12); c *= 2.0) {
    const auto plan = plan_for_truncation(cfg.spec, cfg.truncation_radius, cfg.p, cfg.gamma, c);
    const double r = rate(run(plan, 0, cfg.calibration_trials));
    out.history.emplace_back(c, r);
    if (r >= 1.0 - cfg.gamma) {
      out.c_universal = c;
      out.plan = plan;
      out.calibration_rate = r;
      out.found = true;
      break;
    }
  }
  if (!out.found) return out;
  const auto held = run(out.plan, kHoldoutOffset, cfg.holdout_trials);
  out.holdout_rate = rate(held);
  for (const auto& o : held) out.holdout_nonconverged += o.converged ? 0 : 1;
  return out;
}

nlohmann::json to_json(const RecoveryPlan& plan) {
  return {{"spec", to_json(plan.spec)},
          {"d", plan.spec.dimension},
          {"p", plan.p},
          {"gamma", plan.gamma},
          {"c_universal", plan.c_universal},
          {"eps", plan.eps},
          {"eps_tilde", plan.eps_tilde},
          {"truncation_radius", plan.truncation_radius},
          {"index_set_size", plan.index_set_size},
          {"s", plan.s},
          {"m", plan.m},
          {"projection_bound", plan.projection_bound},
          {"eta", plan.eta}};
}

nlohmann::json to_json(const RecoveryReport& r, bool include_coefficients) {
  nlohmann::json j = {{"seed", r.seed},
                      {"eta_mode", to_string(r.eta_mode)},
                      {"diagnostic", r.eta_mode == EtaMode::PerFunctionTail},
                      {"samples_used", r.samples_used},
                      {"lp_error", r.lp_error.value},
                      {"lp_error_se", r.lp_error.standard_error},
                      {"lp_error_upper", r.lp_error.upper_bound},
                      {"rhs_bound", r.rhs_bound},
                      {"sigma_s", r.sigma},
                      {"E", r.E},
                      {"eta", r.eta},
                      {"tail", r.tail},
                      {"projection_residual", r.projection_residual},
                      {"recovered_wiener_norm", r.recovered_wiener_norm},
                      {"projection_wiener_norm", r.projection_wiener_norm},
                      {"truth_wiener_norm", r.truth_wiener_norm},
                      {"membership_sufficient_only", r.membership_sufficient_only},
                      {"warning", r.warning},
                      {"solver", to_json(r.solver)}};
  if (include_coefficients) j["recovered"] = to_json(r.recovered);
  return j;
}

}  // namespace wsr
