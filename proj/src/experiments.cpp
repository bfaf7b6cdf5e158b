#include "wsr/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "wsr/errors.hpp"
#include "wsr/lowerbound.hpp"
#include "wsr/multiindex.hpp"
#include "wsr/parallel.hpp"
#include "wsr/recovery.hpp"
#include "wsr/rng.hpp"
#include "wsr/sampling.hpp"
#include "wsr/solver.hpp"
#include "wsr/wiener.hpp"

#ifndef WSR_VERSION
#define WSR_VERSION "dev"
#endif

namespace wsr {

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> command_names() { return {"recover", "phase-transition", "lower-bound", "bound-table"}; }

namespace {

// ---- config reading -------------------------------------------------------

// One JSON object of the config. Every key must be consumed; leftovers are
// reported as unknown so typos do not silently fall back to defaults.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    if (!has(key)) missing(key);
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, std::optional<double> def = {}) {
    if (!has(key)) {
      if (!def) missing(key);
      return *def;
    }
    const auto& v = raw(key);
    if (!v.is_number()) fail(key, "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(key, "must be finite");
    return x;
  }

  std::uint64_t unsigned_int(const std::string& key, std::optional<std::uint64_t> def = {}) {
    if (!has(key)) {
      if (!def) missing(key);
      return *def;
    }
    return as_unsigned(raw(key), key);
  }

  bool boolean(const std::string& key, bool def) {
    if (!has(key)) return def;
    const auto& v = raw(key);
    if (!v.is_boolean()) fail(key, "must be true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, std::optional<std::string> def = {}) {
    if (!has(key)) {
      if (!def) missing(key);
      return *def;
    }
    const auto& v = raw(key);
    if (!v.is_string()) fail(key, "must be a string");
    return v.get<std::string>();
  }

  /// A number or a non-empty array of numbers.
  std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> def = {}) {
    if (!has(key)) {
      if (!def) missing(key);
      return *def;
    }
    const auto& v = raw(key);
    std::vector<double> out;
    if (v.is_number()) {
      out.push_back(v.get<double>());
    } else if (v.is_array() && !v.empty()) {
      for (const auto& e : v) {
        if (!e.is_number()) fail(key, "must contain only numbers");
        out.push_back(e.get<double>());
      }
    } else {
      fail(key, "must be a number or a non-empty array of numbers");
    }
    for (double x : out)
      if (!std::isfinite(x)) fail(key, "must contain only finite numbers");
    return out;
  }

  std::vector<std::uint64_t> unsigned_ints(const std::string& key, std::optional<std::vector<std::uint64_t>> def = {}) {
    if (!has(key)) {
      if (!def) missing(key);
      return *def;
    }
    const auto& v = raw(key);
    std::vector<std::uint64_t> out;
    if (v.is_array() && !v.empty()) {
      for (const auto& e : v) out.push_back(as_unsigned(e, key));
    } else if (v.is_number()) {
      out.push_back(as_unsigned(v, key));
    } else {
      fail(key, "must be a non-negative integer or a non-empty array of them");
    }
    return out;
  }

  Section child(const std::string& key) { return Section(raw(key), where(key)); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(it.key(), "unknown key");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(where(key) + ": " + what);
  }

  std::string where(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "config" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  [[noreturn]] void missing(const std::string& key) const { fail(key, "is required"); }

  std::uint64_t as_unsigned(const json& v, const std::string& key) const {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
      if (v.get<std::int64_t>() < 0) fail(key, "must be non-negative");
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    fail(key, "must be a non-negative integer");
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

struct Common {
  std::uint64_t seed = 0;
  SolverConfig solver;
  Limits limits;
  bool record_wall_time = false;
};

Common read_common(Section& root, const std::string& command, const RunOptions& opt) {
  const auto version = root.unsigned_int("schema_version");
  if (version != static_cast<std::uint64_t>(kConfigSchemaVersion))
    root.fail("schema_version", "unsupported version " + std::to_string(version) + " (expected " +
                                    std::to_string(kConfigSchemaVersion) + ")");
  if (root.has("command")) {
    const auto c = root.string("command");
    if (c != command) root.fail("command", "config is for \"" + c + "\", not \"" + command + "\"");
  }
  Common c;
  c.seed = root.unsigned_int("seed", 0);
  if (opt.seed) c.seed = *opt.seed;
  c.record_wall_time = root.boolean("record_wall_time", false);
  if (root.has("solver")) {
    auto s = root.child("solver");
    c.solver.gap_tol = s.number("gap_tol", c.solver.gap_tol);
    c.solver.feas_tol = s.number("feas_tol", c.solver.feas_tol);
    c.solver.max_iter = static_cast<int>(std::min<std::uint64_t>(s.unsigned_int("max_iter", c.solver.max_iter), 1u << 30));
    c.solver.check_interval =
        static_cast<int>(std::min<std::uint64_t>(s.unsigned_int("check_interval", c.solver.check_interval), 1u << 30));
    s.finish();
    try {
      c.solver.validate();
    } catch (const PreconditionError& e) {
      root.fail("solver", e.what());
    }
  }
  if (root.has("limits")) {
    auto l = root.child("limits");
    auto lim = [&](const char* key, std::int64_t& field) {
      const auto v = l.unsigned_int(key, static_cast<std::uint64_t>(field));
      if (v < 1 || v > (std::uint64_t{1} << 62)) l.fail(key, "must lie in [1, 2^62]");
      field = static_cast<std::int64_t>(v);
    };
    lim("max_index_set_size", c.limits.max_index_set_size);
    lim("max_matrix_entries", c.limits.max_matrix_entries);
    lim("max_lower_bound_ambient", c.limits.max_lower_bound_ambient);
    l.finish();
  }
  return c;
}

std::size_t read_dimension(Section& root) {
  const auto d = root.unsigned_int("d");
  if (d < 1 || d > 64) root.fail("d", "must lie in [1, 64]");
  return static_cast<std::size_t>(d);
}

ClassSpec read_spec(Section& root, const std::string& key, std::size_t d) {
  const auto& j = root.raw(key);
  if (j.is_object()) {
    Section s(j, root.where(key));
    for (const char* k : {"type", "s", "alpha", "c1", "c2"})
      if (s.has(k)) s.raw(k);
    s.finish();
  }
  try {
    return class_spec_from_json(j, d);
  } catch (const ConfigError& e) {
    throw ConfigError(root.where(key) + ": " + e.what());
  }
}

// ---- CSV ------------------------------------------------------------------

class Csv {
 public:
  Csv(const std::string& command, const json& effective_config, const std::vector<std::uint64_t>& seeds,
      std::vector<std::string> columns)
      : columns_(std::move(columns)) {
    const std::string canonical = effective_config.dump();
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical)));
    os_ << "# wsr " << WSR_VERSION << " " << command << "\n";
    os_ << "# config_hash fnv1a64:" << hash << "\n";
    os_ << "# seeds";
    for (std::size_t i = 0; i < seeds.size(); ++i) os_ << (i ? "," : " ") << seeds[i];
    os_ << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) os_ << (i ? "," : "") << columns_[i];
    os_ << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size()) throw std::logic_error("csv: row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << "\n";
  }

  std::string str() const { return os_.str(); }

 private:
  std::vector<std::string> columns_;
  std::ostringstream os_;
};

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }
std::string fmt(std::int64_t v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

// Effective config: the file with command-line overrides folded in, minus
// settings that cannot influence results.
json effective(const json& cfg, std::uint64_t seed) {
  json e = cfg;
  e["seed"] = seed;
  e.erase("threads");
  return e;
}

// ---- recover --------------------------------------------------------------

CommandOutput run_recover(const json& cfg, const RunOptions& opt) {
  Section root(cfg, "");
  const Common common = read_common(root, "recover", opt);
  const std::size_t d = read_dimension(root);
  const ClassSpec spec = read_spec(root, "spec", d);
  const double p = root.number("p", 2.0);
  const auto eps = root.numbers("eps");
  const auto trials = root.unsigned_int("trials");
  const double gamma = root.number("gamma", std::exp(-1.0));
  const double c_universal = root.number("c_universal", 1.0);
  const auto budget = root.unsigned_int("support_budget", 8);
  const std::optional<std::uint64_t> radius =
      root.has("support_radius") ? std::optional(root.unsigned_int("support_radius")) : std::nullopt;
  RecoveryOptions ropt;
  ropt.solver = common.solver;
  ropt.limits = common.limits;
  ropt.eta_mode = eta_mode_from_string(root.string("eta_mode", "class_bound"));
  if (root.has("quadrature")) {
    auto q = root.child("quadrature");
    ropt.quadrature.mc_points = q.unsigned_int("mc_points", ropt.quadrature.mc_points);
    ropt.quadrature.grid_per_dim = q.unsigned_int("grid_per_dim", ropt.quadrature.grid_per_dim);
    q.finish();
  }
  root.finish();

  if (trials < 1 || trials > 1'000'000) root.fail("trials", "must lie in [1, 10^6]");
  if (budget < 1) root.fail("support_budget", "must be >= 1");
  if (radius && *radius < 1) root.fail("support_radius", "must be >= 1");

  std::vector<RecoveryPlan> plans;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    try {
      plans.push_back(plan_parameters(spec, eps[i], p, gamma, c_universal, common.limits));
    } catch (const std::invalid_argument& e) {
      root.fail("eps[" + std::to_string(i) + "]", e.what());
    } catch (const std::length_error& e) {
      root.fail("eps[" + std::to_string(i) + "]", e.what());
    }
    const auto& pl = plans.back();
    const double entries = static_cast<double>(pl.m) * pl.index_set_size;
    if (pl.index_set_size > static_cast<double>(common.limits.max_index_set_size) ||
        entries > static_cast<double>(common.limits.max_matrix_entries))
      root.fail("eps[" + std::to_string(i) + "]",
                "plan needs m = " + std::to_string(pl.m) + " samples on #Lambda = " + fmt(pl.index_set_size) +
                    " frequencies, above max_matrix_entries = " + std::to_string(common.limits.max_matrix_entries) +
                    " (lower c_universal or raise limits.max_matrix_entries)");
  }

  std::vector<std::uint64_t> seeds;
  for (std::uint64_t t = 0; t < trials; ++t) seeds.push_back(trial_seed(common.seed, t));

  const std::size_t n_jobs = plans.size() * trials;
  auto reports = parallel_map(n_jobs, opt.threads, [&](std::size_t job) {
    const auto& plan = plans[job / trials];
    const std::uint64_t ts = seeds[job % trials];
    const auto R = radius ? static_cast<std::int64_t>(*radius) : 2 * plan.truncation_radius;
    const auto f = random_member(spec, budget, R, stream_seed(ts, 1));
    return recover(f, plan, ts, ropt);
  });

  Csv csv("recover", effective(cfg, common.seed), seeds,
          {"spec", "d", "p", "eps", "s", "index_set_size", "m", "lp_error", "rhs_bound", "seed", "solver_status",
           "wall_ms"});
  CommandOutput out;
  json rows = json::array();
  for (std::size_t job = 0; job < n_jobs; ++job) {
    const auto& plan = plans[job / trials];
    const auto& r = reports[job];
    out.all_converged = out.all_converged && r.converged();
    csv.row({spec.name(), fmt(d), fmt(p), fmt(plan.eps), fmt(plan.s), fmt(plan.index_set_size), fmt(plan.m),
             fmt(r.lp_error.value), fmt(r.rhs_bound), std::to_string(r.seed), to_string(r.solver.status),
             common.record_wall_time ? fmt(r.wall_ms) : std::string()});
    json row = to_json(r);
    row["plan_index"] = job / trials;
    rows.push_back(std::move(row));
  }
  json plan_list = json::array();
  for (const auto& pl : plans) plan_list.push_back(to_json(pl));
  out.csv = csv.str();
  out.report = {{"command", "recover"}, {"version", WSR_VERSION}, {"config", effective(cfg, common.seed)},
                {"plans", plan_list}, {"trials", rows}};
  return out;
}

// ---- phase transition -----------------------------------------------------

CommandOutput run_phase_transition(const json& cfg, const RunOptions& opt) {
  Section root(cfg, "");
  const Common common = read_common(root, "phase-transition", opt);
  const std::size_t d = read_dimension(root);
  const auto R = root.unsigned_int("truncation_radius");
  const auto s_values = root.unsigned_ints("s_values");
  const auto m_values = root.unsigned_ints("m_values");
  const auto trials = root.unsigned_int("trials");
  const bool full_grid = root.boolean("include_full_grid", false);
  const double success_tol = root.number("success_tol", 1e-4);
  root.finish();

  if (R < 1 || R > 1'000'000) root.fail("truncation_radius", "must lie in [1, 10^6]");
  if (trials < 1 || trials > 1'000'000) root.fail("trials", "must lie in [1, 10^6]");
  if (!(success_tol > 0.0)) root.fail("success_tol", "must be > 0");
  const double card = cube_cardinality(d, static_cast<std::int64_t>(R));
  if (card > static_cast<double>(common.limits.max_index_set_size))
    root.fail("truncation_radius", "#Lambda exceeds max_index_set_size");
  for (auto s : s_values)
    if (s < 1 || static_cast<double>(s) > card) root.fail("s_values", "each s must lie in [1, #Lambda]");
  for (auto m : m_values)
    if (m < 1 || static_cast<double>(m) * card > static_cast<double>(common.limits.max_matrix_entries))
      root.fail("m_values", "each m must be >= 1 with m * #Lambda <= max_matrix_entries");

  struct Cell {
    std::size_t s, m;
    bool grid;
  };
  std::vector<Cell> cells;
  for (auto s : s_values) {
    for (auto m : m_values) cells.push_back({s, m, false});
    if (full_grid) cells.push_back({s, static_cast<std::size_t>(card), true});
  }
  if (full_grid && card * card > static_cast<double>(common.limits.max_matrix_entries))
    root.fail("include_full_grid", "#Lambda^2 exceeds max_matrix_entries");

  const IndexSet lambda = cube_index_set(d, static_cast<std::int64_t>(R), common.limits);
  const auto n = lambda.size();
  std::vector<std::uint64_t> seeds;
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (std::uint64_t t = 0; t < trials; ++t) seeds.push_back(trial_seed(common.seed, c * trials + t));

  struct Trial {
    bool success, converged;
  };
  auto results = parallel_map(seeds.size(), opt.threads, [&](std::size_t job) {
    const Cell& cell = cells[job / trials];
    const std::uint64_t ts = seeds[job];
    Rng rng(stream_seed(ts, 1));
    std::vector<std::size_t> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[i] = i;
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < cell.s; ++i) {
      std::swap(pos[i], pos[i + rng.uniform_below(n - i)]);
      const double re = rng.normal();
      x(static_cast<Eigen::Index>(pos[i])) = Complex(re, rng.normal());
    }
    x /= x.norm();
    const PointSet pts = cell.grid ? equispaced_grid(d, 2 * R + 1) : draw_uniform(cell.m, d, stream_seed(ts, 2));
    const auto G = measurement_matrix(lambda, pts, common.limits);
    const auto res = solve_bpdn({G, G * x, 0.0}, common.solver);
    return Trial{(res.x - x).norm() <= success_tol, res.status == SolverStatus::Converged};
  });

  Csv csv("phase-transition", effective(cfg, common.seed), {common.seed},
          {"d", "index_set_size", "s", "m", "sampling", "trials", "successes", "success_rate", "nonconverged"});
  CommandOutput out;
  json rows = json::array();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::size_t ok = 0, bad = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      ok += results[c * trials + t].success ? 1 : 0;
      bad += results[c * trials + t].converged ? 0 : 1;
    }
    out.all_converged = out.all_converged && bad == 0;
    const double rate = static_cast<double>(ok) / static_cast<double>(trials);
    csv.row({fmt(d), fmt(n), fmt(cells[c].s), fmt(cells[c].m), cells[c].grid ? "grid" : "uniform", fmt(trials),
             fmt(ok), fmt(rate), fmt(bad)});
    rows.push_back({{"s", cells[c].s}, {"m", cells[c].m}, {"sampling", cells[c].grid ? "grid" : "uniform"},
                    {"successes", ok}, {"success_rate", rate}, {"nonconverged", bad}});
  }
  out.csv = csv.str();
  out.report = {{"command", "phase-transition"}, {"version", WSR_VERSION},
                {"config", effective(cfg, common.seed)}, {"cells", rows}};
  return out;
}

// ---- lower bound ----------------------------------------------------------

CommandOutput run_lower_bound(const json& cfg, const RunOptions& opt) {
  Section root(cfg, "");
  const Common common = read_common(root, "lower-bound", opt);
  const std::size_t d = read_dimension(root);
  const auto ranks = root.unsigned_ints("ranks");
  const auto samples = root.unsigned_int("bpdn_samples", 40);
  root.finish();

  double ambient = 1.0;
  for (std::size_t i = 0; i < d; ++i) ambient *= 5.0;
  if (ambient > static_cast<double>(common.limits.max_lower_bound_ambient))
    root.fail("d", "5^d = " + fmt(ambient) + " exceeds max_lower_bound_ambient = " +
                       std::to_string(common.limits.max_lower_bound_ambient));
  for (auto r : ranks)
    if (static_cast<double>(r) >= ambient) root.fail("ranks", "each rank must be < 5^d = " + fmt(ambient));
  if (samples < 1 || static_cast<double>(samples) * ambient > static_cast<double>(common.limits.max_matrix_entries))
    root.fail("bpdn_samples", "must be >= 1 with bpdn_samples * 5^d <= max_matrix_entries");

  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < ranks.size(); ++i) seeds.push_back(trial_seed(common.seed, i));
  auto reps = parallel_map(ranks.size(), opt.threads, [&](std::size_t i) {
    return curse_demo(d, ranks[i], seeds[i], samples, common.limits, common.solver);
  });

  Csv csv("lower-bound", effective(cfg, common.seed), seeds,
          {"d", "n_rank", "ambient", "gluskin_bound", "linear_worst_case", "gluskin_holds", "below_threshold",
           "witness_k", "witness_in_log_class", "linear_linf_lower_bound", "bpdn_samples", "bpdn_l2_error",
           "bpdn_status", "seed", "note"});
  CommandOutput out;
  json rows = json::array();
  for (const auto& r : reps) {
    out.all_converged = out.all_converged && r.bpdn_status == SolverStatus::Converged;
    csv.row({fmt(r.d), fmt(r.n_rank), fmt(r.ambient), fmt(r.gluskin), fmt(r.linear_worst_case),
             fmt(r.gluskin_holds), fmt(r.below_threshold), r.witness_k.to_string(), fmt(r.witness_in_log_class),
             fmt(r.linear_linf_lower_bound), fmt(r.bpdn_samples), fmt(r.bpdn_l2_error), to_string(r.bpdn_status),
             std::to_string(r.seed), r.note});
    rows.push_back(to_json(r));
  }
  out.csv = csv.str();
  out.report = {{"command", "lower-bound"}, {"version", WSR_VERSION},
                {"config", effective(cfg, common.seed)}, {"rows", rows}};
  return out;
}

// ---- bound table ----------------------------------------------------------

// Closed-form sample-complexity shapes with unit constants, p >= 2.
double complexity_shape(const ClassSpec& spec, double eps, double p) {
  const double d = static_cast<double>(spec.dimension);
  const double l = std::log(1.0 / eps);
  switch (spec.kind) {
    case ClassKind::LogClass: {
      const double lp = p * l;
      return d * std::pow(eps, -1.5 * p) * lp * lp * lp;
    }
    case ClassKind::MixedSobolev: return d * d * std::log(d) * std::pow(eps, -p) * l * l * l * l;
    case ClassKind::Hoelder: return d * d * std::log(d) * std::log(d) * std::pow(eps, -p) * l * l * l * l;
    case ClassKind::WienerBall: break;
  }
  return std::nan("");
}

CommandOutput run_bound_table(const json& cfg, const RunOptions& opt) {
  Section root(cfg, "");
  const Common common = read_common(root, "bound-table", opt);
  const auto dims = root.unsigned_ints("d_values");
  const auto eps_values = root.numbers("eps_values");
  const auto p_values = root.numbers("p_values", std::vector<double>{2.0});
  const double gamma = root.number("gamma", std::exp(-1.0));
  const double c_universal = root.number("c_universal", 1.0);
  const auto& specs_json = root.raw("specs");
  root.finish();

  for (auto d : dims)
    if (d < 1 || d > 64) root.fail("d_values", "each d must lie in [1, 64]");
  for (double e : eps_values)
    if (!(e > 0.0 && e < 1.0)) root.fail("eps_values", "each eps must lie in (0, 1)");
  for (double p : p_values)
    if (!(p >= 2.0)) root.fail("p_values", "each p must be >= 2");
  if (!(gamma > 0.0 && gamma < 1.0)) root.fail("gamma", "must lie in (0, 1)");
  if (!(c_universal > 0.0)) root.fail("c_universal", "must be > 0");
  if (!specs_json.is_array() || specs_json.empty()) root.fail("specs", "must be a non-empty array of class objects");
  std::vector<json> spec_objs(specs_json.begin(), specs_json.end());
  for (std::size_t i = 0; i < spec_objs.size(); ++i) {
    json holder = {{"spec", spec_objs[i]}};
    Section tmp(holder, "specs[" + std::to_string(i) + "]");
    const auto spec = read_spec(tmp, "spec", 2);
    if (spec.kind == ClassKind::WienerBall)
      root.fail("specs[" + std::to_string(i) + "]", "the Wiener ball has no finite truncation; use log, "
                                                     "mixed_sobolev or hoelder");
  }

  Csv csv("bound-table", effective(cfg, common.seed), {common.seed},
          {"spec", "d", "eps", "p", "truncation_radius", "projection_bound", "log_cardinality",
           "reference_log_cardinality", "within_reference", "plan_s", "plan_m", "plan_truncation_radius",
           "complexity_shape", "m_over_shape", "status"});
  CommandOutput out;
  json rows = json::array();
  for (const auto& sj : spec_objs) {
    for (auto d : dims) {
      const ClassSpec spec = class_spec_from_json(sj, static_cast<std::size_t>(d));
      for (double eps : eps_values) {
        for (double p : p_values) {
          std::vector<std::string> cells = {spec.name(), fmt(static_cast<std::size_t>(d)), fmt(eps), fmt(p)};
          std::string status = "ok";
          json row = {{"spec", to_json(spec)}, {"d", d}, {"eps", eps}, {"p", p}};
          try {
            const auto t = plan_truncation(spec, eps, common.limits);
            cells.insert(cells.end(), {fmt(t.m), fmt(t.projection_error_bound), fmt(t.log_cardinality),
                                       t.reference_log_cardinality ? fmt(*t.reference_log_cardinality) : "",
                                       t.within_reference ? fmt(*t.within_reference) : ""});
            row["truncation_radius"] = t.m;
            row["log_cardinality"] = t.log_cardinality;
          } catch (const std::length_error& e) {
            cells.insert(cells.end(), 5, "");
            status = "truncation_capacity";
          }
          const double shape = complexity_shape(spec, eps, p);
          try {
            const auto plan = plan_parameters(spec, eps, p, gamma, c_universal, common.limits);
            cells.insert(cells.end(), {fmt(plan.s), fmt(plan.m), fmt(plan.truncation_radius), fmt(shape),
                                       shape > 0.0 ? fmt(static_cast<double>(plan.m) / shape) : ""});
            row["plan"] = to_json(plan);
          } catch (const std::length_error& e) {
            cells.insert(cells.end(), {"", "", "", fmt(shape), ""});
            if (status == "ok") status = "plan_capacity";
          }
          cells.push_back(status);
          row["status"] = status;
          csv.row(cells);
          rows.push_back(std::move(row));
        }
      }
    }
  }
  out.csv = csv.str();
  out.report = {{"command", "bound-table"}, {"version", WSR_VERSION},
                {"config", effective(cfg, common.seed)}, {"rows", rows}};
  return out;
}

}  // namespace

CommandOutput run_command(const std::string& command, const json& config, const RunOptions& options) {
  if (command == "recover") return run_recover(config, options);
  if (command == "phase-transition") return run_phase_transition(config, options);
  if (command == "lower-bound") return run_lower_bound(config, options);
  if (command == "bound-table") return run_bound_table(config, options);
  throw ConfigError("unknown command \"" + command + "\"");
}

}  // namespace wsr
