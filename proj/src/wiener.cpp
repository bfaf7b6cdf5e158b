#include "wsr/wiener.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <set>

#include "wsr/errors.hpp"
#include "wsr/rng.hpp"

namespace wsr {

namespace {

void check_dimension(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got)
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(got) +
                         " does not match " + std::to_string(expected));
}

}  // namespace

// --- CoefficientVector -------------------------------------------------------

CoefficientVector::CoefficientVector(std::size_t dimension) : dimension_(dimension) {
  if (dimension_ == 0) throw DimensionError("coefficient vector dimension must be >= 1");
}

CoefficientVector::CoefficientVector(std::size_t dimension,
                                     const std::vector<std::pair<MultiIndex, Complex>>& terms)
    : CoefficientVector(dimension) {
  for (const auto& [k, v] : terms) {
    check_dimension(dimension_, k.dimension(), "CoefficientVector");
    terms_[k] += v;
  }
  std::erase_if(terms_, [](const auto& kv) { return kv.second == Complex{}; });
}

CoefficientVector CoefficientVector::from_dense(const IndexSet& set,
                                                const std::vector<Complex>& values) {
  if (values.size() != set.size()) throw DimensionError("from_dense: length mismatch");
  CoefficientVector out(set.dimension());
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] != Complex{}) out.terms_.emplace(set[i], values[i]);
  return out;
}

Complex CoefficientVector::operator[](const MultiIndex& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? Complex{} : it->second;
}

std::vector<Complex> CoefficientVector::on(const IndexSet& set) const {
  check_dimension(dimension_, set.dimension(), "CoefficientVector::on");
  std::vector<Complex> out(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) out[i] = (*this)[set[i]];
  return out;
}

std::int64_t CoefficientVector::max_frequency() const {
  std::int64_t r = 0;
  for (const auto& [k, v] : terms_) r = std::max(r, k.linf_norm());
  return r;
}

CoefficientVector CoefficientVector::scaled(Complex a) const {
  CoefficientVector out(dimension_);
  if (a == Complex{}) return out;
  for (const auto& [k, v] : terms_) {
    const Complex w = a * v;
    if (w != Complex{}) out.terms_.emplace(k, w);
  }
  return out;
}

CoefficientVector operator+(const CoefficientVector& a, const CoefficientVector& b) {
  check_dimension(a.dimension_, b.dimension_, "operator+");
  CoefficientVector out = a;
  for (const auto& [k, v] : b.terms_) out.terms_[k] += v;
  std::erase_if(out.terms_, [](const auto& kv) { return kv.second == Complex{}; });
  return out;
}

CoefficientVector operator-(const CoefficientVector& a, const CoefficientVector& b) {
  return a + b.scaled(-1.0);
}

// --- ClassSpec ---------------------------------------------------------------

double HoelderConstants::c3() const { return std::max(c1, c2) * std::numbers::e; }

ClassSpec ClassSpec::wiener_ball(std::size_t d) {
  ClassSpec s;
  s.kind = ClassKind::WienerBall;
  s.dimension = d;
  s.validate();
  return s;
}

ClassSpec ClassSpec::log_class(std::size_t d) {
  ClassSpec s;
  s.kind = ClassKind::LogClass;
  s.dimension = d;
  s.validate();
  return s;
}

ClassSpec ClassSpec::mixed_sobolev(std::size_t d, double smoothness) {
  ClassSpec s;
  s.kind = ClassKind::MixedSobolev;
  s.dimension = d;
  s.smoothness = smoothness;
  s.validate();
  return s;
}

ClassSpec ClassSpec::hoelder_class(std::size_t d, double alpha, HoelderConstants c) {
  ClassSpec s;
  s.kind = ClassKind::Hoelder;
  s.dimension = d;
  s.alpha = alpha;
  s.hoelder = c;
  s.validate();
  return s;
}

void ClassSpec::validate() const {
  if (dimension == 0) throw PreconditionError("class dimension must be >= 1");
  if (kind == ClassKind::MixedSobolev && !(smoothness > 0.5))
    throw PreconditionError("mixed Sobolev smoothness must satisfy s > 1/2");
  if (kind == ClassKind::Hoelder) {
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw PreconditionError("Hoelder exponent must satisfy 0 < alpha <= 1");
    if (!(hoelder.c1 > 0.0 && hoelder.c2 > 0.0))
      throw PreconditionError("Hoelder bound constants must be positive");
  }
}

std::string ClassSpec::name() const {
  switch (kind) {
    case ClassKind::WienerBall: return "wiener";
    case ClassKind::LogClass: return "log";
    case ClassKind::MixedSobolev: return "mixed_sobolev";
    case ClassKind::Hoelder: return "hoelder";
  }
  return "unknown";
}

double MembershipReport::slack() const {
  double s = 1.0;
  for (const auto& c : constraints) s = std::min(s, 1.0 - c.value);
  return s;
}

// --- norms and weights -------------------------------------------------------

double class_weight(const ClassSpec& spec, const MultiIndex& k) {
  check_dimension(spec.dimension, k.dimension(), "class_weight");
  switch (spec.kind) {
    case ClassKind::LogClass: {
      const auto n = k.linf_norm();
      // |k|_inf <= 1 gives log <= 0, so max(1, .) = 1; this covers k = 0.
      return n <= 1 ? 1.0 : std::max(1.0, std::log(static_cast<double>(n)));
    }
    case ClassKind::MixedSobolev: {
      double w = 1.0;
      for (auto v : k.entries()) {
        const double a = std::abs(static_cast<double>(v));
        w *= std::max(1.0, std::pow(a, 2.0 * spec.smoothness));
      }
      return w;
    }
    case ClassKind::WienerBall:
    case ClassKind::Hoelder:
      return 1.0;
  }
  return 1.0;
}

double wiener_norm(const CoefficientVector& c) {
  double s = 0.0;
  for (const auto& [k, v] : c.terms()) s += std::abs(v);
  return s;
}

double hoelder_character_factor(double alpha, const MultiIndex& k) {
  const double t = 2.0 * std::numbers::pi * k.l2_norm();
  if (t == 0.0) return 0.0;
  return std::pow(2.0, 1.0 - alpha) * std::pow(t, alpha);
}

namespace {

// Constraint values of the raw vector; `quadratic[i]` marks constraints that scale
// with the square of the amplitudes.
struct ConstraintSet {
  std::vector<ConstraintValue> values;
  std::vector<bool> quadratic;
};

ConstraintSet evaluate_constraints(const ClassSpec& spec, const CoefficientVector& c) {
  ConstraintSet out;
  const double a = wiener_norm(c);
  switch (spec.kind) {
    case ClassKind::WienerBall:
      out.values.push_back({"wiener_norm", a});
      out.quadratic.push_back(false);
      break;
    case ClassKind::LogClass: {
      double v = 0.0;
      for (const auto& [k, x] : c.terms()) v += std::abs(x) * class_weight(spec, k);
      out.values.push_back({"log_weighted_norm", v});
      out.quadratic.push_back(false);
      break;
    }
    case ClassKind::MixedSobolev: {
      double e = 0.0;
      for (const auto& [k, x] : c.terms()) e += std::norm(x) * class_weight(spec, k);
      out.values.push_back({"wiener_norm", a});
      out.values.push_back({"sobolev_energy", e});
      out.quadratic = {false, true};
      break;
    }
    case ClassKind::Hoelder: {
      double h = 0.0;
      for (const auto& [k, x] : c.terms()) h += std::abs(x) * hoelder_character_factor(spec.alpha, k);
      out.values.push_back({"wiener_norm", a});
      out.values.push_back({"hoelder_sufficient", h});
      out.quadratic = {false, false};
      break;
    }
  }
  return out;
}

}  // namespace

MembershipReport membership(const ClassSpec& spec, const CoefficientVector& c, double tol) {
  spec.validate();
  check_dimension(spec.dimension, c.dimension(), "membership");
  MembershipReport r;
  r.constraints = evaluate_constraints(spec, c).values;
  r.sufficient_condition_only = spec.kind == ClassKind::Hoelder;
  r.member = std::all_of(r.constraints.begin(), r.constraints.end(),
                         [tol](const ConstraintValue& v) { return v.value <= 1.0 + tol; });
  return r;
}

CoefficientVector random_member(const ClassSpec& spec, std::size_t support_budget,
                                std::int64_t max_freq, std::uint64_t seed) {
  spec.validate();
  if (support_budget == 0) throw PreconditionError("random_member: support_budget must be >= 1");
  if (max_freq < 0) throw PreconditionError("random_member: max_freq must be >= 0");
  const std::size_t d = spec.dimension;
  const double card = cube_cardinality(d, max_freq);
  if (static_cast<double>(support_budget) > card)
    throw PreconditionError("random_member: support_budget exceeds (2 max_freq + 1)^d");

  Rng rng(seed);
  std::vector<MultiIndex> support;
  if (card <= 1e6 && 4.0 * static_cast<double>(support_budget) >= card) {
    // Dense regime: partial Fisher-Yates over the enumerated cube.
    auto all = cube_index_set(d, max_freq).indices();
    for (std::size_t i = 0; i < support_budget; ++i) {
      const auto j = i + rng.uniform_below(all.size() - i);
      std::swap(all[i], all[j]);
    }
    support.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(support_budget));
  } else {
    std::set<MultiIndex> seen;
    while (support.size() < support_budget) {
      std::vector<std::int64_t> e(d);
      for (auto& v : e) v = rng.uniform_int(-max_freq, max_freq);
      MultiIndex k(std::move(e));
      if (seen.insert(k).second) support.push_back(std::move(k));
    }
  }

  std::vector<std::pair<MultiIndex, Complex>> terms;
  terms.reserve(support.size());
  for (auto& k : support) {
    const double phase = 2.0 * std::numbers::pi * rng.uniform01();
    const double modulus = rng.uniform_open0();
    terms.emplace_back(std::move(k), std::polar(modulus, phase));
  }
  CoefficientVector raw(d, terms);

  const auto cs = evaluate_constraints(spec, raw);
  double scale = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cs.values.size(); ++i) {
    const double v = cs.values[i].value;
    if (v <= 0.0) continue;
    scale = std::min(scale, cs.quadratic[i] ? 1.0 / std::sqrt(v) : 1.0 / v);
  }
  return raw.scaled(scale);
}

CoefficientVector project(const CoefficientVector& c, const IndexSet& set) {
  check_dimension(c.dimension(), set.dimension(), "project");
  std::vector<std::pair<MultiIndex, Complex>> kept;
  for (const auto& [k, v] : c.terms())
    if (set.contains(k)) kept.emplace_back(k, v);
  return CoefficientVector(c.dimension(), kept);
}

double tail_wiener_norm(const CoefficientVector& c, const IndexSet& set) {
  check_dimension(c.dimension(), set.dimension(), "tail_wiener_norm");
  double s = 0.0;
  for (const auto& [k, v] : c.terms())
    if (!set.contains(k)) s += std::abs(v);
  return s;
}

double sigma_s(const CoefficientVector& c, std::size_t s) {
  std::vector<std::pair<double, const MultiIndex*>> mods;
  mods.reserve(c.support_size());
  for (const auto& [k, v] : c.terms()) mods.emplace_back(std::abs(v), &k);
  // Descending modulus; equal moduli keep lexicographic index order.
  std::stable_sort(mods.begin(), mods.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  double tail = 0.0;
  for (std::size_t i = s; i < mods.size(); ++i) tail += mods[i].first;
  return tail;
}

// --- bounds ------------------------------------------------------------------

double zeta(double x) {
  if (!(x > 1.0)) throw PreconditionError("zeta: argument must be > 1");
  constexpr int n_terms = 1000;
  double head = 0.0;
  for (int n = n_terms - 1; n >= 1; --n) head += std::pow(static_cast<double>(n), -x);
  // Euler-Maclaurin tail for sum_{n >= N} n^-x; the next omitted term is
  // O(x^5 N^(-x-5)), below 1e-12 relative for N = 1000.
  const double N = n_terms;
  const double tail = std::pow(N, 1.0 - x) / (x - 1.0) + 0.5 * std::pow(N, -x) +
                      x * std::pow(N, -x - 1.0) / 12.0 -
                      x * (x + 1.0) * (x + 2.0) * std::pow(N, -x - 3.0) / 720.0;
  return head + tail;
}

double sobolev_sum_constant(double s) {
  if (!(s > 0.5)) throw PreconditionError("sobolev_sum_constant: s must be > 1/2");
  return 1.0 + 2.0 * zeta(2.0 * s);
}

double projection_error_bound(const ClassSpec& spec, std::int64_t m) {
  spec.validate();
  if (m < 1) throw PreconditionError("projection_error_bound: m must be >= 1");
  const double mm = static_cast<double>(m);
  const double d = static_cast<double>(spec.dimension);
  switch (spec.kind) {
    case ClassKind::WienerBall:
      return 1.0;
    case ClassKind::LogClass:
      return 1.0 / std::log(mm + 1.0);
    case ClassKind::MixedSobolev: {
      const double cs = sobolev_sum_constant(spec.smoothness);
      return std::sqrt(d * std::pow(cs, d)) * std::pow(mm, -(spec.smoothness - 0.5));
    }
    case ClassKind::Hoelder: {
      // The Jackson/Lebesgue chain needs m >= 2; members have Wiener norm <= 1,
      // so 1 is always a valid bound and keeps the result monotone in m.
      if (m == 1) return 1.0;
      const double v = std::pow(spec.hoelder.c3() * std::log(mm), d) * std::pow(mm, -spec.alpha);
      return std::min(1.0, v);
    }
  }
  return 1.0;
}

std::optional<double> reference_log_cardinality(const ClassSpec& spec, double eps) {
  const double d = static_cast<double>(spec.dimension);
  switch (spec.kind) {
    case ClassKind::LogClass:
      return 2.0 * d / eps;
    case ClassKind::MixedSobolev: {
      const double cs = sobolev_sum_constant(spec.smoothness);
      return d / (2.0 * spec.smoothness - 1.0) * std::log(d * std::pow(cs, d) / (eps * eps));
    }
    case ClassKind::WienerBall:
    case ClassKind::Hoelder:
      return std::nullopt;
  }
  return std::nullopt;
}

ClassBoundReport plan_truncation(const ClassSpec& spec, double eps, const Limits& limits) {
  spec.validate();
  if (!(eps > 0.0 && eps <= 1.0)) throw PreconditionError("plan_truncation: eps must lie in (0, 1]");
  if (spec.kind == ClassKind::WienerBall)
    throw PreconditionError(
        "plan_truncation: the Wiener ball has constant projection bound 1; no finite "
        "truncation achieves eps < 1");
  std::int64_t lo = 1;
  std::int64_t hi = limits.max_truncation_radius;
  if (projection_error_bound(spec, hi) > eps)
    throw CapacityError("plan_truncation: required radius exceeds max_truncation_radius = " +
                        std::to_string(limits.max_truncation_radius));
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (projection_error_bound(spec, mid) <= eps)
      hi = mid;
    else
      lo = mid + 1;
  }
  ClassBoundReport r;
  r.m = lo;
  r.projection_error_bound = projection_error_bound(spec, lo);
  r.log_cardinality = static_cast<double>(spec.dimension) * std::log(2.0 * static_cast<double>(lo) + 1.0);
  r.reference_log_cardinality = reference_log_cardinality(spec, eps);
  if (r.reference_log_cardinality) r.within_reference = r.log_cardinality <= *r.reference_log_cardinality;
  return r;
}

double lebesgue_constant(std::int64_t m, std::int64_t quadrature_points) {
  if (m < 1) throw PreconditionError("lebesgue_constant: m must be >= 1");
  if (quadrature_points < 64 * m)
    throw PreconditionError("lebesgue_constant: need at least 64 m quadrature points");
  const double q = static_cast<double>(quadrature_points);
  const double w = 2.0 * static_cast<double>(m) + 1.0;
  double sum = 0.0;
  for (std::int64_t i = 0; i < quadrature_points; ++i) {
    const double t = (static_cast<double>(i) + 0.5) / q;
    sum += std::abs(std::sin(w * std::numbers::pi * t) / std::sin(std::numbers::pi * t));
  }
  return sum / q;
}

// --- serialization -----------------------------------------------------------

nlohmann::json to_json(const CoefficientVector& c) {
  auto terms = nlohmann::json::array();
  for (const auto& [k, v] : c.terms())
    terms.push_back({{"k", to_json(k)}, {"re", v.real()}, {"im", v.imag()}});
  return {{"d", c.dimension()}, {"terms", terms}};
}

CoefficientVector coefficient_vector_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("terms"))
    throw ConfigError("coefficient vector JSON needs keys \"d\" and \"terms\"");
  const auto d = j.at("d").get<std::size_t>();
  std::vector<std::pair<MultiIndex, Complex>> terms;
  for (const auto& t : j.at("terms")) {
    auto k = multi_index_from_json(t.at("k"));
    terms.emplace_back(std::move(k), Complex(t.at("re").get<double>(), t.at("im").get<double>()));
  }
  return CoefficientVector(d, terms);
}

nlohmann::json to_json(const ClassSpec& spec) {
  nlohmann::json j = {{"type", spec.name()}};
  if (spec.kind == ClassKind::MixedSobolev) j["s"] = spec.smoothness;
  if (spec.kind == ClassKind::Hoelder) {
    j["alpha"] = spec.alpha;
    j["c1"] = spec.hoelder.c1;
    j["c2"] = spec.hoelder.c2;
  }
  return j;
}

ClassSpec class_spec_from_json(const nlohmann::json& j, std::size_t dimension) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw ConfigError("class must be an object with a string \"type\"");
  const auto type = j.at("type").get<std::string>();
  try {
    if (type == "wiener") return ClassSpec::wiener_ball(dimension);
    if (type == "log") return ClassSpec::log_class(dimension);
    if (type == "mixed_sobolev") return ClassSpec::mixed_sobolev(dimension, j.value("s", 1.0));
    if (type == "hoelder") {
      HoelderConstants c;
      c.c1 = j.value("c1", c.c1);
      c.c2 = j.value("c2", c.c2);
      return ClassSpec::hoelder_class(dimension, j.value("alpha", 1.0), c);
    }
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("class: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("class: ") + e.what());
  }
  throw ConfigError("unknown class type \"" + type + "\" (expected wiener, log, mixed_sobolev, hoelder)");
}

}  // namespace wsr
