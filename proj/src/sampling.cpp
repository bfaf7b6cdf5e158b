#include "wsr/sampling.hpp"

#include <cmath>
#include <numbers>

#include "wsr/errors.hpp"
#include "wsr/rng.hpp"

namespace wsr {

PointSet::PointSet(std::size_t dimension, std::vector<double> coords)
    : dimension_(dimension), coords_(std::move(coords)) {
  if (dimension_ == 0) throw DimensionError("point set dimension must be >= 1");
  if (coords_.size() % dimension_ != 0) throw DimensionError("point coordinates not a multiple of d");
  for (double v : coords_)
    if (!(v >= 0.0 && v < 1.0)) throw PreconditionError("point coordinates must lie in [0, 1)");
}

PointSet draw_uniform(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n == 0) throw PreconditionError("draw_uniform: n must be >= 1");
  if (d == 0) throw DimensionError("draw_uniform: d must be >= 1");
  Rng rng(seed);
  std::vector<double> coords(n * d);
  for (auto& v : coords) v = rng.uniform01();
  PointSet p(d, std::move(coords));
  p.seed_ = seed;
  return p;
}

PointSet equispaced_grid(std::size_t d, std::size_t per_dim) {
  if (d == 0) throw DimensionError("equispaced_grid: d must be >= 1");
  if (per_dim == 0) throw PreconditionError("equispaced_grid: per_dim must be >= 1");
  const double total = std::pow(static_cast<double>(per_dim), static_cast<double>(d));
  if (total > 1e8) throw CapacityError("equispaced_grid: too many points");
  const auto n = static_cast<std::size_t>(total);
  std::vector<double> coords(n * d);
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < d; ++i)
      coords[j * d + i] = static_cast<double>(idx[i]) / static_cast<double>(per_dim);
    for (std::size_t i = d; i-- > 0;) {
      if (++idx[i] < per_dim) break;
      idx[i] = 0;
    }
  }
  PointSet p(d, std::move(coords));
  p.grid_per_dim_ = per_dim;
  return p;
}

double phase_fraction(const MultiIndex& k, std::span<const double> x) {
  double t = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    // Reduce each product first so large frequencies do not swamp the sum.
    const double p = static_cast<double>(k[i]) * x[i];
    t += p - std::floor(p);
  }
  return t - std::floor(t);
}

namespace {

inline Complex character(double fraction) {
  const double a = 2.0 * std::numbers::pi * fraction;
  return {std::cos(a), std::sin(a)};
}

}  // namespace

Eigen::VectorXcd evaluate(const CoefficientVector& c, const PointSet& points) {
  if (c.dimension() != points.dimension()) throw DimensionError("evaluate: dimension mismatch");
  const auto n = points.size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const auto x = points.point(j);
    Complex acc{};
    for (const auto& [k, v] : c.terms()) acc += v * character(phase_fraction(k, x));
    out(static_cast<Eigen::Index>(j)) = acc;
  }
  return out;
}

MeasurementMatrix measurement_matrix(const IndexSet& set, const PointSet& points,
                                     const Limits& limits) {
  if (set.dimension() != points.dimension())
    throw DimensionError("measurement_matrix: dimension mismatch");
  const double entries = static_cast<double>(set.size()) * static_cast<double>(points.size());
  if (entries > static_cast<double>(limits.max_matrix_entries))
    throw CapacityError("measurement_matrix: rows*cols = " + std::to_string(entries) +
                        " exceeds max_matrix_entries = " + std::to_string(limits.max_matrix_entries));
  const auto rows = static_cast<Eigen::Index>(points.size());
  const auto cols = static_cast<Eigen::Index>(set.size());
  MeasurementMatrix g(rows, cols);
  for (Eigen::Index l = 0; l < cols; ++l) {
    const auto& k = set[static_cast<std::size_t>(l)];
    for (Eigen::Index j = 0; j < rows; ++j)
      g(j, l) = character(phase_fraction(k, points.point(static_cast<std::size_t>(j))));
  }
  return g;
}

Eigen::VectorXcd coefficients_on(const CoefficientVector& c, const IndexSet& set) {
  const auto v = c.on(set);
  return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

nlohmann::json to_json(const PointSet& points) {
  nlohmann::json j = {{"d", points.dimension()}, {"n", points.size()}};
  if (points.seed()) j["seed"] = *points.seed();
  if (points.grid_per_dim()) j["grid_per_dim"] = *points.grid_per_dim();
  if (!points.seed() && !points.grid_per_dim())
    throw PreconditionError("to_json: only random or grid point sets are serializable");
  return j;
}

PointSet point_set_from_json(const nlohmann::json& j) {
  try {
    const auto d = j.at("d").get<std::size_t>();
    if (j.contains("seed")) return draw_uniform(j.at("n").get<std::size_t>(), d, j.at("seed").get<std::uint64_t>());
    if (j.contains("grid_per_dim")) return equispaced_grid(d, j.at("grid_per_dim").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("point set JSON: ") + e.what());
  }
  throw ConfigError("point set JSON needs \"seed\" or \"grid_per_dim\"");
}

}  // namespace wsr
