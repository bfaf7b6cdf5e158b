#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "wsr/limits.hpp"
#include "wsr/multiindex.hpp"
#include "wsr/wiener.hpp"

namespace wsr {

/// Points in [0,1)^d, stored row-major. Random sets remember their seed and are
/// regenerable from (n, d, seed); grid sets remember their resolution.
class PointSet {
 public:
  PointSet(std::size_t dimension, std::vector<double> coords);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return coords_.size() / dimension_; }
  std::span<const double> point(std::size_t j) const {
    return {coords_.data() + j * dimension_, dimension_};
  }
  const std::vector<double>& coords() const { return coords_; }

  std::optional<std::uint64_t> seed() const { return seed_; }
  std::optional<std::size_t> grid_per_dim() const { return grid_per_dim_; }

  friend PointSet draw_uniform(std::size_t n, std::size_t d, std::uint64_t seed);
  friend PointSet equispaced_grid(std::size_t d, std::size_t per_dim);

 private:
  std::size_t dimension_;
  std::vector<double> coords_;
  std::optional<std::uint64_t> seed_;
  std::optional<std::size_t> grid_per_dim_;
};

/// n i.i.d. uniform points on [0,1)^d. Coordinates are drawn point by point,
/// coordinate by coordinate, from one Rng(seed) stream.
PointSet draw_uniform(std::size_t n, std::size_t d, std::uint64_t seed);

/// The full lattice {0, 1/g, ..., (g-1)/g}^d, lexicographic.
PointSet equispaced_grid(std::size_t d, std::size_t per_dim);

/// <k, x> reduced to [0, 1).
double phase_fraction(const MultiIndex& k, std::span<const double> x);

/// f(x_j) = sum_k c_k e^{2 pi i <k, x_j>} by direct summation.
Eigen::VectorXcd evaluate(const CoefficientVector& c, const PointSet& points);

/// G(j, l) = e^{2 pi i <k_l, x_j>}. Columns follow the index-set order.
using MeasurementMatrix = Eigen::MatrixXcd;

MeasurementMatrix measurement_matrix(const IndexSet& set, const PointSet& points,
                                     const Limits& limits = {});

/// Coefficients of c on `set`, as a column vector in enumeration order.
Eigen::VectorXcd coefficients_on(const CoefficientVector& c, const IndexSet& set);

/// {"d", "seed", "n"} for random sets, {"d", "grid_per_dim", "n"} for grids.
nlohmann::json to_json(const PointSet& points);
PointSet point_set_from_json(const nlohmann::json& j);

}  // namespace wsr
