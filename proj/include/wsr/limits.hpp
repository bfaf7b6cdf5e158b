#pragma once

#include <cstdint>

namespace wsr {

/// Size guards shared by all modules. Every guarded operation takes a Limits
/// so experiments can raise or lower them from config.
struct Limits {
  std::int64_t max_index_set_size = 10'000'000;
  std::int64_t max_matrix_entries = 20'000'000;
  /// Largest truncation radius a plan may return (2^52 keeps radii exact in double).
  std::int64_t max_truncation_radius = std::int64_t{1} << 52;
  /// Largest ambient size 5^d accepted by the linear lower-bound demonstration.
  std::int64_t max_lower_bound_ambient = 125;
};

}  // namespace wsr
