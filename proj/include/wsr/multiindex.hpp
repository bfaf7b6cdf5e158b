#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "wsr/limits.hpp"

namespace wsr {

/// A frequency k in Z^d. Ordered lexicographically.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<std::int64_t> entries);
  MultiIndex(std::initializer_list<std::int64_t> entries);

  static MultiIndex zero(std::size_t d);

  std::size_t dimension() const { return entries_.size(); }
  std::int64_t operator[](std::size_t i) const { return entries_[i]; }
  std::span<const std::int64_t> entries() const { return entries_; }

  std::int64_t linf_norm() const;
  std::int64_t l1_norm() const;
  double l2_norm() const;

  /// Coordinate permutation: result[i] = (*this)[perm[i]].
  MultiIndex permuted(std::span<const std::size_t> perm) const;

  std::string to_string() const;

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<std::int64_t> entries_;
};

/// Finite, sorted, duplicate-free set of frequencies of a common dimension.
class IndexSet {
 public:
  /// Sorts and deduplicates. Throws DimensionError on mixed lengths or d == 0.
  IndexSet(std::size_t dimension, std::vector<MultiIndex> indices);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  const MultiIndex& operator[](std::size_t pos) const { return indices_[pos]; }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  bool contains(const MultiIndex& k) const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::size_t dimension_;
  std::vector<MultiIndex> indices_;
};

/// (2m+1)^d as a double (never overflows; exact below 2^53).
double cube_cardinality(std::size_t d, std::int64_t m);

/// [-m, m]^d in lexicographic order. Throws CapacityError above limits.max_index_set_size.
IndexSet cube_index_set(std::size_t d, std::int64_t m, const Limits& limits = {});

/// 0-based column position of k, or nullopt if k is not a member.
std::optional<std::size_t> position_of(const IndexSet& set, const MultiIndex& k);

nlohmann::json to_json(const MultiIndex& k);
MultiIndex multi_index_from_json(const nlohmann::json& j);

/// Serialized as an array of integer arrays.
nlohmann::json to_json(const IndexSet& set);
/// An empty array needs `dimension` to be given.
IndexSet index_set_from_json(const nlohmann::json& j, std::optional<std::size_t> dimension = {});

}  // namespace wsr
