#include "wsr/multiindex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "wsr/errors.hpp"

namespace wsr {

MultiIndex::MultiIndex(std::vector<std::int64_t> entries) : entries_(std::move(entries)) {}

MultiIndex::MultiIndex(std::initializer_list<std::int64_t> entries) : entries_(entries) {}

MultiIndex MultiIndex::zero(std::size_t d) { return MultiIndex(std::vector<std::int64_t>(d, 0)); }

std::int64_t MultiIndex::linf_norm() const {
  std::int64_t r = 0;
  for (auto v : entries_) r = std::max(r, std::abs(v));
  return r;
}

std::int64_t MultiIndex::l1_norm() const {
  std::int64_t r = 0;
  for (auto v : entries_) r += std::abs(v);
  return r;
}

double MultiIndex::l2_norm() const {
  double r = 0.0;
  for (auto v : entries_) r += static_cast<double>(v) * static_cast<double>(v);
  return std::sqrt(r);
}

MultiIndex MultiIndex::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != entries_.size()) throw DimensionError("permutation length mismatch");
  std::vector<std::int64_t> out(entries_.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out[i] = entries_.at(perm[i]);
  return MultiIndex(std::move(out));
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) os << ' ';
    os << entries_[i];
  }
  os << ')';
  return os.str();
}

IndexSet::IndexSet(std::size_t dimension, std::vector<MultiIndex> indices)
    : dimension_(dimension), indices_(std::move(indices)) {
  if (dimension_ == 0) throw DimensionError("index set dimension must be >= 1");
  for (const auto& k : indices_) {
    if (k.dimension() != dimension_)
      throw DimensionError("index " + k.to_string() + " does not have dimension " +
                           std::to_string(dimension_));
  }
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
}

bool IndexSet::contains(const MultiIndex& k) const { return position_of(*this, k).has_value(); }

double cube_cardinality(std::size_t d, std::int64_t m) {
  return std::pow(2.0 * static_cast<double>(m) + 1.0, static_cast<double>(d));
}

IndexSet cube_index_set(std::size_t d, std::int64_t m, const Limits& limits) {
  if (d == 0) throw DimensionError("cube_index_set: d must be >= 1");
  if (m < 0) throw PreconditionError("cube_index_set: m must be >= 0");
  const double card = cube_cardinality(d, m);
  if (card > static_cast<double>(limits.max_index_set_size)) {
    throw CapacityError("cube_index_set: (2m+1)^d = " + std::to_string(card) +
                        " exceeds max_index_set_size = " +
                        std::to_string(limits.max_index_set_size));
  }
  const auto n = static_cast<std::size_t>(card);
  std::vector<MultiIndex> out;
  out.reserve(n);
  // Odometer with the last coordinate fastest gives lexicographic order directly.
  std::vector<std::int64_t> cur(d, -m);
  for (std::size_t count = 0; count < n; ++count) {
    out.emplace_back(cur);
    for (std::size_t i = d; i-- > 0;) {
      if (cur[i] < m) {
        ++cur[i];
        break;
      }
      cur[i] = -m;
    }
  }
  return IndexSet(d, std::move(out));
}

std::optional<std::size_t> position_of(const IndexSet& set, const MultiIndex& k) {
  if (k.dimension() != set.dimension())
    throw DimensionError("position_of: index " + k.to_string() + " has wrong dimension");
  const auto& v = set.indices();
  auto it = std::lower_bound(v.begin(), v.end(), k);
  if (it == v.end() || *it != k) return std::nullopt;
  return static_cast<std::size_t>(it - v.begin());
}

nlohmann::json to_json(const MultiIndex& k) {
  return nlohmann::json(std::vector<std::int64_t>(k.entries().begin(), k.entries().end()));
}

MultiIndex multi_index_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("multi-index must be a JSON array of integers");
  std::vector<std::int64_t> v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number_integer()) throw ConfigError("multi-index entries must be integers");
    v.push_back(e.get<std::int64_t>());
  }
  return MultiIndex(std::move(v));
}

nlohmann::json to_json(const IndexSet& set) {
  auto arr = nlohmann::json::array();
  for (const auto& k : set) arr.push_back(to_json(k));
  return arr;
}

IndexSet index_set_from_json(const nlohmann::json& j, std::optional<std::size_t> dimension) {
  if (!j.is_array()) throw ConfigError("index set must be a JSON array");
  std::vector<MultiIndex> v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(multi_index_from_json(e));
  std::size_t d = dimension.value_or(v.empty() ? 0 : v.front().dimension());
  if (d == 0) throw ConfigError("cannot infer dimension of an empty index set");
  return IndexSet(d, std::move(v));
}

}  // namespace wsr
