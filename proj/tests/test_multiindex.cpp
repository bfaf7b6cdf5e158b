#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "wsr/errors.hpp"
#include "wsr/multiindex.hpp"
#include "wsr/rng.hpp"

using namespace wsr;

TEST(CubeIndexSet, Examples) {
  const auto a = cube_index_set(2, 1);
  EXPECT_EQ(a.size(), 9u);
  EXPECT_TRUE(a.contains(MultiIndex{0, 0}));
  EXPECT_TRUE(a.contains(MultiIndex{-1, 1}));
  EXPECT_EQ(cube_index_set(3, 2).size(), 125u);
  const auto z = cube_index_set(1, 0);
  ASSERT_EQ(z.size(), 1u);
  EXPECT_EQ(z[0], MultiIndex{0});
}

TEST(CubeIndexSet, CardinalityMatchesFormula) {
  for (std::size_t d = 1; d <= 4; ++d)
    for (std::int64_t m = 0; m <= 3; ++m) {
      const auto s = cube_index_set(d, m);
      EXPECT_EQ(static_cast<double>(s.size()), cube_cardinality(d, m)) << d << " " << m;
      EXPECT_EQ(static_cast<double>(s.size()), std::pow(2.0 * m + 1.0, static_cast<double>(d)));
    }
}

TEST(CubeIndexSet, SortedAndDuplicateFree) {
  const auto s = cube_index_set(3, 2);
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
  EXPECT_EQ(std::adjacent_find(s.begin(), s.end()), s.end());
}

TEST(CubeIndexSet, CapacityGuard) {
  Limits lim;
  lim.max_index_set_size = 100;
  EXPECT_NO_THROW(cube_index_set(2, 4, lim));  // 81
  EXPECT_THROW(cube_index_set(3, 2, lim), CapacityError);
  EXPECT_THROW(cube_index_set(40, 10), CapacityError);
}

TEST(CubeIndexSet, PermutationClosure) {
  Rng rng(4);
  for (std::size_t d = 2; d <= 4; ++d) {
    const auto cube = cube_index_set(d, 2);
    std::vector<std::size_t> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    for (int trial = 0; trial < 5; ++trial) {
      for (std::size_t i = d - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_below(i + 1)]);
      std::vector<MultiIndex> image;
      for (const auto& k : cube) image.push_back(k.permuted(perm));
      EXPECT_EQ(IndexSet(d, image), cube);
    }
  }
}

TEST(PositionOf, Examples) {
  const auto c1 = cube_index_set(1, 1);
  EXPECT_EQ(position_of(c1, MultiIndex{0}), 1u);
  EXPECT_FALSE(position_of(c1, MultiIndex{5}).has_value());
  EXPECT_EQ(position_of(cube_index_set(2, 1), MultiIndex{-1, -1}), 0u);
}

TEST(PositionOf, BijectionWithEnumeration) {
  const auto s = cube_index_set(3, 2);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(position_of(s, s[i]), i);
}

TEST(IndexSet, RejectsMixedDimensionsAndZeroDimension) {
  EXPECT_THROW(IndexSet(2, {MultiIndex{1, 2}, MultiIndex{1}}), DimensionError);
  EXPECT_THROW(IndexSet(0, {}), DimensionError);
  const IndexSet s(2, {MultiIndex{1, 0}, MultiIndex{0, 0}, MultiIndex{1, 0}});
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], (MultiIndex{0, 0}));
}

TEST(MultiIndex, Norms) {
  const MultiIndex k{3, -4, 0};
  EXPECT_EQ(k.linf_norm(), 4);
  EXPECT_EQ(k.l1_norm(), 7);
  EXPECT_DOUBLE_EQ(k.l2_norm(), 5.0);
  EXPECT_LT((MultiIndex{-1, 5}), (MultiIndex{0, -5}));
}

TEST(MultiIndex, JsonRoundTrip) {
  const auto s = cube_index_set(2, 1);
  EXPECT_EQ(index_set_from_json(to_json(s)), s);
  EXPECT_EQ(multi_index_from_json(to_json(MultiIndex{-3, 7})), (MultiIndex{-3, 7}));
  EXPECT_THROW(index_set_from_json(nlohmann::json::array()), std::exception);
  EXPECT_EQ(index_set_from_json(nlohmann::json::array(), 3).dimension(), 3u);
}
