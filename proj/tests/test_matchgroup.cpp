#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <set>

#include "ww/matchgroup.hpp"

using namespace ww;

namespace {

std::vector<Permutation> symmetric_group(int m) {
  std::vector<Permutation> out;
  std::vector<int> img(static_cast<size_t>(m));
  std::iota(img.begin(), img.end(), 0);
  do out.push_back(Permutation::from_images(img));
  while (std::next_permutation(img.begin(), img.end()));
  return out;
}

// g fixes the standard matching {{0,1},{2,3},...} as a set of pairs.
bool stabilizes_standard_matching(const Permutation& g) {
  for (int k = 0; k < g.size(); k += 2)
    if (g(k) / 2 != g(k + 1) / 2) return false;
  return true;
}

}  // namespace

TEST(Matching, CanonicalisesPairs) {
  const auto m = Matching::from_one_based({{5, 6}, {7, 2}, {1, 3}, {4, 8}});
  const std::vector<int> seq = {0, 2, 1, 6, 3, 7, 4, 5};
  EXPECT_EQ(m.sequence(), seq);
  EXPECT_EQ(to_string(m), "{{1,3},{2,7},{4,8},{5,6}}");
  EXPECT_THROW(Matching({{0, 1}, {1, 2}}), InvalidArgument);
}

TEST(Matching, EnumerationCountAndOrder) {
  for (int n = 1; n <= 6; ++n) {
    const auto all = enumerate_matchings(n);
    EXPECT_EQ(Integer(all.size()), double_factorial_odd(n));
    for (size_t i = 1; i < all.size(); ++i) EXPECT_LT(all[i - 1].sequence(), all[i].sequence());
  }
  EXPECT_THROW(enumerate_matchings(kMaxMatchingDegree + 1), SizeLimitError);
}

TEST(CosetType, ExamplesByHand) {
  // {1,3},{2,4}: one component through all four points.
  EXPECT_EQ(coset_type(Matching::from_one_based({{1, 3}, {2, 4}})), Partition({2}));
  EXPECT_EQ(coset_type(Matching::from_one_based({{1, 2}, {3, 4}})), Partition({1, 1}));
  EXPECT_EQ(coset_type(Matching::from_one_based({{1, 2}, {3, 5}, {4, 6}})), Partition({2, 1}));
  EXPECT_EQ(kappa(Matching::from_one_based({{1, 4}, {2, 5}, {3, 6}})), 1);
  EXPECT_THROW(coset_type(Permutation::identity(3)), InvalidArgument);
}

TEST(CosetType, ConstantOnDoubleCosets) {
  for (int n = 1; n <= 3; ++n) {
    const auto h = hyperoctahedral(n);
    for (const Matching& m : enumerate_matchings(n)) {
      const auto g = m.as_permutation();
      const auto t = coset_type(g);
      for (const auto& a : h)
        for (const auto& b : h) ASSERT_EQ(coset_type(a * g * b), t);
    }
  }
}

TEST(Hyperoctahedral, IsTheStabilizerOfTheStandardMatching) {
  for (int n = 1; n <= 4; ++n) {
    std::set<Permutation> expected;
    for (const auto& g : symmetric_group(2 * n))
      if (stabilizes_standard_matching(g)) expected.insert(g);
    const auto h = hyperoctahedral(n);
    EXPECT_EQ(std::set<Permutation>(h.begin(), h.end()), expected);
    EXPECT_EQ(Integer(h.size()), hyperoctahedral_order(n));
    for (const auto& g : h) EXPECT_TRUE(is_in_hyperoctahedral(g));
  }
}

TEST(DoubleCosets, SizesMatchBruteForceAndSumToGroupOrder) {
  for (int n = 1; n <= 4; ++n) {
    std::map<Partition, Integer> tally;
    for (const auto& g : symmetric_group(2 * n)) ++tally[coset_type(g)];
    Integer total = 0;
    for (const auto& rho : partition_list(n)) {
      EXPECT_EQ(tally[rho], double_coset_size(rho)) << to_string(rho);
      total += double_coset_size(rho);
    }
    EXPECT_EQ(total, factorial(2 * n));
  }
}

TEST(DoubleCosets, RepresentativeHasRequestedType) {
  for (int n = 1; n <= 6; ++n)
    for (const auto& rho : partition_list(n)) EXPECT_EQ(coset_type(coset_representative(rho)), rho);
  EXPECT_EQ(coset_representative(Partition({1, 1, 1})), Permutation::identity(6));
}
