#include <gtest/gtest.h>

#include "ww/validation.hpp"

using namespace ww;

namespace {

void expect_all_pass(const SuiteReport& r) {
  EXPECT_FALSE(r.checks.empty());
  for (const auto& c : r.checks) EXPECT_TRUE(c.pass) << r.suite << ": " << c.name << " " << c.detail;
}

}  // namespace

TEST(Validation, GoldenSuitePasses) {
  for (std::uint64_t seed : {1u, 2u, 3u}) expect_all_pass(validate_golden(seed));
}

TEST(Validation, IdentitySuitePasses) { expect_all_pass(validate_identities(4)); }

TEST(Validation, IdentitySuiteRejectsLargeDegree) {
  EXPECT_THROW(validate_identities(5), InvalidArgument);
  EXPECT_THROW(validate_identities(0), InvalidArgument);
}

TEST(Validation, MonteCarloSuiteShape) {
  const auto rep = validate_montecarlo(20000, 4);
  EXPECT_GE(rep.checks.size(), 20u);
  for (const auto& c : rep.checks) EXPECT_TRUE(std::isfinite(c.stats.zscore)) << c.stats.label;
}
