#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cfsvp/errors.hpp"
#include "cfsvp/oracle.hpp"
#include "support.hpp"

using namespace cfsvp;
using cfsvp::testing::random_t;
using cfsvp::testing::rel_close;

TEST(BruteForceSvp, Examples) {
  const std::vector<double> a{0.8, 0.4};
  const auto r1 = brute_force_svp(a);
  EXPECT_EQ(r1.a_star, (Coefficients{1, 0}));
  EXPECT_NEAR(r1.objective, 0.36, 1e-15);

  const std::vector<double> b{0.75, 0.65};
  const auto r2 = brute_force_svp(b, 3);
  EXPECT_EQ(r2.a_star, (Coefficients{1, 1}));
  EXPECT_NEAR(r2.objective, 0.04, 1e-14);

  const std::vector<double> c{-0.75, 0.65};
  EXPECT_EQ(brute_force_svp(c).a_star, (Coefficients{-1, 1}));
}

TEST(BruteForceTopL, Examples) {
  const std::vector<double> a{0.75, 0.65};
  const auto l3 = brute_force_topL(a, 3);
  ASSERT_EQ(l3.entries.size(), 3u);
  EXPECT_NEAR(l3.entries[0].objective, 0.04, 1e-14);
  EXPECT_NEAR(l3.entries[1].objective, 0.16, 1e-14);
  EXPECT_NEAR(l3.entries[2].objective, 0.36, 1e-14);

  const std::vector<double> b{0.9, 0.0};
  EXPECT_EQ(brute_force_topL(b, 5).entries.size(), 2u);
  EXPECT_NEAR(brute_force_topL(a, 1).entries[0].objective, brute_force_svp(a).objective, 1e-15);
}

TEST(BoxBounds, Values) {
  const std::vector<double> t{0.8, 0.4};
  EXPECT_EQ(svp_box_bound(t), 2);
  EXPECT_EQ(topl_box_bound(t), 3);
}

TEST(BruteForceSvp, SignedPermutationInvariance) {
  std::mt19937_64 gen(41);
  for (int rep = 0; rep < 100; ++rep) {
    auto t = random_t(4, 0.95, gen);
    const double base = brute_force_svp(t).objective;
    std::shuffle(t.begin(), t.end(), gen);
    t[rep % 4] = -t[rep % 4];
    EXPECT_TRUE(rel_close(brute_force_svp(t).objective, base, 1e-12));
  }
}

TEST(BruteForceSvp, LargerBoxDoesNotChangeOptimum) {
  std::mt19937_64 gen(42);
  for (int rep = 0; rep < 100; ++rep) {
    const auto t = random_t(3, 0.97, gen);
    const auto b = static_cast<std::size_t>(svp_box_bound(t));
    const auto r0 = brute_force_svp(t, b);
    const auto r1 = brute_force_svp(t, b + 1);
    EXPECT_EQ(r0.objective, r1.objective);
    EXPECT_EQ(r0.a_star, r1.a_star);
  }
}

TEST(Oracle, Limits) {
  const std::vector<double> wide{0.9999999, 0.0};
  EXPECT_NO_THROW(brute_force_svp(wide));
  EXPECT_THROW(brute_force_topL(wide, 3), OracleLimitError);
  const std::vector<double> thin{1.0 - 1e-14};
  EXPECT_THROW(brute_force_svp(thin), OracleLimitError);
  const std::vector<double> bad{0.8, 0.7};
  EXPECT_THROW(brute_force_svp(bad), InputError);
  OracleLimits tight;
  tight.max_points = 10;
  std::mt19937_64 gen(43);
  EXPECT_THROW(brute_force_topL(random_t(6, 0.999, gen), 5, 0, tight), OracleLimitError);
}
