#include <algorithm>
#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "cfsvp/errors.hpp"
#include "cfsvp/oracle.hpp"
#include "cfsvp/sphere_search.hpp"
#include "support.hpp"

using namespace cfsvp;
using cfsvp::testing::gaussian_channel;
using cfsvp::testing::rel_close;

namespace {

ScaledChannel canon(std::vector<double> t) { return canonicalize(std::span<const double>(t)); }

// Independent count of ordered nonnegative partial vectors inside the fixed
// radius, using the explicit factor and a plain box scan per level. e_1 lies
// exactly on the radius, so points within rounding of it are left out.
std::uint64_t box_count_partials(const ScaledChannel& sc) {
  const Eigen::MatrixXd R = materialize_R(sc);
  const auto n = static_cast<Eigen::Index>(sc.size());
  const double beta2 = sc.q[0];
  const auto bound = static_cast<std::int64_t>(std::ceil(std::sqrt(1.0 / sc.residual())));
  std::uint64_t count = 0;
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  std::function<void(Eigen::Index, std::int64_t)> rec = [&](Eigen::Index k, std::int64_t floor_value) {
    for (std::int64_t v = floor_value; v <= bound; ++v) {
      a(k) = static_cast<double>(v);
      const Eigen::Index len = n - k;
      const double norm2 = (R.block(k, k, len, len) * a.tail(len)).squaredNorm();
      if (norm2 < beta2 * (1.0 - 1e-10)) ++count;
      if (k > 0) rec(k - 1, v);
    }
    a(k) = 0.0;
  };
  rec(n - 1, 0);
  return count;
}

}  // namespace

TEST(ModifiedSearch, Examples) {
  const auto r1 = modified_search(canon({0.8, 0.4}));
  EXPECT_EQ(r1.a_star, (Coefficients{1, 0}));
  EXPECT_NEAR(r1.objective, 0.36, 1e-15);

  const auto r2 = modified_search(canon({0.75, 0.65}));
  EXPECT_EQ(r2.a_star, (Coefficients{1, 1}));
  EXPECT_NEAR(r2.objective, 0.04, 1e-14);
}

TEST(BaselineSearch, Examples) {
  const auto r = baseline_search(materialize_R(canon({0.75, 0.65})));
  EXPECT_EQ(std::abs(r.a_star[0]), 1);
  EXPECT_EQ(r.a_star[0], r.a_star[1]);
  EXPECT_NEAR(r.objective, 0.04, 1e-14);

  const auto id = baseline_search(Eigen::MatrixXd::Identity(3, 3));
  EXPECT_NEAR(id.objective, 1.0, 0.0);
  EXPECT_EQ(std::count(id.a_star.begin(), id.a_star.end(), 0), 2);
}

TEST(BaselineSearch, RejectsBadBasis) {
  EXPECT_THROW(baseline_search(Eigen::MatrixXd(2, 3)), InputError);
  EXPECT_THROW(baseline_search(Eigen::MatrixXd::Zero(2, 2)), InputError);
}

TEST(Solve, RestoresOriginalCoordinates) {
  const auto sol = solve(ChannelInstance{{3.0, 4.0}, 1.0});
  EXPECT_EQ(sol.a, (Coefficients{1, 1}));
  EXPECT_NEAR(sol.rate, 0.5 * std::log2(1.0 / channel_objective(ChannelInstance{{3.0, 4.0}, 1.0}, sol.a)),
              1e-12);

  const auto neg = solve(ChannelInstance{{-4.0, 3.0}, 1.0});
  EXPECT_EQ(neg.a, (Coefficients{-1, 1}));
}

TEST(Solve, FastPathAgreesWithSearch) {
  for (std::uint64_t j = 0; j < 300; ++j) {
    const auto ch = gaussian_channel(2 + j % 6, 10.0 * static_cast<double>(j % 3), 21, j);
    const auto fast = solve(ch);
    const auto full = solve(ch, SolveOptions{false});
    EXPECT_FALSE(full.stats.used_shortcut);
    EXPECT_TRUE(rel_close(fast.objective, full.objective, 1e-12));
    EXPECT_NEAR(fast.rate, full.rate, 1e-12);
  }
}

TEST(ModifiedSearch, ObserverInvariants) {
  for (std::uint64_t j = 0; j < 200; ++j) {
    const auto sc = canonicalize(gaussian_channel(2 + j % 7, 20.0, 4, j));
    const Eigen::MatrixXd R = materialize_R(sc);
    const std::size_t n = sc.size();
    double last_beta2 = sc.q[0];
    std::uint64_t calls = 0;
    const auto res = modified_search(sc, [&](const SearchState& st) {
      ++calls;
      EXPECT_LE(st.beta2, last_beta2);
      last_beta2 = st.beta2;
      // a_k >= a_{k+1} >= ... >= 0 on the active suffix.
      for (std::size_t i = st.k; i < n; ++i) EXPECT_GE(st.a[i], st.a[i + 1]);
      EXPECT_GE(st.a[n - 1], 0);
      // p_{k+1} = sum_{i>k} t_i a_i and sigma_k + delta = |R_{k:n} a_{k:n}|^2.
      double p = 0.0;
      for (std::size_t i = st.k + 1; i < n; ++i) p += sc.t[i] * static_cast<double>(st.a[i]);
      EXPECT_NEAR(st.p[st.k + 1], p, 1e-9 * (1.0 + std::fabs(p)));
      Eigen::VectorXd tail(static_cast<Eigen::Index>(n - st.k));
      for (std::size_t i = st.k; i < n; ++i) tail(static_cast<Eigen::Index>(i - st.k)) = static_cast<double>(st.a[i]);
      const auto k = static_cast<Eigen::Index>(st.k);
      const auto len = static_cast<Eigen::Index>(n) - k;
      const double norm2 = (R.block(k, k, len, len) * tail).squaredNorm();
      EXPECT_NEAR(st.sigma[st.k] + st.delta, norm2, 1e-9 * (1.0 + norm2));
      if (st.k + 1 < n) {
        EXPECT_NEAR(st.d[st.k], sc.t[st.k] * st.p[st.k + 1] / sc.f[st.k + 1], 1e-12 * (1.0 + std::fabs(st.d[st.k])));
      }
    });
    EXPECT_EQ(calls, res.nodes_visited);
  }
}

TEST(ModifiedSearch, IncumbentStrictlyDecreases) {
  for (std::uint64_t j = 0; j < 200; ++j) {
    const auto sc = canonicalize(gaussian_channel(3 + j % 5, 10.0, 8, j));
    std::vector<double> radii{sc.q[0]};
    modified_search(sc, [&](const SearchState& st) {
      if (st.beta2 != radii.back()) radii.push_back(st.beta2);
    });
    for (std::size_t i = 1; i < radii.size(); ++i) EXPECT_LT(radii[i], radii[i - 1]);
  }
}

TEST(ModifiedSearch, OutputOrderingAndBounds) {
  for (std::uint64_t j = 0; j < 500; ++j) {
    const auto sc = canonicalize(gaussian_channel(2 + j % 10, 10.0 * static_cast<double>(j % 3), 12, j));
    const auto res = modified_search(sc);
    double ta = 0.0;
    for (std::size_t i = 0; i < sc.size(); ++i) {
      if (i + 1 < sc.size()) EXPECT_GE(res.a_star[i], res.a_star[i + 1]);
      EXPECT_GE(res.a_star[i], 0);
      ta += sc.t[i] * static_cast<double>(res.a_star[i]);
    }
    EXPECT_GE(ta, 0.0);
    const double lb = objective_lower_bound(sc);
    EXPECT_GE(res.objective * (1 + 1e-12), std::max(sc.residual(), lb * lb));
    EXPECT_TRUE(rel_close(res.objective, objective(sc, res.a_star), 1e-9));
  }
}

TEST(ModifiedSearch, ShortcutConsistency) {
  std::size_t hits = 0;
  for (std::uint64_t j = 0; j < 500; ++j) {
    const auto sc = canonicalize(gaussian_channel(2 + j % 4, 0.0, 13, j));
    if (!e1_shortcut(sc)) continue;
    ++hits;
    EXPECT_EQ(modified_search(sc).objective, sc.q[0]);
  }
  EXPECT_GT(hits, 100u);
}

TEST(ModifiedSearch, MatchesOracleAndBaseline) {
  for (std::uint64_t j = 0; j < 300; ++j) {
    const auto sc = canonicalize(gaussian_channel(2 + j % 5, 10.0 * static_cast<double>(j % 3), 14, j));
    const auto ref = brute_force_svp(sc.t);
    const auto fast = modified_search(sc);
    const auto base = baseline_search(materialize_R(sc));
    EXPECT_TRUE(rel_close(fast.objective, ref.objective, 1e-9)) << "trial " << j;
    EXPECT_TRUE(rel_close(base.objective, ref.objective, 1e-9)) << "trial " << j;
  }
}

TEST(CountTreeNodes, Examples) {
  EXPECT_EQ(count_tree_nodes(canon({0.6, 0.0})), 2u);
  // E_2 = {0}, E_1 = {(0, 0)}; e_1 itself sits on the radius.
  EXPECT_EQ(count_tree_nodes(canon({0.8, 0.4})), 2u);
  EXPECT_EQ(count_tree_nodes(canon({0.75, 0.65})), 10u);
}

TEST(CountTreeNodes, MatchesBoxEnumeration) {
  for (std::uint64_t j = 0; j < 200; ++j) {
    const auto sc = canonicalize(gaussian_channel(2 + j % 4, 10.0 * static_cast<double>(j % 3), 15, j));
    EXPECT_EQ(count_tree_nodes(sc), box_count_partials(sc)) << "trial " << j;
  }
}

TEST(CountFixedRadiusNodes, Examples) {
  // Both start at the e_1 leaf; the only further node is a_2 = 1, outside the radius.
  EXPECT_EQ(count_fixed_radius_nodes(canon({0.6, 0.0})), 1u);
  EXPECT_EQ(count_fixed_radius_nodes(canon({0.8, 0.4})), 1u);
}

TEST(NodeCounts, BudgetAndSearchBound) {
  for (std::uint64_t j = 0; j < 1000; ++j) {
    const std::size_t n = std::size_t{2} << (j % 4);
    const auto ch = gaussian_channel(n, 20.0 * static_cast<double>(j % 3), 16, j);
    const auto sc = canonicalize(ch);
    double h2 = 0.0;
    for (double x : ch.h) h2 += x * x;
    const double budget = 2.0 * static_cast<double>(n) * std::sqrt(1.0 + ch.power * h2);
    const auto fixed = count_fixed_radius_nodes(sc);
    EXPECT_LT(static_cast<double>(count_tree_nodes(sc)), budget);
    EXPECT_LT(static_cast<double>(fixed), budget);
    EXPECT_LE(modified_search(sc).nodes_visited, fixed + 1);
  }
}
