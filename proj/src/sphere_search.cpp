#include "cfsvp/sphere_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cfsvp/errors.hpp"

namespace cfsvp {

SearchResult baseline_search(const Eigen::MatrixXd& R) {
  if (R.rows() != R.cols() || R.rows() == 0) throw InputError("basis must be a nonempty square matrix");
  const std::size_t n = static_cast<std::size_t>(R.rows());
  for (std::size_t i = 0; i < n; ++i) {
    const double rii = R(i, i);
    if (!std::isfinite(rii) || rii == 0.0) throw InputError("basis is singular");
  }

  std::vector<std::int64_t> a(n, 0);
  std::vector<std::int64_t> s(n, 1);
  std::vector<double> d(n, 0.0);
  std::vector<double> sigma(n, 0.0);

  // d_k = -(1/r_kk) sum_{j>k} r_kj a_j
  auto center = [&](std::size_t k) {
    double acc = 0.0;
    for (std::size_t j = k + 1; j < n; ++j) acc += R(k, j) * static_cast<double>(a[j]);
    d[k] = -acc / R(k, k);
    a[k] = round_nearest(d[k]);
    s[k] = step_sign(d[k] - static_cast<double>(a[k]));
  };
  auto zigzag = [&](std::size_t k) {
    a[k] += s[k];
    s[k] = -s[k] - step_sign(s[k]);
  };

  SearchResult result;
  double beta2 = std::numeric_limits<double>::infinity();
  std::size_t k = n - 1;
  center(k);
  while (true) {
    const double rkk = R(k, k);
    const double diff = static_cast<double>(a[k]) - d[k];
    const double alpha = sigma[k] + rkk * rkk * diff * diff;
    ++result.nodes_visited;
    if (alpha < beta2) {
      if (k > 0) {
        --k;
        sigma[k] = alpha;
        center(k);
        continue;
      }
      if (std::any_of(a.begin(), a.end(), [](std::int64_t x) { return x != 0; })) {
        result.a_star = a;
        beta2 = alpha;
        if (k + 1 == n) break;
        ++k;
      }
      zigzag(k);
    } else {
      if (k + 1 == n) break;
      ++k;
      zigzag(k);
    }
  }
  result.objective = beta2;
  return result;
}

namespace {

// Ordered search core. With Shrink the radius follows every improvement (the
// real search); without it the radius stays at 1 - t_1^2 and level 1 keeps
// stepping after each hit, which walks the whole fixed-radius tree.
template <bool Shrink>
SearchResult ordered_search(const ScaledChannel& sc, const SearchObserver* observer) {
  const std::size_t n = sc.size();
  const auto& t = sc.t;
  const auto& f = sc.f;
  const auto& q = sc.q;

  SearchState st;
  st.k = 0;
  st.a.assign(n + 1, 0);
  st.a[0] = 1;
  st.p.assign(n + 1, 0.0);
  st.d.assign(n, 0.0);
  st.sigma.assign(n, 0.0);
  st.s.assign(n, 1);
  st.flag.assign(n, 1);
  st.beta2 = q[0];
  st.delta = q[0];

  SearchResult result;
  result.a_star.assign(n, 0);
  result.a_star[0] = 1;

  auto& k = st.k;
  auto& a = st.a;
  auto& s = st.s;
  auto& flag = st.flag;

  // Next candidate at level k, never going below a_{k+1}.
  auto step = [&] {
    a[k] += s[k];
    if (a[k] == a[k + 1]) {
      flag[k] = 1;
      s[k] = -s[k] - step_sign(s[k]);
    } else if (flag[k]) {
      s[k] = 1;
    } else {
      s[k] = -s[k] - step_sign(s[k]);
    }
    const double diff = static_cast<double>(a[k]) - st.d[k];
    st.delta = q[k] * diff * diff;
  };

  while (true) {
    if (observer && *observer) (*observer)(st);
    const double alpha = st.sigma[k] + st.delta;
    ++result.nodes_visited;
    if (alpha < st.beta2) {
      if (k > 0) {
        st.p[k] = st.p[k + 1] + t[k] * static_cast<double>(a[k]);
        --k;
        st.sigma[k] = alpha;
        st.d[k] = t[k] * st.p[k + 1] / f[k + 1];
        a[k] = round_nearest(st.d[k]);
        flag[k] = 0;
        if (a[k] <= a[k + 1]) {
          a[k] = a[k + 1];
          flag[k] = 1;
          s[k] = 1;
        } else {
          s[k] = step_sign(st.d[k] - static_cast<double>(a[k]));
        }
        const double diff = static_cast<double>(a[k]) - st.d[k];
        st.delta = q[k] * diff * diff;
      } else if constexpr (Shrink) {
        st.beta2 = alpha;
        std::copy(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n), result.a_star.begin());
      } else {
        step();
      }
    } else {
      if (k + 1 >= n) break;
      ++k;
      step();
    }
  }
  result.objective = st.beta2;
  return result;
}

}  // namespace

SearchResult modified_search(const ScaledChannel& sc, const SearchObserver& observer) {
  return ordered_search<true>(sc, &observer);
}

std::uint64_t count_fixed_radius_nodes(const ScaledChannel& sc) {
  // The first evaluation only re-tests the e_1 incumbent.
  return ordered_search<false>(sc, nullptr).nodes_visited - 1;
}

Solution solve(const ChannelInstance& ch, const SolveOptions& options) {
  const ScaledChannel sc = canonicalize(ch);
  Solution out;
  if (options.e1_fast_path && e1_shortcut(sc)) {
    out.stats.a_star.assign(sc.size(), 0);
    out.stats.a_star[0] = 1;
    out.stats.objective = sc.q[0];
    out.stats.used_shortcut = true;
  } else {
    out.stats = modified_search(sc);
  }
  out.a = restore(sc.perm, out.stats.a_star);
  out.objective = out.stats.objective;
  out.rate = computation_rate(ch, out.a);
  return out;
}

std::uint64_t count_tree_nodes(const ScaledChannel& sc) {
  const std::size_t n = sc.size();
  const auto& t = sc.t;
  const auto& f = sc.f;
  const auto& q = sc.q;
  const double beta2 = q[0];

  std::vector<std::int64_t> a(n + 1, 0);
  std::vector<std::int64_t> hi(n, 0);
  std::vector<double> p(n + 1, 0.0);
  std::vector<double> d(n, 0.0);
  std::vector<double> sigma(n, 0.0);

  // Scan the integer interval that can satisfy q_k (a_k - d_k)^2 < beta^2 - sigma_k,
  // clipped below by a_{k+1}; every candidate is still tested exactly.
  auto enter = [&](std::size_t k) {
    d[k] = t[k] * p[k + 1] / f[k + 1];
    const double width = std::sqrt(std::max(beta2 - sigma[k], 0.0) / q[k]);
    a[k] = std::max(a[k + 1], static_cast<std::int64_t>(std::floor(d[k] - width)));
    hi[k] = static_cast<std::int64_t>(std::ceil(d[k] + width));
  };

  std::uint64_t count = 0;
  std::size_t k = n - 1;
  enter(k);
  while (true) {
    if (a[k] > hi[k]) {
      if (k + 1 == n) break;
      ++k;
      ++a[k];
      continue;
    }
    const double diff = static_cast<double>(a[k]) - d[k];
    const double alpha = sigma[k] + q[k] * diff * diff;
    if (alpha < beta2) {
      ++count;
      if (k > 0) {
        p[k] = p[k + 1] + t[k] * static_cast<double>(a[k]);
        sigma[k - 1] = alpha;
        --k;
        enter(k);
        continue;
      }
    }
    ++a[k];
  }
  return count;
}

}  // namespace cfsvp
