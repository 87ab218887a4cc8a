#include "cfsvp/list_search.hpp"

#include <algorithm>
#include <cmath>

#include "cfsvp/errors.hpp"

namespace cfsvp {

namespace {

// When d_1 is an exact integer and a_1 == d_1, the mirror -a is reached too
// (its level-1 scan starts at ceil(-d_1) = -a_1). Keep only the copy whose
// last nonzero tail entry is positive.
bool is_mirrored_twin(const std::vector<std::int64_t>& a, std::size_t n, double d1) {
  if (static_cast<double>(a[0]) != d1) return false;
  for (std::size_t i = n; i-- > 1;) {
    if (a[i] != 0) return a[i] < 0;
  }
  return false;
}

}  // namespace

CandidateList list_search(const ScaledChannel& sc, std::size_t L) {
  if (L == 0) throw InputError("list size L must be at least 1");
  const std::size_t n = sc.size();
  const auto& t = sc.t;
  const auto& f = sc.f;
  const auto& q = sc.q;

  std::vector<std::int64_t> a(n, 0);
  a[0] = 1;
  std::vector<std::int64_t> s(n, 1);
  std::vector<double> p(n + 1, 0.0);
  std::vector<double> d(n, 0.0);
  std::vector<double> sigma(n, 0.0);
  double beta2 = 1.0;
  double delta = q[0];
  std::size_t k = 0;

  CandidateList out;
  out.requested = L;
  auto& list = out.entries;
  list.reserve(L);

  auto worst = [&list]() {
    return std::max_element(list.begin(), list.end(), [](const Candidate& x, const Candidate& y) {
      return x.objective < y.objective;
    });
  };

  while (true) {
    const double alpha = sigma[k] + delta;
    if (alpha < beta2) {
      if (k > 0) {
        p[k] = p[k + 1] + t[k] * static_cast<double>(a[k]);
        --k;
        sigma[k] = alpha;
        d[k] = t[k] * p[k + 1] / f[k + 1];
        if (k > 0) {
          a[k] = round_nearest(d[k]);
          s[k] = step_sign(d[k] - static_cast<double>(a[k]));
        } else {
          a[0] = static_cast<std::int64_t>(std::ceil(d[0]));
          s[0] = 1;
        }
        const double diff = static_cast<double>(a[k]) - d[k];
        delta = q[k] * diff * diff;
      } else {
        if (!is_mirrored_twin(a, n, d[0])) {
          if (list.size() == L) {
            auto m = worst();
            m->a = a;
            m->objective = alpha;
          } else {
            list.push_back(Candidate{a, alpha});
          }
          if (list.size() == L) beta2 = worst()->objective;
        }
        a[0] += s[0];
        const double diff = static_cast<double>(a[0]) - d[0];
        delta = q[0] * diff * diff;
      }
    } else {
      if (k + 1 >= n) break;
      ++k;
      a[k] += s[k];
      s[k] = -s[k] - step_sign(s[k]);
      const double diff = static_cast<double>(a[k]) - d[k];
      delta = q[k] * diff * diff;
    }
  }

  std::sort(list.begin(), list.end(), [](const Candidate& x, const Candidate& y) {
    if (x.objective != y.objective) return x.objective < y.objective;
    return x.a < y.a;
  });
  return out;
}

std::vector<RatedCandidate> list_solve(const ChannelInstance& ch, std::size_t L) {
  const ScaledChannel sc = canonicalize(ch);
  const CandidateList list = list_search(sc, L);
  std::vector<RatedCandidate> out;
  out.reserve(list.entries.size());
  for (const auto& c : list.entries) {
    out.push_back(RatedCandidate{restore(sc.perm, c.a), c.objective, rate_from_objective(c.objective)});
  }
  return out;
}

}  // namespace cfsvp
