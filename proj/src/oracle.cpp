#include "cfsvp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "cfsvp/errors.hpp"

namespace cfsvp {

namespace {

long double residual_of(std::span<const double> t) {
  if (t.empty()) throw InputError("oracle needs a nonempty vector");
  long double norm2 = 0.0L;
  for (double x : t) {
    if (!std::isfinite(x)) throw InputError("oracle input has a non-finite entry");
    norm2 += static_cast<long double>(x) * x;
  }
  const long double r = 1.0L - norm2;
  if (!(r > 0.0L)) throw InputError("oracle input must satisfy |t| < 1");
  return r;
}

std::int64_t box_bound_for(long double level, long double residual) {
  return static_cast<std::int64_t>(std::ceil(std::sqrt(level / residual)));
}

// Walks every integer point of [-B, B]^n whose partial norm under the explicit
// Cholesky factor stays within `level` (plus slack), calling visit(a) at the leaves.
template <typename Visit>
class BoxEnumerator {
 public:
  BoxEnumerator(std::span<const double> t, std::int64_t bound, double level, const OracleLimits& limits,
                Visit visit)
      : n_(t.size()), bound_(bound), limits_(limits), visit_(std::move(visit)), a_(t.size(), 0) {
    const auto n = static_cast<Eigen::Index>(n_);
    Eigen::VectorXd tv(n);
    for (Eigen::Index i = 0; i < n; ++i) tv(i) = t[static_cast<std::size_t>(i)];
    const Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(n, n) - tv * tv.transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) throw NumericError("Gram matrix is not positive definite");
    upper_ = llt.matrixU();
    limit_ = level * (1.0 + 1e-9) + 1e-9;
  }

  void run() { descend(n_ - 1, 0.0); }
  std::uint64_t points() const { return points_; }

 private:
  void descend(std::size_t k, double partial) {
    double acc = 0.0;
    for (std::size_t j = k + 1; j < n_; ++j) acc += upper_(k, j) * static_cast<double>(a_[j]);
    const double ukk = upper_(k, k);
    const double center = -acc / ukk;
    const double width = std::sqrt(std::max(limit_ - partial, 0.0)) / std::fabs(ukk);
    const auto lo = std::max<std::int64_t>(-bound_, static_cast<std::int64_t>(std::floor(center - width)) - 1);
    const auto hi = std::min<std::int64_t>(bound_, static_cast<std::int64_t>(std::ceil(center + width)) + 1);
    for (std::int64_t v = lo; v <= hi; ++v) {
      if (++points_ > limits_.max_points) {
        throw OracleLimitError("oracle enumeration exceeded " + std::to_string(limits_.max_points) + " points");
      }
      a_[k] = v;
      const double row = ukk * static_cast<double>(v) + acc;
      const double next = partial + row * row;
      if (next > limit_) continue;
      if (k == 0) {
        visit_(a_);
      } else {
        descend(k - 1, next);
      }
    }
    a_[k] = 0;
  }

  std::size_t n_;
  std::int64_t bound_;
  OracleLimits limits_;
  Visit visit_;
  Coefficients a_;
  Eigen::MatrixXd upper_;
  double limit_ = 0.0;
  std::uint64_t points_ = 0;
};

std::int64_t resolve_bound(std::size_t requested, std::int64_t computed, const OracleLimits& limits) {
  const std::int64_t b = requested != 0 ? static_cast<std::int64_t>(requested) : computed;
  if (b > limits.max_bound) {
    throw OracleLimitError("oracle box bound " + std::to_string(b) + " exceeds " +
                           std::to_string(limits.max_bound));
  }
  return std::max<std::int64_t>(b, 1);
}

void check_floor(long double residual, const OracleLimits& limits) {
  if (residual < limits.residual_floor) throw OracleLimitError("1 - |t|^2 is below the oracle floor");
}

bool first_nonzero_positive(const Coefficients& a) {
  for (std::int64_t x : a) {
    if (x != 0) return x > 0;
  }
  return false;
}

}  // namespace

double direct_objective(std::span<const double> t, std::span<const std::int64_t> a) {
  long double norm2 = 0.0L;
  long double dot = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    norm2 += static_cast<long double>(a[i]) * a[i];
    dot += static_cast<long double>(t[i]) * a[i];
  }
  return static_cast<double>(norm2 - dot * dot);
}

std::int64_t svp_box_bound(std::span<const double> t) {
  const long double residual = residual_of(t);
  long double max_t2 = 0.0L;
  for (double x : t) max_t2 = std::max(max_t2, static_cast<long double>(x) * x);
  return box_bound_for(1.0L - max_t2, residual);
}

std::int64_t topl_box_bound(std::span<const double> t) {
  return box_bound_for(1.0L, residual_of(t));
}

SearchResult brute_force_svp(std::span<const double> t, std::size_t box_bound, const OracleLimits& limits) {
  const long double residual = residual_of(t);
  check_floor(residual, limits);
  const std::int64_t bound = resolve_bound(box_bound, svp_box_bound(t), limits);

  long double max_t2 = 0.0L;
  for (double x : t) max_t2 = std::max(max_t2, static_cast<long double>(x) * x);
  const double level = static_cast<double>(1.0L - max_t2);

  SearchResult best;
  bool found = false;
  auto visit = [&](const Coefficients& a) {
    if (std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x == 0; })) return;
    const double obj = direct_objective(t, a);
    if (!found || obj < best.objective) {
      best.a_star = a;
      best.objective = obj;
      found = true;
    }
  };
  BoxEnumerator<decltype(visit)> walker(t, bound, level, limits, visit);
  walker.run();
  if (!found) throw NumericError("oracle found no candidate inside the unit-vector radius");
  best.nodes_visited = walker.points();

  long double dot = 0.0L;
  for (std::size_t i = 0; i < t.size(); ++i) dot += static_cast<long double>(t[i]) * best.a_star[i];
  if (dot < 0.0L || (dot == 0.0L && !first_nonzero_positive(best.a_star))) {
    for (auto& x : best.a_star) x = -x;
  }
  return best;
}

CandidateList brute_force_topL(std::span<const double> t, std::size_t L, std::size_t box_bound,
                               const OracleLimits& limits) {
  if (L == 0) throw InputError("list size L must be at least 1");
  const long double residual = residual_of(t);
  check_floor(residual, limits);
  const std::int64_t bound = resolve_bound(box_bound, topl_box_bound(t), limits);

  CandidateList out;
  out.requested = L;
  auto visit = [&](const Coefficients& a) {
    if (!first_nonzero_positive(a)) return;
    const double obj = direct_objective(t, a);
    if (obj < 1.0) out.entries.push_back(Candidate{a, obj});
  };
  BoxEnumerator<decltype(visit)> walker(t, bound, 1.0, limits, visit);
  walker.run();

  std::sort(out.entries.begin(), out.entries.end(), [](const Candidate& x, const Candidate& y) {
    if (x.objective != y.objective) return x.objective < y.objective;
    return x.a < y.a;
  });
  if (out.entries.size() > L) out.entries.resize(L);
  return out;
}

}  // namespace cfsvp
