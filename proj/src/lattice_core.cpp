#include "cfsvp/lattice_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cfsvp/errors.hpp"

namespace cfsvp {

namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InputError(std::string(what) + " has a non-finite entry");
  }
}

bool all_zero(std::span<const std::int64_t> a) {
  return std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x == 0; });
}

// residual * |a|^2 + scale2 * (|a|^2 |v|^2 - (v^T a)^2), with the bracket expanded
// as sum_{i<j} (a_i v_j - a_j v_i)^2 (Lagrange identity) so no cancellation occurs.
// Only pairs touching the support of a contribute individually; the rest collapse
// into |a|^2 times the squared mass of v outside the support.
double stable_form(std::span<const double> v, double residual, double scale2,
                   std::span<const std::int64_t> a) {
  std::vector<std::size_t> support;
  long double a2 = 0.0L;
  long double off_support = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0) {
      support.push_back(i);
      a2 += static_cast<long double>(a[i]) * a[i];
    } else {
      off_support += static_cast<long double>(v[i]) * v[i];
    }
  }
  long double cross = a2 * off_support;
  for (std::size_t x = 0; x < support.size(); ++x) {
    const std::size_t i = support[x];
    for (std::size_t y = x + 1; y < support.size(); ++y) {
      const std::size_t j = support[y];
      const long double m = static_cast<long double>(a[i]) * v[j] - static_cast<long double>(a[j]) * v[i];
      cross += m * m;
    }
  }
  return static_cast<double>(residual * a2 + scale2 * cross);
}

ScaledChannel build_scaled(std::span<const double> t_raw, double residual) {
  const std::size_t n = t_raw.size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::fabs(t_raw[x]) > std::fabs(t_raw[y]);
  });

  std::vector<int> sign(n);
  ScaledChannel sc;
  sc.t.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double v = t_raw[order[k]];
    sign[k] = v < 0.0 ? -1 : 1;
    sc.t[k] = std::fabs(v);
  }
  sc.perm = SignedPermutation(std::move(order), std::move(sign));

  // f[i] = residual + sum_{l>i} t_l^2 via suffix sums; never subtracts.
  sc.f.assign(n + 1, 0.0);
  long double tail = 0.0L;
  sc.f[n] = residual;
  for (std::size_t i = n; i-- > 1;) {
    tail += static_cast<long double>(sc.t[i]) * sc.t[i];
    sc.f[i] = static_cast<double>(residual + tail);
  }
  sc.f[0] = 1.0;
  tail += n > 0 ? static_cast<long double>(sc.t[0]) * sc.t[0] : 0.0L;
  sc.tnorm2 = static_cast<double>(tail);

  sc.q.resize(n);
  for (std::size_t k = 0; k < n; ++k) sc.q[k] = sc.f[k + 1] / sc.f[k];
  return sc;
}

}  // namespace

void validate(const ChannelInstance& ch) {
  if (ch.h.empty()) throw InputError("channel must have at least one entry");
  if (!std::isfinite(ch.power) || ch.power <= 0.0) throw InputError("power P must be positive and finite");
  require_finite(ch.h, "channel h");
  if (std::all_of(ch.h.begin(), ch.h.end(), [](double x) { return x == 0.0; })) {
    throw InputError("channel h is the zero vector");
  }
}

SignedPermutation::SignedPermutation(std::vector<std::size_t> source, std::vector<int> sign)
    : source_(std::move(source)), sign_(std::move(sign)) {
  if (source_.size() != sign_.size()) throw InputError("permutation and sign lengths differ");
  std::vector<bool> seen(source_.size(), false);
  for (std::size_t s : source_) {
    if (s >= source_.size() || seen[s]) throw InputError("source indices are not a bijection");
    seen[s] = true;
  }
  for (int g : sign_) {
    if (g != 1 && g != -1) throw InputError("signs must be +1 or -1");
  }
}

SignedPermutation SignedPermutation::identity(std::size_t n) {
  std::vector<std::size_t> source(n);
  std::iota(source.begin(), source.end(), std::size_t{0});
  return SignedPermutation(std::move(source), std::vector<int>(n, 1));
}

std::vector<double> SignedPermutation::apply(std::span<const double> original) const {
  if (original.size() != size()) throw InputError("length mismatch in SignedPermutation::apply");
  std::vector<double> out(size());
  for (std::size_t k = 0; k < size(); ++k) out[k] = sign_[k] * original[source_[k]];
  return out;
}

Coefficients SignedPermutation::apply(std::span<const std::int64_t> original) const {
  if (original.size() != size()) throw InputError("length mismatch in SignedPermutation::apply");
  Coefficients out(size());
  for (std::size_t k = 0; k < size(); ++k) out[k] = sign_[k] * original[source_[k]];
  return out;
}

Coefficients SignedPermutation::restore(std::span<const std::int64_t> canonical) const {
  if (canonical.size() != size()) throw InputError("length mismatch in SignedPermutation::restore");
  Coefficients out(size());
  for (std::size_t k = 0; k < size(); ++k) out[source_[k]] = sign_[k] * canonical[k];
  return out;
}

std::vector<double> scale_channel(const ChannelInstance& ch) {
  validate(ch);
  long double h2 = 0.0L;
  for (double x : ch.h) h2 += static_cast<long double>(x) * x;
  const double c = static_cast<double>(std::sqrt(ch.power / (1.0L + ch.power * h2)));
  std::vector<double> t(ch.h.size());
  std::transform(ch.h.begin(), ch.h.end(), t.begin(), [c](double x) { return c * x; });
  return t;
}

ScaledChannel canonicalize(std::span<const double> t_raw) {
  if (t_raw.empty()) throw InputError("scaled channel must have at least one entry");
  require_finite(t_raw, "scaled channel t");
  long double norm2 = 0.0L;
  for (double x : t_raw) {
    if (std::fabs(x) >= 1.0) throw InputError("scaled channel entry has magnitude >= 1");
    norm2 += static_cast<long double>(x) * x;
  }
  const long double residual = 1.0L - norm2;
  if (!(residual > 0.0L) || static_cast<double>(residual) <= 0.0) {
    throw InputError("scaled channel must satisfy |t| < 1");
  }
  return build_scaled(t_raw, static_cast<double>(residual));
}

ScaledChannel canonicalize(const ChannelInstance& ch) {
  const std::vector<double> t_raw = scale_channel(ch);
  long double h2 = 0.0L;
  for (double x : ch.h) h2 += static_cast<long double>(x) * x;
  const double residual = static_cast<double>(1.0L / (1.0L + ch.power * h2));
  if (!(residual > 0.0)) throw InputError("1 / (1 + P|h|^2) underflows");
  return build_scaled(t_raw, residual);
}

Coefficients restore(const SignedPermutation& perm, std::span<const std::int64_t> a_canonical) {
  return perm.restore(a_canonical);
}

Eigen::MatrixXd materialize_R(const ScaledChannel& sc) {
  const auto n = static_cast<Eigen::Index>(sc.size());
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r(i, i) = std::sqrt(sc.q[i]);
    const double scale = -sc.t[i] / std::sqrt(sc.f[i] * sc.f[i + 1]);
    for (Eigen::Index j = i + 1; j < n; ++j) r(i, j) = scale * sc.t[j];
  }
  return r;
}

double objective(const ScaledChannel& sc, std::span<const std::int64_t> a) {
  if (a.size() != sc.size()) throw InputError("coefficient length does not match channel");
  return stable_form(sc.t, sc.residual(), 1.0, a);
}

double channel_objective(const ChannelInstance& ch, std::span<const std::int64_t> a) {
  validate(ch);
  if (a.size() != ch.size()) throw InputError("coefficient length does not match channel");
  long double h2 = 0.0L;
  for (double x : ch.h) h2 += static_cast<long double>(x) * x;
  const long double denom = 1.0L + ch.power * h2;
  return stable_form(ch.h, static_cast<double>(1.0L / denom), static_cast<double>(ch.power / denom), a);
}

double rate_from_objective(double obj) {
  if (!(obj > 0.0)) throw NumericError("objective is not positive");
  return std::max(0.0, 0.5 * std::log2(1.0 / obj));
}

double computation_rate(const ChannelInstance& ch, std::span<const std::int64_t> a) {
  if (all_zero(a)) throw InputError("coefficient vector is zero");
  const double denom = channel_objective(ch, a);
  if (!(denom > 0.0)) throw NumericError("a^T G a is not positive; G lost definiteness numerically");
  return rate_from_objective(denom);
}

bool e1_shortcut(const ScaledChannel& sc) {
  const double t1sq = sc.t.empty() ? 0.0 : sc.t[0] * sc.t[0];
  for (std::size_t i = 1; i < sc.size(); ++i) {
    if (sc.t[i] * sc.t[i] > t1sq * sc.f[i]) return false;
  }
  return true;
}

double objective_lower_bound(const ScaledChannel& sc) {
  return std::sqrt(*std::min_element(sc.q.begin(), sc.q.end()));
}

std::int64_t round_nearest(double x) {
  const double fl = std::floor(x);
  const double frac = x - fl;
  double r;
  if (frac < 0.5) {
    r = fl;
  } else if (frac > 0.5) {
    r = fl + 1.0;
  } else {
    r = x > 0.0 ? fl : fl + 1.0;
  }
  return static_cast<std::int64_t>(r);
}

}  // namespace cfsvp
