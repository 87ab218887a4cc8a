#pragma once

// Problem transformation for the compute-and-forward coefficient search.
//
// A relay with channel h and power P wants the nonzero integer vector a that
// minimizes  a^T G a,  G = I - t t^T,  t = sqrt(P / (1 + P |h|^2)) h.
// G has a closed-form upper-triangular Cholesky factor R, so the problem is a
// shortest-vector problem in the lattice spanned by R.  Everything the search
// needs from R is carried by ScaledChannel::f and ScaledChannel::q.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cfsvp {

using Coefficients = std::vector<std::int64_t>;

struct ChannelInstance {
  std::vector<double> h;  // real channel gains
  double power = 1.0;     // linear SNR P

  std::size_t size() const { return h.size(); }
};

// Throws InputError unless n >= 1, P > 0, h finite and not all zero.
void validate(const ChannelInstance& ch);

// Bijection between original and canonical coordinates with per-slot sign flips:
//   canonical[k] = sign(k) * original[source(k)].
class SignedPermutation {
 public:
  SignedPermutation() = default;
  SignedPermutation(std::vector<std::size_t> source, std::vector<int> sign);

  static SignedPermutation identity(std::size_t n);

  std::size_t size() const { return source_.size(); }
  std::size_t source(std::size_t slot) const { return source_[slot]; }
  int sign(std::size_t slot) const { return sign_[slot]; }

  std::vector<double> apply(std::span<const double> original) const;
  Coefficients apply(std::span<const std::int64_t> original) const;
  Coefficients restore(std::span<const std::int64_t> canonical) const;

  friend bool operator==(const SignedPermutation&, const SignedPermutation&) = default;

 private:
  std::vector<std::size_t> source_;
  std::vector<int> sign_;
};

// Canonical scaled channel: t sorted descending and nonnegative.
struct ScaledChannel {
  std::vector<double> t;   // t[0] >= t[1] >= ... >= t[n-1] >= 0
  SignedPermutation perm;  // maps the raw scaled vector onto t
  std::vector<double> f;   // f[i] = 1 - sum_{l<=i} t_l^2 (1-based l), f[0] = 1, size n+1
  std::vector<double> q;   // q[k] = f[k+1] / f[k] = r_kk^2 of the implicit factor, size n
  double tnorm2 = 0.0;     // |t|^2

  std::size_t size() const { return t.size(); }
  // 1 - |t|^2, the smallest entry of f.
  double residual() const { return f.back(); }
};

// t_raw = sqrt(P / (1 + P |h|^2)) * h.
std::vector<double> scale_channel(const ChannelInstance& ch);

// Sorts |t_raw| descending (stable, ties by original index) and builds f and q.
// f is formed as (1 - |t|^2) + tail sums of t^2, where 1 - |t|^2 is taken from
// the raw vector; prefer the ChannelInstance overload at high SNR.
ScaledChannel canonicalize(std::span<const double> t_raw);

// Same, but 1 - |t|^2 = 1 / (1 + P |h|^2) is computed from the channel so f
// stays accurate when |t| is within rounding of 1.
ScaledChannel canonicalize(const ChannelInstance& ch);

// Maps a canonical-coordinate vector back to original coordinates.
Coefficients restore(const SignedPermutation& perm, std::span<const std::int64_t> a_canonical);

// Explicit Cholesky factor R of I - t t^T (upper triangular). Only used for
// checks and by the generic baseline search.
Eigen::MatrixXd materialize_R(const ScaledChannel& sc);

// a^T G a in canonical coordinates, evaluated without cancellation.
double objective(const ScaledChannel& sc, std::span<const std::int64_t> a);

// |a|^2 - P (h^T a)^2 / (1 + P |h|^2) in original coordinates, evaluated without cancellation.
double channel_objective(const ChannelInstance& ch, std::span<const std::int64_t> a);

// (1/2) log2+(1 / objective); 0 when objective >= 1.
double rate_from_objective(double objective);

// Computation rate of coefficient vector a at a relay with channel ch, in bits per channel use.
// Throws InputError on a zero or mis-sized a, NumericError if the form is not positive.
double computation_rate(const ChannelInstance& ch, std::span<const std::int64_t> a);

// True when t_i^2 <= t_1^2 f[i-1] for every i >= 2, in which case e_1 is optimal
// with objective q[0] = 1 - t_1^2.
bool e1_shortcut(const ScaledChannel& sc);

// min_k r_kk; every nonzero integer a has |R a| at least this large.
double objective_lower_bound(const ScaledChannel& sc);

// Nearest integer; exact .5 ties go to the one with smaller magnitude.
std::int64_t round_nearest(double x);

// +1 for x >= 0, -1 otherwise.
inline int step_sign(double x) { return x >= 0.0 ? 1 : -1; }
inline std::int64_t step_sign(std::int64_t x) { return x >= 0 ? 1 : -1; }

}  // namespace cfsvp
