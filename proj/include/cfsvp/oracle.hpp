#pragma once

// Exhaustive reference solvers. Slow on purpose and independent of the
// closed-form factorization: the Gram matrix I - t t^T is formed explicitly,
// factored with a generic numeric Cholesky, and every integer point of the
// coordinate box that can lie inside the relevant ellipsoid is evaluated with
// the direct formula |a|^2 - (t^T a)^2.

#include <cstddef>
#include <cstdint>
#include <span>

#include "cfsvp/lattice_core.hpp"
#include "cfsvp/list_search.hpp"
#include "cfsvp/sphere_search.hpp"

namespace cfsvp {

struct OracleLimits {
  std::int64_t max_bound = 50;               // refuse when the box bound B exceeds this
  std::uint64_t max_points = 100'000'000;    // refuse when enumeration visits more nodes
  double residual_floor = 1e-12;             // refuse when 1 - |t|^2 falls below this
};

// |a|^2 - (t^T a)^2 in extended precision.
double direct_objective(std::span<const double> t, std::span<const std::int64_t> a);

// Coordinate bound for the single optimum: ceil(sqrt(min_i(1 - t_i^2) / (1 - |t|^2))).
std::int64_t svp_box_bound(std::span<const double> t);

// Coordinate bound for every vector with objective below 1: ceil(sqrt(1 / (1 - |t|^2))).
std::int64_t topl_box_bound(std::span<const double> t);

// Minimizer of a^T G a over nonzero integer a with |a|_inf <= B, sign chosen so t^T a >= 0.
// Accepts any t with |t| < 1 (no ordering required).
// Throws InputError for |t| >= 1 and OracleLimitError when the instance exceeds `limits`.
SearchResult brute_force_svp(std::span<const double> t, std::size_t box_bound = 0,
                             const OracleLimits& limits = {});

// All vectors with objective < 1 from the sign-canonical half of the box (first
// nonzero coordinate positive), ascending, truncated to L.
CandidateList brute_force_topL(std::span<const double> t, std::size_t L, std::size_t box_bound = 0,
                               const OracleLimits& limits = {});

}  // namespace cfsvp
