#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "cfsvp/lattice_core.hpp"

namespace cfsvp {

struct SearchResult {
  Coefficients a_star;            // canonical coordinates for modified_search
  double objective = 0.0;         // |R a_star|^2 = a_star^T G a_star
  std::uint64_t nodes_visited = 0;  // evaluations of the alpha < beta^2 test
  bool used_shortcut = false;
};

// Snapshot of the modified search, exposed for instrumentation. Vectors use
// 0-based levels; `a` and `p` carry one sentinel slot at index n (always 0).
struct SearchState {
  std::size_t k = 0;
  std::vector<std::int64_t> a;
  std::vector<double> p;
  std::vector<double> d;
  std::vector<double> sigma;
  double delta = 0.0;
  std::vector<std::int64_t> s;
  std::vector<char> flag;
  double beta2 = 0.0;
};

// Called once per loop iteration, right before the alpha < beta^2 test.
using SearchObserver = std::function<void(const SearchState&)>;

// Plain Schnorr-Euchner shortest-vector enumeration over an explicit upper
// triangular basis, starting from an infinite radius.
// Throws InputError if R is not square or has a zero / non-finite diagonal.
SearchResult baseline_search(const Eigen::MatrixXd& R);

// Ordered Schnorr-Euchner search over the implicit factor of I - t t^T.
// Enumerates only a_1 >= a_2 >= ... >= a_n >= 0 and starts from the e_1
// incumbent with radius^2 = 1 - t_1^2. Never forms R.
SearchResult modified_search(const ScaledChannel& sc, const SearchObserver& observer = {});

struct SolveOptions {
  bool e1_fast_path = true;
};

struct Solution {
  Coefficients a;        // original coordinates
  double rate = 0.0;     // bits per channel use
  double objective = 0.0;
  SearchResult stats;    // canonical-coordinate search result
};

// scale -> canonicalize -> (e_1 test) -> modified_search -> restore.
Solution solve(const ChannelInstance& ch, const SolveOptions& options = {});

// sum_k |E_k(beta)| for the fixed radius beta^2 = 1 - t_1^2: the number of
// ordered nonnegative partial vectors a_{k:n} with |R_{k:n,k:n} a_{k:n}| < beta.
std::uint64_t count_tree_nodes(const ScaledChannel& sc);

// Nodes of the ordered search tree when the radius is frozen at
// beta^2 = 1 - t_1^2: every alpha < beta^2 evaluation (interior nodes and the
// failing leaves), excluding the opening evaluation of the e_1 incumbent.
// Upper-bounds modified_search(sc).nodes_visited - 1.
std::uint64_t count_fixed_radius_nodes(const ScaledChannel& sc);

}  // namespace cfsvp
