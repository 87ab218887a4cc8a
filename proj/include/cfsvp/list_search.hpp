#pragma once

#include <cstddef>
#include <vector>

#include "cfsvp/lattice_core.hpp"

namespace cfsvp {

struct Candidate {
  Coefficients a;
  double objective = 0.0;
};

// Up to `requested` vectors with objective < 1, ascending by objective
// (ties broken lexicographically on the vector). At most one of a, -a appears.
struct CandidateList {
  std::vector<Candidate> entries;
  std::size_t requested = 0;
};

// The L best coefficient vectors in canonical coordinates. The ordering
// constraint of the single-output search is dropped; level 1 is scanned upward
// from ceil(d_1) so only one of a and -a is produced. The radius stays 1 until
// the list is full and then follows the worst member. Fewer than L entries are
// returned when fewer vectors have objective below 1.
// Throws InputError when L == 0.
CandidateList list_search(const ScaledChannel& sc, std::size_t L);

struct RatedCandidate {
  Coefficients a;  // original coordinates
  double objective = 0.0;
  double rate = 0.0;
};

// Runs list_search on the canonicalized channel and maps every candidate back
// to original coordinates. Rates are nonincreasing along the result.
std::vector<RatedCandidate> list_solve(const ChannelInstance& ch, std::size_t L);

}  // namespace cfsvp
