#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "symgame/msg_basis.hpp"
#include "symgame/types.hpp"

namespace symgame {

struct EnumerationCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Enumerates the n^|S| deterministic Markov policies as base-n digit strings
// (state 0 is the least-significant digit).
struct DeterministicPolicyIndex {
  int num_states = 0;
  int num_actions = 0;

  std::uint64_t count() const;
  std::vector<int> actions(std::uint64_t index) const;
  MarkovPolicy policy(const LayeredGame& g, std::uint64_t index) const;
};

// C(u, p1, p2) = V^{p1,p2}(s1) + V^{p2,p1}(s1); zero for every pair exactly
// when the payoff is swap-symmetric. Equals <u, k^{p1,p2} + k^{p2,p1}>.
double symmetric_defect(const LayeredGame& g, const PayoffTensor& u, const MarkovPolicy& p1,
                        const MarkovPolicy& p2);

// C*(u, p1, p2) = V^{p1,p2}(s1) - V^{p2,p1}(s1).
double signed_defect(const LayeredGame& g, const PayoffTensor& u, const MarkovPolicy& p1,
                     const MarkovPolicy& p2);

// Exhaustive symmetry test over deterministic pairs. Values are multilinear
// in per-state action probabilities (layered games visit each state at most
// once per episode), so the deterministic pairs dominate all Markov pairs.
bool msg_membership_bruteforce(const LayeredGame& g, const PayoffTensor& u, double tol,
                               std::uint64_t max_pairs = 1000000);

// Per-state worst-case visitation asymmetry max |P^{d,d'}[s] - P^{d',d}[s]|
// over deterministic pairs.
std::vector<double> max_visitation_split(const LayeredGame& g,
                                         std::uint64_t max_pairs = 1000000);

// True when both vector sets have equal rank and each vector reconstructs
// from the other's orthonormal basis with residual at most tol.
bool span_equal(const std::vector<SaaTensor>& a, const std::vector<SaaTensor>& b, double tol);

// All unordered occupancy sums k^{d,d'} + k^{d',d} over deterministic pairs.
std::vector<SaaTensor> deterministic_pair_family(const LayeredGame& g,
                                                 std::uint64_t max_pairs = 1000000);

// Terminal-layer structure: pairwise sums match twice the (1,1) entry at
// every terminal state, and slices are fully symmetric wherever some
// deterministic pair splits the visitation probability.
bool check_lrsg(const LayeredGame& g, const PayoffTensor& u, double tol,
                std::uint64_t max_pairs = 1000000);

// Swap-invariance of values at every state of the given layer (0-based) over
// deterministic pairs.
bool check_svg(const LayeredGame& g, const PayoffTensor& u, int layer, double tol,
               std::uint64_t max_pairs = 1000000);

}  // namespace symgame
