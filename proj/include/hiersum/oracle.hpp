#ifndef HIERSUM_ORACLE_HPP
#define HIERSUM_ORACLE_HPP

#include <span>

#include "hiersum/solution.hpp"
#include "hiersum/space.hpp"
#include "hiersum/weights.hpp"

namespace hiersum {

/// Guards for the exhaustive reference solvers; they exist to keep oracle
/// runs at desk scale, not to tune results.
struct OracleLimits {
    int max_candidates = 24;  // positive-weight nodes enumerated
    int max_conflict_set = 20; // set size for conflict-subset enumeration
};

bool is_overlap_free(const ProductSpace& space, std::span<const ProductNode> s);

// A set is a conflict when every dimension has a member whose coordinate is
// an ancestor-or-self of all members' coordinates in that dimension. Sets of
// size < 2 are never conflicts.
bool is_conflict(const ProductSpace& space, std::span<const ProductNode> s);

// True iff no subset of size >= 2 is a conflict. Enumeration over subsets;
// |s| above the limit raises CapacityError.
bool is_conflict_free(const ProductSpace& space, std::span<const ProductNode> s,
                      int max_set = OracleLimits{}.max_conflict_set);

// Exact maximum-weight overlap-free set of size <= k, by branch-and-bound
// enumeration over positive-weight nodes. Deterministic; independent of the
// dynamic-programming solver.
Solution brute_force_optimal(const ProductSpace& space, const WeightMap& weights, int k,
                             const OracleLimits& limits = {});

// Exact maximum-weight overlap-free *and* conflict-free set of size <= k.
Solution brute_force_conflict_free(const ProductSpace& space, const WeightMap& weights, int k,
                                   const OracleLimits& limits = {});

} // namespace hiersum

#endif
