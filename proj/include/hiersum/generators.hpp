#ifndef HIERSUM_GENERATORS_HPP
#define HIERSUM_GENERATORS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hiersum/cells.hpp"
#include "hiersum/space.hpp"
#include "hiersum/weights.hpp"

namespace hiersum {

/// Directed graph input for the independent-set reduction.
struct Digraph {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges; // ordered pairs, no loops, no duplicates

    void validate() const;
};

struct GeneratedInstance {
    ProductSpace space;
    CellTable cells; // empty for instances defined by direct weights
    WeightMap weights;
    std::string name;
    std::map<std::string, double> params;
    std::optional<double> known_optimal_weight;       // best overlap-free weight
    std::optional<double> known_conflict_free_weight; // best overlap-free, conflict-free weight
    int k_hint = 1; // unbounded k is encoded as the positive-weight node count
};

// Two depth-2 trees with two leaves each; one period shifts 2x of metric from
// the second tree's b-side to its a-side, so the best k=2 answer is the pair
// (r1,a2),(r1,b2) with weight 4x.
GeneratedInstance gen_two_tree_example(double x);

// Three 3-node trees with unit weight on (r1,b2,a3), (a1,r2,b3), (b1,a2,r3):
// the smallest overlap-free set that no dimension-at-a-time split separates.
GeneratedInstance gen_simple_conflict();

// The m-th power of the simple conflict: 3m dimensions, unit weight on the
// 3^m products of per-triple patterns; overlap-free optimum 3^m, best
// conflict-free weight 2^m.
GeneratedInstance gen_power_conflict(int m);

// Three height-2 trees (vertex children in A and B, edge children in C);
// weight 1 on (a_v,b_v,c), weight 1+epsilon on (a_v,b,c_vw) and (a,b_w,c_vw).
// Independent sets of size s correspond to overlap-free weight s + (1+eps)|E|.
GeneratedInstance gen_mis_reduction(const Digraph& g, double epsilon);

// Seeded random trees (one size per dimension, heights capped), random
// integer cells in [0,100] on a cell_density fraction of leaf tuples,
// absolute-difference weights. Identical across runs for a fixed seed.
GeneratedInstance gen_random(int d, std::span<const int> tree_sizes, int max_height,
                             double cell_density, std::uint64_t seed);

} // namespace hiersum

#endif
