#ifndef HIERSUM_SOLVER_HPP
#define HIERSUM_SOLVER_HPP

#include <cstdint>
#include <map>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hiersum/solution.hpp"
#include "hiersum/space.hpp"
#include "hiersum/weights.hpp"

namespace hiersum {

struct SolverConfig {
    int k = 1;                                  // maximum output size
    std::uint64_t dense_budget = 1ull << 22;    // flat tables up to this many nodes
    std::uint64_t max_table_cells = 1ull << 27; // hard cap on memo cells
};

/// Bottom-up dynamic program over the tree product: for every node v with
/// weight below it and every budget j it keeps the best conflict-free set
/// S(v, j) inside Sub(v), formed from the singleton {v} or by combining child
/// rows along one dimension with a knapsack over the child sequence. The
/// answer is S(root, k).
///
/// Deterministic tie-breaking: higher weight, then smaller cardinality, then
/// lexicographically smallest sorted coordinate sequence; {v} is evaluated
/// before dimension splits and lower dimensions before higher ones, so equal
/// derivations resolve to the earliest candidate.
///
/// Subtrees without positive weight contribute empty rows and are never
/// visited; spaces larger than the dense budget keep rows in hash maps over
/// the ancestor closure of the positive nodes.
class Solver {
public:
    Solver(const ProductSpace& space, const WeightMap& weights, SolverConfig cfg);

    Solution solve();

    // Weight / materialized set of S(v, j), 0 <= j <= cfg.k. Builds the
    // table on first use.
    double subspace_weight(const ProductNode& v, int j);
    Solution subspace_solution(const ProductNode& v, int j);

private:
    static constexpr NodeIndex kNoMin = ~NodeIndex{0};
    static constexpr std::int8_t kChoiceEmpty = -2;
    static constexpr std::int8_t kChoiceSelf = -1;

    // Fast per-cell summary: total weight, member count, smallest member,
    // and a commutative member hash. NodeIndex order equals lexicographic
    // coordinate order, so `min` is the first element of the sorted
    // sequence; the hash certifies set identity without materializing, so
    // the frequent "same set reached through another dimension" tie is
    // settled in O(1) and only genuinely different sets are compared in
    // full.
    struct Key {
        double w = 0.0;
        std::int32_t card = 0;
        NodeIndex min = kNoMin;
        std::uint64_t hash = 0;
    };

    // One stored cell per (node, budget); 32 bytes so a lookup costs one
    // cache line.
    struct Cell {
        double w = 0.0;
        NodeIndex min = kNoMin;
        std::uint64_t hash = 0;
        std::int32_t card = 0;
        std::int8_t choice = kChoiceEmpty;
    };

    enum class Order { Better, Worse, TiedSame, TiedDiffer };

    struct CombineResult {
        std::vector<NodeIndex> kids;        // live children in tree child order
        std::vector<Key> best;              // per budget 0..k_eff
        std::vector<std::uint32_t> trace;   // [child * k1 + j] -> budget given to child
    };

    void build_all();
    void compute_row(NodeIndex idx, const ProductNode& v);
    CombineResult combine(NodeIndex idx, const ProductNode& v, int dim);
    std::vector<NodeIndex> live_children(const ProductNode& v, int dim, NodeIndex idx) const;

    bool live(NodeIndex idx) const;
    std::uint64_t row_base(NodeIndex idx) const; // rows exist for all live nodes after build
    std::uint64_t new_row(NodeIndex idx);
    Key cell_key(std::uint64_t base, int j) const;
    void set_cell(std::uint64_t base, int j, const Key& key, std::int8_t choice);

    static Order compare(const Key& a, const Key& b);

    // Sorted member indexes of S(idx, j); rows must be built.
    std::vector<NodeIndex> materialize(NodeIndex idx, int j);
    std::vector<NodeIndex> set_for_choice(NodeIndex idx, const ProductNode& v, int j,
                                          std::int8_t choice);
    std::vector<NodeIndex> set_for_union(const CombineResult& cr, int upto_child,
                                         int prefix_budget, NodeIndex child, int child_budget);

    Solution solution_from(std::vector<NodeIndex> members) const;

    const ProductSpace& space_;
    const WeightMap& weights_;
    SolverConfig cfg_;
    int d_;
    std::uint64_t n_;
    int k_eff_ = 0;
    std::size_t k1_ = 1;
    bool dense_ = true;
    bool built_ = false;

    std::vector<std::uint8_t> live_dense_;
    std::unordered_set<NodeIndex> live_sparse_;
    std::unordered_map<NodeIndex, std::uint64_t> sparse_rows_;
    std::uint64_t rows_allocated_ = 0;

    std::vector<double> cell_w_;
    std::vector<NodeIndex> cell_min_;
    std::vector<std::uint64_t> cell_hash_;
    std::vector<std::int32_t> cell_card_;
    std::vector<std::int8_t> cell_choice_;

    // Materialized sets keyed by row_base(idx) + j (unique per cell).
    std::unordered_map<std::uint64_t, std::vector<NodeIndex>> set_cache_;
};

Solution solve(const ProductSpace& space, const WeightMap& weights, const SolverConfig& cfg);

} // namespace hiersum

#endif
