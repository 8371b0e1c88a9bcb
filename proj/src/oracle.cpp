#include "hiersum/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "hiersum/errors.hpp"

namespace hiersum {

bool is_overlap_free(const ProductSpace& space, std::span<const ProductNode> s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            if (space.overlaps(s[i], s[j])) {
                return false;
            }
        }
    }
    return true;
}

bool is_conflict(const ProductSpace& space, std::span<const ProductNode> s) {
    if (s.size() < 2) {
        return false;
    }
    for (const ProductNode& v : s) {
        space.require_valid(v);
    }
    for (int dim = 0; dim < space.dims(); ++dim) {
        const DimensionTree& tree = space.tree(dim);
        bool dominated = false;
        for (const ProductNode& c : s) {
            bool dominates_all = true;
            for (const ProductNode& x : s) {
                if (!tree.is_ancestor_or_self(c[dim], x[dim])) {
                    dominates_all = false;
                    break;
                }
            }
            if (dominates_all) {
                dominated = true;
                break;
            }
        }
        if (!dominated) {
            return false;
        }
    }
    return true;
}

bool is_conflict_free(const ProductSpace& space, std::span<const ProductNode> s, int max_set) {
    if (s.size() > static_cast<std::size_t>(max_set)) {
        throw CapacityError("conflict-free check limited to sets of size " +
                            std::to_string(max_set));
    }
    const std::size_t n = s.size();
    std::vector<ProductNode> subset;
    subset.reserve(n);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) < 2) {
            continue;
        }
        subset.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                subset.push_back(s[i]);
            }
        }
        if (is_conflict(space, subset)) {
            return false;
        }
    }
    return true;
}

namespace {

struct Candidate {
    NodeIndex idx;
    double weight;
    ProductNode node;
};

// Branch-and-bound over positive-weight nodes, weight-descending. Equal-bound
// branches are pruned, so the result is a weight-optimal set found first in a
// deterministic search order.
class ExhaustiveSearch {
public:
    ExhaustiveSearch(const ProductSpace& space, const WeightMap& weights, int k,
                     const OracleLimits& limits, bool conflict_free)
        : space_(space), conflict_free_(conflict_free) {
        if (k < 0) {
            throw ConfigError("k must be nonnegative");
        }
        weights.for_each_positive([&](NodeIndex idx, double w) {
            candidates_.push_back({idx, w, space.node_at(idx)});
        });
        if (candidates_.size() > static_cast<std::size_t>(limits.max_candidates)) {
            throw CapacityError("exhaustive search limited to " +
                                std::to_string(limits.max_candidates) +
                                " positive-weight nodes, instance has " +
                                std::to_string(candidates_.size()));
        }
        std::sort(candidates_.begin(), candidates_.end(), [](const Candidate& a, const Candidate& b) {
            return a.weight != b.weight ? a.weight > b.weight : a.idx < b.idx;
        });
        k_ = std::min<std::size_t>(static_cast<std::size_t>(k), candidates_.size());
        if (conflict_free_ && k_ > static_cast<std::size_t>(limits.max_conflict_set)) {
            throw CapacityError("conflict-free search limited to solutions of size " +
                                std::to_string(limits.max_conflict_set));
        }
        prefix_.assign(candidates_.size() + 1, 0.0);
        for (std::size_t i = 0; i < candidates_.size(); ++i) {
            prefix_[i + 1] = prefix_[i] + candidates_[i].weight;
        }
    }

    Solution run() {
        chosen_.reserve(k_);
        descend(0, k_, 0.0);
        std::sort(best_set_.begin(), best_set_.end());
        Solution result;
        result.total_weight = 0.0;
        result.segments.reserve(best_set_.size());
        for (NodeIndex idx : best_set_) {
            result.segments.push_back(space_.node_at(idx));
            result.total_weight += weight_of(idx);
        }
        return result;
    }

private:
    double weight_of(NodeIndex idx) const {
        for (const Candidate& c : candidates_) {
            if (c.idx == idx) {
                return c.weight;
            }
        }
        return 0.0;
    }

    bool can_add(const Candidate& c) const {
        for (std::size_t pos : chosen_) {
            if (space_.overlaps(candidates_[pos].node, c.node)) {
                return false;
            }
        }
        if (!conflict_free_) {
            return true;
        }
        // Only subsets containing the new node need checking; the rest were
        // vetted when their own last member was added.
        const std::size_t m = chosen_.size();
        std::vector<ProductNode> subset;
        subset.reserve(m + 1);
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            if (std::popcount(mask) < 1) {
                continue;
            }
            subset.clear();
            for (std::size_t i = 0; i < m; ++i) {
                if (mask & (1u << i)) {
                    subset.push_back(candidates_[chosen_[i]].node);
                }
            }
            subset.push_back(c.node);
            if (is_conflict(space_, subset)) {
                return false;
            }
        }
        return true;
    }

    void record(double total) {
        if (total <= best_weight_) {
            return;
        }
        best_weight_ = total;
        best_set_.clear();
        for (std::size_t pos : chosen_) {
            best_set_.push_back(candidates_[pos].idx);
        }
    }

    void descend(std::size_t i, std::size_t budget, double total) {
        record(total);
        if (i >= candidates_.size() || budget == 0) {
            return;
        }
        const std::size_t reach = std::min(candidates_.size(), i + budget);
        if (total + (prefix_[reach] - prefix_[i]) <= best_weight_) {
            return;
        }
        if (can_add(candidates_[i])) {
            chosen_.push_back(i);
            descend(i + 1, budget - 1, total + candidates_[i].weight);
            chosen_.pop_back();
        }
        descend(i + 1, budget, total);
    }

    const ProductSpace& space_;
    bool conflict_free_;
    std::vector<Candidate> candidates_;
    std::vector<double> prefix_;
    std::size_t k_ = 0;
    std::vector<std::size_t> chosen_;
    double best_weight_ = 0.0;
    std::vector<NodeIndex> best_set_;
};

} // namespace

Solution brute_force_optimal(const ProductSpace& space, const WeightMap& weights, int k,
                             const OracleLimits& limits) {
    return ExhaustiveSearch(space, weights, k, limits, false).run();
}

Solution brute_force_conflict_free(const ProductSpace& space, const WeightMap& weights, int k,
                                   const OracleLimits& limits) {
    return ExhaustiveSearch(space, weights, k, limits, true).run();
}

} // namespace hiersum
