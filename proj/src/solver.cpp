#include "hiersum/solver.hpp"

#include <algorithm>
#include <string>

#include "hiersum/errors.hpp"

namespace hiersum {

namespace {

// Avalanching member hash; set hashes add these values, so they are
// order-independent and unions combine in O(1).
std::uint64_t mix_member(NodeIndex x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Tree-node ids ordered deepest-first (ties by id, i.e. child order).
std::vector<NodeId> depth_descending_order(const DimensionTree& tree) {
    std::vector<NodeId> order(static_cast<std::size_t>(tree.size()));
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = static_cast<NodeId>(i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return tree.depth(a) > tree.depth(b); });
    return order;
}

} // namespace

Solver::Solver(const ProductSpace& space, const WeightMap& weights, SolverConfig cfg)
    : space_(space), weights_(weights), cfg_(cfg), d_(space.dims()), n_(space.node_count()) {
    if (cfg_.k < 1) {
        throw ConfigError("k must be at least 1");
    }
    if (weights_.domain_size() != n_) {
        throw StructuralError("weight map does not belong to this space");
    }
    // Outputs never contain zero-weight nodes (the cardinality tie-break
    // drops them), so budgets beyond the positive count change nothing.
    k_eff_ = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(cfg_.k), weights_.positive_count()));
    k1_ = static_cast<std::size_t>(k_eff_) + 1;
    dense_ = n_ <= cfg_.dense_budget && n_ * k1_ <= cfg_.max_table_cells;
}

bool Solver::live(NodeIndex idx) const {
    return dense_ ? live_dense_[idx] != 0 : live_sparse_.contains(idx);
}

std::uint64_t Solver::row_base(NodeIndex idx) const {
    return dense_ ? idx * k1_ : sparse_rows_.at(idx);
}

std::uint64_t Solver::new_row(NodeIndex idx) {
    const std::uint64_t base = rows_allocated_ * k1_;
    ++rows_allocated_;
    cell_w_.resize(cell_w_.size() + k1_, 0.0);
    cell_min_.resize(cell_min_.size() + k1_, kNoMin);
    cell_hash_.resize(cell_hash_.size() + k1_, 0);
    cell_card_.resize(cell_card_.size() + k1_, 0);
    cell_choice_.resize(cell_choice_.size() + k1_, kChoiceEmpty);
    sparse_rows_.emplace(idx, base);
    return base;
}

Solver::Key Solver::cell_key(std::uint64_t base, int j) const {
    const std::uint64_t at = base + static_cast<std::uint64_t>(j);
    return {cell_w_[at], cell_card_[at], cell_min_[at], cell_hash_[at]};
}

void Solver::set_cell(std::uint64_t base, int j, const Key& key, std::int8_t choice) {
    const std::uint64_t at = base + static_cast<std::uint64_t>(j);
    cell_w_[at] = key.w;
    cell_card_[at] = key.card;
    cell_min_[at] = key.min;
    cell_hash_[at] = key.hash;
    cell_choice_[at] = choice;
}

Solver::Order Solver::compare(const Key& a, const Key& b) {
    if (a.w != b.w) {
        return a.w > b.w ? Order::Better : Order::Worse;
    }
    if (a.card != b.card) {
        return a.card < b.card ? Order::Better : Order::Worse;
    }
    if (a.min != b.min) {
        return a.min < b.min ? Order::Better : Order::Worse;
    }
    return a.hash == b.hash ? Order::TiedSame : Order::TiedDiffer;
}

std::vector<NodeIndex> Solver::live_children(const ProductNode& v, int dim, NodeIndex idx) const {
    const DimensionTree& tree = space_.tree(dim);
    const NodeId u = v.coords[static_cast<std::size_t>(dim)];
    const std::uint64_t stride = space_.stride(dim);
    std::vector<NodeIndex> out;
    const auto& kids = tree.children(u);
    out.reserve(kids.size());
    for (NodeId c : kids) {
        const NodeIndex cidx =
            idx + static_cast<NodeIndex>(static_cast<std::int64_t>(c - u)) * stride;
        if (live(cidx)) {
            out.push_back(cidx);
        }
    }
    return out;
}

void Solver::build_all() {
    if (built_) {
        return;
    }
    built_ = true;
    if (k_eff_ == 0) {
        return; // no positive weight anywhere: every row is empty
    }

    if (dense_) {
        live_dense_.assign(n_, 0);
        weights_.for_each_positive([&](NodeIndex idx, double) { live_dense_[idx] = 1; });
        // One upward pass per dimension marks every node whose subspace
        // holds positive weight.
        for (int dim = 0; dim < d_; ++dim) {
            const DimensionTree& tree = space_.tree(dim);
            const std::uint64_t stride = space_.stride(dim);
            const std::uint64_t block = stride * static_cast<std::uint64_t>(tree.size());
            const std::uint64_t outer = n_ / block;
            for (NodeId u : depth_descending_order(tree)) {
                if (u == tree.root()) {
                    continue;
                }
                const std::uint64_t off_u = static_cast<std::uint64_t>(u) * stride;
                const std::uint64_t off_p = static_cast<std::uint64_t>(tree.parent(u)) * stride;
                for (std::uint64_t prefix = 0; prefix < outer; ++prefix) {
                    const std::uint64_t base = prefix * block;
                    const std::uint8_t* from = live_dense_.data() + base + off_u;
                    std::uint8_t* to = live_dense_.data() + base + off_p;
                    for (std::uint64_t s = 0; s < stride; ++s) {
                        to[s] |= from[s];
                    }
                }
            }
        }
        cell_w_.assign(n_ * k1_, 0.0);
        cell_min_.assign(n_ * k1_, kNoMin);
        cell_hash_.assign(n_ * k1_, 0);
        cell_card_.assign(n_ * k1_, 0);
        cell_choice_.assign(n_ * k1_, kChoiceEmpty);
    } else {
        weights_.for_each_positive([&](NodeIndex idx, double) {
            space_.for_each_enclosing(space_.node_at(idx),
                                      [&](NodeIndex anc) { live_sparse_.insert(anc); });
        });
        if (live_sparse_.size() * k1_ > cfg_.max_table_cells) {
            throw CapacityError("solver table would exceed " +
                                std::to_string(cfg_.max_table_cells) + " cells");
        }
        cell_w_.reserve(live_sparse_.size() * k1_);
        cell_min_.reserve(live_sparse_.size() * k1_);
        cell_hash_.reserve(live_sparse_.size() * k1_);
        cell_card_.reserve(live_sparse_.size() * k1_);
        cell_choice_.reserve(live_sparse_.size() * k1_);
        sparse_rows_.reserve(live_sparse_.size());
    }

    // Rows are filled bottom-up by total depth, so child rows are always
    // final before a parent reads them; within a level order is ascending.
    std::vector<NodeIndex> order;
    if (dense_) {
        for (NodeIndex idx = 0; idx < n_; ++idx) {
            if (live_dense_[idx]) {
                order.push_back(idx);
            }
        }
    } else {
        order.assign(live_sparse_.begin(), live_sparse_.end());
        std::sort(order.begin(), order.end());
    }

    int max_depth = 0;
    for (int dim = 0; dim < d_; ++dim) {
        max_depth += space_.tree(dim).height() - 1;
    }
    std::vector<std::vector<NodeIndex>> by_depth(static_cast<std::size_t>(max_depth) + 1);
    for (NodeIndex idx : order) {
        by_depth[static_cast<std::size_t>(space_.total_depth(space_.node_at(idx)))].push_back(idx);
    }
    for (std::size_t depth = by_depth.size(); depth-- > 0;) {
        for (NodeIndex idx : by_depth[depth]) {
            compute_row(idx, space_.node_at(idx));
        }
    }
}

void Solver::compute_row(NodeIndex idx, const ProductNode& v) {
    const std::uint64_t base = dense_ ? idx * k1_ : new_row(idx);
    for (int j = 0; j <= k_eff_; ++j) {
        set_cell(base, j, Key{}, kChoiceEmpty);
    }
    const double wv = weights_.at(idx);
    if (wv > 0.0) {
        const Key self{wv, 1, idx, mix_member(idx)};
        for (int j = 1; j <= k_eff_; ++j) {
            set_cell(base, j, self, kChoiceSelf);
        }
    }
    for (int dim = 0; dim < d_; ++dim) {
        if (space_.tree(dim).is_leaf(v.coords[static_cast<std::size_t>(dim)])) {
            continue;
        }
        const CombineResult cr = combine(idx, v, dim);
        if (cr.kids.empty()) {
            continue;
        }
        for (int j = 1; j <= k_eff_; ++j) {
            const Key cand = cr.best[static_cast<std::size_t>(j)];
            const Key incumbent = cell_key(base, j);
            const Order order = compare(cand, incumbent);
            bool take = order == Order::Better;
            if (order == Order::TiedDiffer) {
                auto incumbent_set =
                    set_for_choice(idx, v, j, cell_choice_[base + static_cast<std::uint64_t>(j)]);
                auto cand_set = set_for_union(cr, static_cast<int>(cr.kids.size()), j, 0, 0);
                take = std::lexicographical_compare(cand_set.begin(), cand_set.end(),
                                                    incumbent_set.begin(), incumbent_set.end());
            }
            if (take) {
                set_cell(base, j, cand, static_cast<std::int8_t>(dim));
            }
        }
    }
}

Solver::CombineResult Solver::combine(NodeIndex idx, const ProductNode& v, int dim) {
    CombineResult cr;
    cr.kids = live_children(v, dim, idx);
    if (cr.kids.empty()) {
        return cr;
    }
    cr.best.assign(k1_, Key{});
    cr.trace.assign(cr.kids.size() * k1_, 0);

    // Knapsack over the child sequence: after step m, prev[j] is the best
    // union over the first m+1 children with total budget j. Rows plateau
    // once the budget covers the best set's cardinality, so both loops stop
    // at the useful budgets and the tail is copied.
    std::vector<Key> prev(k1_), cur(k1_);
    int prefix_cap = 0;
    for (std::size_t m = 0; m < cr.kids.size(); ++m) {
        const NodeIndex child = cr.kids[m];
        const std::uint64_t cbase = row_base(child);
        const int child_cap = cell_card_[cbase + static_cast<std::uint64_t>(k_eff_)];
        const int reach = std::min(k_eff_, prefix_cap + child_cap);
        for (int j = 0; j <= reach; ++j) {
            Key best = prev[static_cast<std::size_t>(j)];
            std::uint32_t best_q = 0;
            const int q_max = std::min(j, child_cap);
            for (int q = 1; q <= q_max; ++q) {
                const Key ck = cell_key(cbase, q);
                const Key& pk = prev[static_cast<std::size_t>(j - q)];
                const Key cand{pk.w + ck.w, pk.card + ck.card, std::min(pk.min, ck.min),
                               pk.hash + ck.hash};
                const Order order = compare(cand, best);
                bool take = order == Order::Better;
                if (order == Order::TiedDiffer) {
                    auto best_set = set_for_union(cr, static_cast<int>(m),
                                                  j - static_cast<int>(best_q), child,
                                                  static_cast<int>(best_q));
                    auto cand_set = set_for_union(cr, static_cast<int>(m), j - q, child, q);
                    take = std::lexicographical_compare(cand_set.begin(), cand_set.end(),
                                                        best_set.begin(), best_set.end());
                }
                if (take) {
                    best = cand;
                    best_q = static_cast<std::uint32_t>(q);
                }
            }
            cur[static_cast<std::size_t>(j)] = best;
            cr.trace[m * k1_ + static_cast<std::size_t>(j)] = best_q;
        }
        for (int j = reach + 1; j <= k_eff_; ++j) {
            cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(reach)];
            cr.trace[m * k1_ + static_cast<std::size_t>(j)] =
                cr.trace[m * k1_ + static_cast<std::size_t>(reach)];
        }
        prefix_cap = reach;
        std::swap(prev, cur);
    }
    cr.best = prev;
    return cr;
}

std::vector<NodeIndex> Solver::set_for_union(const CombineResult& cr, int upto_child,
                                             int prefix_budget, NodeIndex child,
                                             int child_budget) {
    std::vector<NodeIndex> out;
    int budget = prefix_budget;
    for (int m = upto_child - 1; m >= 0 && budget > 0; --m) {
        const std::uint32_t q =
            cr.trace[static_cast<std::size_t>(m) * k1_ + static_cast<std::size_t>(budget)];
        if (q > 0) {
            auto part = materialize(cr.kids[static_cast<std::size_t>(m)], static_cast<int>(q));
            out.insert(out.end(), part.begin(), part.end());
            budget -= static_cast<int>(q);
        }
    }
    if (child_budget > 0) {
        auto part = materialize(child, child_budget);
        out.insert(out.end(), part.begin(), part.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NodeIndex> Solver::set_for_choice(NodeIndex idx, const ProductNode& v, int j,
                                              std::int8_t choice) {
    if (choice == kChoiceEmpty || j == 0) {
        return {};
    }
    if (choice == kChoiceSelf) {
        return {idx};
    }
    const CombineResult cr = combine(idx, v, static_cast<int>(choice));
    return set_for_union(cr, static_cast<int>(cr.kids.size()), j, 0, 0);
}

std::vector<NodeIndex> Solver::materialize(NodeIndex idx, int j) {
    j = std::min(j, k_eff_);
    if (j <= 0 || !live(idx)) {
        return {};
    }
    if (auto it = set_cache_.find(row_base(idx) + static_cast<std::uint64_t>(j));
        it != set_cache_.end()) {
        return it->second;
    }
    std::vector<NodeIndex> out;
    std::vector<std::pair<NodeIndex, int>> work{{idx, j}};
    while (!work.empty()) {
        const auto [u, jj] = work.back();
        work.pop_back();
        if (jj <= 0) {
            continue;
        }
        const std::uint64_t base = row_base(u);
        if (auto it = set_cache_.find(base + static_cast<std::uint64_t>(jj));
            it != set_cache_.end()) {
            out.insert(out.end(), it->second.begin(), it->second.end());
            continue;
        }
        const std::int8_t choice = cell_choice_[base + static_cast<std::uint64_t>(jj)];
        if (choice == kChoiceEmpty) {
            continue;
        }
        if (choice == kChoiceSelf) {
            out.push_back(u);
            continue;
        }
        const ProductNode v = space_.node_at(u);
        const CombineResult cr = combine(u, v, static_cast<int>(choice));
        int rem = jj;
        for (int m = static_cast<int>(cr.kids.size()) - 1; m >= 0 && rem > 0; --m) {
            const std::uint32_t q =
                cr.trace[static_cast<std::size_t>(m) * k1_ + static_cast<std::size_t>(rem)];
            if (q > 0) {
                work.emplace_back(cr.kids[static_cast<std::size_t>(m)], static_cast<int>(q));
                rem -= static_cast<int>(q);
            }
        }
    }
    std::sort(out.begin(), out.end());
    set_cache_.emplace(row_base(idx) + static_cast<std::uint64_t>(j), out);
    return out;
}

Solution Solver::solution_from(std::vector<NodeIndex> members) const {
    Solution result;
    result.segments.reserve(members.size());
    for (NodeIndex idx : members) {
        result.segments.push_back(space_.node_at(idx));
        result.total_weight += weights_.at(idx);
    }
    return result;
}

Solution Solver::solve() {
    build_all();
    if (k_eff_ == 0) {
        return {};
    }
    const NodeIndex root_idx = space_.index_of(space_.root());
    return solution_from(materialize(root_idx, k_eff_));
}

double Solver::subspace_weight(const ProductNode& v, int j) {
    if (j < 0 || j > cfg_.k) {
        throw ConfigError("budget out of range");
    }
    build_all();
    const NodeIndex idx = space_.index_of(v);
    if (k_eff_ == 0 || !live(idx)) {
        return 0.0;
    }
    return cell_w_[row_base(idx) + static_cast<std::uint64_t>(std::min(j, k_eff_))];
}

Solution Solver::subspace_solution(const ProductNode& v, int j) {
    if (j < 0 || j > cfg_.k) {
        throw ConfigError("budget out of range");
    }
    build_all();
    const NodeIndex idx = space_.index_of(v);
    if (k_eff_ == 0 || !live(idx)) {
        return {};
    }
    return solution_from(materialize(idx, j));
}

Solution solve(const ProductSpace& space, const WeightMap& weights, const SolverConfig& cfg) {
    return Solver(space, weights, cfg).solve();
}

} // namespace hiersum
