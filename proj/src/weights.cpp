#include "hiersum/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "hiersum/errors.hpp"

namespace hiersum {

namespace {

// Tree-node ids ordered deepest-first (ties by id, i.e. child order), used to
// fold children into parents one dimension at a time.
std::vector<NodeId> depth_descending_order(const DimensionTree& tree) {
    std::vector<NodeId> order(static_cast<std::size_t>(tree.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return tree.depth(a) > tree.depth(b); });
    return order;
}

void validate_cells(const CellTable& cells, const ProductSpace& space) {
    for (const auto& [idx, value] : cells.entries()) {
        const ProductNode v = space.node_at(idx); // throws on out-of-range keys
        if (!space.is_product_leaf(v)) {
            throw InputError("cell attached to non-leaf product node");
        }
        if (!(value.pre >= 0.0) || !(value.cur >= 0.0)) {
            throw InputError("metric values must be nonnegative");
        }
    }
}

} // namespace

CellValue AggregateTable::at(NodeIndex idx) const {
    if (dense_) {
        if (idx >= pre_.size()) {
            throw StructuralError("aggregate index out of range");
        }
        return {pre_[idx], cur_[idx]};
    }
    auto it = sparse_.find(idx);
    return it == sparse_.end() ? CellValue{} : it->second;
}

void AggregateTable::for_each_stored(const std::function<void(NodeIndex, CellValue)>& fn) const {
    if (dense_) {
        for (NodeIndex idx = 0; idx < pre_.size(); ++idx) {
            fn(idx, {pre_[idx], cur_[idx]});
        }
        return;
    }
    for (const auto& [idx, value] : sparse_) {
        fn(idx, value);
    }
}

AggregateTable aggregate(const CellTable& cells, const ProductSpace& space,
                         std::uint64_t dense_budget) {
    validate_cells(cells, space);

    AggregateTable table;
    const std::uint64_t n = space.node_count();
    const NodeIndex root_idx = space.index_of(space.root());

    if (n <= dense_budget) {
        table.dense_ = true;
        table.pre_.assign(n, 0.0);
        table.cur_.assign(n, 0.0);
        for (const auto& [idx, value] : cells.entries()) {
            table.pre_[idx] = value.pre;
            table.cur_[idx] = value.cur;
        }
        // One rollup pass per dimension: after pass i every node holds the
        // sum over descendants-or-self in trees 0..i of its initial values.
        for (int dim = 0; dim < space.dims(); ++dim) {
            const DimensionTree& tree = space.tree(dim);
            std::uint64_t stride = 1;
            for (int j = space.dims() - 1; j > dim; --j) {
                stride *= static_cast<std::uint64_t>(space.tree(j).size());
            }
            const std::uint64_t block = stride * static_cast<std::uint64_t>(tree.size());
            const std::uint64_t outer = n / block;
            for (NodeId u : depth_descending_order(tree)) {
                if (u == tree.root()) {
                    continue;
                }
                const NodeId p = tree.parent(u);
                const std::uint64_t off_u = static_cast<std::uint64_t>(u) * stride;
                const std::uint64_t off_p = static_cast<std::uint64_t>(p) * stride;
                for (std::uint64_t prefix = 0; prefix < outer; ++prefix) {
                    const std::uint64_t base = prefix * block;
                    double* pre_u = table.pre_.data() + base + off_u;
                    double* pre_p = table.pre_.data() + base + off_p;
                    double* cur_u = table.cur_.data() + base + off_u;
                    double* cur_p = table.cur_.data() + base + off_p;
                    for (std::uint64_t s = 0; s < stride; ++s) {
                        pre_p[s] += pre_u[s];
                        cur_p[s] += cur_u[s];
                    }
                }
            }
        }
        table.root_totals_ = {table.pre_[root_idx], table.cur_[root_idx]};
        return table;
    }

    // Sparse: only the ancestor closure of the cells is materialized.
    table.dense_ = false;
    std::unordered_set<NodeIndex> closure;
    for (const auto& [idx, value] : cells.entries()) {
        space.for_each_enclosing(space.node_at(idx), [&](NodeIndex anc) { closure.insert(anc); });
    }

    std::vector<NodeIndex> order(closure.begin(), closure.end());
    std::sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) {
        const int da = space.total_depth(space.node_at(a));
        const int db = space.total_depth(space.node_at(b));
        return da != db ? da > db : a < b;
    });

    std::unordered_map<NodeIndex, CellValue> values;
    values.reserve(order.size());
    const auto& cell_entries = cells.entries();
    for (NodeIndex idx : order) {
        const ProductNode v = space.node_at(idx);
        int split_dim = -1;
        for (int i = 0; i < space.dims(); ++i) {
            if (!space.tree(i).is_leaf(v.coords[static_cast<std::size_t>(i)])) {
                split_dim = i;
                break;
            }
        }
        CellValue acc;
        if (split_dim < 0) {
            auto it = cell_entries.find(idx);
            if (it != cell_entries.end()) {
                acc = it->second;
            }
        } else {
            std::uint64_t stride = 1;
            for (int j = space.dims() - 1; j > split_dim; --j) {
                stride *= static_cast<std::uint64_t>(space.tree(j).size());
            }
            const NodeId u = v.coords[static_cast<std::size_t>(split_dim)];
            for (NodeId c : space.tree(split_dim).children(u)) {
                const NodeIndex child_idx =
                    idx + (static_cast<NodeIndex>(c) - static_cast<NodeIndex>(u)) * stride;
                auto it = values.find(child_idx);
                if (it != values.end()) {
                    acc.pre += it->second.pre;
                    acc.cur += it->second.cur;
                }
            }
        }
        values.emplace(idx, acc);
    }
    table.sparse_.insert(values.begin(), values.end());
    auto root_it = values.find(root_idx);
    table.root_totals_ = root_it == values.end() ? CellValue{} : root_it->second;
    return table;
}

double weight_absdiff(double pre, double cur) {
    return std::abs(cur - pre);
}

double weight_composition(double pre, double cur, double total_pre, double total_cur) {
    if (!(total_pre > 0.0) || !(total_cur > 0.0)) {
        throw ConfigError("composition weight needs a positive metric total in both periods");
    }
    return std::abs(pre / total_pre - cur / total_cur);
}

double weight_boxcox(double pre, double cur, double m, double floor) {
    if (m == 1.0) {
        throw ConfigError(
            "box-cox m = 1 is the log-difference limit and is not computed; pick m in [0, 1)");
    }
    if (!(m >= 0.0 && m < 1.0)) {
        throw ConfigError("box-cox m must lie in [0, 1)");
    }
    if (m == 0.0) {
        return weight_absdiff(pre, cur);
    }
    if (!(floor > 0.0)) {
        throw ConfigError("box-cox clamp floor must be positive");
    }
    const double e = 1.0 - m;
    const double p = std::max(pre, floor);
    const double c = std::max(cur, floor);
    return std::abs(std::pow(c, e) - std::pow(p, e)) / e;
}

const char* weight_kind_name(WeightKind kind) {
    switch (kind) {
        case WeightKind::AbsDiff: return "absdiff";
        case WeightKind::Composition: return "composition";
        case WeightKind::BoxCox: return "boxcox";
    }
    return "unknown";
}

WeightMap WeightMap::make_dense(std::uint64_t node_count) {
    WeightMap wm;
    wm.dense_ = true;
    wm.domain_size_ = node_count;
    wm.values_.assign(node_count, 0.0);
    return wm;
}

WeightMap WeightMap::make_sparse(std::uint64_t node_count) {
    WeightMap wm;
    wm.dense_ = false;
    wm.domain_size_ = node_count;
    return wm;
}

void WeightMap::set(NodeIndex idx, double w) {
    if (idx >= domain_size_) {
        throw StructuralError("weight index out of range");
    }
    if (!(w >= 0.0) || !std::isfinite(w)) {
        throw InputError("weights must be finite and nonnegative");
    }
    double old = 0.0;
    if (dense_) {
        old = values_[idx];
        values_[idx] = w;
    } else {
        auto [it, inserted] = sparse_.emplace(idx, w);
        if (!inserted) {
            old = it->second;
            it->second = w;
        }
    }
    if (old > 0.0) {
        --positive_count_;
    }
    if (w > 0.0) {
        ++positive_count_;
    }
}

double WeightMap::at(NodeIndex idx) const {
    if (idx >= domain_size_) {
        throw StructuralError("weight index out of range");
    }
    if (dense_) {
        return values_[idx];
    }
    auto it = sparse_.find(idx);
    return it == sparse_.end() ? 0.0 : it->second;
}

void WeightMap::for_each_positive(const std::function<void(NodeIndex, double)>& fn) const {
    if (dense_) {
        for (NodeIndex idx = 0; idx < values_.size(); ++idx) {
            if (values_[idx] > 0.0) {
                fn(idx, values_[idx]);
            }
        }
        return;
    }
    for (const auto& [idx, w] : sparse_) {
        if (w > 0.0) {
            fn(idx, w);
        }
    }
}

WeightMap build_weight_map(const CellTable& cells, const ProductSpace& space,
                           const WeightSpec& spec, std::uint64_t dense_budget) {
    const std::uint64_t n = space.node_count();
    const bool dense = n <= dense_budget;
    WeightMap wm = dense ? WeightMap::make_dense(n) : WeightMap::make_sparse(n);
    if (cells.empty()) {
        return wm;
    }

    const AggregateTable agg = aggregate(cells, space, dense_budget);
    const CellValue totals = agg.root_totals();
    if (spec.kind == WeightKind::Composition &&
        (!(totals.pre > 0.0) || !(totals.cur > 0.0))) {
        throw ConfigError("composition weight needs a positive metric total in both periods");
    }
    if (spec.kind == WeightKind::BoxCox) {
        weight_boxcox(0.0, 0.0, spec.boxcox_m, spec.boxcox_floor); // validate parameters once
    }

    const auto eval = [&](CellValue v) {
        switch (spec.kind) {
            case WeightKind::AbsDiff: return weight_absdiff(v.pre, v.cur);
            case WeightKind::Composition:
                return weight_composition(v.pre, v.cur, totals.pre, totals.cur);
            case WeightKind::BoxCox:
                return weight_boxcox(v.pre, v.cur, spec.boxcox_m, spec.boxcox_floor);
        }
        return 0.0;
    };

    agg.for_each_stored([&](NodeIndex idx, CellValue value) {
        const double w = eval(value);
        if (w > 0.0 || wm.dense()) {
            wm.set(idx, w);
        }
    });
    return wm;
}

} // namespace hiersum
