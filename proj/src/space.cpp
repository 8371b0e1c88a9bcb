#include "hiersum/space.hpp"

#include <limits>
#include <string>

#include "hiersum/errors.hpp"

namespace hiersum {

ProductSpace::ProductSpace(std::vector<DimensionTree> trees) : trees_(std::move(trees)) {
    if (trees_.empty()) {
        throw StructuralError("a product space needs at least one dimension");
    }
    strides_.assign(trees_.size(), 1);
    node_count_ = 1;
    for (std::size_t i = trees_.size(); i-- > 0;) {
        strides_[i] = node_count_;
        const auto size = static_cast<std::uint64_t>(trees_[i].size());
        if (node_count_ > std::numeric_limits<std::uint64_t>::max() / size) {
            throw CapacityError("product space has too many nodes to index");
        }
        node_count_ *= size;
    }
}

const DimensionTree& ProductSpace::tree(int i) const {
    check_dim(i);
    return trees_[static_cast<std::size_t>(i)];
}

std::uint64_t ProductSpace::stride(int i) const {
    check_dim(i);
    return strides_[static_cast<std::size_t>(i)];
}

void ProductSpace::check_dim(int i) const {
    if (i < 0 || static_cast<std::size_t>(i) >= trees_.size()) {
        throw StructuralError("invalid dimension index " + std::to_string(i));
    }
}

ProductNode ProductSpace::root() const {
    std::vector<NodeId> coords(trees_.size());
    for (std::size_t i = 0; i < trees_.size(); ++i) {
        coords[i] = trees_[i].root();
    }
    return ProductNode(std::move(coords));
}

void ProductSpace::require_valid(const ProductNode& v) const {
    if (v.coords.size() != trees_.size()) {
        throw StructuralError("product node has " + std::to_string(v.coords.size()) +
                              " coordinates, space has " + std::to_string(trees_.size()) +
                              " dimensions");
    }
    for (std::size_t i = 0; i < trees_.size(); ++i) {
        trees_[i].check_id(v.coords[i]);
    }
}

bool ProductSpace::is_product_leaf(const ProductNode& v) const {
    require_valid(v);
    for (std::size_t i = 0; i < trees_.size(); ++i) {
        if (!trees_[i].is_leaf(v.coords[i])) {
            return false;
        }
    }
    return true;
}

NodeIndex ProductSpace::index_of(const ProductNode& v) const {
    require_valid(v);
    NodeIndex idx = 0;
    for (std::size_t i = 0; i < trees_.size(); ++i) {
        idx += static_cast<NodeIndex>(v.coords[i]) * strides_[i];
    }
    return idx;
}

ProductNode ProductSpace::node_at(NodeIndex idx) const {
    if (idx >= node_count_) {
        throw StructuralError("product node index out of range");
    }
    std::vector<NodeId> coords(trees_.size());
    for (std::size_t i = 0; i < trees_.size(); ++i) {
        coords[i] = static_cast<NodeId>(idx / strides_[i]);
        idx %= strides_[i];
    }
    return ProductNode(std::move(coords));
}

bool ProductSpace::overlaps(const ProductNode& p, const ProductNode& q) const {
    require_valid(p);
    require_valid(q);
    for (std::size_t i = 0; i < trees_.size(); ++i) {
        if (!trees_[i].overlaps(p.coords[i], q.coords[i])) {
            return false;
        }
    }
    return true;
}

bool ProductSpace::in_subspace(const ProductNode& p, const ProductNode& q) const {
    require_valid(p);
    require_valid(q);
    for (std::size_t i = 0; i < trees_.size(); ++i) {
        if (!trees_[i].is_ancestor_or_self(q.coords[i], p.coords[i])) {
            return false;
        }
    }
    return true;
}

std::vector<ProductNode> ProductSpace::children_along(const ProductNode& v, int dim) const {
    require_valid(v);
    check_dim(dim);
    const auto d = static_cast<std::size_t>(dim);
    std::vector<ProductNode> result;
    const auto& kids = trees_[d].children(v.coords[d]);
    result.reserve(kids.size());
    for (NodeId c : kids) {
        ProductNode child = v;
        child.coords[d] = c;
        result.push_back(std::move(child));
    }
    return result;
}

int ProductSpace::total_depth(const ProductNode& v) const {
    require_valid(v);
    int depth = 0;
    for (std::size_t i = 0; i < trees_.size(); ++i) {
        depth += trees_[i].depth(v.coords[i]);
    }
    return depth;
}

void ProductSpace::for_each_enclosing(const ProductNode& v,
                                      const std::function<void(NodeIndex)>& fn) const {
    require_valid(v);
    const std::size_t d = trees_.size();
    // Ancestor chain per dimension, from the coordinate up to the root.
    std::vector<std::vector<NodeId>> chains(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (NodeId u = v.coords[i]; u != kNoNode; u = trees_[i].parent(u)) {
            chains[i].push_back(u);
        }
    }
    std::vector<std::size_t> pick(d, 0);
    while (true) {
        NodeIndex idx = 0;
        for (std::size_t i = 0; i < d; ++i) {
            idx += static_cast<NodeIndex>(chains[i][pick[i]]) * strides_[i];
        }
        fn(idx);
        std::size_t i = d;
        while (i-- > 0) {
            if (++pick[i] < chains[i].size()) {
                break;
            }
            pick[i] = 0;
            if (i == 0) {
                return;
            }
        }
    }
}

} // namespace hiersum
