#ifndef HIERSUM_SPACE_HPP
#define HIERSUM_SPACE_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "hiersum/tree.hpp"

namespace hiersum {

/// One point of the tree product: a tuple of tree-node ids, one per dimension.
struct ProductNode {
    std::vector<NodeId> coords;

    ProductNode() = default;
    explicit ProductNode(std::vector<NodeId> c) : coords(std::move(c)) {}

    int dims() const { return static_cast<int>(coords.size()); }
    NodeId operator[](int i) const { return coords[static_cast<std::size_t>(i)]; }

    bool operator==(const ProductNode&) const = default;
    auto operator<=>(const ProductNode&) const = default;
};

// Flat index of a product node; dimension 0 is the most significant digit,
// so NodeIndex order equals lexicographic order of coordinate tuples.
using NodeIndex = std::uint64_t;

/// The cartesian product of dimension trees. Immutable after construction;
/// every query is read-only and safe for concurrent use.
class ProductSpace {
public:
    explicit ProductSpace(std::vector<DimensionTree> trees);

    int dims() const { return static_cast<int>(trees_.size()); }
    const DimensionTree& tree(int i) const;
    std::uint64_t node_count() const { return node_count_; }

    // Index weight of one step along dimension i: replacing coordinate i by
    // node c moves the index by (c - old) * stride(i).
    std::uint64_t stride(int i) const;

    ProductNode root() const;
    bool is_product_leaf(const ProductNode& v) const;

    NodeIndex index_of(const ProductNode& v) const;
    ProductNode node_at(NodeIndex idx) const;

    // Overlap in every dimension (equal or ancestor/descendant per tree).
    bool overlaps(const ProductNode& p, const ProductNode& q) const;

    // p lies in Sub(q): every coordinate of p is a descendant-or-self of q's.
    bool in_subspace(const ProductNode& p, const ProductNode& q) const;

    // v with coordinate `dim` replaced by each child of v[dim], in tree child
    // order; empty if v[dim] is a leaf.
    std::vector<ProductNode> children_along(const ProductNode& v, int dim) const;

    // Sum of per-dimension depths; 0 at the root tuple.
    int total_depth(const ProductNode& v) const;

    void require_valid(const ProductNode& v) const;

    // Calls fn for every q with v in Sub(q): the product of v's per-tree
    // ancestor chains, v and the root tuple included.
    void for_each_enclosing(const ProductNode& v,
                            const std::function<void(NodeIndex)>& fn) const;

private:
    void check_dim(int i) const;

    std::vector<DimensionTree> trees_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t node_count_ = 1;
};

} // namespace hiersum

#endif
