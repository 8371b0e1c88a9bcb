#ifndef HIERSUM_TREE_HPP
#define HIERSUM_TREE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hiersum {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

// Raw row of a hierarchy definition: external ids as they appear in files.
struct TreeNodeRecord {
    std::int64_t id = 0;
    std::optional<std::int64_t> parent_id;
    std::string name;
};

/// One rooted dimension hierarchy (geography, device, ...).
///
/// Nodes are addressed by dense ids in construction order; child order is
/// the construction order and never changes. Ancestor queries run in O(1)
/// via preorder interval labels.
class DimensionTree {
public:
    // Single-root incremental builder; external id defaults to the dense id.
    explicit DimensionTree(std::string root_name, std::int64_t root_external_id = 0);

    // Validating constructor for file-order records: exactly one root,
    // unique ids, parents present, no cycles. Dense ids follow record order.
    static DimensionTree from_records(const std::vector<TreeNodeRecord>& records);

    NodeId add_child(NodeId parent, std::string name);
    NodeId add_child(NodeId parent, std::string name, std::int64_t external_id);

    int size() const { return static_cast<int>(nodes_.size()); }
    NodeId root() const { return root_; }
    NodeId parent(NodeId v) const { return node(v).parent; }
    const std::vector<NodeId>& children(NodeId v) const { return node(v).children; }
    int depth(NodeId v) const { return node(v).depth; }
    bool is_leaf(NodeId v) const { return node(v).children.empty(); }
    const std::string& name(NodeId v) const { return node(v).name; }
    std::int64_t external_id(NodeId v) const { return node(v).ext_id; }
    std::optional<NodeId> find_external(std::int64_t ext_id) const;

    bool is_ancestor_or_self(NodeId ancestor, NodeId descendant) const;

    // p and q overlap iff p == q or one is an ancestor of the other.
    bool overlaps(NodeId p, NodeId q) const;

    // Height counted in nodes: a root-only tree has height 1.
    int height() const;
    int leaf_count() const;

    void check_id(NodeId v) const;

private:
    struct Node {
        std::string name;
        std::int64_t ext_id = 0;
        NodeId parent = kNoNode;
        std::vector<NodeId> children;
        std::int32_t depth = 0;
        mutable std::int32_t pre_in = 0;  // preorder entry index
        mutable std::int32_t pre_out = 0; // one past the last descendant's entry
    };

    const Node& node(NodeId v) const {
        check_id(v);
        return nodes_[static_cast<std::size_t>(v)];
    }
    void refresh_labels() const;

    std::vector<Node> nodes_;
    NodeId root_ = 0;
    mutable bool labels_valid_ = false;
};

} // namespace hiersum

#endif
