#include "hiersum/tree.hpp"

#include <algorithm>
#include <unordered_map>

#include "hiersum/errors.hpp"

namespace hiersum {

DimensionTree::DimensionTree(std::string root_name, std::int64_t root_external_id) {
    Node root;
    root.name = std::move(root_name);
    root.ext_id = root_external_id;
    nodes_.push_back(std::move(root));
}

NodeId DimensionTree::add_child(NodeId parent, std::string name) {
    return add_child(parent, std::move(name), static_cast<std::int64_t>(nodes_.size()));
}

NodeId DimensionTree::add_child(NodeId parent, std::string name, std::int64_t external_id) {
    check_id(parent);
    Node child;
    child.name = std::move(name);
    child.ext_id = external_id;
    child.parent = parent;
    child.depth = nodes_[static_cast<std::size_t>(parent)].depth + 1;
    const NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(std::move(child));
    nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
    labels_valid_ = false;
    return id;
}

DimensionTree DimensionTree::from_records(const std::vector<TreeNodeRecord>& records) {
    if (records.empty()) {
        throw InputError("hierarchy has no nodes");
    }
    std::unordered_map<std::int64_t, NodeId> by_ext;
    by_ext.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!by_ext.emplace(records[i].id, static_cast<NodeId>(i)).second) {
            throw InputError("duplicate hierarchy node id " + std::to_string(records[i].id));
        }
    }

    NodeId root = kNoNode;
    std::vector<NodeId> parent_of(records.size(), kNoNode);
    std::vector<std::vector<NodeId>> children_of(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const TreeNodeRecord& rec = records[i];
        if (!rec.parent_id) {
            if (root != kNoNode) {
                throw InputError("hierarchy has more than one root (node ids " +
                                 std::to_string(records[static_cast<std::size_t>(root)].id) +
                                 " and " + std::to_string(rec.id) + ")");
            }
            root = static_cast<NodeId>(i);
            continue;
        }
        auto it = by_ext.find(*rec.parent_id);
        if (it == by_ext.end()) {
            throw InputError("node " + std::to_string(rec.id) + " references unknown parent " +
                             std::to_string(*rec.parent_id));
        }
        parent_of[i] = it->second;
        children_of[static_cast<std::size_t>(it->second)].push_back(static_cast<NodeId>(i));
    }
    if (root == kNoNode) {
        throw InputError("hierarchy has no root (every node names a parent)");
    }

    // Reachability from the root doubles as the cycle check: a cycle (or a
    // stray component) leaves nodes unvisited.
    std::vector<std::int32_t> depth(records.size(), -1);
    std::vector<NodeId> stack{root};
    depth[static_cast<std::size_t>(root)] = 0;
    std::size_t visited = 0;
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        ++visited;
        for (NodeId c : children_of[static_cast<std::size_t>(v)]) {
            depth[static_cast<std::size_t>(c)] = depth[static_cast<std::size_t>(v)] + 1;
            stack.push_back(c);
        }
    }
    if (visited != records.size()) {
        throw InputError("hierarchy contains a cycle or a node detached from the root");
    }

    DimensionTree tree(records[static_cast<std::size_t>(root)].name,
                       records[static_cast<std::size_t>(root)].id);
    tree.nodes_.resize(records.size());
    tree.root_ = root;
    for (std::size_t i = 0; i < records.size(); ++i) {
        Node& n = tree.nodes_[i];
        n.name = records[i].name;
        n.ext_id = records[i].id;
        n.parent = parent_of[i];
        n.children = std::move(children_of[i]);
        n.depth = depth[i];
    }
    tree.labels_valid_ = false;
    return tree;
}

std::optional<NodeId> DimensionTree::find_external(std::int64_t ext_id) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].ext_id == ext_id) {
            return static_cast<NodeId>(i);
        }
    }
    return std::nullopt;
}

void DimensionTree::check_id(NodeId v) const {
    if (v < 0 || static_cast<std::size_t>(v) >= nodes_.size()) {
        throw StructuralError("invalid tree node id " + std::to_string(v));
    }
}

void DimensionTree::refresh_labels() const {
    std::int32_t counter = 0;
    // Iterative preorder; (node, entered) pairs so pre_out is set on exit.
    std::vector<std::pair<NodeId, bool>> stack{{root_, false}};
    while (!stack.empty()) {
        auto& [v, entered] = stack.back();
        const Node& n = nodes_[static_cast<std::size_t>(v)];
        if (entered) {
            n.pre_out = counter;
            stack.pop_back();
            continue;
        }
        entered = true;
        n.pre_in = counter++;
        const auto& kids = n.children;
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
            stack.emplace_back(*it, false);
        }
    }
    labels_valid_ = true;
}

bool DimensionTree::is_ancestor_or_self(NodeId ancestor, NodeId descendant) const {
    check_id(ancestor);
    check_id(descendant);
    if (!labels_valid_) {
        refresh_labels();
    }
    const Node& a = nodes_[static_cast<std::size_t>(ancestor)];
    const Node& d = nodes_[static_cast<std::size_t>(descendant)];
    return a.pre_in <= d.pre_in && d.pre_in < a.pre_out;
}

bool DimensionTree::overlaps(NodeId p, NodeId q) const {
    return is_ancestor_or_self(p, q) || is_ancestor_or_self(q, p);
}

int DimensionTree::height() const {
    std::int32_t max_depth = 0;
    for (const Node& n : nodes_) {
        max_depth = std::max(max_depth, n.depth);
    }
    return static_cast<int>(max_depth) + 1;
}

int DimensionTree::leaf_count() const {
    int count = 0;
    for (const Node& n : nodes_) {
        if (n.children.empty()) {
            ++count;
        }
    }
    return count;
}

} // namespace hiersum
