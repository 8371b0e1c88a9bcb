#include "hiersum/decomposition.hpp"

#include <algorithm>

#include "hiersum/errors.hpp"

namespace hiersum {

namespace {

// A full original subtree, identified by its tree and root node.
struct SubRoot {
    int tree;
    NodeId root;
};

struct Walker {
    std::span<const DimensionTree> forest;

    const DimensionTree& tree(int i) const { return forest[static_cast<std::size_t>(i)]; }

    // Leaves of the subtree in preorder, plus its node count.
    void collect(const SubRoot& sub, std::vector<NodeId>& leaves, int& nodes) const {
        const DimensionTree& t = tree(sub.tree);
        std::vector<NodeId> stack{sub.root};
        while (!stack.empty()) {
            const NodeId v = stack.back();
            stack.pop_back();
            ++nodes;
            const auto& kids = t.children(v);
            if (kids.empty()) {
                leaves.push_back(v);
                continue;
            }
            for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
                stack.push_back(*it);
            }
        }
    }

    // First leaf of the subtree under v (descend along first children).
    NodeId first_leaf(int tree_idx, NodeId v) const {
        const DimensionTree& t = tree(tree_idx);
        while (!t.is_leaf(v)) {
            v = t.children(v).front();
        }
        return v;
    }

    std::vector<std::vector<TreePath>> decompose(const std::vector<SubRoot>& subs) const {
        if (subs.empty()) {
            return {};
        }

        // Leaves across the sub-forest in preorder; remember which leaf index
        // range each subtree spans and the total node count.
        std::vector<std::pair<int, NodeId>> leaves; // (tree, leaf)
        std::vector<std::size_t> sub_first(subs.size());
        int total_nodes = 0;
        for (std::size_t s = 0; s < subs.size(); ++s) {
            sub_first[s] = leaves.size();
            std::vector<NodeId> sub_leaves;
            collect(subs[s], sub_leaves, total_nodes);
            for (NodeId leaf : sub_leaves) {
                leaves.emplace_back(subs[s].tree, leaf);
            }
        }
        const std::size_t l = leaves.size();
        const int target = path_group_bound(static_cast<int>(l));

        // Median leaf and its subtree.
        const std::size_t median = (l + 1) / 2 - 1; // 0-based index of leaf ceil(l/2)
        std::size_t median_sub = 0;
        for (std::size_t s = 0; s < subs.size(); ++s) {
            if (sub_first[s] <= median && (s + 1 == subs.size() || sub_first[s + 1] > median)) {
                median_sub = s;
                break;
            }
        }
        const auto [median_tree, median_leaf] = leaves[median];
        const DimensionTree& t = tree(median_tree);

        // Root path of the median leaf within its subtree.
        TreePath path;
        path.tree = median_tree;
        for (NodeId v = median_leaf;; v = t.parent(v)) {
            path.nodes.push_back(v);
            if (v == subs[median_sub].root) {
                break;
            }
        }
        std::reverse(path.nodes.begin(), path.nodes.end());

        if (static_cast<int>(path.nodes.size()) == total_nodes) {
            return {{std::move(path)}};
        }

        // Subtrees hanging off the path, split by whether their leaves come
        // before or after the median leaf; untouched subtrees key off their
        // position relative to the median subtree.
        std::vector<SubRoot> before, after;
        for (std::size_t s = 0; s < median_sub; ++s) {
            before.push_back(subs[s]);
        }
        for (std::size_t i = 0; i < path.nodes.size(); ++i) {
            const NodeId on_path = path.nodes[i];
            const NodeId next = i + 1 < path.nodes.size() ? path.nodes[i + 1] : kNoNode;
            for (NodeId c : t.children(on_path)) {
                if (c == next) {
                    continue;
                }
                SubRoot hang{median_tree, c};
                // The hanging subtree's leaves are contiguous and exclude the
                // median, so its first leaf settles the side.
                const NodeId probe = first_leaf(median_tree, c);
                bool is_before = false;
                for (std::size_t pos = sub_first[median_sub]; pos < l; ++pos) {
                    if (leaves[pos].second == probe && leaves[pos].first == median_tree) {
                        is_before = pos < median;
                        break;
                    }
                }
                (is_before ? before : after).push_back(hang);
            }
        }
        for (std::size_t s = median_sub + 1; s < subs.size(); ++s) {
            after.push_back(subs[s]);
        }

        auto groups_before = decompose(before);
        auto groups_after = decompose(after);

        std::vector<std::vector<TreePath>> groups(static_cast<std::size_t>(target));
        for (std::size_t i = 0; i < groups_before.size(); ++i) {
            for (TreePath& p : groups_before[i]) {
                groups[i].push_back(std::move(p));
            }
        }
        for (std::size_t i = 0; i < groups_after.size(); ++i) {
            for (TreePath& p : groups_after[i]) {
                groups[i].push_back(std::move(p));
            }
        }
        groups.back().push_back(std::move(path));
        return groups;
    }
};

} // namespace

int path_group_bound(int leaves) {
    int bound = 0;
    while ((1 << bound) < leaves + 1) {
        ++bound;
    }
    return bound;
}

PathDecomposition decompose_paths(std::span<const DimensionTree> forest) {
    if (forest.empty()) {
        throw InputError("forest must be nonempty");
    }
    Walker walker{forest};
    std::vector<SubRoot> roots;
    roots.reserve(forest.size());
    for (std::size_t i = 0; i < forest.size(); ++i) {
        roots.push_back({static_cast<int>(i), forest[i].root()});
    }
    PathDecomposition result;
    result.groups = walker.decompose(roots);
    return result;
}

PathDecomposition decompose_by_height(std::span<const DimensionTree> forest) {
    if (forest.empty()) {
        throw InputError("forest must be nonempty");
    }
    int height = 0;
    for (const DimensionTree& t : forest) {
        height = std::max(height, t.height());
    }

    PathDecomposition result;
    result.groups.assign(static_cast<std::size_t>(height), {});
    std::vector<SubRoot> roots;
    for (std::size_t i = 0; i < forest.size(); ++i) {
        roots.push_back({static_cast<int>(i), forest[i].root()});
    }
    for (int step = 0; step < height && !roots.empty(); ++step) {
        std::vector<SubRoot> next;
        for (const SubRoot& sub : roots) {
            const DimensionTree& t = forest[static_cast<std::size_t>(sub.tree)];
            // Leftmost root-to-leaf path of this subtree.
            TreePath path;
            path.tree = sub.tree;
            for (NodeId v = sub.root;; v = t.children(v).front()) {
                path.nodes.push_back(v);
                if (t.is_leaf(v)) {
                    break;
                }
            }
            for (std::size_t i = 0; i < path.nodes.size(); ++i) {
                const NodeId on_path = path.nodes[i];
                const NodeId taken = i + 1 < path.nodes.size() ? path.nodes[i + 1] : kNoNode;
                for (NodeId c : t.children(on_path)) {
                    if (c != taken) {
                        next.push_back({sub.tree, c});
                    }
                }
            }
            result.groups[static_cast<std::size_t>(step)].push_back(std::move(path));
        }
        roots = std::move(next);
    }
    return result;
}

} // namespace hiersum
