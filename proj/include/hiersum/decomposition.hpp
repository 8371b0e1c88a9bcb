#ifndef HIERSUM_DECOMPOSITION_HPP
#define HIERSUM_DECOMPOSITION_HPP

#include <span>
#include <vector>

#include "hiersum/tree.hpp"

namespace hiersum {

/// Downward path in one tree of a forest: consecutive parent-child links,
/// nonempty, listed root-end first.
struct TreePath {
    int tree = 0;
    std::vector<NodeId> nodes;
};

/// Partition of a forest's nodes into groups of paths; within one group no
/// two paths overlap (no node of one is equal to or an ancestor/descendant
/// of a node of the other).
struct PathDecomposition {
    std::vector<std::vector<TreePath>> groups;
};

// Median-leaf recursion: the root path of the middle leaf becomes the last
// group, the separated sub-forests are decomposed recursively and merged
// group-wise. Yields exactly ceil(log2(l+1)) groups for l leaves; groups can
// be empty when a side of the recursion exhausts early.
PathDecomposition decompose_paths(std::span<const DimensionTree> forest);

// Strips one root-to-leaf path per remaining root, once per height level.
// Yields exactly height(forest) groups; trailing groups are empty when the
// forest is consumed early (a bare path goes in one strip).
PathDecomposition decompose_by_height(std::span<const DimensionTree> forest);

// ceil(log2(leaves + 1)), the group bound for decompose_paths.
int path_group_bound(int leaves);

} // namespace hiersum

#endif
