#ifndef HIERSUM_SOLUTION_HPP
#define HIERSUM_SOLUTION_HPP

#include <vector>

#include "hiersum/space.hpp"

namespace hiersum {

/// An overlap-free set of product nodes and its total weight. Segments are
/// kept sorted ascending by NodeIndex so equal solutions compare equal.
struct Solution {
    std::vector<ProductNode> segments;
    double total_weight = 0.0;

    std::size_t size() const { return segments.size(); }
    bool empty() const { return segments.empty(); }
};

} // namespace hiersum

#endif
