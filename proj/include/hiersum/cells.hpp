#ifndef HIERSUM_CELLS_HPP
#define HIERSUM_CELLS_HPP

#include <map>

#include "hiersum/space.hpp"

namespace hiersum {

struct CellValue {
    double pre = 0.0; // metric value for the past period (t_v)
    double cur = 0.0; // metric value for the current period (l_v)

    bool operator==(const CellValue&) const = default;
};

/// Two-period metric values keyed by full leaf tuples. Absent cells read as
/// (0, 0); adding the same leaf twice sums the values.
class CellTable {
public:
    void add(const ProductSpace& space, const ProductNode& leaf, double pre, double cur);

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    // Keyed by NodeIndex; ordered, so iteration (and thus any summation
    // order derived from it) is deterministic.
    const std::map<NodeIndex, CellValue>& entries() const { return entries_; }

private:
    std::map<NodeIndex, CellValue> entries_;
};

} // namespace hiersum

#endif
