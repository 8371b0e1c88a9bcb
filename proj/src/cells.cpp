#include "hiersum/cells.hpp"

#include <cmath>

#include "hiersum/errors.hpp"

namespace hiersum {

void CellTable::add(const ProductSpace& space, const ProductNode& leaf, double pre, double cur) {
    if (!space.is_product_leaf(leaf)) {
        throw InputError("cell values may only be attached to full leaf tuples");
    }
    if (!(pre >= 0.0) || !(cur >= 0.0) || !std::isfinite(pre) || !std::isfinite(cur)) {
        throw InputError("metric values must be finite and nonnegative");
    }
    CellValue& slot = entries_[space.index_of(leaf)];
    slot.pre += pre;
    slot.cur += cur;
}

} // namespace hiersum
