#ifndef HIERSUM_IO_HPP
#define HIERSUM_IO_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hiersum/cells.hpp"
#include "hiersum/solution.hpp"
#include "hiersum/space.hpp"
#include "hiersum/weights.hpp"

namespace hiersum::io {

/// A space plus either leaf cells (weights derived via a weight function)
/// or a ready-made weight map read from a weights file.
struct LoadedInstance {
    ProductSpace space;
    CellTable cells;
    std::optional<WeightMap> direct_weights;
};

// Hierarchy CSV: header `id,parent_id,name`; the root row leaves parent_id
// empty; child order is file order.
DimensionTree read_hierarchy_csv(std::istream& in, const std::string& filename);
DimensionTree load_hierarchy(const std::string& path);

// Facts CSV: header `dim1,...,dimd,metric_pre,metric_cur`; dim columns carry
// leaf ids from the hierarchy files; repeated leaf tuples are summed.
CellTable read_facts_csv(std::istream& in, const ProductSpace& space,
                         const std::string& filename);

// Weights CSV: header `dim1,...,dimd,weight`; ids may name any node, not
// just leaves; duplicate rows for one node are rejected.
WeightMap read_weights_csv(std::istream& in, const ProductSpace& space,
                           const std::string& filename);

LoadedInstance load_instance(const std::vector<std::string>& hierarchy_paths,
                             const std::optional<std::string>& facts_path,
                             const std::optional<std::string>& weights_path);

// Canonical serializers; ingest -> serialize -> ingest is byte-stable.
std::string hierarchy_to_csv(const DimensionTree& tree);
std::string facts_to_csv(const ProductSpace& space, const CellTable& cells);
std::string weights_to_csv(const ProductSpace& space, const WeightMap& weights);

// Shortest round-trip decimal form of a double.
std::string format_double(double value);

// Report of the selected segments, heaviest first: coordinates as display
// names and weight, plus, when aggregates are available, the two period
// values, their difference and the period shares.
nlohmann::json summarize_report(const ProductSpace& space, const Solution& solution, int k,
                                const std::string& weight_label, const WeightMap& weights,
                                const AggregateTable* aggregates);

} // namespace hiersum::io

#endif
