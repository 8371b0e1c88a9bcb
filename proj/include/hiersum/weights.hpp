#ifndef HIERSUM_WEIGHTS_HPP
#define HIERSUM_WEIGHTS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hiersum/cells.hpp"
#include "hiersum/space.hpp"

namespace hiersum {

// Nodes handled densely (per-array element) only up to this many; larger
// spaces fall back to sparse maps over the cells' ancestor closure.
inline constexpr std::uint64_t kDefaultDenseNodeBudget = 1ull << 23;

/// Per-node (t_v, l_v) pairs: sums of cell values over Sub(v).
class AggregateTable {
public:
    CellValue at(NodeIndex idx) const;
    CellValue root_totals() const { return root_totals_; }
    bool dense() const { return dense_; }

    // Nodes with a stored (possibly zero) aggregate, ascending by index.
    // Sparse tables store exactly the cells' ancestor closure.
    void for_each_stored(const std::function<void(NodeIndex, CellValue)>& fn) const;

private:
    friend AggregateTable aggregate(const CellTable&, const ProductSpace&, std::uint64_t);

    bool dense_ = true;
    std::vector<double> pre_, cur_;            // dense storage
    std::map<NodeIndex, CellValue> sparse_;    // sparse storage
    CellValue root_totals_;
};

AggregateTable aggregate(const CellTable& cells, const ProductSpace& space,
                         std::uint64_t dense_budget = kDefaultDenseNodeBudget);

// |l - t|
double weight_absdiff(double pre, double cur);

// |t/T - l/L|; throws ConfigError when either period total is not positive.
double weight_composition(double pre, double cur, double total_pre, double total_cur);

// |l^(1-m) - t^(1-m)| / (1-m) for m in [0, 1). m = 0 is exactly |l - t|.
// For m > 0 inputs are floored at `floor` before exponentiation so that zero
// metrics keep the weight finite. m = 1 is rejected; use absdiff for the
// absolute end of the scale and a log-difference externally if relative
// change is wanted in the limit.
double weight_boxcox(double pre, double cur, double m, double floor = 1e-9);

enum class WeightKind { AbsDiff, Composition, BoxCox };

struct WeightSpec {
    WeightKind kind = WeightKind::AbsDiff;
    double boxcox_m = 0.0;
    double boxcox_floor = 1e-9;
};

const char* weight_kind_name(WeightKind kind);

/// Nonnegative weight per product node; absent nodes weigh 0.
class WeightMap {
public:
    WeightMap() = default;

    static WeightMap make_dense(std::uint64_t node_count);
    static WeightMap make_sparse(std::uint64_t node_count);

    void set(NodeIndex idx, double w);
    double at(NodeIndex idx) const;

    bool dense() const { return dense_; }
    std::uint64_t domain_size() const { return domain_size_; }

    std::uint64_t positive_count() const { return positive_count_; }

    // Positive-weight nodes ascending by index.
    void for_each_positive(const std::function<void(NodeIndex, double)>& fn) const;

private:
    bool dense_ = false;
    std::uint64_t domain_size_ = 0;
    std::uint64_t positive_count_ = 0;
    std::vector<double> values_;
    std::map<NodeIndex, double> sparse_;
};

WeightMap build_weight_map(const CellTable& cells, const ProductSpace& space,
                           const WeightSpec& spec,
                           std::uint64_t dense_budget = kDefaultDenseNodeBudget);

} // namespace hiersum

#endif
