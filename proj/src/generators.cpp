#include "hiersum/generators.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "hiersum/errors.hpp"
#include "hiersum/rng.hpp"

namespace hiersum {

namespace {

WeightMap weight_map_for(const ProductSpace& space) {
    return space.node_count() <= kDefaultDenseNodeBudget
               ? WeightMap::make_dense(space.node_count())
               : WeightMap::make_sparse(space.node_count());
}

DimensionTree three_node_tree(int dim_1based) {
    const std::string suffix = std::to_string(dim_1based);
    DimensionTree tree("r" + suffix);
    tree.add_child(tree.root(), "a" + suffix);
    tree.add_child(tree.root(), "b" + suffix);
    return tree;
}

} // namespace

void Digraph::validate() const {
    if (vertex_count < 0) {
        throw InputError("digraph vertex count must be nonnegative");
    }
    std::set<std::pair<int, int>> seen;
    for (const auto& [v, w] : edges) {
        if (v < 0 || v >= vertex_count || w < 0 || w >= vertex_count) {
            throw InputError("digraph edge references an unknown vertex");
        }
        if (v == w) {
            throw InputError("digraph edges may not be self-loops");
        }
        if (!seen.emplace(v, w).second) {
            throw InputError("digraph has a duplicate edge");
        }
    }
}

GeneratedInstance gen_two_tree_example(double x) {
    if (!(x > 0.0)) {
        throw InputError("x must be positive");
    }
    std::vector<DimensionTree> trees{three_node_tree(1), three_node_tree(2)};
    ProductSpace space(std::move(trees));

    // Leaves of each tree are nodes 1 (a) and 2 (b). The a2 column rises by
    // x per cell, the b2 column falls by x; baseline x keeps values >= 0.
    CellTable cells;
    cells.add(space, ProductNode({1, 1}), x, 2 * x);
    cells.add(space, ProductNode({2, 1}), x, 2 * x);
    cells.add(space, ProductNode({1, 2}), x, 0.0);
    cells.add(space, ProductNode({2, 2}), x, 0.0);

    WeightMap weights = build_weight_map(cells, space, WeightSpec{WeightKind::AbsDiff});
    GeneratedInstance instance{std::move(space), std::move(cells), std::move(weights),
                               "two-tree",       {{"x", x}},       4 * x,
                               4 * x,            2};
    return instance;
}

GeneratedInstance gen_simple_conflict() {
    std::vector<DimensionTree> trees{three_node_tree(1), three_node_tree(2),
                                     three_node_tree(3)};
    ProductSpace space(std::move(trees));
    WeightMap weights = weight_map_for(space);
    weights.set(space.index_of(ProductNode({0, 2, 1})), 1.0); // (r1, b2, a3)
    weights.set(space.index_of(ProductNode({1, 0, 2})), 1.0); // (a1, r2, b3)
    weights.set(space.index_of(ProductNode({2, 1, 0})), 1.0); // (b1, a2, r3)
    GeneratedInstance instance{std::move(space), CellTable{}, std::move(weights),
                               "simple-conflict", {},         3.0,
                               2.0,               3};
    return instance;
}

GeneratedInstance gen_power_conflict(int m) {
    if (m < 1) {
        throw InputError("m must be at least 1");
    }
    if (m > 4) {
        throw CapacityError("power-conflict instances are limited to m <= 4");
    }
    const int d = 3 * m;
    std::vector<DimensionTree> trees;
    trees.reserve(static_cast<std::size_t>(d));
    for (int i = 1; i <= d; ++i) {
        trees.push_back(three_node_tree(i));
    }
    ProductSpace space(std::move(trees));
    WeightMap weights = weight_map_for(space);

    // Per-triple patterns of the simple conflict, as (r,b,a), (a,r,b), (b,a,r).
    static constexpr NodeId kPatterns[3][3] = {{0, 2, 1}, {1, 0, 2}, {2, 1, 0}};
    std::vector<int> pick(static_cast<std::size_t>(m), 0);
    std::uint64_t count = 0;
    while (true) {
        ProductNode node;
        node.coords.reserve(static_cast<std::size_t>(d));
        for (int i = 0; i < m; ++i) {
            const NodeId* pattern = kPatterns[pick[static_cast<std::size_t>(i)]];
            node.coords.insert(node.coords.end(), pattern, pattern + 3);
        }
        weights.set(space.index_of(node), 1.0);
        ++count;
        int i = m;
        while (i-- > 0) {
            if (++pick[static_cast<std::size_t>(i)] < 3) {
                break;
            }
            pick[static_cast<std::size_t>(i)] = 0;
            if (i == 0) {
                GeneratedInstance instance{std::move(space),
                                           CellTable{},
                                           std::move(weights),
                                           "power-conflict",
                                           {{"m", static_cast<double>(m)}},
                                           static_cast<double>(count),
                                           std::pow(2.0, m),
                                           static_cast<int>(count)};
                return instance;
            }
        }
    }
}

GeneratedInstance gen_mis_reduction(const Digraph& g, double epsilon) {
    g.validate();
    if (!(epsilon > 0.0)) {
        throw InputError("epsilon must be positive");
    }
    const double beta = 1.0 + epsilon;

    DimensionTree a("a");
    DimensionTree b("b");
    for (int v = 0; v < g.vertex_count; ++v) {
        a.add_child(a.root(), "a_" + std::to_string(v));
        b.add_child(b.root(), "b_" + std::to_string(v));
    }
    DimensionTree c("c");
    for (const auto& [v, w] : g.edges) {
        c.add_child(c.root(), "c_" + std::to_string(v) + "_" + std::to_string(w));
    }

    ProductSpace space({std::move(a), std::move(b), std::move(c)});
    WeightMap weights = weight_map_for(space);
    for (int v = 0; v < g.vertex_count; ++v) {
        weights.set(space.index_of(ProductNode({1 + v, 1 + v, 0})), 1.0);
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto [v, w] = g.edges[e];
        const NodeId ce = static_cast<NodeId>(1 + e);
        weights.set(space.index_of(ProductNode({1 + v, 0, ce})), beta);
        weights.set(space.index_of(ProductNode({0, 1 + w, ce})), beta);
    }

    GeneratedInstance instance{std::move(space),
                               CellTable{},
                               std::move(weights),
                               "mis",
                               {{"vertices", static_cast<double>(g.vertex_count)},
                                {"edges", static_cast<double>(g.edges.size())},
                                {"epsilon", epsilon},
                                {"beta", beta}},
                               std::nullopt,
                               std::nullopt,
                               g.vertex_count + 2 * static_cast<int>(g.edges.size())};
    return instance;
}

GeneratedInstance gen_random(int d, std::span<const int> tree_sizes, int max_height,
                             double cell_density, std::uint64_t seed) {
    if (d < 1) {
        throw InputError("d must be at least 1");
    }
    if (tree_sizes.size() != static_cast<std::size_t>(d)) {
        throw InputError("tree_sizes must hold one size per dimension");
    }
    if (max_height < 1) {
        throw InputError("max_height must be at least 1");
    }
    if (!(cell_density >= 0.0 && cell_density <= 1.0)) {
        throw InputError("cell_density must lie in [0, 1]");
    }

    Rng rng(seed);
    std::vector<DimensionTree> trees;
    trees.reserve(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const int size = tree_sizes[static_cast<std::size_t>(i)];
        if (size < 1) {
            throw InputError("tree sizes must be at least 1");
        }
        if (size > 1 && max_height < 2) {
            throw InputError("max_height 1 only admits single-node trees");
        }
        const std::string prefix = "d" + std::to_string(i + 1) + "n";
        DimensionTree tree(prefix + "0");
        std::vector<NodeId> eligible{tree.root()};
        for (int j = 1; j < size; ++j) {
            const NodeId parent = eligible[rng.below(eligible.size())];
            const NodeId child = tree.add_child(parent, prefix + std::to_string(j));
            if (tree.depth(child) < max_height - 1) {
                eligible.push_back(child);
            }
        }
        trees.push_back(std::move(tree));
    }
    ProductSpace space(std::move(trees));

    std::vector<std::vector<NodeId>> leaves(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        for (NodeId u = 0; u < space.tree(i).size(); ++u) {
            if (space.tree(i).is_leaf(u)) {
                leaves[static_cast<std::size_t>(i)].push_back(u);
            }
        }
    }

    CellTable cells;
    std::vector<std::size_t> pick(static_cast<std::size_t>(d), 0);
    while (true) {
        if (cell_density >= 1.0 || rng.chance(cell_density)) {
            ProductNode leaf;
            leaf.coords.reserve(static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i) {
                leaf.coords.push_back(
                    leaves[static_cast<std::size_t>(i)][pick[static_cast<std::size_t>(i)]]);
            }
            const double pre = static_cast<double>(rng.below(101));
            const double cur = static_cast<double>(rng.below(101));
            cells.add(space, leaf, pre, cur);
        }
        int i = d;
        bool done = false;
        while (i-- > 0) {
            if (++pick[static_cast<std::size_t>(i)] < leaves[static_cast<std::size_t>(i)].size()) {
                break;
            }
            pick[static_cast<std::size_t>(i)] = 0;
            if (i == 0) {
                done = true;
            }
        }
        if (done) {
            break;
        }
    }

    WeightMap weights = build_weight_map(cells, space, WeightSpec{WeightKind::AbsDiff});
    const int positives = static_cast<int>(weights.positive_count());
    GeneratedInstance instance{std::move(space),
                               std::move(cells),
                               std::move(weights),
                               "random",
                               {{"d", static_cast<double>(d)},
                                {"max_height", static_cast<double>(max_height)},
                                {"cell_density", cell_density},
                                {"seed", static_cast<double>(seed)}},
                               std::nullopt,
                               std::nullopt,
                               std::max(positives, 1)};
    return instance;
}

} // namespace hiersum
