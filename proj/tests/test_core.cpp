#include <doctest.h>

#include <algorithm>

#include "hiersum/errors.hpp"
#include "hiersum/generators.hpp"
#include "hiersum/space.hpp"
#include "test_util.hpp"

using namespace hiersum;
using namespace hiersum::testutil;

TEST_CASE("overlap within a single tree") {
    const DimensionTree t2 = small_tree(2);
    CHECK_FALSE(t2.overlaps(A, B)); // sibling leaves
    CHECK(t2.overlaps(R, A));       // root covers everything
    CHECK(t2.overlaps(A, A));       // p = q
    CHECK_THROWS_AS((void)t2.overlaps(A, 17), StructuralError);
    CHECK_THROWS_AS((void)t2.overlaps(-1, A), StructuralError);
}

TEST_CASE("record construction validates the hierarchy") {
    using Rec = TreeNodeRecord;
    SUBCASE("valid records keep file order as child order") {
        std::vector<Rec> recs{{10, std::nullopt, "root"},
                              {20, 10, "x"},
                              {30, 10, "y"},
                              {40, 20, "z"}};
        const DimensionTree tree = DimensionTree::from_records(recs);
        CHECK(tree.size() == 4);
        CHECK(tree.root() == 0);
        CHECK(tree.children(0) == std::vector<NodeId>{1, 2});
        CHECK(tree.name(3) == "z");
        CHECK(tree.external_id(3) == 40);
        CHECK(tree.depth(3) == 2);
        CHECK(tree.find_external(30) == NodeId{2});
        CHECK_FALSE(tree.find_external(99).has_value());
    }
    SUBCASE("duplicate ids") {
        CHECK_THROWS_AS(DimensionTree::from_records({{1, std::nullopt, "r"}, {1, 1, "x"}}),
                        InputError);
    }
    SUBCASE("two roots") {
        CHECK_THROWS_AS(
            DimensionTree::from_records({{1, std::nullopt, "r"}, {2, std::nullopt, "s"}}),
            InputError);
    }
    SUBCASE("unknown parent") {
        CHECK_THROWS_AS(DimensionTree::from_records({{1, std::nullopt, "r"}, {2, 9, "x"}}),
                        InputError);
    }
    SUBCASE("cycle") {
        CHECK_THROWS_AS(
            DimensionTree::from_records({{1, std::nullopt, "r"}, {2, 3, "x"}, {3, 2, "y"}}),
            InputError);
    }
    SUBCASE("no root") {
        CHECK_THROWS_AS(DimensionTree::from_records({{1, 2, "x"}, {2, 1, "y"}}), InputError);
    }
}

TEST_CASE("overlap in the product space") {
    const ProductSpace space = two_tree_space();
    CHECK_FALSE(space.overlaps(ProductNode({R, B}), ProductNode({R, A})));
    CHECK(space.overlaps(ProductNode({R, B}), ProductNode({A, R})));
    const ProductNode p({A, B});
    CHECK(space.overlaps(p, p));
    CHECK_THROWS_AS((void)space.overlaps(p, ProductNode({A, B, R})), StructuralError);
}

TEST_CASE("subspace membership") {
    const ProductSpace space = two_tree_space();
    CHECK(space.in_subspace(ProductNode({A, A}), ProductNode({R, R})));
    CHECK_FALSE(space.in_subspace(ProductNode({R, A}), ProductNode({A, R})));
    const ProductNode p({B, A});
    CHECK(space.in_subspace(p, p));
}

TEST_CASE("children along a dimension") {
    const ProductSpace space = two_tree_space();
    const auto kids = space.children_along(ProductNode({R, R}), 1);
    REQUIRE(kids.size() == 2);
    CHECK(kids[0] == ProductNode({R, A}));
    CHECK(kids[1] == ProductNode({R, B}));
    CHECK(space.children_along(ProductNode({A, A}), 0).empty());
    CHECK(space.children_along(ProductNode({A, A}), 1).empty());
    CHECK(space.children_along(ProductNode({A, R}), 0).empty());
}

TEST_CASE("total depth") {
    const ProductSpace space = two_tree_space();
    CHECK(space.total_depth(ProductNode({R, R})) == 0);
    CHECK(space.total_depth(ProductNode({A, R})) == 1);
    CHECK(space.total_depth(ProductNode({A, A})) == 2);
}

TEST_CASE("node index order is lexicographic coordinate order") {
    const ProductSpace space = three_tree_space();
    const auto nodes = all_nodes(space);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        CHECK(space.index_of(nodes[i]) == i);
        if (i > 0) {
            CHECK(nodes[i - 1] < nodes[i]);
        }
    }
}

TEST_CASE("structural properties on random spaces") {
    const int sizes[] = {4, 3, 2};
    for (std::uint64_t seed : {11u, 22u, 33u}) {
        const GeneratedInstance inst = gen_random(3, sizes, 3, 0.5, seed);
        const ProductSpace& space = inst.space;
        const auto nodes = all_nodes(space);

        for (const ProductNode& p : nodes) {
            for (const ProductNode& q : nodes) {
                const bool over = space.overlaps(p, q);
                CHECK(over == space.overlaps(q, p));
                if (space.in_subspace(p, q)) {
                    CHECK(over);
                }
                if (!over) {
                    bool witness = false;
                    for (int i = 0; i < space.dims() && !witness; ++i) {
                        witness = !space.tree(i).overlaps(p[i], q[i]);
                    }
                    CHECK(witness);
                }
            }
        }

        for (const ProductNode& v : nodes) {
            int non_root_coords = 0;
            for (int i = 0; i < space.dims(); ++i) {
                if (v[i] != space.tree(i).root()) {
                    ++non_root_coords;
                }
                for (const ProductNode& c : space.children_along(v, i)) {
                    CHECK(space.in_subspace(c, v));
                    CHECK(space.total_depth(c) == space.total_depth(v) + 1);
                }
            }
            CHECK(non_root_coords <= space.dims());
        }
    }
}

TEST_CASE("ancestor labels agree with parent-link chains") {
    const int sizes[] = {9, 5};
    const GeneratedInstance inst = gen_random(2, sizes, 4, 0.0, 7);
    for (int dim = 0; dim < 2; ++dim) {
        const DimensionTree& tree = inst.space.tree(dim);
        for (NodeId p = 0; p < tree.size(); ++p) {
            for (NodeId q = 0; q < tree.size(); ++q) {
                bool chain = false;
                for (NodeId u = q; u != kNoNode; u = tree.parent(u)) {
                    if (u == p) {
                        chain = true;
                        break;
                    }
                }
                CHECK(tree.is_ancestor_or_self(p, q) == chain);
            }
        }
    }
}
