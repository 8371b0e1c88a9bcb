#include <doctest.h>

#include <vector>

#include "hiersum/errors.hpp"
#include "hiersum/generators.hpp"
#include "hiersum/oracle.hpp"
#include "test_util.hpp"

using namespace hiersum;
using namespace hiersum::testutil;

namespace {

std::vector<ProductNode> simple_conflict_nodes() {
    return {ProductNode({R, B, A}), ProductNode({A, R, B}), ProductNode({B, A, R})};
}

} // namespace

TEST_CASE("overlap-free predicate") {
    const ProductSpace three = three_tree_space();
    CHECK(is_overlap_free(three, simple_conflict_nodes()));

    const ProductSpace two = two_tree_space();
    const std::vector<ProductNode> overlapping{ProductNode({R, B}), ProductNode({A, R})};
    CHECK_FALSE(is_overlap_free(two, overlapping));

    CHECK(is_overlap_free(two, std::vector<ProductNode>{}));
    CHECK(is_overlap_free(two, std::vector<ProductNode>{ProductNode({R, R})}));
}

TEST_CASE("conflict predicate") {
    const ProductSpace three = three_tree_space();
    CHECK(is_conflict(three, simple_conflict_nodes()));

    const ProductSpace two = two_tree_space();
    const std::vector<ProductNode> siblings{ProductNode({R, A}), ProductNode({R, B})};
    CHECK_FALSE(is_conflict(two, siblings));

    CHECK_FALSE(is_conflict(two, std::vector<ProductNode>{ProductNode({R, R})}));
    CHECK_FALSE(is_conflict(two, std::vector<ProductNode>{}));
}

TEST_CASE("a two-element conflict is exactly an overlapping pair") {
    const int sizes[] = {4, 3, 2};
    for (std::uint64_t seed : {3u, 14u}) {
        const GeneratedInstance inst = gen_random(3, sizes, 3, 0.0, seed);
        const auto nodes = all_nodes(inst.space);
        for (const ProductNode& p : nodes) {
            for (const ProductNode& q : nodes) {
                if (p == q) {
                    continue;
                }
                const std::vector<ProductNode> pair{p, q};
                CHECK(is_conflict(inst.space, pair) == inst.space.overlaps(p, q));
            }
        }
    }
}

TEST_CASE("conflict-free predicate") {
    const ProductSpace three = three_tree_space();
    CHECK_FALSE(is_conflict_free(three, simple_conflict_nodes()));

    const ProductSpace two = two_tree_space();
    const std::vector<ProductNode> pair{ProductNode({R, A}), ProductNode({R, B})};
    CHECK(is_conflict_free(two, pair));

    std::vector<ProductNode> too_big(21, ProductNode({R, R}));
    CHECK_THROWS_AS((void)is_conflict_free(two, too_big), CapacityError);
}

TEST_CASE("exhaustive overlap-free optimum") {
    SUBCASE("simple conflict keeps all three nodes") {
        const GeneratedInstance inst = gen_simple_conflict();
        const Solution best = brute_force_optimal(inst.space, inst.weights, 3);
        CHECK(best.total_weight == 3.0);
        CHECK(best.size() == 3);
        CHECK(is_overlap_free(inst.space, best.segments));
    }
    SUBCASE("two-tree instance at k = 2") {
        const GeneratedInstance inst = gen_two_tree_example(1.0);
        const Solution best = brute_force_optimal(inst.space, inst.weights, 2);
        CHECK(best.total_weight == 4.0);
    }
    SUBCASE("all-zero weights give the empty set") {
        const ProductSpace space = two_tree_space();
        const WeightMap wm = WeightMap::make_dense(space.node_count());
        const Solution best = brute_force_optimal(space, wm, 3);
        CHECK(best.total_weight == 0.0);
        CHECK(best.empty());
    }
    SUBCASE("candidate guard") {
        const ProductSpace space = two_tree_space();
        WeightMap wm = WeightMap::make_dense(space.node_count());
        for (NodeIndex idx = 0; idx < space.node_count(); ++idx) {
            wm.set(idx, 1.0 + static_cast<double>(idx));
        }
        OracleLimits limits;
        limits.max_candidates = 8;
        CHECK_THROWS_AS(brute_force_optimal(space, wm, 3, limits), CapacityError);
    }
}

TEST_CASE("exhaustive conflict-free optimum") {
    SUBCASE("simple conflict loses one node") {
        const GeneratedInstance inst = gen_simple_conflict();
        const Solution best = brute_force_conflict_free(inst.space, inst.weights, 3);
        CHECK(best.total_weight == 2.0);
        CHECK(best.size() == 2);
        CHECK(is_conflict_free(inst.space, best.segments));
    }
    SUBCASE("squared conflict family at unbounded k") {
        const GeneratedInstance inst = gen_power_conflict(2);
        const Solution overlap_free = brute_force_optimal(inst.space, inst.weights, inst.k_hint);
        const Solution conflict_free =
            brute_force_conflict_free(inst.space, inst.weights, inst.k_hint);
        CHECK(overlap_free.total_weight == 9.0);
        CHECK(conflict_free.total_weight == 4.0);
    }
    SUBCASE("two dimensions never separate the two optima") {
        const int sizes[] = {6, 5};
        for (std::uint64_t seed : {40u, 41u, 42u, 43u}) {
            const GeneratedInstance inst = gen_random(2, sizes, 3, 0.25, seed);
            if (inst.weights.positive_count() > 20) {
                continue;
            }
            for (int k : {1, 2, 3}) {
                const Solution of = brute_force_optimal(inst.space, inst.weights, k);
                const Solution cf = brute_force_conflict_free(inst.space, inst.weights, k);
                CHECK(of.total_weight == cf.total_weight);
            }
        }
    }
}

TEST_CASE("conflict-free optimum never exceeds the overlap-free optimum") {
    const int sizes[] = {3, 3, 3};
    for (std::uint64_t seed : {50u, 51u, 52u}) {
        const GeneratedInstance inst = gen_random(3, sizes, 2, 0.2, seed);
        if (inst.weights.positive_count() > 18) {
            continue;
        }
        const Solution of = brute_force_optimal(inst.space, inst.weights, 4);
        const Solution cf = brute_force_conflict_free(inst.space, inst.weights, 4);
        CHECK(cf.total_weight <= of.total_weight);
    }
}
