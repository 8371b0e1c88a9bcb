// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hiersum/decomposition.hpp"
#include "hiersum/generators.hpp"
#include "hiersum/oracle.hpp"
#include "hiersum/rng.hpp"
#include "hiersum/solver.hpp"
#include "hiersum/weights.hpp"

using namespace hiersum;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void criterion(int number, const std::string& description,
               const std::function<bool(std::string&)>& body) {
    const auto start = Clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    const double elapsed = seconds_since(start);
    std::printf("[%s] criterion %2d: %s (%.3fs)%s%s\n", ok ? "PASS" : "FAIL", number,
                description.c_str(), elapsed, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) {
        ++g_failures;
    }
}

double time_solve(const ProductSpace& space, const WeightMap& weights, int k, int reps) {
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < reps; ++r) {
        const auto start = Clock::now();
        const Solution s = solve(space, weights, SolverConfig{k});
        best = std::min(best, seconds_since(start));
        if (s.total_weight < 0) { // keep the optimizer honest
            std::abort();
        }
    }
    return best;
}

int ceil_log2_plus1(int value) {
    int bound = 0;
    while ((1 << bound) < value + 1) {
        ++bound;
    }
    return bound;
}

// ---- Shared random-instance loops for criteria 4-7 --------------------

struct SuiteStats {
    int instances = 0;
    int weight_matches = 0;
    int overlap_free = 0;
    int conflict_free = 0;
    int within_bound = 0;
    double elapsed = 0.0;
};

// d = 2 family: solver weight vs the exact overlap-free optimum.
SuiteStats run_suite_d2(int count) {
    SuiteStats stats;
    const auto start = Clock::now();
    Rng sampler(20260401);
    OracleLimits limits;
    while (stats.instances < count) {
        const int sizes[] = {sampler.int_in(1, 8), sampler.int_in(1, 8)};
        const int max_height = sampler.int_in(2, 4);
        const double density = 0.2 + 0.7 * sampler.unit();
        const GeneratedInstance inst = gen_random(2, sizes, max_height, density, sampler.next());
        if (inst.weights.positive_count() > static_cast<std::uint64_t>(limits.max_candidates)) {
            continue;
        }
        const int k = 1 + stats.instances % 4;
        const Solution dp = solve(inst.space, inst.weights, SolverConfig{k});
        const Solution exact = brute_force_optimal(inst.space, inst.weights, k, limits);
        ++stats.instances;
        if (dp.total_weight == exact.total_weight) {
            ++stats.weight_matches;
        }
        if (is_overlap_free(inst.space, dp.segments)) {
            ++stats.overlap_free;
        }
        if (is_conflict_free(inst.space, dp.segments)) {
            ++stats.conflict_free;
        }
    }
    stats.elapsed = seconds_since(start);
    return stats;
}

// d in {3,4} family: solver weight vs the exact conflict-free optimum,
// plus the approximation bound against the overlap-free optimum.
SuiteStats run_suite_d34(int count) {
    SuiteStats stats;
    const auto start = Clock::now();
    Rng sampler(20260402);
    OracleLimits limits;
    while (stats.instances < count) {
        const int d = 3 + stats.instances % 2;
        std::vector<int> sizes;
        int max_size = 0;
        for (int i = 0; i < d; ++i) {
            sizes.push_back(sampler.int_in(1, 4));
            max_size = std::max(max_size, sizes.back());
        }
        const int max_height = sampler.int_in(2, 3);
        const double density = 0.1 + 0.5 * sampler.unit();
        const GeneratedInstance inst = gen_random(d, sizes, max_height, density, sampler.next());
        if (inst.weights.positive_count() > static_cast<std::uint64_t>(limits.max_candidates)) {
            continue;
        }
        const int k = 1 + stats.instances % 4;
        const Solution dp = solve(inst.space, inst.weights, SolverConfig{k});
        const Solution conflict_free =
            brute_force_conflict_free(inst.space, inst.weights, k, limits);
        const Solution overlap_free = brute_force_optimal(inst.space, inst.weights, k, limits);
        ++stats.instances;
        if (dp.total_weight == conflict_free.total_weight) {
            ++stats.weight_matches;
        }
        if (is_overlap_free(inst.space, dp.segments)) {
            ++stats.overlap_free;
        }
        if (is_conflict_free(inst.space, dp.segments)) {
            ++stats.conflict_free;
        }
        int height = 0;
        for (int i = 0; i < d; ++i) {
            height = std::max(height, inst.space.tree(i).height());
        }
        const double factor = std::min(ceil_log2_plus1(max_size), height);
        if (dp.total_weight * std::pow(factor, d - 2) >= overlap_free.total_weight) {
            ++stats.within_bound;
        }
    }
    stats.elapsed = seconds_since(start);
    return stats;
}

// ---- Criterion 8 helpers ----------------------------------------------

Digraph random_digraph(Rng& rng, int max_vertices, int max_edges) {
    Digraph g;
    g.vertex_count = rng.int_in(1, max_vertices);
    const int cap = g.vertex_count * (g.vertex_count - 1);
    const int want = rng.int_in(0, std::min(max_edges, cap));
    std::set<std::pair<int, int>> chosen;
    while (static_cast<int>(chosen.size()) < want) {
        const int v = rng.int_in(0, g.vertex_count - 1);
        const int w = rng.int_in(0, g.vertex_count - 1);
        if (v != w) {
            chosen.emplace(v, w);
        }
    }
    g.edges.assign(chosen.begin(), chosen.end());
    return g;
}

int brute_force_mis(const Digraph& g) {
    int best = 0;
    for (std::uint32_t mask = 0; mask < (1u << g.vertex_count); ++mask) {
        bool independent = true;
        for (const auto& [v, w] : g.edges) {
            if ((mask >> v & 1u) && (mask >> w & 1u)) {
                independent = false;
                break;
            }
        }
        if (independent) {
            best = std::max(best, std::popcount(mask));
        }
    }
    return best;
}

// ---- Criterion 9 helpers ----------------------------------------------

DimensionTree random_tree(Rng& rng, int size, int max_height) {
    DimensionTree tree("n0");
    std::vector<NodeId> eligible{tree.root()};
    for (int i = 1; i < size; ++i) {
        const NodeId parent = eligible[rng.below(eligible.size())];
        const NodeId child = tree.add_child(parent, "n" + std::to_string(i));
        if (tree.depth(child) < max_height - 1) {
            eligible.push_back(child);
        }
    }
    return tree;
}

bool decomposition_invariants_hold(std::span<const DimensionTree> forest,
                                   const PathDecomposition& deco) {
    std::map<std::pair<int, NodeId>, int> seen;
    for (const auto& group : deco.groups) {
        for (const TreePath& path : group) {
            if (path.nodes.empty()) {
                return false;
            }
            const DimensionTree& tree = forest[static_cast<std::size_t>(path.tree)];
            for (std::size_t i = 0; i < path.nodes.size(); ++i) {
                ++seen[{path.tree, path.nodes[i]}];
                if (i > 0 && tree.parent(path.nodes[i]) != path.nodes[i - 1]) {
                    return false;
                }
            }
        }
        for (std::size_t i = 0; i < group.size(); ++i) {
            for (std::size_t j = i + 1; j < group.size(); ++j) {
                if (group[i].tree != group[j].tree) {
                    continue;
                }
                const DimensionTree& tree = forest[static_cast<std::size_t>(group[i].tree)];
                for (NodeId u : group[i].nodes) {
                    for (NodeId v : group[j].nodes) {
                        if (tree.overlaps(u, v)) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    int total = 0;
    for (const DimensionTree& t : forest) {
        total += t.size();
    }
    if (static_cast<int>(seen.size()) != total) {
        return false;
    }
    for (const auto& [node, times] : seen) {
        if (times != 1) {
            return false;
        }
    }
    return true;
}

bool same_bits(double a, double b) {
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

} // namespace

int main() {
    criterion(1, "two-tree motivating instance: k=2 picks (r1,a2),(r1,b2) with weight 4",
              [](std::string& detail) {
                  const GeneratedInstance inst = gen_two_tree_example(1.0);
                  solve(inst.space, inst.weights, SolverConfig{2}); // warm-up
                  const auto start = Clock::now();
                  const Solution s = solve(inst.space, inst.weights, SolverConfig{2});
                  const double elapsed = seconds_since(start);
                  const bool exact = s.total_weight == 4.0 && s.size() == 2 &&
                                     s.segments[0] == ProductNode({0, 1}) &&
                                     s.segments[1] == ProductNode({0, 2});
                  detail = "solve " + std::to_string(elapsed * 1e3) + " ms";
                  return exact && elapsed < 1e-3;
              });

    criterion(2, "simple conflict: solver 2, overlap-free optimum 3, ratio 1.5",
              [](std::string& detail) {
                  const GeneratedInstance inst = gen_simple_conflict();
                  solve(inst.space, inst.weights, SolverConfig{3}); // warm-up
                  const auto start = Clock::now();
                  const Solution dp = solve(inst.space, inst.weights, SolverConfig{3});
                  const Solution exact = brute_force_optimal(inst.space, inst.weights, 3);
                  const double elapsed = seconds_since(start);
                  detail = "solve+oracle " + std::to_string(elapsed * 1e3) + " ms";
                  return dp.total_weight == 2.0 && exact.total_weight == 3.0 &&
                         exact.total_weight / dp.total_weight == 1.5 && elapsed < 1e-3;
              });

    criterion(3, "power conflict family: solver 2^m vs optimum 3^m for m in {1,2}",
              [](std::string& detail) {
                  const auto start = Clock::now();
                  for (int m : {1, 2}) {
                      const GeneratedInstance inst = gen_power_conflict(m);
                      const Solution dp =
                          solve(inst.space, inst.weights, SolverConfig{inst.k_hint});
                      const Solution exact =
                          brute_force_optimal(inst.space, inst.weights, inst.k_hint);
                      if (dp.total_weight != std::pow(2.0, m) ||
                          exact.total_weight != std::pow(3.0, m)) {
                          detail = "mismatch at m=" + std::to_string(m);
                          return false;
                      }
                  }
                  return seconds_since(start) < 10.0;
              });

    const SuiteStats d2 = run_suite_d2(500);
    criterion(4, "500 random 2-dimensional instances solved exactly", [&](std::string& detail) {
        detail = std::to_string(d2.weight_matches) + "/" + std::to_string(d2.instances) +
                 " matches in " + std::to_string(d2.elapsed) + " s";
        return d2.instances == 500 && d2.weight_matches == 500 && d2.elapsed < 60.0;
    });

    const SuiteStats d34 = run_suite_d34(300);
    criterion(5, "300 random 3/4-dimensional instances match the conflict-free optimum",
              [&](std::string& detail) {
                  detail = std::to_string(d34.weight_matches) + "/" +
                           std::to_string(d34.instances) + " matches in " +
                           std::to_string(d34.elapsed) + " s";
                  return d34.instances == 300 && d34.weight_matches == 300 &&
                         d34.elapsed < 120.0;
              });

    criterion(6, "every solver output in suites 4-5 is overlap-free and conflict-free",
              [&](std::string& detail) {
                  detail = "overlap-free " + std::to_string(d2.overlap_free + d34.overlap_free) +
                           "/800, conflict-free " +
                           std::to_string(d2.conflict_free + d34.conflict_free) + "/800";
                  return d2.overlap_free == 500 && d2.conflict_free == 500 &&
                         d34.overlap_free == 300 && d34.conflict_free == 300;
              });

    criterion(7, "approximation bound min(ceil(log2(m+1)), h)^(d-2) holds on suite 5",
              [&](std::string& detail) {
                  detail = std::to_string(d34.within_bound) + "/300 within bound";
                  return d34.within_bound == 300;
              });

    criterion(8, "100 digraph reductions: optimum equals MIS + (1+eps)|E| with eps = 1/2",
              [](std::string& detail) {
                  Rng rng(20260408);
                  OracleLimits limits;
                  limits.max_candidates = 26; // 7 vertices + 2*9 edges can reach 25
                  const auto start = Clock::now();
                  for (int round = 0; round < 100; ++round) {
                      const Digraph g = random_digraph(rng, 7, 9);
                      const GeneratedInstance inst = gen_mis_reduction(g, 0.5);
                      const int mis = brute_force_mis(g);
                      const Solution best =
                          brute_force_optimal(inst.space, inst.weights, inst.k_hint, limits);
                      const double expected =
                          static_cast<double>(mis) + 1.5 * static_cast<double>(g.edges.size());
                      if (best.total_weight != expected) {
                          detail = "round " + std::to_string(round) + ": got " +
                                   std::to_string(best.total_weight) + ", want " +
                                   std::to_string(expected);
                          return false;
                      }
                  }
                  detail = std::to_string(seconds_since(start)) + " s";
                  return seconds_since(start) < 120.0;
              });

    criterion(9, "200 random forests decompose within the group bounds", [](std::string& detail) {
        Rng rng(20260409);
        for (int round = 0; round < 200; ++round) {
            std::vector<DimensionTree> forest;
            const int trees = rng.int_in(1, 3);
            for (int t = 0; t < trees; ++t) {
                forest.push_back(random_tree(rng, rng.int_in(1, 45), rng.int_in(2, 6)));
            }
            int leaves = 0;
            int height = 0;
            for (const DimensionTree& t : forest) {
                leaves += t.leaf_count();
                height = std::max(height, t.height());
            }
            if (leaves > 64) {
                continue;
            }
            const PathDecomposition median = decompose_paths(forest);
            if (static_cast<int>(median.groups.size()) > path_group_bound(leaves) ||
                !decomposition_invariants_hold(forest, median)) {
                detail = "median-leaf decomposition failed at round " + std::to_string(round);
                return false;
            }
            const PathDecomposition stripped = decompose_by_height(forest);
            if (static_cast<int>(stripped.groups.size()) != height ||
                !decomposition_invariants_hold(forest, stripped)) {
                detail = "height decomposition failed at round " + std::to_string(round);
                return false;
            }
        }
        return true;
    });

    criterion(10, "solve time grows at most 1.5x linearly from 1e4 to 1e6 nodes",
              [](std::string& detail) {
                  const int sizes4[] = {25, 20, 20};
                  const int sizes5[] = {50, 50, 40};
                  const int sizes6[] = {100, 100, 100};
                  const GeneratedInstance small = gen_random(3, sizes4, 4, 1.0, 1001);
                  const GeneratedInstance mid = gen_random(3, sizes5, 4, 1.0, 1002);
                  const GeneratedInstance large = gen_random(3, sizes6, 4, 1.0, 1003);
                  const double t4 = time_solve(small.space, small.weights, 10, 3);
                  const double t5 = time_solve(mid.space, mid.weights, 10, 3);
                  const double t6 = time_solve(large.space, large.weights, 10, 2);
                  char buffer[160];
                  std::snprintf(buffer, sizeof(buffer),
                                "t(1e4)=%.3fs t(1e5)=%.3fs t(1e6)=%.3fs ratios %.1f, %.1f", t4,
                                t5, t6, t5 / t4, t6 / t5);
                  detail = buffer;
                  return t5 <= 15.0 * t4 && t6 <= 15.0 * t5 && t6 < 60.0;
              });

    criterion(11, "box-cox at m=0 matches absdiff bitwise; composition is scale-invariant",
              [](std::string& detail) {
                  Rng rng(20260411);
                  for (int i = 0; i < 100000; ++i) {
                      const double pre = rng.unit() * 10000.0;
                      const double cur = rng.unit() * 10000.0;
                      if (!same_bits(weight_boxcox(pre, cur, 0.0), weight_absdiff(pre, cur))) {
                          detail = "box-cox mismatch at pair " + std::to_string(i);
                          return false;
                      }
                  }
                  // Integer cells, integer factor on one period: the share
                  // quotients are identical reals, so the doubles match.
                  const GeneratedInstance base =
                      gen_random(2, std::vector<int>{6, 5}, 3, 1.0, 20260412);
                  for (int factor : {2, 3, 7, 10}) {
                      CellTable scaled;
                      for (const auto& [idx, value] : base.cells.entries()) {
                          scaled.add(base.space, base.space.node_at(idx),
                                     value.pre * factor, value.cur);
                      }
                      const WeightSpec spec{WeightKind::Composition};
                      const WeightMap a = build_weight_map(base.cells, base.space, spec);
                      const WeightMap b = build_weight_map(scaled, base.space, spec);
                      for (NodeIndex idx = 0; idx < base.space.node_count(); ++idx) {
                          if (!same_bits(a.at(idx), b.at(idx))) {
                              detail = "composition mismatch at node " + std::to_string(idx) +
                                       " factor " + std::to_string(factor);
                              return false;
                          }
                      }
                  }
                  return true;
              });

    if (g_failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return 1;
}
