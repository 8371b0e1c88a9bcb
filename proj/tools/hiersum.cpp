#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hiersum/errors.hpp"
#include "hiersum/generators.hpp"
#include "hiersum/io.hpp"
#include "hiersum/oracle.hpp"
#include "hiersum/rng.hpp"
#include "hiersum/solver.hpp"

namespace {

using nlohmann::json;
using namespace hiersum;

struct Options {
    std::string mode = "summarize";
    std::vector<std::string> hierarchy_paths;
    std::optional<std::string> facts_path;
    std::optional<std::string> weights_path;
    int k = 0;
    std::string weight = "absdiff";
    bool weight_given = false;
    double boxcox_m = 0.2;
    double boxcox_floor = 1e-9;
    std::string out = "-";
    std::uint64_t seed = 0;
    int max_candidates = OracleLimits{}.max_candidates;

    std::string instance = "two-tree";
    std::string out_dir = ".";
    std::string name;
    double x = 1.0;
    int m = 1;
    int d = 2;
    int tree_size = 6;
    int max_height = 3;
    double density = 1.0;
    int vertices = 4;
    int edges = 4;
    double epsilon = 0.5;
};

void write_output(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write to '" + path + "'");
    }
    out << text << "\n";
}

WeightSpec weight_spec_from(const Options& opt) {
    WeightSpec spec;
    if (opt.weight == "absdiff") {
        spec.kind = WeightKind::AbsDiff;
    } else if (opt.weight == "composition") {
        spec.kind = WeightKind::Composition;
    } else if (opt.weight == "boxcox") {
        spec.kind = WeightKind::BoxCox;
    } else {
        throw ConfigError("unknown weight function '" + opt.weight + "'");
    }
    spec.boxcox_m = opt.boxcox_m;
    spec.boxcox_floor = opt.boxcox_floor;
    return spec;
}

std::string weight_label(const Options& opt) {
    if (opt.weights_path) {
        return "file";
    }
    if (opt.weight == "boxcox") {
        return "boxcox(m=" + io::format_double(opt.boxcox_m) + ")";
    }
    return opt.weight;
}

struct PreparedInstance {
    ProductSpace space;
    WeightMap weights;
    std::optional<AggregateTable> aggregates;
};

PreparedInstance prepare(const Options& opt) {
    if (opt.k < 1) {
        throw ConfigError("k must be at least 1");
    }
    if (opt.weights_path && opt.weight_given) {
        throw ConfigError("--weight applies to facts input, not to a weights file");
    }
    io::LoadedInstance loaded =
        io::load_instance(opt.hierarchy_paths, opt.facts_path, opt.weights_path);
    if (loaded.direct_weights) {
        return {std::move(loaded.space), std::move(*loaded.direct_weights), std::nullopt};
    }
    AggregateTable agg = aggregate(loaded.cells, loaded.space);
    WeightMap weights = build_weight_map(loaded.cells, loaded.space, weight_spec_from(opt));
    return {std::move(loaded.space), std::move(weights), std::move(agg)};
}

int run_summarize(const Options& opt) {
    const PreparedInstance inst = prepare(opt);
    SolverConfig cfg;
    cfg.k = opt.k;
    const Solution solution = solve(inst.space, inst.weights, cfg);
    const json report =
        io::summarize_report(inst.space, solution, opt.k, weight_label(opt), inst.weights,
                             inst.aggregates ? &*inst.aggregates : nullptr);
    write_output(opt.out, report.dump(2));
    return 0;
}

int run_verify(const Options& opt) {
    const PreparedInstance inst = prepare(opt);
    SolverConfig cfg;
    cfg.k = opt.k;
    const Solution dp = solve(inst.space, inst.weights, cfg);

    OracleLimits limits;
    limits.max_candidates = opt.max_candidates;
    const Solution overlap_free = brute_force_optimal(inst.space, inst.weights, opt.k, limits);
    const Solution conflict_free =
        brute_force_conflict_free(inst.space, inst.weights, opt.k, limits);

    int max_size = 0;
    int max_height = 0;
    for (int i = 0; i < inst.space.dims(); ++i) {
        max_size = std::max(max_size, inst.space.tree(i).size());
        max_height = std::max(max_height, inst.space.tree(i).height());
    }
    int log_factor = 0;
    while ((1 << log_factor) < max_size + 1) {
        ++log_factor;
    }
    const int exponent = std::max(inst.space.dims() - 2, 0);
    const double bound = std::pow(std::min(log_factor, max_height), exponent);

    json report;
    report["schema"] = 1;
    report["mode"] = "verify";
    report["k"] = opt.k;
    report["solver_weight"] = dp.total_weight;
    report["optimal_weight"] = overlap_free.total_weight;
    report["conflict_free_weight"] = conflict_free.total_weight;
    report["ratio"] = dp.total_weight > 0.0 ? overlap_free.total_weight / dp.total_weight : 1.0;
    report["approximation_bound"] = bound;
    report["solver_matches_conflict_free"] = dp.total_weight == conflict_free.total_weight;
    write_output(opt.out, report.dump(2));
    return 0;
}

GeneratedInstance build_instance(const Options& opt) {
    if (opt.instance == "two-tree") {
        return gen_two_tree_example(opt.x);
    }
    if (opt.instance == "simple-conflict") {
        return gen_simple_conflict();
    }
    if (opt.instance == "power-conflict") {
        return gen_power_conflict(opt.m);
    }
    if (opt.instance == "mis") {
        if (opt.vertices < 1) {
            throw ConfigError("--vertices must be at least 1");
        }
        Rng rng(opt.seed);
        Digraph g;
        g.vertex_count = opt.vertices;
        const int cap = opt.vertices * (opt.vertices - 1);
        const int want = std::min(opt.edges, cap);
        std::set<std::pair<int, int>> chosen;
        while (static_cast<int>(chosen.size()) < want) {
            const int v = rng.int_in(0, opt.vertices - 1);
            const int w = rng.int_in(0, opt.vertices - 1);
            if (v != w) {
                chosen.emplace(v, w);
            }
        }
        g.edges.assign(chosen.begin(), chosen.end());
        return gen_mis_reduction(g, opt.epsilon);
    }
    if (opt.instance == "random") {
        std::vector<int> sizes(static_cast<std::size_t>(std::max(opt.d, 0)), opt.tree_size);
        return gen_random(opt.d, sizes, opt.max_height, opt.density, opt.seed);
    }
    throw ConfigError("unknown instance '" + opt.instance + "'");
}

int run_generate(const Options& opt) {
    const GeneratedInstance inst = build_instance(opt);
    const std::string prefix = opt.out_dir + "/" + (opt.name.empty() ? inst.name : opt.name);

    json meta;
    meta["schema"] = 1;
    meta["mode"] = "generate";
    meta["instance"] = inst.name;
    meta["dimensions"] = inst.space.dims();
    meta["k_hint"] = inst.k_hint;
    for (const auto& [key, value] : inst.params) {
        meta["params"][key] = value;
    }
    if (inst.known_optimal_weight) {
        meta["known_optimal_weight"] = *inst.known_optimal_weight;
    }
    if (inst.known_conflict_free_weight) {
        meta["known_conflict_free_weight"] = *inst.known_conflict_free_weight;
    }

    json hierarchy_files = json::array();
    for (int i = 0; i < inst.space.dims(); ++i) {
        const std::string path = prefix + "_dim" + std::to_string(i + 1) + ".csv";
        std::ofstream out(path);
        if (!out) {
            throw InputError("cannot write to '" + path + "'");
        }
        out << io::hierarchy_to_csv(inst.space.tree(i));
        hierarchy_files.push_back(path);
    }
    meta["hierarchy_files"] = hierarchy_files;

    if (!inst.cells.empty()) {
        const std::string path = prefix + "_facts.csv";
        std::ofstream out(path);
        if (!out) {
            throw InputError("cannot write to '" + path + "'");
        }
        out << io::facts_to_csv(inst.space, inst.cells);
        meta["facts_file"] = path;
    } else {
        const std::string path = prefix + "_weights.csv";
        std::ofstream out(path);
        if (!out) {
            throw InputError("cannot write to '" + path + "'");
        }
        out << io::weights_to_csv(inst.space, inst.weights);
        meta["weights_file"] = path;
    }

    write_output(opt.out, meta.dump(2));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"Summarize metric changes over hierarchical dimensions"};
    app.add_option("--mode", opt.mode, "summarize | verify | generate")
        ->check(CLI::IsMember({"summarize", "verify", "generate"}));
    app.add_option("--hierarchy", opt.hierarchy_paths,
                   "hierarchy CSV, one per dimension (order sets the dimension order)");
    app.add_option("--facts", opt.facts_path, "facts CSV with two metric periods");
    app.add_option("--weights-file", opt.weights_path, "direct per-node weights CSV");
    app.add_option("--k", opt.k, "maximum number of output segments");
    app.add_option("--weight", opt.weight, "absdiff | composition | boxcox")
        ->check(CLI::IsMember({"absdiff", "composition", "boxcox"}));
    app.add_option("--boxcox-m", opt.boxcox_m, "box-cox exponent parameter in [0,1)");
    app.add_option("--boxcox-floor", opt.boxcox_floor, "clamp floor for zero metrics");
    app.add_option("--out", opt.out, "output file, '-' for stdout");
    app.add_option("--seed", opt.seed, "seed for generator subcommands");
    app.add_option("--max-candidates", opt.max_candidates,
                   "positive-node cap for the exhaustive reference (verify mode)");
    app.add_option("--instance", opt.instance,
                   "two-tree | simple-conflict | power-conflict | mis | random")
        ->check(CLI::IsMember({"two-tree", "simple-conflict", "power-conflict", "mis",
                               "random"}));
    app.add_option("--out-dir", opt.out_dir, "directory for generated files");
    app.add_option("--name", opt.name, "file prefix for generated files");
    app.add_option("--x", opt.x, "metric shift of the two-tree instance");
    app.add_option("--m", opt.m, "power of the conflict family");
    app.add_option("--d", opt.d, "dimensions of the random instance");
    app.add_option("--tree-size", opt.tree_size, "nodes per random tree");
    app.add_option("--max-height", opt.max_height, "height cap for random trees");
    app.add_option("--density", opt.density, "fraction of leaf tuples carrying cells");
    app.add_option("--vertices", opt.vertices, "vertices of the random digraph");
    app.add_option("--edges", opt.edges, "edges of the random digraph");
    app.add_option("--epsilon", opt.epsilon, "edge-node weight is 1 + epsilon");

    try {
        app.parse(argc, argv);
        opt.weight_given = app.count("--weight") > 0;
        if (opt.mode == "summarize") {
            return run_summarize(opt);
        }
        if (opt.mode == "verify") {
            return run_verify(opt);
        }
        return run_generate(opt);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ConfigError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: parse: " << e.what() << "\n";
        return 3;
    } catch (const InputError& e) {
        std::cerr << "error: input: " << e.what() << "\n";
        return 3;
    } catch (const CapacityError& e) {
        std::cerr << "error: capacity: " << e.what() << "\n";
        return 4;
    } catch (const StructuralError& e) {
        std::cerr << "error: structure: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
