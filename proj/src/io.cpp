#include "hiersum/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "hiersum/errors.hpp"

namespace hiersum::io {

namespace {

// Minimal CSV: comma-separated, double quotes around fields containing
// commas, quotes or newlines; "" escapes a quote inside a quoted field.
std::vector<std::string> split_csv_row(const std::string& line, const std::string& file,
                                       std::size_t lineno) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"') {
            if (!field.empty()) {
                throw ParseError(file, lineno, "quote inside unquoted field");
            }
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(ch);
        }
    }
    if (quoted) {
        throw ParseError(file, lineno, "unterminated quoted field");
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') {
            out.push_back('"');
        }
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

std::int64_t parse_int(const std::string& field, const std::string& file, std::size_t lineno,
                       const std::string& what) {
    std::int64_t value = 0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || field.empty()) {
        throw ParseError(file, lineno, "expected an integer for " + what + ", got '" + field + "'");
    }
    return value;
}

double parse_double(const std::string& field, const std::string& file, std::size_t lineno,
                    const std::string& what) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || field.empty()) {
        throw ParseError(file, lineno, "expected a number for " + what + ", got '" + field + "'");
    }
    return value;
}

// Reads lines with trailing \r stripped; returns false at EOF.
bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) {
        return false;
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return true;
}

std::vector<std::string> dim_headers(int d) {
    std::vector<std::string> headers;
    headers.reserve(static_cast<std::size_t>(d));
    for (int i = 1; i <= d; ++i) {
        headers.push_back("dim" + std::to_string(i));
    }
    return headers;
}

ProductNode parse_node_columns(const std::vector<std::string>& fields, const ProductSpace& space,
                               const std::string& file, std::size_t lineno) {
    ProductNode node;
    node.coords.reserve(static_cast<std::size_t>(space.dims()));
    for (int i = 0; i < space.dims(); ++i) {
        const std::int64_t ext =
            parse_int(fields[static_cast<std::size_t>(i)], file, lineno,
                      "dim" + std::to_string(i + 1));
        const auto id = space.tree(i).find_external(ext);
        if (!id) {
            throw InputError(file + ":" + std::to_string(lineno) + ": unknown node id " +
                             std::to_string(ext) + " in dimension " + std::to_string(i + 1));
        }
        node.coords.push_back(*id);
    }
    return node;
}

} // namespace

std::string format_double(double value) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

DimensionTree read_hierarchy_csv(std::istream& in, const std::string& filename) {
    std::string line;
    if (!next_line(in, line)) {
        throw ParseError(filename, 1, "empty hierarchy file");
    }
    if (split_csv_row(line, filename, 1) != std::vector<std::string>{"id", "parent_id", "name"}) {
        throw ParseError(filename, 1, "expected header 'id,parent_id,name'");
    }
    std::vector<TreeNodeRecord> records;
    std::size_t lineno = 1;
    while (next_line(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv_row(line, filename, lineno);
        if (fields.size() != 3) {
            throw ParseError(filename, lineno, "expected 3 columns, got " +
                                                   std::to_string(fields.size()));
        }
        TreeNodeRecord rec;
        rec.id = parse_int(fields[0], filename, lineno, "id");
        if (!fields[1].empty()) {
            rec.parent_id = parse_int(fields[1], filename, lineno, "parent_id");
        }
        rec.name = fields[2];
        records.push_back(std::move(rec));
    }
    try {
        return DimensionTree::from_records(records);
    } catch (const InputError& e) {
        throw InputError(filename + ": " + e.what());
    }
}

DimensionTree load_hierarchy(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open hierarchy file '" + path + "'");
    }
    return read_hierarchy_csv(in, path);
}

CellTable read_facts_csv(std::istream& in, const ProductSpace& space,
                         const std::string& filename) {
    std::string line;
    if (!next_line(in, line)) {
        throw ParseError(filename, 1, "empty facts file");
    }
    auto expected = dim_headers(space.dims());
    expected.push_back("metric_pre");
    expected.push_back("metric_cur");
    if (split_csv_row(line, filename, 1) != expected) {
        std::string want;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            want += (i ? "," : "") + expected[i];
        }
        throw ParseError(filename, 1, "expected header '" + want + "'");
    }

    CellTable cells;
    std::size_t lineno = 1;
    const std::size_t columns = expected.size();
    while (next_line(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv_row(line, filename, lineno);
        if (fields.size() != columns) {
            throw ParseError(filename, lineno, "expected " + std::to_string(columns) +
                                                   " columns, got " +
                                                   std::to_string(fields.size()));
        }
        const ProductNode node = parse_node_columns(fields, space, filename, lineno);
        const double pre = parse_double(fields[columns - 2], filename, lineno, "metric_pre");
        const double cur = parse_double(fields[columns - 1], filename, lineno, "metric_cur");
        try {
            cells.add(space, node, pre, cur);
        } catch (const InputError& e) {
            throw InputError(filename + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cells;
}

WeightMap read_weights_csv(std::istream& in, const ProductSpace& space,
                           const std::string& filename) {
    std::string line;
    if (!next_line(in, line)) {
        throw ParseError(filename, 1, "empty weights file");
    }
    auto expected = dim_headers(space.dims());
    expected.push_back("weight");
    if (split_csv_row(line, filename, 1) != expected) {
        std::string want;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            want += (i ? "," : "") + expected[i];
        }
        throw ParseError(filename, 1, "expected header '" + want + "'");
    }

    WeightMap weights = space.node_count() <= kDefaultDenseNodeBudget
                            ? WeightMap::make_dense(space.node_count())
                            : WeightMap::make_sparse(space.node_count());
    std::vector<bool> seen;
    std::set<NodeIndex> seen_sparse;
    if (weights.dense()) {
        seen.assign(space.node_count(), false);
    }
    std::size_t lineno = 1;
    const std::size_t columns = expected.size();
    while (next_line(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv_row(line, filename, lineno);
        if (fields.size() != columns) {
            throw ParseError(filename, lineno, "expected " + std::to_string(columns) +
                                                   " columns, got " +
                                                   std::to_string(fields.size()));
        }
        const ProductNode node = parse_node_columns(fields, space, filename, lineno);
        const double w = parse_double(fields[columns - 1], filename, lineno, "weight");
        const NodeIndex idx = space.index_of(node);
        const bool duplicate = weights.dense() ? seen[idx] : !seen_sparse.insert(idx).second;
        if (duplicate) {
            throw InputError(filename + ":" + std::to_string(lineno) +
                             ": duplicate weight row for one node");
        }
        if (weights.dense()) {
            seen[idx] = true;
        }
        try {
            weights.set(idx, w);
        } catch (const InputError& e) {
            throw InputError(filename + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return weights;
}

LoadedInstance load_instance(const std::vector<std::string>& hierarchy_paths,
                             const std::optional<std::string>& facts_path,
                             const std::optional<std::string>& weights_path) {
    if (hierarchy_paths.empty()) {
        throw ConfigError("at least one hierarchy file is required");
    }
    if (facts_path.has_value() == weights_path.has_value()) {
        throw ConfigError("exactly one of a facts file or a weights file is required");
    }
    std::vector<DimensionTree> trees;
    trees.reserve(hierarchy_paths.size());
    for (const std::string& path : hierarchy_paths) {
        trees.push_back(load_hierarchy(path));
    }
    ProductSpace space(std::move(trees));

    if (facts_path) {
        std::ifstream in(*facts_path);
        if (!in) {
            throw InputError("cannot open facts file '" + *facts_path + "'");
        }
        CellTable cells = read_facts_csv(in, space, *facts_path);
        return {std::move(space), std::move(cells), std::nullopt};
    }
    std::ifstream in(*weights_path);
    if (!in) {
        throw InputError("cannot open weights file '" + *weights_path + "'");
    }
    WeightMap weights = read_weights_csv(in, space, *weights_path);
    return {std::move(space), CellTable{}, std::move(weights)};
}

std::string hierarchy_to_csv(const DimensionTree& tree) {
    std::string out = "id,parent_id,name\n";
    for (NodeId v = 0; v < tree.size(); ++v) {
        out += std::to_string(tree.external_id(v));
        out.push_back(',');
        if (tree.parent(v) != kNoNode) {
            out += std::to_string(tree.external_id(tree.parent(v)));
        }
        out.push_back(',');
        out += csv_escape(tree.name(v));
        out.push_back('\n');
    }
    return out;
}

std::string facts_to_csv(const ProductSpace& space, const CellTable& cells) {
    std::string out;
    for (const std::string& h : dim_headers(space.dims())) {
        out += h;
        out.push_back(',');
    }
    out += "metric_pre,metric_cur\n";
    for (const auto& [idx, value] : cells.entries()) {
        const ProductNode node = space.node_at(idx);
        for (int i = 0; i < space.dims(); ++i) {
            out += std::to_string(space.tree(i).external_id(node[i]));
            out.push_back(',');
        }
        out += format_double(value.pre);
        out.push_back(',');
        out += format_double(value.cur);
        out.push_back('\n');
    }
    return out;
}

std::string weights_to_csv(const ProductSpace& space, const WeightMap& weights) {
    std::string out;
    for (const std::string& h : dim_headers(space.dims())) {
        out += h;
        out.push_back(',');
    }
    out += "weight\n";
    weights.for_each_positive([&](NodeIndex idx, double w) {
        const ProductNode node = space.node_at(idx);
        for (int i = 0; i < space.dims(); ++i) {
            out += std::to_string(space.tree(i).external_id(node[i]));
            out.push_back(',');
        }
        out += format_double(w);
        out.push_back('\n');
    });
    return out;
}

nlohmann::json summarize_report(const ProductSpace& space, const Solution& solution, int k,
                                const std::string& weight_label, const WeightMap& weights,
                                const AggregateTable* aggregates) {
    struct Entry {
        double weight;
        NodeIndex idx;
        const ProductNode* node;
    };
    std::vector<Entry> order;
    order.reserve(solution.segments.size());
    for (const ProductNode& node : solution.segments) {
        const NodeIndex idx = space.index_of(node);
        order.push_back({weights.at(idx), idx, &node});
    }
    std::sort(order.begin(), order.end(), [](const Entry& a, const Entry& b) {
        return a.weight != b.weight ? a.weight > b.weight : a.idx < b.idx;
    });

    const CellValue totals = aggregates ? aggregates->root_totals() : CellValue{};
    nlohmann::json entries = nlohmann::json::array();
    for (const Entry& e : order) {
        nlohmann::json entry;
        nlohmann::json names = nlohmann::json::array();
        for (int i = 0; i < space.dims(); ++i) {
            names.push_back(space.tree(i).name((*e.node)[i]));
        }
        entry["coordinates"] = std::move(names);
        entry["weight"] = e.weight;
        if (aggregates) {
            const CellValue v = aggregates->at(e.idx);
            entry["metric_pre"] = v.pre;
            entry["metric_cur"] = v.cur;
            entry["delta"] = v.cur - v.pre;
            entry["share_pre"] =
                totals.pre > 0.0 ? nlohmann::json(v.pre / totals.pre) : nlohmann::json();
            entry["share_cur"] =
                totals.cur > 0.0 ? nlohmann::json(v.cur / totals.cur) : nlohmann::json();
        }
        entries.push_back(std::move(entry));
    }

    nlohmann::json report;
    report["schema"] = 1;
    report["k"] = k;
    report["weight_function"] = weight_label;
    report["total_weight"] = solution.total_weight;
    if (aggregates) {
        report["grand_total_pre"] = totals.pre;
        report["grand_total_cur"] = totals.cur;
    }
    report["entries"] = std::move(entries);
    return report;
}

} // namespace hiersum::io
