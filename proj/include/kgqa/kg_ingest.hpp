#pragma once

#include <fstream>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kgqa/statement.hpp"

namespace kgqa {

// Relation -> dimension lookup, loaded from a two-column TSV. The taxonomy is
// fixed; the mapping is data so users can extend or override it per KG.
class RelationMap {
public:
    static RelationMap from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error(ErrorKind::io, "cannot open mapping file: " + path);
        RelationMap map;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            auto t = trim(line);
            if (t.empty() || t.front() == '#') continue;
            auto tab = t.find('\t');
            if (tab == std::string_view::npos)
                throw Error(ErrorKind::parse,
                            path + ":" + std::to_string(line_no) + ": expected <relation>\\t<dimension>");
            auto relation = std::string(trim(t.substr(0, tab)));
            auto dim_name = trim(t.substr(tab + 1));
            auto dim = parse_dimension(dim_name);
            if (!dim)
                throw Error(ErrorKind::parse, path + ":" + std::to_string(line_no) +
                                                  ": unknown dimension '" + std::string(dim_name) + "'");
            map.entries_[relation] = *dim;
        }
        return map;
    }

    void set(std::string relation, Dimension d) { entries_[std::move(relation)] = d; }

    bool contains(const std::string& relation) const { return entries_.count(relation) > 0; }

    std::optional<Dimension> lookup(const std::string& relation) const {
        auto it = entries_.find(relation);
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, Dimension> entries_;
};

inline Dimension classify_dimension(const std::string& relation, const RelationMap& mapping) {
    auto d = mapping.lookup(relation);
    if (!d) throw Error(ErrorKind::mapping, "relation not in mapping: " + relation);
    return *d;
}

struct LoadOptions {
    bool strict = false; // strict: unmapped relations and invalid rows are fatal
};

struct LoadReport {
    std::size_t rows = 0;
    std::size_t loaded = 0;
    std::size_t dropped_unmapped = 0;
    std::size_t dropped_empty_node = 0;
    std::size_t dropped_duplicate_id = 0;
    std::vector<std::string> unmapped_relations; // sorted unique, for diagnostics

    Json to_json() const {
        Json j;
        j["rows"] = rows;
        j["loaded"] = loaded;
        j["dropped_unmapped"] = dropped_unmapped;
        j["dropped_empty_node"] = dropped_empty_node;
        j["dropped_duplicate_id"] = dropped_duplicate_id;
        j["unmapped_relations"] = unmapped_relations;
        return j;
    }
};

namespace detail {

inline std::vector<std::string> split_tsv(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        if (tab == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    if (!cells.empty() && !cells.back().empty() && cells.back().back() == '\r')
        cells.back().pop_back();
    return cells;
}

// Label column wins; otherwise the identifier with punctuation turned into spaces.
inline std::string node_text(const std::string& identifier, const std::string& label) {
    auto lbl = trim(label);
    if (!lbl.empty()) return std::string(lbl);
    auto norm = normalize_punct(identifier);
    std::string out;
    for (const auto& tok : split_ws(norm)) {
        if (!out.empty()) out += ' ';
        out += tok;
    }
    return out;
}

} // namespace detail

// Parses a KGTK-flavored TSV edge file (header row; id/node1/relation/node2
// required, "node1;label"/"node2;label" honored, remaining columns packed into
// qualifiers). Rows whose relation is not mapped are dropped and counted unless
// strict mode makes them fatal.
inline StatementSet load_edges(const std::string& path, const RelationMap& mapping,
                               const LoadOptions& options = {}, LoadReport* report = nullptr) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open edge file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::parse, path + ": missing header row");
    auto header = detail::split_tsv(line);

    constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t col_id = npos, col_node1 = npos, col_relation = npos, col_node2 = npos;
    std::size_t col_label1 = npos, col_label2 = npos;
    for (std::size_t i = 0; i < header.size(); ++i) {
        auto name = std::string(trim(header[i]));
        if (name == "id") col_id = i;
        else if (name == "node1") col_node1 = i;
        else if (name == "relation") col_relation = i;
        else if (name == "node2") col_node2 = i;
        else if (name == "node1;label") col_label1 = i;
        else if (name == "node2;label") col_label2 = i;
    }
    if (col_id == npos || col_node1 == npos || col_relation == npos || col_node2 == npos)
        throw Error(ErrorKind::parse, path + ": header must name id, node1, relation, node2");

    StatementSet set(path);
    LoadReport local;
    std::unordered_set<std::string> seen_ids;
    std::unordered_set<std::string> unmapped;
    std::size_t line_no = 1;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        ++local.rows;
        auto cells = detail::split_tsv(line);
        if (cells.size() != header.size())
            throw Error(ErrorKind::parse, path + ":" + std::to_string(line_no) + ": expected " +
                                              std::to_string(header.size()) + " columns, got " +
                                              std::to_string(cells.size()));

        Statement s;
        s.id = std::string(trim(cells[col_id]));
        s.head_id = std::string(trim(cells[col_node1]));
        s.tail_id = std::string(trim(cells[col_node2]));
        s.relation = std::string(trim(cells[col_relation]));
        s.head = detail::node_text(s.head_id, col_label1 == npos ? "" : cells[col_label1]);
        s.tail = detail::node_text(s.tail_id, col_label2 == npos ? "" : cells[col_label2]);

        if (s.id.empty() || s.head.empty() || s.tail.empty()) {
            if (options.strict)
                throw Error(ErrorKind::parse,
                            path + ":" + std::to_string(line_no) + ": empty id or node text");
            ++local.dropped_empty_node;
            continue;
        }
        if (!seen_ids.insert(s.id).second) {
            if (options.strict)
                throw Error(ErrorKind::parse,
                            path + ":" + std::to_string(line_no) + ": duplicate id '" + s.id + "'");
            ++local.dropped_duplicate_id;
            continue;
        }

        auto dim = mapping.lookup(s.relation);
        if (!dim) {
            unmapped.insert(s.relation);
            ++local.dropped_unmapped;
            continue;
        }
        s.dimension = *dim;

        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i == col_id || i == col_node1 || i == col_relation || i == col_node2 ||
                i == col_label1 || i == col_label2)
                continue;
            auto value = trim(cells[i]);
            if (!value.empty()) s.qualifiers[std::string(trim(header[i]))] = std::string(value);
        }

        set.add(std::move(s));
        ++local.loaded;
    }

    local.unmapped_relations.assign(unmapped.begin(), unmapped.end());
    std::sort(local.unmapped_relations.begin(), local.unmapped_relations.end());

    if (options.strict && !local.unmapped_relations.empty()) {
        std::string msg = "unmapped relations:";
        for (const auto& r : local.unmapped_relations) msg += " " + r;
        throw Error(ErrorKind::mapping, msg);
    }

    if (report) *report = std::move(local);
    return set;
}

struct KGStats {
    std::size_t total = 0;
    std::size_t node_count = 0;
    std::map<std::string, std::size_t> per_relation;
    std::array<std::size_t, kDimensionCount> per_dimension{};

    Json to_json() const {
        Json j;
        j["total"] = total;
        j["node_count"] = node_count;
        Json dims = Json::object();
        for (Dimension d : all_dimensions())
            dims[std::string(to_string(d))] = per_dimension[dimension_index(d)];
        j["per_dimension"] = std::move(dims);
        Json rels = Json::object();
        for (const auto& [r, c] : per_relation) rels[r] = c;
        j["per_relation"] = std::move(rels);
        return j;
    }
};

inline KGStats kg_stats(const StatementSet& set) {
    KGStats stats;
    stats.total = set.size();
    stats.per_dimension = set.dimension_counts();
    std::unordered_set<std::string> nodes;
    for (const auto& s : set.statements()) {
        ++stats.per_relation[s.relation];
        nodes.insert(s.head_id);
        nodes.insert(s.tail_id);
    }
    stats.node_count = nodes.size();
    return stats;
}

} // namespace kgqa
