#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "kgqa/dimension.hpp"
#include "kgqa/jsonl.hpp"

namespace kgqa {

// One knowledge-graph edge: head, relation, tail plus qualifiers, annotated
// with its dimension. head/tail hold human-readable text; head_id/tail_id keep
// the raw node identifiers for stats and provenance.
struct Statement {
    std::string id;
    std::string head_id;
    std::string tail_id;
    std::string head;
    std::string tail;
    std::string relation;
    std::map<std::string, std::string> qualifiers;
    Dimension dimension = Dimension::relational_other;

    Json to_json() const {
        Json j;
        j["id"] = id;
        j["head"] = head;
        j["relation"] = relation;
        j["tail"] = tail;
        j["head_id"] = head_id;
        j["tail_id"] = tail_id;
        j["dimension"] = std::string(to_string(dimension));
        if (!qualifiers.empty()) {
            Json q = Json::object();
            for (const auto& [k, v] : qualifiers) q[k] = v;
            j["qualifiers"] = std::move(q);
        }
        return j;
    }
};

class StatementSet {
public:
    StatementSet() = default;
    explicit StatementSet(std::string source_name) : source_name_(std::move(source_name)) {}

    const std::string& source_name() const { return source_name_; }
    const std::vector<Statement>& statements() const { return statements_; }
    std::size_t size() const { return statements_.size(); }
    bool empty() const { return statements_.empty(); }
    const Statement& operator[](std::size_t i) const { return statements_[i]; }

    void add(Statement s) {
        ++dimension_counts_[dimension_index(s.dimension)];
        statements_.push_back(std::move(s));
    }

    std::size_t count(Dimension d) const { return dimension_counts_[dimension_index(d)]; }

    const std::array<std::size_t, kDimensionCount>& dimension_counts() const {
        return dimension_counts_;
    }

    // Canonical serialization; used by the idempotence check and for debugging.
    std::string to_jsonl() const {
        std::string out;
        for (const auto& s : statements_) {
            out += s.to_json().dump();
            out += '\n';
        }
        return out;
    }

private:
    std::string source_name_;
    std::vector<Statement> statements_;
    std::array<std::size_t, kDimensionCount> dimension_counts_{};
};

} // namespace kgqa
