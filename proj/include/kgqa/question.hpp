#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "kgqa/dimension.hpp"
#include "kgqa/hash.hpp"
#include "kgqa/jsonl.hpp"

namespace kgqa {

// One multiple-choice question: n candidates, exactly one correct.
struct SyntheticQuestion {
    std::string id;
    std::string question;
    std::vector<std::string> candidates;
    std::size_t answer_index = 0;
    Dimension dimension = Dimension::relational_other;
    std::string source_statement_id;

    const std::string& answer() const { return candidates[answer_index]; }

    Json to_json() const {
        Json j;
        j["id"] = id;
        j["question"] = question;
        j["candidates"] = candidates;
        j["answer_index"] = answer_index;
        j["dimension"] = std::string(to_string(dimension));
        j["source_statement_id"] = source_statement_id;
        return j;
    }

    static SyntheticQuestion from_json(const Json& j) {
        SyntheticQuestion q;
        q.id = j.at("id").get<std::string>();
        q.question = j.at("question").get<std::string>();
        q.candidates = j.at("candidates").get<std::vector<std::string>>();
        q.answer_index = j.at("answer_index").get<std::size_t>();
        if (j.contains("dimension")) q.dimension = require_dimension(j.at("dimension").get<std::string>());
        if (j.contains("source_statement_id"))
            q.source_statement_id = j.at("source_statement_id").get<std::string>();
        if (q.candidates.size() < 2)
            throw Error(ErrorKind::validation, "question " + q.id + ": fewer than 2 candidates");
        if (q.answer_index >= q.candidates.size())
            throw Error(ErrorKind::validation, "question " + q.id + ": answer_index out of range");
        return q;
    }
};

class QuestionPool {
public:
    QuestionPool() = default;

    std::vector<SyntheticQuestion>& questions() { return questions_; }
    const std::vector<SyntheticQuestion>& questions() const { return questions_; }
    std::size_t size() const { return questions_.size(); }
    bool empty() const { return questions_.empty(); }
    const SyntheticQuestion& operator[](std::size_t i) const { return questions_[i]; }

    void add(SyntheticQuestion q) { questions_.push_back(std::move(q)); }

    Json& header() { return header_; }
    const Json& header() const { return header_; }

    std::size_t count(Dimension d) const {
        std::size_t c = 0;
        for (const auto& q : questions_)
            if (q.dimension == d) ++c;
        return c;
    }

    std::unordered_map<std::string, std::size_t> index_by_id() const {
        std::unordered_map<std::string, std::size_t> idx;
        idx.reserve(questions_.size());
        for (std::size_t i = 0; i < questions_.size(); ++i) idx.emplace(questions_[i].id, i);
        return idx;
    }

    // One JSON object per line. A metadata line, marked by the "_header" key,
    // carries the generation-config snapshot or sampling provenance.
    std::string to_jsonl() const {
        std::string out;
        if (!header_.is_null()) {
            Json h;
            h["_header"] = header_;
            out += h.dump();
            out += '\n';
        }
        for (const auto& q : questions_) {
            out += q.to_json().dump();
            out += '\n';
        }
        return out;
    }

    void save(const std::string& path) const { write_text_file(path, to_jsonl()); }

    static QuestionPool load(const std::string& path) {
        QuestionPool pool;
        std::unordered_map<std::string, std::size_t> seen;
        for_each_jsonl(path, [&](std::size_t line_no, Json&& j) {
            if (j.contains("_header")) {
                pool.header_ = j.at("_header");
                return;
            }
            auto q = SyntheticQuestion::from_json(j);
            auto [it, inserted] = seen.emplace(q.id, line_no);
            if (!inserted)
                throw Error(ErrorKind::validation,
                            path + ":" + std::to_string(line_no) + ": duplicate question id '" + q.id + "'");
            pool.add(std::move(q));
        });
        return pool;
    }

    std::string digest() const {
        return hex_digest(fnv1a64(to_jsonl()));
    }

private:
    Json header_;
    std::vector<SyntheticQuestion> questions_;
};

} // namespace kgqa
