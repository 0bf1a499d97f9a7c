#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "kgqa/jsonl.hpp"
#include "kgqa/scorer.hpp"

namespace kgqa {

// One training-dynamics snapshot: candidate scores and true-label confidence
// for one question at one epoch. Epoch 0 is the pre-training (vanilla) pass.
struct DynamicsRecord {
    std::string question_id;
    std::size_t epoch = 0;
    std::vector<double> scores;
    std::size_t answer_index = 0;
    double confidence = 0.0;

    Json to_json() const {
        Json j;
        j["question_id"] = question_id;
        j["epoch"] = epoch;
        j["scores"] = scores;
        j["answer_index"] = answer_index;
        j["confidence"] = confidence;
        return j;
    }
};

class DynamicsLog {
public:
    void add(DynamicsRecord r) { records_.push_back(std::move(r)); }

    const std::vector<DynamicsRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    std::size_t max_epoch() const {
        std::size_t e = 0;
        for (const auto& r : records_) e = std::max(e, r.epoch);
        return e;
    }

    // Per-question records indexed by epoch; validation guarantees density.
    std::map<std::string, std::vector<const DynamicsRecord*>> by_question() const {
        std::map<std::string, std::vector<const DynamicsRecord*>> out;
        const std::size_t epochs = max_epoch() + 1;
        for (const auto& r : records_) {
            auto& v = out[r.question_id];
            if (v.empty()) v.assign(epochs, nullptr);
            if (r.epoch < epochs) v[r.epoch] = &r;
        }
        return out;
    }

    // Every question must carry every epoch 0..E exactly once, with confidence
    // in [0, 1] and finite scores.
    void validate() const {
        if (records_.empty()) throw Error(ErrorKind::validation, "dynamics log is empty");
        const std::size_t epochs = max_epoch() + 1;
        std::map<std::string, std::vector<int>> seen;
        for (const auto& r : records_) {
            if (r.scores.size() < 2)
                throw Error(ErrorKind::validation,
                            "question " + r.question_id + ": fewer than 2 scores");
            if (r.answer_index >= r.scores.size())
                throw Error(ErrorKind::validation,
                            "question " + r.question_id + ": answer_index out of range");
            for (double s : r.scores)
                if (!std::isfinite(s))
                    throw Error(ErrorKind::validation,
                                "question " + r.question_id + ": non-finite score");
            if (!(r.confidence >= 0.0 && r.confidence <= 1.0))
                throw Error(ErrorKind::validation, "question " + r.question_id + " epoch " +
                                                       std::to_string(r.epoch) +
                                                       ": confidence outside [0,1]");
            auto& marks = seen[r.question_id];
            if (marks.empty()) marks.assign(epochs, 0);
            if (++marks[r.epoch] > 1)
                throw Error(ErrorKind::validation, "question " + r.question_id + " epoch " +
                                                       std::to_string(r.epoch) + ": duplicate record");
        }
        std::vector<std::string> gaps;
        for (const auto& [qid, marks] : seen)
            for (std::size_t e = 0; e < epochs; ++e)
                if (marks[e] == 0) gaps.push_back(qid + "@epoch" + std::to_string(e));
        if (!gaps.empty()) {
            std::string msg = "missing records:";
            for (const auto& g : gaps) msg += " " + g;
            throw Error(ErrorKind::validation, msg);
        }
    }

    std::string to_jsonl() const {
        std::string out;
        for (const auto& r : records_) {
            out += r.to_json().dump();
            out += '\n';
        }
        return out;
    }

    void save(const std::string& path) const { write_text_file(path, to_jsonl()); }

    static DynamicsLog load(const std::string& path) {
        DynamicsLog log;
        for_each_jsonl(path, [&](std::size_t line_no, Json&& j) {
            DynamicsRecord r;
            try {
                r.question_id = j.at("question_id").get<std::string>();
                r.epoch = j.at("epoch").get<std::size_t>();
                r.scores = j.at("scores").get<std::vector<double>>();
                r.answer_index = j.at("answer_index").get<std::size_t>();
                r.confidence = j.at("confidence").get<double>();
            } catch (const Json::exception& e) {
                throw Error(ErrorKind::validation,
                            path + ":" + std::to_string(line_no) + ": " + e.what());
            }
            log.add(std::move(r));
        });
        return log;
    }

    std::string digest() const { return hex_digest(fnv1a64(to_jsonl())); }

private:
    std::vector<DynamicsRecord> records_;
};

// File-exchange entry point for dynamics produced by external scorers.
inline DynamicsLog import_external_dynamics(const std::string& path) {
    DynamicsLog log = DynamicsLog::load(path);
    log.validate();
    return log;
}

} // namespace kgqa
