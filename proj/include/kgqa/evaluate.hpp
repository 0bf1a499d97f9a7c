#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "kgqa/analytics.hpp"
#include "kgqa/benchmark.hpp"
#include "kgqa/parallel.hpp"
#include "kgqa/scorer.hpp"

namespace kgqa {

struct Prediction {
    std::string question_id;
    std::size_t predicted = 0;
    std::size_t answer_index = 0;
    bool correct = false;
    bool tie = false;

    Json to_json() const {
        return Json{{"question_id", question_id},
                    {"predicted_index", predicted},
                    {"answer_index", answer_index},
                    {"correct", correct},
                    {"tie", tie}};
    }
};

struct EvalResult {
    std::string benchmark;
    std::vector<Prediction> predictions;
    std::size_t correct = 0;
    std::size_t tie_count = 0;
    double accuracy = 0.0;

    PredictionMap prediction_map() const {
        PredictionMap m;
        for (const auto& p : predictions) m[p.question_id] = p.correct;
        return m;
    }

    std::string predictions_jsonl() const {
        std::string out;
        for (const auto& p : predictions) {
            out += p.to_json().dump();
            out += '\n';
        }
        return out;
    }

    Json to_json() const {
        return Json{{"benchmark", benchmark},
                    {"questions", predictions.size()},
                    {"correct", correct},
                    {"accuracy", accuracy},
                    {"argmax_ties", tie_count}};
    }
};

// Argmax prediction per question, ties broken toward the lowest index and
// counted. Accuracy is exactly correct/total.
inline EvalResult evaluate(const CandidateScorer& scorer, const Benchmark& bench,
                           unsigned threads = 1) {
    EvalResult result;
    result.benchmark = bench.name;
    result.predictions.resize(bench.questions.size());

    parallel_for(bench.questions.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto& q = bench.questions[i];
            std::vector<double> scores;
            try {
                scores = scorer.score(q.question, q.candidates);
            } catch (const std::exception& e) {
                throw Error(ErrorKind::evaluation,
                            "scorer failed on question " + q.id + ": " + e.what());
            }
            if (scores.size() != q.candidates.size())
                throw Error(ErrorKind::evaluation,
                            "scorer returned " + std::to_string(scores.size()) + " scores for " +
                                std::to_string(q.candidates.size()) + " candidates on question " +
                                q.id);
            for (double s : scores)
                if (!std::isfinite(s))
                    throw Error(ErrorKind::evaluation, "non-finite score on question " + q.id);
            Prediction p;
            p.question_id = q.id;
            p.answer_index = q.answer_index;
            p.predicted = argmax_index(scores);
            std::size_t at_max = 0;
            for (double s : scores)
                if (s == scores[p.predicted]) ++at_max;
            p.tie = at_max > 1;
            p.correct = p.predicted == q.answer_index;
            result.predictions[i] = std::move(p);
        }
    });

    for (const auto& p : result.predictions) {
        if (p.correct) ++result.correct;
        if (p.tie) ++result.tie_count;
    }
    result.accuracy = bench.questions.empty()
                          ? 0.0
                          : static_cast<double>(result.correct) /
                                static_cast<double>(bench.questions.size());
    return result;
}

// Accuracy of always answering the benchmark's most frequent answer position
// (ties toward the lowest index).
inline double majority_baseline(const Benchmark& bench) {
    if (bench.questions.empty()) return 0.0;
    std::map<std::size_t, std::size_t> freq;
    for (const auto& q : bench.questions) ++freq[q.answer_index];
    std::size_t best_index = 0, best_count = 0;
    for (const auto& [idx, count] : freq) {
        if (count > best_count) { // map iterates ascending, so ties keep the lowest index
            best_count = count;
            best_index = idx;
        }
    }
    (void)best_index;
    return static_cast<double>(best_count) / static_cast<double>(bench.questions.size());
}

} // namespace kgqa
