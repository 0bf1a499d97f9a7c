#pragma once

// Brute-force reference implementations, kept deliberately plain and separate
// from the library code paths they check.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "kgqa/dynamics.hpp"
#include "kgqa/question.hpp"
#include "kgqa/text.hpp"

namespace oracle {

inline std::set<std::string> token_set(const std::string& text, const kgqa::Tokenizer& tok) {
    auto tokens = tok(text);
    return std::set<std::string>(tokens.begin(), tokens.end());
}

inline double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::size_t inter = 0;
    for (const auto& t : a)
        if (b.count(t)) ++inter;
    std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

inline double answer_similarity(const kgqa::SyntheticQuestion& q, const kgqa::Tokenizer& tok) {
    std::vector<std::set<std::string>> sets;
    for (const auto& c : q.candidates) sets.push_back(token_set(c, tok));
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = 0; j < sets.size(); ++j)
            if (i < j) {
                sum += jaccard(sets[i], sets[j]);
                ++pairs;
            }
    return sum / static_cast<double>(pairs);
}

inline std::size_t answer_length(const kgqa::SyntheticQuestion& q, const kgqa::Tokenizer& tok) {
    std::size_t total = 0;
    for (const auto& c : q.candidates)
        for ([[maybe_unused]] const auto& t : tok(c)) ++total;
    return total;
}

inline std::map<std::string, std::size_t> freq_table(const kgqa::QuestionPool& pool,
                                                     const kgqa::Tokenizer& tok) {
    std::map<std::string, std::size_t> counts;
    for (const auto& q : pool.questions()) {
        for (const auto& t : tok(q.question)) ++counts[t];
        for (const auto& c : q.candidates)
            for (const auto& t : tok(c)) ++counts[t];
    }
    return counts;
}

inline double vocab_overlap(const kgqa::SyntheticQuestion& q,
                            const std::map<std::string, std::size_t>& freq,
                            const kgqa::Tokenizer& tok) {
    std::set<std::string> tokens;
    for (const auto& c : q.candidates)
        for (const auto& t : tok(c)) tokens.insert(t);
    double sum = 0.0;
    for (const auto& t : tokens) {
        auto it = freq.find(t);
        std::size_t f = it == freq.end() ? 1 : it->second;
        if (f < 1) f = 1;
        sum += 1.0 / static_cast<double>(f);
    }
    return sum / static_cast<double>(tokens.size());
}

// Quartile sizes spelled out: the first (n mod 4) blocks get one extra item.
inline std::array<std::vector<std::string>, 4> quartiles(
    std::vector<std::pair<std::string, double>> items) {
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        return a.second < b.second || (a.second == b.second && a.first < b.first);
    });
    std::array<std::vector<std::string>, 4> blocks;
    std::size_t sizes[4];
    for (std::size_t b = 0; b < 4; ++b) sizes[b] = items.size() / 4;
    for (std::size_t b = 0; b < items.size() % 4; ++b) ++sizes[b];
    std::size_t at = 0;
    for (std::size_t b = 0; b < 4; ++b)
        for (std::size_t i = 0; i < sizes[b]; ++i) blocks[b].push_back(items[at++].first);
    return blocks;
}

struct QuestionStats {
    double mean_confidence = 0.0;
    double variability = 0.0;
    double mean_margin = 0.0;
    double vanilla_confidence = 0.0;
};

// Recomputes the cartography statistics from raw records with two-pass
// mean/stddev and an explicit distractor max.
inline std::map<std::string, QuestionStats> training_stats(const kgqa::DynamicsLog& log,
                                                           bool margin_uses_mean = false) {
    std::size_t last_epoch = 0;
    for (const auto& r : log.records()) last_epoch = std::max(last_epoch, r.epoch);

    std::map<std::string, QuestionStats> out;
    std::map<std::string, std::vector<double>> confidences;
    std::map<std::string, std::vector<double>> margins;
    for (const auto& r : log.records()) {
        if (r.epoch == 0) {
            out[r.question_id].vanilla_confidence = r.confidence;
            continue;
        }
        confidences[r.question_id].push_back(r.confidence);
        double correct = r.scores[r.answer_index];
        if (margin_uses_mean) {
            double sum = 0.0;
            for (std::size_t i = 0; i < r.scores.size(); ++i)
                if (i != r.answer_index) sum += r.scores[i];
            margins[r.question_id].push_back(correct -
                                             sum / static_cast<double>(r.scores.size() - 1));
        } else {
            double best = -1e300;
            for (std::size_t i = 0; i < r.scores.size(); ++i)
                if (i != r.answer_index && r.scores[i] > best) best = r.scores[i];
            margins[r.question_id].push_back(correct - best);
        }
    }
    for (auto& [qid, stats] : out) {
        const auto& cs = confidences[qid];
        double mean = 0.0;
        for (double c : cs) mean += c;
        mean /= static_cast<double>(cs.size());
        double var = 0.0;
        for (double c : cs) var += (c - mean) * (c - mean);
        var /= static_cast<double>(cs.size());
        stats.mean_confidence = mean;
        stats.variability = std::sqrt(var);
        double msum = 0.0;
        for (double m : margins[qid]) msum += m;
        stats.mean_margin = msum / static_cast<double>(margins[qid].size());
    }
    return out;
}

inline double margin_loss(const std::vector<double>& scores, std::size_t y, double eta) {
    double total = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (i != y) {
            double v = eta - scores[y] + scores[i];
            if (v > 0.0) total += v;
        }
    return total / static_cast<double>(scores.size());
}

} // namespace oracle
