#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "kgqa/question.hpp"
#include "kgqa/text.hpp"

namespace kgqa {

// Token occurrence counts over the synthetic pool. Absent tokens are reported
// as such (not as count 1); the VO clamp happens at the metric, where it is
// counted for auditing.
class FreqTable {
public:
    void add(const std::string& token) {
        ++counts_[token];
        ++total_;
    }

    std::optional<std::size_t> count(const std::string& token) const {
        auto it = counts_.find(token);
        if (it == counts_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t total_tokens() const { return total_; }
    std::size_t distinct_tokens() const { return counts_.size(); }

private:
    std::unordered_map<std::string, std::size_t> counts_;
    std::size_t total_ = 0;
};

inline FreqTable build_freq_table(const QuestionPool& pool, const Tokenizer& tok) {
    FreqTable table;
    for (const auto& q : pool.questions()) {
        for (const auto& t : tok(q.question)) table.add(t);
        for (const auto& c : q.candidates)
            for (const auto& t : tok(c)) table.add(t);
    }
    return table;
}

// Jaccard similarity between candidate token sets; with more than two
// candidates, the mean over all unordered pairs.
inline double answer_similarity(const SyntheticQuestion& q, const Tokenizer& tok) {
    const std::size_t n = q.candidates.size();
    if (n < 2) throw Error(ErrorKind::metric, "answer_similarity needs at least 2 candidates");
    std::vector<std::set<std::string>> sets(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto tokens = tok(q.candidates[i]);
        sets[i] = std::set<std::string>(tokens.begin(), tokens.end());
        if (sets[i].empty())
            throw Error(ErrorKind::metric,
                        "question " + q.id + ": candidate " + std::to_string(i) +
                            " has no tokens");
    }
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            std::size_t inter = 0;
            for (const auto& t : sets[i]) inter += sets[j].count(t);
            const std::size_t uni = sets[i].size() + sets[j].size() - inter;
            sum += static_cast<double>(inter) / static_cast<double>(uni);
            ++pairs;
        }
    }
    return sum / static_cast<double>(pairs);
}

// Total token count over the candidates, with multiplicity.
inline std::size_t answer_length(const SyntheticQuestion& q, const Tokenizer& tok) {
    std::size_t total = 0;
    for (const auto& c : q.candidates) total += tok(c).size();
    return total;
}

// Mean reciprocal pool-frequency over the union of candidate token sets.
// Tokens unseen in the pool count as frequency 1; `unseen_tokens`, when given,
// tallies how often that clamp fired.
inline double vocab_overlap(const SyntheticQuestion& q, const FreqTable& freq, const Tokenizer& tok,
                            std::size_t* unseen_tokens = nullptr) {
    std::set<std::string> union_tokens;
    for (const auto& c : q.candidates) {
        auto tokens = tok(c);
        union_tokens.insert(tokens.begin(), tokens.end());
    }
    if (union_tokens.empty())
        throw Error(ErrorKind::metric, "question " + q.id + ": candidates have no tokens");
    double sum = 0.0;
    for (const auto& t : union_tokens) {
        auto c = freq.count(t);
        if (!c && unseen_tokens) ++*unseen_tokens;
        sum += 1.0 / static_cast<double>(c.value_or(1));
    }
    return sum / static_cast<double>(union_tokens.size());
}

struct Quartiles {
    std::array<std::vector<std::string>, 4> blocks;
    std::array<double, 3> boundaries{}; // metric value of the last item in blocks 0..2
};

// Rank-based quartiles: sort ascending by (value, id), then split into four
// contiguous blocks whose sizes differ by at most one, larger blocks first.
inline Quartiles make_quartiles(std::vector<std::pair<std::string, double>> items) {
    if (items.size() < 4)
        throw Error(ErrorKind::partition, "quartile partition needs at least 4 items, got " +
                                              std::to_string(items.size()));
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return a.first < b.first;
    });
    Quartiles out;
    const std::size_t n = items.size();
    const std::size_t base = n / 4;
    const std::size_t extra = n % 4;
    std::size_t pos = 0;
    for (std::size_t b = 0; b < 4; ++b) {
        std::size_t len = base + (b < extra ? 1 : 0);
        for (std::size_t i = 0; i < len; ++i) out.blocks[b].push_back(std::move(items[pos++].first));
        if (b < 3) out.boundaries[b] = items[pos - 1].second;
    }
    return out;
}

inline std::array<std::vector<std::string>, 4> quartile_partition(
    std::vector<std::pair<std::string, double>> items) {
    return make_quartiles(std::move(items)).blocks;
}

struct QuartileSummary {
    std::size_t count = 0;
    std::size_t correct = 0;
    double accuracy = 0.0;
};

struct PartitionReport {
    std::string metric;
    std::array<double, 3> boundaries{}; // metric value at the top of quartiles 1..3
    std::array<QuartileSummary, 4> quartiles;
    std::size_t total = 0;
    std::size_t total_correct = 0;
    double overall_accuracy = 0.0;

    Json to_json() const {
        Json j;
        j["metric"] = metric;
        j["quartile_boundaries"] = boundaries;
        Json qs = Json::array();
        for (const auto& q : quartiles)
            qs.push_back(Json{{"count", q.count}, {"correct", q.correct}, {"accuracy", q.accuracy}});
        j["quartiles"] = std::move(qs);
        j["total"] = total;
        j["correct"] = total_correct;
        j["overall_accuracy"] = overall_accuracy;
        return j;
    }
};

// Correctness per question id; the prediction side of partition reporting.
using PredictionMap = std::map<std::string, bool>;

inline PartitionReport partition_accuracy(const PredictionMap& predictions,
                                          const std::array<std::vector<std::string>, 4>& partitions,
                                          const std::string& metric_name = "") {
    PartitionReport report;
    report.metric = metric_name;
    std::vector<std::string> missing;
    for (std::size_t b = 0; b < 4; ++b) {
        auto& q = report.quartiles[b];
        for (const auto& id : partitions[b]) {
            auto it = predictions.find(id);
            if (it == predictions.end()) {
                missing.push_back(id);
                continue;
            }
            ++q.count;
            if (it->second) ++q.correct;
        }
    }
    if (!missing.empty()) {
        std::string msg = "missing predictions for:";
        for (const auto& id : missing) msg += " " + id;
        throw Error(ErrorKind::report, msg);
    }
    for (auto& q : report.quartiles) {
        report.total += q.count;
        report.total_correct += q.correct;
        q.accuracy = q.count == 0 ? 0.0
                                  : static_cast<double>(q.correct) / static_cast<double>(q.count);
    }
    report.overall_accuracy =
        report.total == 0 ? 0.0
                          : static_cast<double>(report.total_correct) / static_cast<double>(report.total);

    // Reconciliation: the count-weighted mean of quartile accuracies must equal
    // the overall accuracy. Counts are integers, so this is exact by
    // construction; the float check guards the arithmetic.
    double weighted = 0.0;
    for (const auto& q : report.quartiles)
        weighted += q.accuracy * static_cast<double>(q.count);
    if (report.total > 0 &&
        std::abs(weighted / static_cast<double>(report.total) - report.overall_accuracy) > 1e-9)
        throw Error(ErrorKind::report, "quartile accuracies do not reconcile with overall accuracy");
    return report;
}

inline PartitionReport partition_accuracy(const PredictionMap& predictions, const Quartiles& q,
                                          const std::string& metric_name) {
    PartitionReport report = partition_accuracy(predictions, q.blocks, metric_name);
    report.boundaries = q.boundaries;
    return report;
}

// High/low domain overlap of a benchmark with the adaptation KG. The defaults
// cover the five standard benchmarks; callers may extend or override.
class DomainLabel {
public:
    enum class Overlap { high, low };

    DomainLabel() {
        set("SIQA", Overlap::high);
        set("CSQA", Overlap::high);
        set("aNLI", Overlap::low);
        set("PIQA", Overlap::low);
        set("WG", Overlap::low);
    }

    void set(const std::string& benchmark, Overlap o) { labels_[to_lower(benchmark)] = o; }

    std::optional<Overlap> lookup(const std::string& benchmark) const {
        auto it = labels_.find(to_lower(benchmark));
        if (it == labels_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::unordered_map<std::string, Overlap> labels_;
};

} // namespace kgqa
