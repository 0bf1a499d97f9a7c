#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "kgqa/jsonl.hpp"
#include "kgqa/question.hpp"
#include "kgqa/rng.hpp"
#include "kgqa/text.hpp"

namespace kgqa {

// Candidate scores for one question; higher = more plausible.
struct ScoreVector {
    std::string question_id;
    std::vector<double> scores;
    std::size_t answer_index = 0;
};

// Hinge loss over correct-vs-distractor score differences, averaged over n:
//   L = (1/n) * sum_{i != y} max(0, margin - S_y + S_i)
inline double margin_loss(const ScoreVector& sv, double margin) {
    const std::size_t n = sv.scores.size();
    if (n < 2) throw Error(ErrorKind::contract, "margin_loss needs at least 2 candidates");
    if (sv.answer_index >= n) throw Error(ErrorKind::contract, "answer_index out of range");
    const double correct = sv.scores[sv.answer_index];
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == sv.answer_index) continue;
        total += std::max(0.0, margin - correct + sv.scores[i]);
    }
    return total / static_cast<double>(n);
}

// Softmax probability of the correct candidate, max-subtracted for stability.
inline double confidence(const ScoreVector& sv) {
    const std::size_t n = sv.scores.size();
    if (n < 2) throw Error(ErrorKind::contract, "confidence needs at least 2 candidates");
    if (sv.answer_index >= n) throw Error(ErrorKind::contract, "answer_index out of range");
    double m = sv.scores[0];
    for (double s : sv.scores) m = std::max(m, s);
    double denom = 0.0;
    for (double s : sv.scores) denom += std::exp(s - m);
    return std::exp(sv.scores[sv.answer_index] - m) / denom;
}

// Prediction rule: highest score wins, ties go to the lowest index.
inline std::size_t argmax_index(const std::vector<double>& scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (scores[i] > scores[best]) best = i;
    return best;
}

class CandidateScorer {
public:
    virtual ~CandidateScorer() = default;
    virtual std::vector<double> score(const std::string& question,
                                      const std::vector<std::string>& candidates) const = 0;

    ScoreVector score_question(const SyntheticQuestion& q) const {
        ScoreVector sv;
        sv.question_id = q.id;
        sv.answer_index = q.answer_index;
        sv.scores = score(q.question, q.candidates);
        return sv;
    }
};

// Test/adapter shim for ad-hoc scoring rules.
class FunctionScorer : public CandidateScorer {
public:
    using Fn = std::function<std::vector<double>(const std::string&, const std::vector<std::string>&)>;
    explicit FunctionScorer(Fn fn) : fn_(std::move(fn)) {}
    std::vector<double> score(const std::string& question,
                              const std::vector<std::string>& candidates) const override {
        return fn_(question, candidates);
    }

private:
    Fn fn_;
};

// Built-in desk-scale scorer: mean of learned token embeddings for the question
// and for each candidate, score = dot(q_mean, c_mean)/sqrt(dim) + bias.
// Tokens outside the vocabulary are skipped; a text with no known tokens maps
// to the zero vector.
class EmbeddingScorer : public CandidateScorer {
public:
    static constexpr std::size_t kDefaultDim = 64;
    static constexpr double kInitRange = 0.05;

    EmbeddingScorer() = default;

    // Vocabulary comes from the pool (question texts first, then candidates,
    // in pool order), so the parameter layout is reproducible.
    static EmbeddingScorer init(const QuestionPool& pool, std::uint64_t seed,
                                std::size_t dim = kDefaultDim, bool zero_init = false) {
        EmbeddingScorer s;
        s.dim_ = dim;
        for (const auto& q : pool.questions()) {
            for (const auto& t : tokenize(q.question)) s.intern(t);
            for (const auto& c : q.candidates)
                for (const auto& t : tokenize(c)) s.intern(t);
        }
        s.embeddings_.assign(s.tokens_.size() * dim, 0.0);
        if (!zero_init) {
            Rng rng(derive_seed(seed, "embedding-init"));
            for (double& w : s.embeddings_) w = rng.uniform(-kInitRange, kInitRange);
        }
        return s;
    }

    std::size_t dim() const { return dim_; }
    double scale() const { return 1.0 / std::sqrt(static_cast<double>(dim_)); }
    std::size_t vocab_size() const { return tokens_.size(); }
    const std::vector<std::string>& tokens() const { return tokens_; }

    std::optional<std::size_t> token_index(const std::string& token) const {
        auto it = index_.find(token);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    double* row(std::size_t token_idx) { return embeddings_.data() + token_idx * dim_; }
    const double* row(std::size_t token_idx) const { return embeddings_.data() + token_idx * dim_; }
    double& bias() { return bias_; }
    double bias() const { return bias_; }

    std::size_t parameter_count() const { return embeddings_.size() + 1; }
    double& parameter(std::size_t i) { return i < embeddings_.size() ? embeddings_[i] : bias_; }

    std::vector<std::size_t> token_ids(const std::string& text) const {
        std::vector<std::size_t> ids;
        for (const auto& t : tokenize(text)) {
            auto it = index_.find(t);
            if (it != index_.end()) ids.push_back(it->second);
        }
        return ids;
    }

    std::vector<double> mean_embedding(const std::vector<std::size_t>& ids) const {
        std::vector<double> mean(dim_, 0.0);
        if (ids.empty()) return mean;
        for (auto id : ids) {
            const double* r = row(id);
            for (std::size_t j = 0; j < dim_; ++j) mean[j] += r[j];
        }
        const double inv = 1.0 / static_cast<double>(ids.size());
        for (double& v : mean) v *= inv;
        return mean;
    }

    double score_means(const std::vector<double>& q_mean, const std::vector<double>& c_mean) const {
        double dot = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) dot += q_mean[j] * c_mean[j];
        return dot * scale() + bias_;
    }

    std::vector<double> score(const std::string& question,
                              const std::vector<std::string>& candidates) const override {
        auto q_mean = mean_embedding(token_ids(question));
        std::vector<double> out;
        out.reserve(candidates.size());
        for (const auto& c : candidates)
            out.push_back(score_means(q_mean, mean_embedding(token_ids(c))));
        return out;
    }

    Json to_json() const {
        Json j;
        j["kind"] = "embedding_scorer";
        j["dim"] = dim_;
        j["bias"] = bias_;
        j["tokens"] = tokens_;
        Json rows = Json::array();
        for (std::size_t i = 0; i < tokens_.size(); ++i) {
            Json r = Json::array();
            const double* p = row(i);
            for (std::size_t d = 0; d < dim_; ++d) r.push_back(p[d]);
            rows.push_back(std::move(r));
        }
        j["embeddings"] = std::move(rows);
        return j;
    }

    void save(const std::string& path) const { write_text_file(path, to_json().dump() + "\n"); }

    static EmbeddingScorer from_json(const Json& j) {
        EmbeddingScorer s;
        if (j.value("kind", "") != std::string("embedding_scorer"))
            throw Error(ErrorKind::validation, "not an embedding_scorer model file");
        s.dim_ = j.at("dim").get<std::size_t>();
        s.bias_ = j.at("bias").get<double>();
        auto tokens = j.at("tokens").get<std::vector<std::string>>();
        for (auto& t : tokens) s.intern(t);
        const auto& rows = j.at("embeddings");
        if (rows.size() != s.tokens_.size())
            throw Error(ErrorKind::validation, "embedding row count does not match vocabulary");
        s.embeddings_.reserve(s.tokens_.size() * s.dim_);
        for (const auto& r : rows) {
            if (r.size() != s.dim_)
                throw Error(ErrorKind::validation, "embedding row width does not match dim");
            for (const auto& v : r) s.embeddings_.push_back(v.get<double>());
        }
        return s;
    }

    static EmbeddingScorer load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error(ErrorKind::io, "cannot open model file: " + path);
        Json j = Json::parse(in, nullptr, false);
        if (j.is_discarded()) throw Error(ErrorKind::parse, path + ": invalid JSON");
        return from_json(j);
    }

private:
    void intern(const std::string& token) {
        if (index_.emplace(token, tokens_.size()).second) tokens_.push_back(token);
    }

    std::size_t dim_ = kDefaultDim;
    double bias_ = 0.0;
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<double> embeddings_; // row-major vocab x dim
};

} // namespace kgqa
