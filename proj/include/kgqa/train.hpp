#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "kgqa/dynamics.hpp"
#include "kgqa/scorer.hpp"

namespace kgqa {

struct TrainHyper {
    double margin = 1.0;
    double learning_rate = 0.05;
    std::size_t epochs = 5;
    std::size_t batch_size = 32;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(margin > 0.0)) throw Error(ErrorKind::config, "margin must be > 0");
        if (!(learning_rate > 0.0)) throw Error(ErrorKind::config, "learning_rate must be > 0");
        if (epochs < 1) throw Error(ErrorKind::config, "epochs must be >= 1");
        if (batch_size < 1) throw Error(ErrorKind::config, "batch_size must be >= 1");
    }

    Json to_json() const {
        return Json{{"margin", margin},
                    {"learning_rate", learning_rate},
                    {"epochs", epochs},
                    {"batch_size", batch_size},
                    {"seed", seed}};
    }
};

// One epoch-end snapshot over the full training pool. Epoch 0 is the state
// before any update.
struct CurvePoint {
    std::size_t epoch = 0;
    double mean_loss = 0.0;
    double train_accuracy = 0.0;
};

inline std::string curve_to_csv(const std::vector<CurvePoint>& curve) {
    std::string out = "epoch,mean_loss,train_accuracy\n";
    for (const auto& p : curve) {
        out += std::to_string(p.epoch);
        out += ',';
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", p.mean_loss, p.train_accuracy);
        out += buf;
    }
    return out;
}

namespace detail {

// Vocabulary-id views of the pool, computed once per training run.
struct TokenizedQuestion {
    std::vector<std::size_t> question_ids;
    std::vector<std::vector<std::size_t>> candidate_ids;
    std::size_t answer_index = 0;
};

inline std::vector<TokenizedQuestion> tokenize_pool(const QuestionPool& pool,
                                                    const EmbeddingScorer& scorer) {
    std::vector<TokenizedQuestion> out;
    out.reserve(pool.size());
    for (const auto& q : pool.questions()) {
        TokenizedQuestion tq;
        tq.question_ids = scorer.token_ids(q.question);
        tq.candidate_ids.reserve(q.candidates.size());
        for (const auto& c : q.candidates) tq.candidate_ids.push_back(scorer.token_ids(c));
        tq.answer_index = q.answer_index;
        out.push_back(std::move(tq));
    }
    return out;
}

inline std::vector<double> scores_of(const EmbeddingScorer& scorer, const TokenizedQuestion& tq) {
    auto q_mean = scorer.mean_embedding(tq.question_ids);
    std::vector<double> scores;
    scores.reserve(tq.candidate_ids.size());
    for (const auto& cand : tq.candidate_ids)
        scores.push_back(scorer.score_means(q_mean, scorer.mean_embedding(cand)));
    return scores;
}

// Sparse accumulator over embedding rows; rows touched since the last reset
// are tracked so clearing stays proportional to the batch.
struct GradBuffer {
    std::vector<double> grad;    // vocab x dim
    std::vector<std::size_t> touched;
    std::vector<char> is_touched;
    std::size_t dim = 0;

    void init(std::size_t vocab, std::size_t d) {
        dim = d;
        grad.assign(vocab * d, 0.0);
        is_touched.assign(vocab, 0);
        touched.clear();
    }

    double* row(std::size_t token) {
        if (!is_touched[token]) {
            is_touched[token] = 1;
            touched.push_back(token);
        }
        return grad.data() + token * dim;
    }

    void reset() {
        for (auto t : touched) {
            double* r = grad.data() + t * dim;
            std::fill(r, r + dim, 0.0);
            is_touched[t] = 0;
        }
        touched.clear();
    }
};

// Margin-loss value and gradient for one question, accumulated into `buf`
// with weight `w`. At the hinge kink the subgradient 0 is used.
inline double accumulate_question_gradient(const EmbeddingScorer& scorer,
                                           const TokenizedQuestion& tq, double margin, double w,
                                           GradBuffer& buf) {
    const std::size_t n = tq.candidate_ids.size();
    const double scale = scorer.scale();
    auto q_mean = scorer.mean_embedding(tq.question_ids);
    std::vector<std::vector<double>> c_means(n);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        c_means[i] = scorer.mean_embedding(tq.candidate_ids[i]);
        scores[i] = scorer.score_means(q_mean, c_means[i]);
    }

    for (double s : scores)
        if (!std::isfinite(s)) return std::numeric_limits<double>::quiet_NaN();

    const std::size_t y = tq.answer_index;
    const double inv_n = 1.0 / static_cast<double>(n);
    double loss = 0.0;
    std::vector<double> d_scores(n, 0.0); // dL/dS_i
    for (std::size_t i = 0; i < n; ++i) {
        if (i == y) continue;
        double violation = margin - scores[y] + scores[i];
        if (violation > 0.0) {
            loss += violation;
            d_scores[i] += inv_n;
            d_scores[y] -= inv_n;
        }
    }
    loss *= inv_n;
    if (loss == 0.0) return 0.0;

    const std::size_t dim = scorer.dim();
    // dL/dq_mean = sum_i dL/dS_i * scale * c_mean_i ; spread over question tokens
    std::vector<double> d_q(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (d_scores[i] == 0.0) continue;
        const double f = d_scores[i] * scale;
        for (std::size_t j = 0; j < dim; ++j) d_q[j] += f * c_means[i][j];
        // dL/dc_mean_i = dL/dS_i * scale * q_mean ; spread over candidate tokens
        if (!tq.candidate_ids[i].empty()) {
            const double per_tok = w * f / static_cast<double>(tq.candidate_ids[i].size());
            for (auto t : tq.candidate_ids[i]) {
                double* g = buf.row(t);
                for (std::size_t j = 0; j < dim; ++j) g[j] += per_tok * q_mean[j];
            }
        }
    }
    if (!tq.question_ids.empty()) {
        const double inv_q = w / static_cast<double>(tq.question_ids.size());
        for (auto t : tq.question_ids) {
            double* g = buf.row(t);
            for (std::size_t j = 0; j < dim; ++j) g[j] += inv_q * d_q[j];
        }
    }
    // Bias shifts every candidate equally, so its margin-loss gradient is 0.
    return loss;
}

} // namespace detail

struct TrainResult {
    EmbeddingScorer scorer;
    DynamicsLog dynamics;
    std::vector<CurvePoint> curve; // epochs 0..E
};

// Records epoch 0 (no updates) for every question.
inline DynamicsLog vanilla_scores(const QuestionPool& pool, const EmbeddingScorer& scorer) {
    DynamicsLog log;
    auto tokenized = detail::tokenize_pool(pool, scorer);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        DynamicsRecord r;
        r.question_id = pool[i].id;
        r.epoch = 0;
        r.scores = detail::scores_of(scorer, tokenized[i]);
        r.answer_index = pool[i].answer_index;
        r.confidence = confidence({r.question_id, r.scores, r.answer_index});
        log.add(std::move(r));
    }
    return log;
}

// Plain SGD on the margin loss. The dynamics snapshot for epoch e is taken at
// the end of epoch e over the whole pool; the training curve reports the same
// snapshots (epoch 0 = vanilla pass).
inline TrainResult train(const QuestionPool& pool, const TrainHyper& hyper,
                         EmbeddingScorer scorer) {
    hyper.validate();
    if (pool.empty()) throw Error(ErrorKind::contract, "training pool is empty");

    TrainResult result;
    auto tokenized = detail::tokenize_pool(pool, scorer);

    auto snapshot = [&](std::size_t epoch) {
        double loss_sum = 0.0;
        std::size_t correct = 0;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            DynamicsRecord r;
            r.question_id = pool[i].id;
            r.epoch = epoch;
            r.scores = detail::scores_of(scorer, tokenized[i]);
            r.answer_index = pool[i].answer_index;
            ScoreVector sv{r.question_id, r.scores, r.answer_index};
            r.confidence = confidence(sv);
            loss_sum += margin_loss(sv, hyper.margin);
            if (argmax_index(r.scores) == r.answer_index) ++correct;
            result.dynamics.add(std::move(r));
        }
        result.curve.push_back({epoch, loss_sum / static_cast<double>(pool.size()),
                                static_cast<double>(correct) / static_cast<double>(pool.size())});
    };

    snapshot(0);

    detail::GradBuffer buf;
    buf.init(scorer.vocab_size(), scorer.dim());
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng(derive_seed(hyper.seed, "epoch-shuffle"));

    for (std::size_t epoch = 1; epoch <= hyper.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        std::size_t batch_no = 0;
        for (std::size_t start = 0; start < order.size(); start += hyper.batch_size, ++batch_no) {
            const std::size_t end = std::min(order.size(), start + hyper.batch_size);
            const double w = 1.0 / static_cast<double>(end - start);
            buf.reset();
            double batch_loss = 0.0;
            for (std::size_t k = start; k < end; ++k)
                batch_loss +=
                    detail::accumulate_question_gradient(scorer, tokenized[order[k]], hyper.margin,
                                                         w, buf);
            batch_loss *= w;
            if (!std::isfinite(batch_loss))
                throw Error(ErrorKind::training, "non-finite loss at epoch " +
                                                     std::to_string(epoch) + " batch " +
                                                     std::to_string(batch_no));
            const double lr = hyper.learning_rate;
            for (auto t : buf.touched) {
                double* wrow = scorer.row(t);
                const double* g = buf.grad.data() + t * scorer.dim();
                for (std::size_t j = 0; j < scorer.dim(); ++j) wrow[j] -= lr * g[j];
            }
        }
        snapshot(epoch);
    }

    result.scorer = std::move(scorer);
    return result;
}

// Convenience entry: vocabulary and init derived from the pool and seed.
inline TrainResult train(const QuestionPool& pool, const TrainHyper& hyper) {
    return train(pool, hyper, EmbeddingScorer::init(pool, hyper.seed));
}

// Central-difference gradient validation of the margin-loss trainer. Returns
// the worst relative disagreement over every parameter of the scorer.
// Batch loss is the mean question loss, matching one SGD step's objective.
inline double gradient_check(EmbeddingScorer& scorer, const QuestionPool& batch, double margin,
                             double h) {
    if (batch.empty()) throw Error(ErrorKind::contract, "gradient_check needs a non-empty batch");
    if (!(h > 0.0)) throw Error(ErrorKind::contract, "step h must be > 0");

    auto tokenized = detail::tokenize_pool(batch, scorer);
    const double w = 1.0 / static_cast<double>(batch.size());

    detail::GradBuffer buf;
    buf.init(scorer.vocab_size(), scorer.dim());
    for (const auto& tq : tokenized)
        detail::accumulate_question_gradient(scorer, tq, margin, w, buf);

    auto batch_loss = [&]() {
        double total = 0.0;
        for (const auto& tq : tokenized) {
            ScoreVector sv{"", detail::scores_of(scorer, tq), tq.answer_index};
            total += margin_loss(sv, margin);
        }
        return total * w;
    };

    double max_rel = 0.0;
    const std::size_t params = scorer.parameter_count();
    for (std::size_t p = 0; p < params; ++p) {
        const double analytic = p < buf.grad.size() ? buf.grad[p] : 0.0; // bias gradient is 0
        double& theta = scorer.parameter(p);
        const double saved = theta;
        theta = saved + h;
        const double plus = batch_loss();
        theta = saved - h;
        const double minus = batch_loss();
        theta = saved;
        const double fd = (plus - minus) / (2.0 * h);
        const double denom = std::max(std::abs(analytic), std::abs(fd));
        const double err = denom < 1e-8 ? std::abs(analytic - fd) : std::abs(analytic - fd) / denom;
        max_rel = std::max(max_rel, err);
    }
    return max_rel;
}

} // namespace kgqa
