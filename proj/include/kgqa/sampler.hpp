#pragma once

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgqa/dynamics.hpp"
#include "kgqa/question.hpp"
#include "kgqa/rng.hpp"

namespace kgqa {

enum class Strategy {
    random,
    dimension,
    uniform,
    vanilla_confidence,
    confidence,
    variability,
    margin,
};

inline std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::random: return "random";
        case Strategy::dimension: return "dimension";
        case Strategy::uniform: return "uniform";
        case Strategy::vanilla_confidence: return "vanilla_confidence";
        case Strategy::confidence: return "confidence";
        case Strategy::variability: return "variability";
        case Strategy::margin: return "margin";
    }
    return "unknown";
}

inline Strategy parse_strategy(std::string_view name) {
    std::string key = to_lower(trim(name));
    for (char& c : key)
        if (c == '-') c = '_';
    if (key == "random") return Strategy::random;
    if (key == "dimension") return Strategy::dimension;
    if (key == "uniform") return Strategy::uniform;
    if (key == "vanilla_confidence" || key == "vanilla_conf") return Strategy::vanilla_confidence;
    if (key == "confidence" || key == "conf") return Strategy::confidence;
    if (key == "variability") return Strategy::variability;
    if (key == "margin") return Strategy::margin;
    throw Error(ErrorKind::spec, "unknown strategy: " + std::string(name));
}

inline bool is_dynamics_strategy(Strategy s) {
    return s == Strategy::vanilla_confidence || s == Strategy::confidence ||
           s == Strategy::variability || s == Strategy::margin;
}

enum class Tail { low, high };

inline std::string_view to_string(Tail t) { return t == Tail::low ? "low" : "high"; }

inline Tail parse_tail(std::string_view name) {
    auto key = to_lower(trim(name));
    if (key == "low") return Tail::low;
    if (key == "high") return Tail::high;
    throw Error(ErrorKind::spec, "tail must be 'low' or 'high', got: " + std::string(name));
}

// Which distractor statistic the margin strategy ranks by: gap to the strongest
// distractor (area-under-margin convention, default) or to the distractor mean.
enum class MarginConvention { max_distractor, mean_distractor };

struct SampleSpec {
    Strategy strategy = Strategy::random;
    double k = 100.0; // percentage of the pool, any real in [0, 100]
    std::optional<Tail> tail;
    std::optional<Dimension> dimension;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(k >= 0.0 && k <= 100.0)) throw Error(ErrorKind::spec, "K must be in [0, 100]");
        if (is_dynamics_strategy(strategy) && !tail)
            throw Error(ErrorKind::spec,
                        std::string("strategy ") + std::string(to_string(strategy)) +
                            " requires tail=low|high");
        if (!is_dynamics_strategy(strategy) && tail)
            throw Error(ErrorKind::spec, "tail only applies to dynamics-based strategies");
        if (strategy == Strategy::dimension && !dimension)
            throw Error(ErrorKind::spec, "dimension strategy requires a dimension");
        if (strategy != Strategy::dimension && dimension)
            throw Error(ErrorKind::spec, "dimension only applies to the dimension strategy");
    }

    std::string label() const {
        std::string out(to_string(strategy));
        if (dimension) out += ":" + std::string(to_string(*dimension));
        if (tail) out += ":" + std::string(to_string(*tail));
        return out;
    }
};

// Per-question statistics over a complete dynamics log. Epoch 0 is the vanilla
// pass; means, variability, and margins are taken over training epochs 1..E.
struct QuestionStats {
    double mean_confidence = 0.0;
    double variability = 0.0; // population standard deviation
    double mean_margin = 0.0;
    double vanilla_confidence = 0.0;
};

struct TrainingStats {
    std::map<std::string, QuestionStats> per_question;
    MarginConvention margin_convention = MarginConvention::max_distractor;

    const QuestionStats& at(const std::string& question_id) const {
        auto it = per_question.find(question_id);
        if (it == per_question.end())
            throw Error(ErrorKind::spec, "no training stats for question " + question_id);
        return it->second;
    }

    Json to_json() const {
        Json j;
        j["margin_convention"] =
            margin_convention == MarginConvention::max_distractor ? "max" : "mean";
        Json qs = Json::object();
        for (const auto& [id, s] : per_question)
            qs[id] = Json{{"mean_confidence", s.mean_confidence},
                          {"variability", s.variability},
                          {"mean_margin", s.mean_margin},
                          {"vanilla_confidence", s.vanilla_confidence}};
        j["per_question"] = std::move(qs);
        return j;
    }

    // Hashes the raw values directly; per_question iterates in id order, so
    // the digest is stable across runs.
    std::string digest() const {
        std::uint64_t h = fnv1a64(margin_convention == MarginConvention::max_distractor ? "max"
                                                                                        : "mean");
        auto mix_double = [&h](double v) {
            std::uint64_t bits;
            static_assert(sizeof(bits) == sizeof(v));
            std::memcpy(&bits, &v, sizeof(bits));
            h = fnv1a64_mix(bits, h);
        };
        for (const auto& [id, s] : per_question) {
            h = fnv1a64(id, h);
            mix_double(s.mean_confidence);
            mix_double(s.variability);
            mix_double(s.mean_margin);
            mix_double(s.vanilla_confidence);
        }
        return hex_digest(h);
    }
};

inline double margin_statistic(const DynamicsRecord& r, MarginConvention convention) {
    const double correct = r.scores[r.answer_index];
    if (convention == MarginConvention::max_distractor) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < r.scores.size(); ++i)
            if (i != r.answer_index) best = std::max(best, r.scores[i]);
        return correct - best;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < r.scores.size(); ++i)
        if (i != r.answer_index) sum += r.scores[i];
    return correct - sum / static_cast<double>(r.scores.size() - 1);
}

inline TrainingStats compute_training_stats(
    const DynamicsLog& log, MarginConvention convention = MarginConvention::max_distractor) {
    log.validate();
    const std::size_t last_epoch = log.max_epoch();
    if (last_epoch < 1)
        throw Error(ErrorKind::validation, "dynamics log has no training epochs (only epoch 0)");

    TrainingStats stats;
    stats.margin_convention = convention;
    for (const auto& [qid, records] : log.by_question()) {
        QuestionStats qs;
        qs.vanilla_confidence = records[0]->confidence;
        const double epochs = static_cast<double>(last_epoch);
        double conf_sum = 0.0, margin_sum = 0.0;
        for (std::size_t e = 1; e <= last_epoch; ++e) {
            conf_sum += records[e]->confidence;
            margin_sum += margin_statistic(*records[e], convention);
        }
        qs.mean_confidence = conf_sum / epochs;
        qs.mean_margin = margin_sum / epochs;
        // Two-pass population variance; the one-pass form cancels badly when
        // confidences barely move.
        double var = 0.0;
        for (std::size_t e = 1; e <= last_epoch; ++e) {
            const double d = records[e]->confidence - qs.mean_confidence;
            var += d * d;
        }
        qs.variability = std::sqrt(var / epochs);
        stats.per_question.emplace(qid, qs);
    }
    return stats;
}

// Half-up rounding of K% of the pool size.
inline std::size_t sample_target(double k, std::size_t pool_size) {
    return static_cast<std::size_t>(
        std::floor(k / 100.0 * static_cast<double>(pool_size) + 0.5));
}

namespace detail {

// Indices of the target-size prefix of a seeded permutation of `candidates`;
// prefixes nest across growing targets for the same seed.
inline std::vector<std::size_t> permutation_prefix(const std::vector<std::size_t>& candidates,
                                                   std::size_t target, std::uint64_t seed) {
    std::vector<std::size_t> perm = candidates;
    Rng rng(derive_seed(seed, "sample-permutation"));
    rng.shuffle(perm);
    perm.resize(std::min(target, perm.size()));
    return perm;
}

} // namespace detail

// Selects round(K/100 * |pool|) questions under the given strategy. The result
// preserves pool order. Dynamics strategies need `stats`.
inline QuestionPool sample(const QuestionPool& pool, const SampleSpec& spec,
                           const TrainingStats* stats = nullptr) {
    spec.validate();
    if (is_dynamics_strategy(spec.strategy) && stats == nullptr)
        throw Error(ErrorKind::spec, std::string("strategy ") +
                                         std::string(to_string(spec.strategy)) +
                                         " requires training stats");
    const std::size_t target = sample_target(spec.k, pool.size());

    std::vector<char> selected(pool.size(), 0);
    const auto& questions = pool.questions();

    switch (spec.strategy) {
        case Strategy::random: {
            std::vector<std::size_t> all(pool.size());
            std::iota(all.begin(), all.end(), std::size_t{0});
            for (auto i : detail::permutation_prefix(all, target, spec.seed)) selected[i] = 1;
            break;
        }
        case Strategy::dimension: {
            std::vector<std::size_t> eligible;
            for (std::size_t i = 0; i < questions.size(); ++i)
                if (questions[i].dimension == *spec.dimension) eligible.push_back(i);
            if (eligible.empty() && !pool.empty())
                throw Error(ErrorKind::spec,
                            "pool has no questions of dimension " +
                                std::string(to_string(*spec.dimension)));
            for (auto i : detail::permutation_prefix(eligible, target, spec.seed)) selected[i] = 1;
            break;
        }
        case Strategy::uniform: {
            // Equal share per dimension: floor(target/13) each, the remainder
            // going one-by-one to the most populated dimensions.
            std::array<std::size_t, kDimensionCount> population{};
            for (const auto& q : questions) ++population[dimension_index(q.dimension)];
            std::array<std::size_t, kDimensionCount> quota{};
            quota.fill(target / kDimensionCount);
            std::vector<std::size_t> dims(kDimensionCount);
            std::iota(dims.begin(), dims.end(), std::size_t{0});
            std::stable_sort(dims.begin(), dims.end(), [&](std::size_t a, std::size_t b) {
                return population[a] > population[b];
            });
            for (std::size_t r = 0; r < target % kDimensionCount; ++r) ++quota[dims[r]];
            std::vector<std::size_t> all(pool.size());
            std::iota(all.begin(), all.end(), std::size_t{0});
            auto order = detail::permutation_prefix(all, pool.size(), spec.seed);
            for (auto i : order) {
                auto& q = quota[dimension_index(questions[i].dimension)];
                if (q > 0) {
                    --q;
                    selected[i] = 1;
                }
            }
            break;
        }
        case Strategy::vanilla_confidence:
        case Strategy::confidence:
        case Strategy::variability:
        case Strategy::margin: {
            std::vector<std::pair<double, std::size_t>> keyed;
            keyed.reserve(questions.size());
            for (std::size_t i = 0; i < questions.size(); ++i) {
                const auto& qs = stats->at(questions[i].id);
                double value = 0.0;
                switch (spec.strategy) {
                    case Strategy::vanilla_confidence: value = qs.vanilla_confidence; break;
                    case Strategy::confidence: value = qs.mean_confidence; break;
                    case Strategy::variability: value = qs.variability; break;
                    case Strategy::margin: value = qs.mean_margin; break;
                    default: break;
                }
                keyed.emplace_back(value, i);
            }
            // Ties resolved by question id ascending, for determinism.
            const bool descending = *spec.tail == Tail::high;
            std::sort(keyed.begin(), keyed.end(),
                      [&](const auto& a, const auto& b) {
                          if (a.first != b.first)
                              return descending ? a.first > b.first : a.first < b.first;
                          return questions[a.second].id < questions[b.second].id;
                      });
            for (std::size_t r = 0; r < std::min(target, keyed.size()); ++r)
                selected[keyed[r].second] = 1;
            break;
        }
    }

    QuestionPool out;
    for (std::size_t i = 0; i < questions.size(); ++i)
        if (selected[i]) out.add(questions[i]);

    Json header;
    header["kind"] = "sampled_pool";
    header["strategy"] = spec.label();
    header["k"] = spec.k;
    header["seed"] = spec.seed;
    header["target"] = target;
    header["selected"] = out.size();
    header["source_pool_size"] = pool.size();
    if (stats) header["stats_digest"] = stats->digest();
    out.header() = std::move(header);
    return out;
}

} // namespace kgqa
