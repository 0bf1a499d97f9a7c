#pragma once

#include <cstdio>
#include <string>

#include "kgqa/question.hpp"
#include "kgqa/rng.hpp"
#include "kgqa/statement.hpp"

namespace kgqa {

// Deterministic toy knowledge graph for demos and end-to-end tests. Each of
// the 13 toy relations pairs a question marker token (group<k>, injected by
// that relation's template) with an answer marker token (sign<k>), so a
// bag-of-token scorer can learn the mapping while a fresh scorer is at chance.
struct ToySpec {
    std::size_t per_relation = 200; // statements per relation (13 relations)
    std::uint64_t seed = 7;
    std::size_t head_pool = 500;  // distinct head entities
    std::size_t filler_pool = 120; // distinct answer filler tokens
};

namespace detail {

inline std::string two_digits(std::size_t k) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%02zu", k);
    return buf;
}

inline std::string toy_relation(std::size_t k) { return "toy:rel" + two_digits(k); }
inline std::string toy_head_text(std::size_t h) { return "object" + std::to_string(h); }
inline std::string toy_tail_text(std::size_t k, std::size_t f) {
    return "sign" + two_digits(k) + " filler" + std::to_string(f);
}

} // namespace detail

inline std::string toy_mapping_tsv() {
    std::string out = "# toy relation -> dimension\n";
    auto dims = all_dimensions();
    for (std::size_t k = 0; k < kDimensionCount; ++k) {
        out += detail::toy_relation(k);
        out += '\t';
        out += std::string(to_string(dims[k]));
        out += '\n';
    }
    return out;
}

inline std::string toy_templates_tsv() {
    std::string out = "# toy relation -> question template\n";
    for (std::size_t k = 0; k < kDimensionCount; ++k) {
        out += detail::toy_relation(k);
        out += "\tWhich sign belongs with {head} in group" + detail::two_digits(k) + "?";
        out += '\n';
    }
    return out;
}

// KGTK-flavored edge file; node ids carry a toy: namespace, labels carry the
// human-readable text.
inline std::string toy_edges_tsv(const ToySpec& spec) {
    Rng rng(derive_seed(spec.seed, "toy-edges"));
    std::string out = "id\tnode1\trelation\tnode2\tnode1;label\tnode2;label\n";
    for (std::size_t k = 0; k < kDimensionCount; ++k) {
        for (std::size_t i = 0; i < spec.per_relation; ++i) {
            const std::size_t h = rng.bounded(spec.head_pool);
            const std::size_t f = rng.bounded(spec.filler_pool);
            out += "toy-" + detail::two_digits(k) + "-" + std::to_string(i);
            out += "\ttoy:obj" + std::to_string(h);
            out += '\t' + detail::toy_relation(k);
            out += "\ttoy:ans" + detail::two_digits(k) + "x" + std::to_string(f);
            out += '\t' + detail::toy_head_text(h);
            out += '\t' + detail::toy_tail_text(k, f);
            out += '\n';
        }
    }
    return out;
}

// Aligned benchmark built by the same marker construction, independent of the
// synthesis pipeline. Candidates are pairwise token-disjoint by construction.
inline QuestionPool toy_benchmark(const ToySpec& spec, std::size_t per_relation, std::size_t n,
                                  const std::string& id_prefix, std::uint64_t salt) {
    if (n < 2 || n > kDimensionCount)
        throw Error(ErrorKind::config, "toy benchmark needs 2 <= n <= 13");
    Rng rng(derive_seed(spec.seed, "toy-benchmark-" + std::to_string(salt)));
    QuestionPool pool;
    auto dims = all_dimensions();
    std::size_t serial = 0;
    for (std::size_t k = 0; k < kDimensionCount; ++k) {
        for (std::size_t i = 0; i < per_relation; ++i) {
            const std::size_t h = rng.bounded(spec.head_pool);
            const std::size_t f = rng.bounded(spec.filler_pool);
            SyntheticQuestion q;
            q.id = id_prefix + "-" + std::to_string(serial++);
            q.question = "Which sign belongs with " + detail::toy_head_text(h) + " in group" +
                         detail::two_digits(k) + "?";
            q.dimension = dims[k];
            q.answer_index = static_cast<std::size_t>(rng.bounded(n));

            std::vector<std::size_t> used_relations{k};
            std::vector<std::size_t> used_fillers{f};
            std::vector<std::string> distractors;
            while (distractors.size() + 1 < n) {
                const std::size_t rk = rng.bounded(kDimensionCount);
                const std::size_t rf = rng.bounded(spec.filler_pool);
                bool clash = false;
                for (auto u : used_relations) clash |= (u == rk);
                for (auto u : used_fillers) clash |= (u == rf);
                if (clash) continue;
                used_relations.push_back(rk);
                used_fillers.push_back(rf);
                distractors.push_back(detail::toy_tail_text(rk, rf));
            }
            std::size_t d = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == q.answer_index) q.candidates.push_back(detail::toy_tail_text(k, f));
                else q.candidates.push_back(distractors[d++]);
            }
            pool.add(std::move(q));
        }
    }
    pool.header() = Json{{"kind", "toy_benchmark"},
                         {"seed", spec.seed},
                         {"salt", salt},
                         {"per_relation", per_relation},
                         {"n", n}};
    return pool;
}

} // namespace kgqa
