#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "kgqa/parallel.hpp"
#include "kgqa/question.hpp"
#include "kgqa/rng.hpp"
#include "kgqa/statement.hpp"

namespace kgqa {

// Relation -> question template. Each template must contain a {head} slot; the
// statement tail is always the answer.
class TemplateTable {
public:
    static TemplateTable from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error(ErrorKind::io, "cannot open template file: " + path);
        TemplateTable table;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            auto t = trim(line);
            if (t.empty() || t.front() == '#') continue;
            auto tab = t.find('\t');
            if (tab == std::string_view::npos)
                throw Error(ErrorKind::parse,
                            path + ":" + std::to_string(line_no) + ": expected <relation>\\t<template>");
            auto relation = std::string(trim(t.substr(0, tab)));
            auto text = std::string(trim(t.substr(tab + 1)));
            if (text.find("{head}") == std::string::npos)
                throw Error(ErrorKind::parse, path + ":" + std::to_string(line_no) +
                                                  ": template for " + relation + " lacks a {head} slot");
            table.templates_[relation] = text;
        }
        return table;
    }

    void set(std::string relation, std::string tmpl) {
        if (tmpl.find("{head}") == std::string::npos)
            throw Error(ErrorKind::template_missing, "template for " + relation + " lacks a {head} slot");
        templates_[std::move(relation)] = std::move(tmpl);
    }

    bool contains(const std::string& relation) const { return templates_.count(relation) > 0; }

    const std::string& get(const std::string& relation) const {
        auto it = templates_.find(relation);
        if (it == templates_.end())
            throw Error(ErrorKind::template_missing, "no template for relation: " + relation);
        return it->second;
    }

    std::uint64_t digest() const {
        std::map<std::string, std::string> sorted(templates_.begin(), templates_.end());
        std::uint64_t h = kFnvOffset;
        for (const auto& [k, v] : sorted) {
            h = fnv1a64(k, h);
            h = fnv1a64("\t", h);
            h = fnv1a64(v, h);
            h = fnv1a64("\n", h);
        }
        return h;
    }

private:
    std::unordered_map<std::string, std::string> templates_;
};

struct Verbalization {
    std::string question;
    std::string answer;
};

inline Verbalization verbalize(const Statement& statement, const TemplateTable& templates) {
    const std::string& tmpl = templates.get(statement.relation);
    std::string head(trim(statement.head));
    std::string question;
    question.reserve(tmpl.size() + head.size());
    std::size_t pos = 0;
    while (true) {
        auto slot = tmpl.find("{head}", pos);
        if (slot == std::string::npos) {
            question += tmpl.substr(pos);
            break;
        }
        question += tmpl.substr(pos, slot - pos);
        question += head;
        pos = slot + 6;
    }
    return {std::string(trim(question)), std::string(trim(statement.tail))};
}

struct SynthesisConfig {
    std::size_t n = 3;             // candidates per question
    std::uint64_t seed = 0;        // master seed; per-statement streams derive from it
    std::size_t retry_cap = 20;    // rejection-sampling attempts per distractor slot
    unsigned threads = 1;
    TemplateTable templates;
    StopwordSet stopwords;
};

struct SkipReport {
    std::size_t synthesized = 0;
    std::size_t skipped = 0;
    std::map<std::string, std::size_t> by_cause;

    void count(const std::string& cause) {
        ++skipped;
        ++by_cause[cause];
    }

    Json to_json() const {
        Json j;
        j["synthesized"] = synthesized;
        j["skipped"] = skipped;
        Json causes = Json::object();
        for (const auto& [k, v] : by_cause) causes[k] = v;
        j["by_cause"] = std::move(causes);
        return j;
    }
};

namespace detail {

// Shared read-only context; built once, then safe to use from any worker.
struct SynthesisContext {
    const StatementSet* pool = nullptr;
    const SynthesisConfig* config = nullptr;
    std::vector<std::vector<std::uint64_t>> tail_hashes; // full token-hash set per tail
    std::vector<char> tail_has_content;                  // non-empty after stopword removal
    std::unordered_map<std::string, std::vector<std::size_t>> by_relation;
    std::array<std::vector<std::size_t>, kDimensionCount> by_dimension;
    std::vector<std::size_t> all;

    SynthesisContext(const StatementSet& set, const SynthesisConfig& cfg)
        : pool(&set), config(&cfg) {
        const auto& stmts = set.statements();
        tail_hashes.resize(stmts.size());
        tail_has_content.assign(stmts.size(), 0);
        all.resize(stmts.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        // Tokenization dominates the build; each slot is independent.
        parallel_for(stmts.size(), cfg.threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                auto tokens = tokenize(stmts[i].tail);
                bool content = false;
                for (const auto& t : tokens)
                    if (!cfg.stopwords.count(t)) {
                        content = true;
                        break;
                    }
                tail_has_content[i] = content ? 1 : 0;
                tail_hashes[i] = token_hash_set(tokens);
            }
        });
        for (std::size_t i = 0; i < stmts.size(); ++i) {
            by_relation[stmts[i].relation].push_back(i);
            by_dimension[dimension_index(stmts[i].dimension)].push_back(i);
        }
    }
};

// Draws `count` distractor tails for statement `self`. Tiers widen from same
// relation to same dimension to the whole pool; a tier that cannot fill every
// slot within the retry cap is abandoned and the next one is tried afresh.
//
// A candidate is accepted only if its full token set is disjoint from the
// answer and from every already-picked distractor. Full-set disjointness is
// stricter than the stopword-filtered check and implies it, and it keeps the
// candidates of a generated question at Jaccard similarity exactly 0.
inline std::optional<std::vector<std::size_t>> draw_distractors(const SynthesisContext& ctx,
                                                                std::size_t self, std::size_t count,
                                                                Rng& rng) {
    const auto& stmts = ctx.pool->statements();
    const Statement& source = stmts[self];
    const auto& answer_hashes = ctx.tail_hashes[self];

    const std::vector<std::size_t>* tiers[3];
    tiers[0] = &ctx.by_relation.at(source.relation);
    tiers[1] = &ctx.by_dimension[dimension_index(source.dimension)];
    tiers[2] = &ctx.all;

    for (const auto* tier : tiers) {
        if (tier->size() <= count) continue; // self is a member; need count others
        std::vector<std::size_t> picked;
        std::vector<const std::vector<std::uint64_t>*> picked_hashes;
        picked.reserve(count);
        bool tier_ok = true;
        for (std::size_t slot = 0; slot < count && tier_ok; ++slot) {
            bool filled = false;
            for (std::size_t attempt = 0; attempt < ctx.config->retry_cap; ++attempt) {
                std::size_t cand = (*tier)[rng.bounded(tier->size())];
                if (cand == self) continue;
                if (!ctx.tail_has_content[cand]) continue;
                if (stmts[cand].tail == source.tail) continue;
                const auto& ch = ctx.tail_hashes[cand];
                if (ch.empty() || !disjoint(ch, answer_hashes)) continue;
                bool clash = false;
                for (std::size_t p = 0; p < picked.size() && !clash; ++p) {
                    if (stmts[picked[p]].tail == stmts[cand].tail) clash = true;
                    else if (!disjoint(ch, *picked_hashes[p])) clash = true;
                }
                if (clash) continue;
                picked.push_back(cand);
                picked_hashes.push_back(&ch);
                filled = true;
                break;
            }
            if (!filled) tier_ok = false;
        }
        if (tier_ok) return picked;
    }
    return std::nullopt;
}

} // namespace detail

// Standalone distractor draw for one statement; synthesize_qa uses the
// shared-context path internally. Returns `count` tail texts.
inline std::vector<std::string> sample_distractors(const Statement& statement,
                                                   const StatementSet& pool, std::size_t count,
                                                   Rng& rng, const SynthesisConfig& config) {
    detail::SynthesisContext ctx(pool, config);
    std::size_t self = pool.size();
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (pool[i].id == statement.id) {
            self = i;
            break;
        }
    if (self == pool.size())
        throw Error(ErrorKind::synthesis, "statement " + statement.id + " not in pool");
    auto picked = detail::draw_distractors(ctx, self, count, rng);
    if (!picked)
        throw Error(ErrorKind::synthesis,
                    "could not draw " + std::to_string(count) + " distractors for " + statement.id);
    std::vector<std::string> out;
    out.reserve(count);
    for (auto i : *picked) out.push_back(std::string(trim(pool[i].tail)));
    return out;
}

struct SynthesisResult {
    QuestionPool pool;
    SkipReport report;
};

// Turns every statement into at most one n-way question. Each statement owns
// an rng stream derived from (seed, statement id), so the generated pool is
// identical for any thread count.
inline SynthesisResult synthesize_qa(const StatementSet& set, const SynthesisConfig& config) {
    if (config.n < 2) throw Error(ErrorKind::config, "n must be >= 2");
    if (config.retry_cap == 0) throw Error(ErrorKind::config, "retry_cap must be >= 1");

    detail::SynthesisContext ctx(set, config);
    const auto& stmts = set.statements();

    struct Slot {
        SyntheticQuestion question;
        std::string skip_cause; // empty when synthesized
    };
    std::vector<Slot> slots(stmts.size());

    parallel_for(stmts.size(), config.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const Statement& s = stmts[i];
            Slot& slot = slots[i];
            if (!config.templates.contains(s.relation)) {
                slot.skip_cause = "missing_template";
                continue;
            }
            if (!ctx.tail_has_content[i] || ctx.tail_hashes[i].empty()) {
                slot.skip_cause = "answer_without_content_tokens";
                continue;
            }
            Rng rng(derive_seed(config.seed, s.id));
            auto picked = detail::draw_distractors(ctx, i, config.n - 1, rng);
            if (!picked) {
                slot.skip_cause = "distractors_exhausted";
                continue;
            }
            auto verbalized = verbalize(s, config.templates);
            SyntheticQuestion q;
            q.id = "q-" + s.id;
            q.question = std::move(verbalized.question);
            q.dimension = s.dimension;
            q.source_statement_id = s.id;
            q.answer_index = static_cast<std::size_t>(rng.bounded(config.n));
            q.candidates.reserve(config.n);
            std::size_t d = 0;
            for (std::size_t c = 0; c < config.n; ++c) {
                if (c == q.answer_index) q.candidates.push_back(verbalized.answer);
                else q.candidates.push_back(std::string(trim(stmts[(*picked)[d++]].tail)));
            }
            slot.question = std::move(q);
        }
    });

    SynthesisResult result;
    result.pool.header() = Json{{"kind", "synthetic_pool"},
                                {"source", set.source_name()},
                                {"statements", set.size()},
                                {"n", config.n},
                                {"seed", config.seed},
                                {"templates_digest", hex_digest(config.templates.digest())}};
    for (auto& slot : slots) {
        if (!slot.skip_cause.empty()) result.report.count(slot.skip_cause);
        else result.pool.add(std::move(slot.question));
    }
    result.report.synthesized = result.pool.size();
    result.pool.header()["questions"] = result.pool.size();
    return result;
}

} // namespace kgqa
