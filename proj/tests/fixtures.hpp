#pragma once

#include "kgqa/kg_ingest.hpp"
#include "kgqa/synthesis.hpp"
#include "kgqa/toy.hpp"
#include "util.hpp"

namespace testutil {

inline kgqa::StatementSet toy_statement_set(std::size_t per_relation, std::uint64_t seed = 7) {
    kgqa::ToySpec spec;
    spec.per_relation = per_relation;
    spec.seed = seed;
    auto edges = write_file("fix_toy_kg_" + std::to_string(per_relation) + "_" +
                                std::to_string(seed) + ".tsv",
                            kgqa::toy_edges_tsv(spec));
    auto mapping =
        kgqa::RelationMap::from_file(write_file("fix_toy_mapping.tsv", kgqa::toy_mapping_tsv()));
    return kgqa::load_edges(edges, mapping);
}

inline kgqa::SynthesisConfig toy_synthesis_config(std::uint64_t seed, std::size_t n = 3,
                                                  unsigned threads = 1) {
    kgqa::SynthesisConfig cfg;
    cfg.n = n;
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.templates = kgqa::TemplateTable::from_file(
        write_file("fix_toy_templates.tsv", kgqa::toy_templates_tsv()));
    cfg.stopwords = kgqa::load_stopwords(data_file("stopwords.txt"));
    return cfg;
}

// Synthesized pool over the separable toy KG.
inline kgqa::QuestionPool toy_pool(std::size_t per_relation, std::uint64_t seed = 7,
                                   std::size_t n = 3) {
    auto set = toy_statement_set(per_relation, seed);
    return kgqa::synthesize_qa(set, toy_synthesis_config(seed, n)).pool;
}

// Learning rate that adapts the built-in scorer on the toy task within the
// default five epochs (the library default of 0.05 is sized for generic use;
// the toy scorer starts from tiny embeddings, so its bilinear scores need
// larger steps to grow).
inline constexpr double kToyLearningRate = 20.0;

} // namespace testutil
