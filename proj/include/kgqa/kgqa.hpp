#pragma once

// Knowledge-graph to synthetic-QA pipeline toolkit: ingestion, question
// synthesis, margin-loss training with dynamics recording, subset sampling,
// task-property analytics, and the evaluation harness.

#include "kgqa/analytics.hpp"
#include "kgqa/benchmark.hpp"
#include "kgqa/dimension.hpp"
#include "kgqa/dynamics.hpp"
#include "kgqa/evaluate.hpp"
#include "kgqa/experiment.hpp"
#include "kgqa/kg_ingest.hpp"
#include "kgqa/question.hpp"
#include "kgqa/sampler.hpp"
#include "kgqa/scorer.hpp"
#include "kgqa/statement.hpp"
#include "kgqa/synthesis.hpp"
#include "kgqa/toy.hpp"
#include "kgqa/train.hpp"
