// Command-line front end for the knowledge-graph QA pipeline: synthesize
// questions from edge files, train the built-in scorer, sample adaptation
// subsets, evaluate benchmarks, analyze task partitions, and run sweep grids.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kgqa/kgqa.hpp"

namespace fs = std::filesystem;
using namespace kgqa;

namespace {

struct GlobalFlags {
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string config;
};

void add_seed_threads(CLI::App* cmd, GlobalFlags& g) {
    cmd->add_option("--seed", g.seed, "Master seed");
    cmd->add_option("--threads", g.threads, "Worker threads");
}

StopwordSet stopwords_or_default(const std::string& path) {
    if (!path.empty()) return load_stopwords(path);
    return {};
}

int run_synthesize(const std::string& edges, const std::string& mapping,
                   const std::string& templates, const std::string& stopwords, std::size_t n,
                   bool strict, const GlobalFlags& g, const std::string& out,
                   const std::string& skip_report, const std::string& stats_out) {
    RelationMap map = RelationMap::from_file(mapping);
    LoadOptions opts;
    opts.strict = strict;
    LoadReport load_report;
    StatementSet set = load_edges(edges, map, opts, &load_report);

    SynthesisConfig cfg;
    cfg.n = n;
    cfg.seed = g.seed;
    cfg.threads = g.threads;
    cfg.templates = TemplateTable::from_file(templates);
    cfg.stopwords = stopwords_or_default(stopwords);
    auto result = synthesize_qa(set, cfg);
    result.pool.save(out);

    if (!stats_out.empty()) write_text_file(stats_out, kg_stats(set).to_json().dump(2) + "\n");
    if (!skip_report.empty()) {
        Json j = result.report.to_json();
        j["load"] = load_report.to_json();
        write_text_file(skip_report, j.dump(2) + "\n");
    }
    std::cout << "loaded " << set.size() << " statements (" << load_report.dropped_unmapped
              << " unmapped dropped), synthesized " << result.pool.size() << " questions, skipped "
              << result.report.skipped << "\n";
    return 0;
}

int run_train(const std::string& pool_path, const TrainHyper& hyper, const std::string& model_out,
              const std::string& dynamics_out, const std::string& curve_out) {
    QuestionPool pool = QuestionPool::load(pool_path);
    auto result = train(pool, hyper);
    if (!model_out.empty()) result.scorer.save(model_out);
    if (!dynamics_out.empty()) result.dynamics.save(dynamics_out);
    if (!curve_out.empty()) write_text_file(curve_out, curve_to_csv(result.curve));
    const auto& last = result.curve.back();
    std::cout << "trained on " << pool.size() << " questions for " << hyper.epochs
              << " epochs; final mean loss " << last.mean_loss << ", train accuracy "
              << last.train_accuracy << "\n";
    return 0;
}

int run_sample(const std::string& pool_path, const std::string& strategy, double k,
               const std::string& tail, const std::string& dimension,
               const std::string& dynamics_path, const std::string& margin_stat,
               const GlobalFlags& g, const std::string& out) {
    QuestionPool pool = QuestionPool::load(pool_path);
    SampleSpec spec;
    spec.strategy = parse_strategy(strategy);
    spec.k = k;
    spec.seed = g.seed;
    if (!tail.empty()) spec.tail = parse_tail(tail);
    if (!dimension.empty()) spec.dimension = require_dimension(dimension);

    TrainingStats stats;
    const TrainingStats* stats_ptr = nullptr;
    if (is_dynamics_strategy(spec.strategy)) {
        if (dynamics_path.empty())
            throw Error(ErrorKind::spec, "strategy " + strategy + " needs --dynamics");
        auto convention =
            margin_stat == "mean" ? MarginConvention::mean_distractor : MarginConvention::max_distractor;
        stats = compute_training_stats(import_external_dynamics(dynamics_path), convention);
        stats_ptr = &stats;
    }
    QuestionPool sampled = sample(pool, spec, stats_ptr);
    sampled.save(out);
    std::cout << "sampled " << sampled.size() << " of " << pool.size() << " questions ("
              << spec.label() << ", K=" << k << ")\n";
    return 0;
}

Benchmark load_benchmark_cli(const std::string& path, const std::string& adapter,
                             const std::string& name) {
    BenchmarkAdapter a =
        adapter.empty() ? BenchmarkAdapter::unified() : BenchmarkAdapter::from_file(adapter);
    std::string bench_name = name.empty() ? fs::path(path).stem().string() : name;
    return load_benchmark(path, a, bench_name);
}

int run_evaluate(const std::string& model, const std::string& benchmark,
                 const std::string& adapter, const std::string& name, const GlobalFlags& g,
                 const std::string& preds_out, const std::string& report_out) {
    EmbeddingScorer scorer = EmbeddingScorer::load(model);
    Benchmark bench = load_benchmark_cli(benchmark, adapter, name);
    EvalResult result = evaluate(scorer, bench, g.threads);
    if (!preds_out.empty()) write_text_file(preds_out, result.predictions_jsonl());
    Json report = result.to_json();
    report["majority_baseline"] = majority_baseline(bench);
    if (!report_out.empty()) write_text_file(report_out, report.dump(2) + "\n");
    std::cout << bench.name << ": accuracy " << result.accuracy << " (" << result.correct << "/"
              << bench.size() << "), argmax ties " << result.tie_count << "\n";
    return 0;
}

int run_analyze(const std::string& benchmark, const std::string& adapter, const std::string& name,
                const std::string& predictions_path, const std::string& pool_path,
                const std::string& subword_vocab, const std::string& report_out,
                const std::string& csv_out) {
    Benchmark bench = load_benchmark_cli(benchmark, adapter, name);

    PredictionMap predictions;
    for_each_jsonl(predictions_path, [&](std::size_t, Json&& j) {
        predictions[j.at("question_id").get<std::string>()] = j.at("correct").get<bool>();
    });

    Tokenizer tok = default_tokenizer();
    if (!subword_vocab.empty()) tok = SubwordTokenizer::from_file(subword_vocab);

    std::optional<FreqTable> freq;
    if (!pool_path.empty()) freq = build_freq_table(QuestionPool::load(pool_path), tok);

    std::vector<std::pair<std::string, double>> as_items, al_items, vo_items;
    std::size_t unseen = 0;
    for (const auto& q : bench.questions) {
        as_items.emplace_back(q.id, answer_similarity(q, tok));
        al_items.emplace_back(q.id, static_cast<double>(answer_length(q, tok)));
        if (freq) vo_items.emplace_back(q.id, vocab_overlap(q, *freq, tok, &unseen));
    }

    Json report;
    report["benchmark"] = bench.name;
    report["questions"] = bench.size();
    Json metrics = Json::object();

    auto add_metric = [&](const std::string& metric_name,
                          const std::vector<std::pair<std::string, double>>& items) {
        auto quartiles = make_quartiles(items);
        auto pr = partition_accuracy(predictions, quartiles, metric_name);
        metrics[metric_name] = pr.to_json();
        std::printf("%-16s", metric_name.c_str());
        for (const auto& quart : pr.quartiles) std::printf("  %6.4f(n=%zu)", quart.accuracy, quart.count);
        std::printf("  overall %6.4f\n", pr.overall_accuracy);
    };

    std::printf("%-16s  %-14s  %-14s  %-14s  %-14s\n", "metric", "Q1", "Q2", "Q3", "Q4");
    add_metric("answer_similarity", as_items);
    add_metric("answer_length", al_items);
    if (freq) {
        add_metric("vocab_overlap", vo_items);
        report["vo_unseen_token_queries"] = unseen;
    }
    report["metrics"] = std::move(metrics);
    if (!report_out.empty()) write_text_file(report_out, report.dump(2) + "\n");

    if (!csv_out.empty()) {
        std::string csv = "question_id,answer_similarity,answer_length,vocab_overlap\n";
        for (std::size_t i = 0; i < bench.questions.size(); ++i) {
            char buf[160];
            if (freq)
                std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g\n", as_items[i].first.c_str(),
                              as_items[i].second, al_items[i].second, vo_items[i].second);
            else
                std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,\n", as_items[i].first.c_str(),
                              as_items[i].second, al_items[i].second);
            csv += buf;
        }
        write_text_file(csv_out, csv);
    }
    return 0;
}

int run_sweep(const std::string& config_path, const std::string& out_dir, const GlobalFlags& g,
              bool threads_set) {
    ExperimentConfig config = ExperimentConfig::from_file(config_path);
    if (threads_set) config.threads = g.threads;
    fs::create_directories(out_dir);
    ExperimentReport report = run_experiment(config);
    write_text_file((fs::path(out_dir) / "report.json").string(), report.to_json().dump(2) + "\n");
    write_text_file((fs::path(out_dir) / "sweep.csv").string(), report.sweep_csv());
    write_text_file((fs::path(out_dir) / "curves.csv").string(), report.curves_csv());
    std::size_t failed = 0;
    for (const auto& c : report.cells)
        if (!c.error.empty()) ++failed;
    std::cout << "ran " << report.cells.size() << " cells (" << failed << " failed); wrote "
              << out_dir << "/report.json, sweep.csv, curves.csv\n";
    return failed == 0 ? 0 : 1;
}

int run_make_toy(const std::string& out_dir, std::size_t per_relation, std::size_t bench_per_relation,
                 std::size_t n, std::uint64_t seed) {
    ToySpec spec;
    spec.per_relation = per_relation;
    spec.seed = seed;
    fs::create_directories(out_dir);
    fs::path dir(out_dir);
    write_text_file((dir / "toy_kg.tsv").string(), toy_edges_tsv(spec));
    write_text_file((dir / "toy_mapping.tsv").string(), toy_mapping_tsv());
    write_text_file((dir / "toy_templates.tsv").string(), toy_templates_tsv());
    toy_benchmark(spec, bench_per_relation, n, "toy-bench", 0)
        .save((dir / "toy_benchmark.jsonl").string());
    const char* names[5] = {"aNLI", "PIQA", "WG", "SIQA", "CSQA"};
    for (std::size_t i = 0; i < 5; ++i) {
        auto slice = toy_benchmark(spec, std::max<std::size_t>(1, bench_per_relation / 5), n,
                                   std::string("toy-") + names[i], i + 1);
        slice.save((dir / (std::string("bench_") + to_lower(names[i]) + ".jsonl")).string());
    }

    Json sweep;
    sweep["pool"] = (dir / "toy_pool.jsonl").string();
    Json benches = Json::array();
    for (const auto* bname : names)
        benches.push_back(Json{{"name", bname},
                               {"path", (dir / (std::string("bench_") + to_lower(bname) + ".jsonl")).string()}});
    sweep["benchmarks"] = std::move(benches);
    sweep["strategies"] = Json::array({"random", "uniform", "confidence:low"});
    sweep["k_grid"] = Json::array({0, 5, 33, 100});
    sweep["seeds"] = Json::array({1});
    sweep["hyper"] = Json{{"margin", 1.0}, {"learning_rate", 20.0}, {"epochs", 5}, {"batch_size", 32}};
    write_text_file((dir / "toy_sweep.json").string(), sweep.dump(2) + "\n");

    std::cout << "wrote toy KG (" << per_relation * kDimensionCount << " statements), benchmarks and "
              << (dir / "toy_sweep.json").string() << "\n"
              << "next: kgqa synthesize --edges " << (dir / "toy_kg.tsv").string() << " --mapping "
              << (dir / "toy_mapping.tsv").string() << " --templates "
              << (dir / "toy_templates.tsv").string() << " --out " << (dir / "toy_pool.jsonl").string()
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kgqa: synthetic QA pipeline over knowledge-graph edges"};
    app.require_subcommand(1);

    GlobalFlags g;
    app.add_option("--seed", g.seed, "Master seed (default for all subcommands)");
    app.add_option("--threads", g.threads, "Worker threads (default for all subcommands)");
    app.add_option("--config", g.config, "Experiment config file (used by sweep)");

    // synthesize
    auto* syn = app.add_subcommand("synthesize", "Generate a question pool from an edge file");
    std::string edges, mapping, templates_path, stopwords_path, pool_out, skip_report, stats_out;
    std::size_t n = 3;
    bool strict = false;
    syn->add_option("--edges", edges, "TSV edge file")->required();
    syn->add_option("--mapping", mapping, "relation->dimension TSV")->required();
    syn->add_option("--templates", templates_path, "relation->template TSV")->required();
    syn->add_option("--stopwords", stopwords_path, "stopword list");
    syn->add_option("--n", n, "candidates per question (>= 2)");
    syn->add_flag("--strict", strict, "unmapped relations and bad rows are fatal");
    syn->add_option("--out", pool_out, "output pool JSONL")->required();
    syn->add_option("--skip-report", skip_report, "skip-report JSON path");
    syn->add_option("--stats-out", stats_out, "KG stats JSON path");
    add_seed_threads(syn, g);

    // train
    auto* tr = app.add_subcommand("train", "Train the built-in scorer, recording dynamics");
    std::string train_pool, model_out, dynamics_out, curve_out;
    TrainHyper hyper;
    tr->add_option("--pool", train_pool, "question pool JSONL")->required();
    tr->add_option("--margin", hyper.margin, "margin eta (> 0)");
    tr->add_option("--lr", hyper.learning_rate, "SGD learning rate");
    tr->add_option("--epochs", hyper.epochs, "training epochs");
    tr->add_option("--batch-size", hyper.batch_size, "SGD batch size");
    auto* tr_seed = tr->add_option("--seed", hyper.seed, "training seed");
    tr->add_option("--model-out", model_out, "trained model JSON path");
    tr->add_option("--dynamics-out", dynamics_out, "dynamics JSONL path");
    tr->add_option("--curve-out", curve_out, "training-curve CSV path");

    // sample
    auto* sa = app.add_subcommand("sample", "Select K% of a pool under a strategy");
    std::string sample_pool, strategy, tail, dim_name, dynamics_path, sample_out;
    std::string margin_stat = "max";
    double k = 100.0;
    sa->add_option("--pool", sample_pool, "question pool JSONL")->required();
    sa->add_option("--strategy", strategy,
                   "random|dimension|uniform|vanilla_confidence|confidence|variability|margin")
        ->required();
    sa->add_option("--k", k, "percentage of the pool in [0, 100]");
    sa->add_option("--tail", tail, "low|high (dynamics strategies)");
    sa->add_option("--dimension", dim_name, "dimension (dimension strategy)");
    sa->add_option("--dynamics", dynamics_path, "dynamics JSONL (dynamics strategies)");
    sa->add_option("--margin-stat", margin_stat, "margin statistic: max (default) or mean");
    sa->add_option("--out", sample_out, "output pool JSONL")->required();
    add_seed_threads(sa, g);

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "Score a benchmark with a trained model");
    std::string model_path, bench_path, adapter_path, bench_name, preds_out, report_out;
    ev->add_option("--model", model_path, "model JSON from train")->required();
    ev->add_option("--benchmark", bench_path, "benchmark file")->required();
    ev->add_option("--adapter", adapter_path, "adapter JSON (default: unified pool format)");
    ev->add_option("--name", bench_name, "benchmark name (default: file stem)");
    ev->add_option("--preds-out", preds_out, "predictions JSONL path");
    ev->add_option("--report-out", report_out, "report JSON path");
    add_seed_threads(ev, g);

    // analyze
    auto* an = app.add_subcommand("analyze", "Partition a benchmark by task properties");
    std::string an_bench, an_adapter, an_name, an_preds, an_pool, an_vocab, an_report, an_csv;
    an->add_option("--benchmark", an_bench, "benchmark file")->required();
    an->add_option("--adapter", an_adapter, "adapter JSON");
    an->add_option("--name", an_name, "benchmark name");
    an->add_option("--predictions", an_preds, "predictions JSONL from evaluate")->required();
    an->add_option("--pool", an_pool, "synthetic pool JSONL (enables vocab overlap)");
    an->add_option("--subword-vocab", an_vocab, "vocabulary file for greedy subword tokenization");
    an->add_option("--report-out", an_report, "report JSON path");
    an->add_option("--csv-out", an_csv, "per-question metric CSV path");

    // sweep
    auto* sw = app.add_subcommand("sweep", "Run a strategy x K x seed experiment grid");
    std::string sweep_config, sweep_out = "sweep-out";
    sw->add_option("--config", sweep_config, "experiment config JSON");
    sw->add_option("--out-dir", sweep_out, "output directory");
    auto* sw_threads = sw->add_option("--threads", g.threads, "evaluation threads");

    // make-toy
    auto* mt = app.add_subcommand("make-toy", "Regenerate the bundled toy KG and benchmarks");
    std::string toy_dir = "data/toy";
    std::size_t toy_per_relation = 200, toy_bench_per_relation = 40, toy_n = 3;
    std::uint64_t toy_seed = 7;
    mt->add_option("--out-dir", toy_dir, "output directory");
    mt->add_option("--per-relation", toy_per_relation, "statements per relation");
    mt->add_option("--bench-per-relation", toy_bench_per_relation, "benchmark questions per relation");
    mt->add_option("--n", toy_n, "candidates per benchmark question");
    mt->add_option("--toy-seed", toy_seed, "toy generator seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (syn->parsed())
            return run_synthesize(edges, mapping, templates_path, stopwords_path, n, strict, g,
                                  pool_out, skip_report, stats_out);
        if (tr->parsed()) {
            if (tr_seed->count() == 0) hyper.seed = g.seed; // global --seed as default
            return run_train(train_pool, hyper, model_out, dynamics_out, curve_out);
        }
        if (sa->parsed())
            return run_sample(sample_pool, strategy, k, tail, dim_name, dynamics_path, margin_stat,
                              g, sample_out);
        if (ev->parsed())
            return run_evaluate(model_path, bench_path, adapter_path, bench_name, g, preds_out,
                                report_out);
        if (an->parsed())
            return run_analyze(an_bench, an_adapter, an_name, an_preds, an_pool, an_vocab,
                               an_report, an_csv);
        if (sw->parsed()) {
            std::string cfg = !sweep_config.empty() ? sweep_config : g.config;
            if (cfg.empty()) throw Error(ErrorKind::config, "sweep needs --config");
            return run_sweep(cfg, sweep_out, g, sw_threads->count() > 0);
        }
        if (mt->parsed())
            return run_make_toy(toy_dir, toy_per_relation, toy_bench_per_relation, toy_n, toy_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
