#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgqa/evaluate.hpp"
#include "kgqa/sampler.hpp"
#include "kgqa/train.hpp"

namespace kgqa {

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string format_k(double k) {
    // Grid K values are usually integers; print them without a decimal point.
    if (k == std::floor(k) && std::abs(k) < 1e15)
        return std::to_string(static_cast<long long>(k));
    return format_double(k);
}

} // namespace detail

struct BenchmarkRef {
    std::string name;
    std::string path;
    std::string adapter_path; // empty = unified pool format
};

// Strategy grid entry: "random", "uniform", "dimension:temporal",
// "confidence:low", "margin:high", ...
inline SampleSpec parse_strategy_entry(const std::string& entry) {
    SampleSpec spec;
    auto colon = entry.find(':');
    auto head = colon == std::string::npos ? entry : entry.substr(0, colon);
    auto arg = colon == std::string::npos ? std::string() : entry.substr(colon + 1);
    spec.strategy = parse_strategy(head);
    if (spec.strategy == Strategy::dimension) {
        if (arg.empty())
            throw Error(ErrorKind::spec, "dimension strategy needs ':<dimension>' in '" + entry + "'");
        spec.dimension = require_dimension(arg);
    } else if (is_dynamics_strategy(spec.strategy)) {
        if (arg.empty())
            throw Error(ErrorKind::spec, "strategy '" + entry + "' needs ':low' or ':high'");
        spec.tail = parse_tail(arg);
    } else if (!arg.empty()) {
        throw Error(ErrorKind::spec, "strategy '" + head + "' takes no argument");
    }
    return spec;
}

struct ExperimentConfig {
    std::string pool_path;
    std::vector<BenchmarkRef> benchmarks;
    std::vector<std::string> strategies;
    std::vector<double> k_grid;
    std::vector<std::uint64_t> seeds{0};
    TrainHyper hyper;
    std::string dynamics_path; // optional externally produced dynamics
    MarginConvention margin_convention = MarginConvention::max_distractor;
    unsigned threads = 1;
    DomainLabel domains;
    Json snapshot; // the raw config document, echoed into every report

    static ExperimentConfig from_json(const Json& j) {
        ExperimentConfig cfg;
        cfg.snapshot = j;
        cfg.pool_path = j.at("pool").get<std::string>();
        for (const auto& b : j.at("benchmarks")) {
            BenchmarkRef ref;
            ref.name = b.at("name").get<std::string>();
            ref.path = b.at("path").get<std::string>();
            ref.adapter_path = b.value("adapter", "");
            cfg.benchmarks.push_back(std::move(ref));
        }
        cfg.strategies = j.at("strategies").get<std::vector<std::string>>();
        for (const auto& k : j.at("k_grid")) cfg.k_grid.push_back(k.get<double>());
        if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        if (j.contains("hyper")) {
            const auto& h = j.at("hyper");
            cfg.hyper.margin = h.value("margin", cfg.hyper.margin);
            cfg.hyper.learning_rate = h.value("learning_rate", cfg.hyper.learning_rate);
            cfg.hyper.epochs = h.value("epochs", cfg.hyper.epochs);
            cfg.hyper.batch_size = h.value("batch_size", cfg.hyper.batch_size);
        }
        cfg.dynamics_path = j.value("dynamics", "");
        if (j.value("margin_statistic", "max") == std::string("mean"))
            cfg.margin_convention = MarginConvention::mean_distractor;
        cfg.threads = j.value("threads", 1u);
        if (j.contains("domain_labels"))
            for (const auto& [name, label] : j.at("domain_labels").items())
                cfg.domains.set(name, to_lower(label.get<std::string>()) == "hdo"
                                          ? DomainLabel::Overlap::high
                                          : DomainLabel::Overlap::low);
        if (cfg.benchmarks.empty()) throw Error(ErrorKind::config, "no benchmarks configured");
        for (std::size_t i = 0; i < cfg.benchmarks.size(); ++i)
            for (std::size_t j = i + 1; j < cfg.benchmarks.size(); ++j)
                if (cfg.benchmarks[i].name == cfg.benchmarks[j].name)
                    throw Error(ErrorKind::config,
                                "duplicate benchmark name: " + cfg.benchmarks[i].name);
        if (cfg.strategies.empty()) throw Error(ErrorKind::config, "no strategies configured");
        if (cfg.k_grid.empty()) throw Error(ErrorKind::config, "empty k_grid");
        if (cfg.seeds.empty()) throw Error(ErrorKind::config, "empty seeds");
        for (const auto& s : cfg.strategies) parse_strategy_entry(s); // validate early
        cfg.hyper.validate();
        return cfg;
    }

    static ExperimentConfig from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error(ErrorKind::io, "cannot open config file: " + path);
        Json j = Json::parse(in, nullptr, false);
        if (j.is_discarded()) throw Error(ErrorKind::parse, path + ": invalid JSON");
        return from_json(j);
    }
};

struct CellResult {
    std::string strategy;
    double k = 0.0;
    std::uint64_t seed = 0;
    std::size_t sample_size = 0;
    std::vector<std::pair<std::string, double>> benchmark_accuracy; // config order
    double avg = 0.0;
    std::optional<double> avg_ldo;
    std::optional<double> avg_hdo;
    std::vector<CurvePoint> curve; // empty when no training happened (K=0)
    std::string error;             // non-empty when the cell aborted

    Json to_json() const {
        Json j;
        j["strategy"] = strategy;
        j["k"] = k;
        j["seed"] = seed;
        if (!error.empty()) {
            j["error"] = error;
            return j;
        }
        j["sample_size"] = sample_size;
        Json acc = Json::object();
        for (const auto& [name, a] : benchmark_accuracy) acc[name] = a;
        j["accuracy"] = std::move(acc);
        j["avg"] = avg;
        if (avg_ldo) j["avg_ldo"] = *avg_ldo;
        if (avg_hdo) j["avg_hdo"] = *avg_hdo;
        Json curve_json = Json::array();
        for (const auto& p : curve)
            curve_json.push_back(Json{{"epoch", p.epoch},
                                      {"mean_loss", p.mean_loss},
                                      {"train_accuracy", p.train_accuracy}});
        j["curve"] = std::move(curve_json);
        return j;
    }
};

struct ExperimentReport {
    Json config_snapshot;
    std::vector<std::pair<std::string, double>> majority; // per benchmark
    std::vector<CellResult> cells;

    Json to_json() const {
        Json j;
        j["config"] = config_snapshot;
        Json maj = Json::object();
        for (const auto& [name, a] : majority) maj[name] = a;
        j["majority_baseline"] = std::move(maj);
        Json cell_json = Json::array();
        for (const auto& c : cells) cell_json.push_back(c.to_json());
        j["cells"] = std::move(cell_json);
        return j;
    }

    // One row per (cell, benchmark) plus aggregate rows.
    std::string sweep_csv() const {
        std::string out = "strategy,k,seed,benchmark,accuracy\n";
        for (const auto& c : cells) {
            if (!c.error.empty()) continue;
            auto prefix = c.strategy + "," + detail::format_k(c.k) + "," + std::to_string(c.seed) + ",";
            for (const auto& [name, a] : c.benchmark_accuracy)
                out += prefix + name + "," + detail::format_double(a) + "\n";
            out += prefix + "Avg," + detail::format_double(c.avg) + "\n";
            if (c.avg_ldo) out += prefix + "Avg(LDO)," + detail::format_double(*c.avg_ldo) + "\n";
            if (c.avg_hdo) out += prefix + "Avg(HDO)," + detail::format_double(*c.avg_hdo) + "\n";
        }
        return out;
    }

    std::string curves_csv() const {
        std::string out = "strategy,k,seed,epoch,mean_loss,train_accuracy\n";
        for (const auto& c : cells) {
            if (!c.error.empty()) continue;
            auto prefix = c.strategy + "," + detail::format_k(c.k) + "," + std::to_string(c.seed) + ",";
            for (const auto& p : c.curve)
                out += prefix + std::to_string(p.epoch) + "," + detail::format_double(p.mean_loss) +
                       "," + detail::format_double(p.train_accuracy) + "\n";
        }
        return out;
    }
};

// Runs the full grid: sample -> adapt the built-in scorer -> evaluate every
// benchmark. Cells run in a deterministic lexicographic order over
// (strategy, K, seed); a failing cell is recorded and the rest continue.
inline ExperimentReport run_experiment(const ExperimentConfig& config) {
    QuestionPool pool = QuestionPool::load(config.pool_path);

    std::vector<Benchmark> benchmarks;
    for (const auto& ref : config.benchmarks) {
        auto adapter = ref.adapter_path.empty() ? BenchmarkAdapter::unified()
                                                : BenchmarkAdapter::from_file(ref.adapter_path);
        benchmarks.push_back(load_benchmark(ref.path, adapter, ref.name));
    }

    ExperimentReport report;
    report.config_snapshot = config.snapshot;
    for (const auto& b : benchmarks) report.majority.emplace_back(b.name, majority_baseline(b));

    // Deterministic grid order.
    std::vector<std::string> strategies = config.strategies;
    std::sort(strategies.begin(), strategies.end());
    strategies.erase(std::unique(strategies.begin(), strategies.end()), strategies.end());
    std::vector<double> ks = config.k_grid;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    std::vector<std::uint64_t> seeds = config.seeds;
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

    const bool needs_stats = std::any_of(strategies.begin(), strategies.end(), [](const auto& s) {
        return is_dynamics_strategy(parse_strategy_entry(s).strategy);
    });

    // Training statistics per grid seed: either imported once from an external
    // dynamics file, or recorded by training the built-in scorer on the full
    // pool with this seed.
    std::map<std::uint64_t, TrainingStats> stats_by_seed;
    auto stats_for = [&](std::uint64_t seed) -> const TrainingStats* {
        if (!needs_stats) return nullptr;
        auto it = stats_by_seed.find(seed);
        if (it != stats_by_seed.end()) return &it->second;
        TrainingStats stats;
        if (!config.dynamics_path.empty()) {
            stats = compute_training_stats(import_external_dynamics(config.dynamics_path),
                                           config.margin_convention);
        } else {
            TrainHyper hyper = config.hyper;
            hyper.seed = derive_seed(seed, "full-pool-dynamics");
            auto full = train(pool, hyper,
                              EmbeddingScorer::init(pool, derive_seed(seed, "scorer-init")));
            stats = compute_training_stats(full.dynamics, config.margin_convention);
        }
        return &stats_by_seed.emplace(seed, std::move(stats)).first->second;
    };

    for (const auto& strategy_entry : strategies) {
        for (double k : ks) {
            for (std::uint64_t seed : seeds) {
                CellResult cell;
                cell.strategy = strategy_entry;
                cell.k = k;
                cell.seed = seed;
                try {
                    SampleSpec spec = parse_strategy_entry(strategy_entry);
                    spec.k = k;
                    spec.seed = derive_seed(seed, "sample:" + strategy_entry);
                    const TrainingStats* stats =
                        is_dynamics_strategy(spec.strategy) ? stats_for(seed) : nullptr;
                    QuestionPool sampled = sample(pool, spec, stats);
                    cell.sample_size = sampled.size();

                    // The scorer's vocabulary and init depend only on the full
                    // pool and the grid seed, so K=0 is the vanilla model and
                    // cells differ only in their training data.
                    EmbeddingScorer scorer =
                        EmbeddingScorer::init(pool, derive_seed(seed, "scorer-init"));
                    if (!sampled.empty()) {
                        TrainHyper hyper = config.hyper;
                        hyper.seed = derive_seed(seed, "train");
                        auto trained = train(sampled, hyper, std::move(scorer));
                        scorer = std::move(trained.scorer);
                        cell.curve = std::move(trained.curve);
                    }

                    double sum = 0.0, ldo_sum = 0.0, hdo_sum = 0.0;
                    std::size_t ldo_n = 0, hdo_n = 0;
                    for (const auto& bench : benchmarks) {
                        auto eval = evaluate(scorer, bench, config.threads);
                        cell.benchmark_accuracy.emplace_back(bench.name, eval.accuracy);
                        sum += eval.accuracy;
                        if (auto o = config.domains.lookup(bench.name)) {
                            if (*o == DomainLabel::Overlap::low) {
                                ldo_sum += eval.accuracy;
                                ++ldo_n;
                            } else {
                                hdo_sum += eval.accuracy;
                                ++hdo_n;
                            }
                        }
                    }
                    cell.avg = sum / static_cast<double>(benchmarks.size());
                    if (ldo_n > 0) cell.avg_ldo = ldo_sum / static_cast<double>(ldo_n);
                    if (hdo_n > 0) cell.avg_hdo = hdo_sum / static_cast<double>(hdo_n);
                } catch (const std::exception& e) {
                    cell.error = e.what();
                }
                report.cells.push_back(std::move(cell));
            }
        }
    }
    return report;
}

} // namespace kgqa
