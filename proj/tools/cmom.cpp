// Command-line driver for the complex multi-ontology mapping pipeline.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cmom/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitParse = 3;
constexpr int kExitModel = 4;
constexpr int kExitEval = 5;

struct CommonFlags {
    std::string config_path;
    std::string variant = "full";
    bool mock_model = false;
    int workers = 0;        // 0 = config value
    long long sample = -1;  // -1 = config value
    long long seed = -1;    // -1 = config value
    bool approx_ged = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_variant = true) {
    cmd->add_option("--config", flags.config_path, "pipeline config file (TOML)")->required();
    if (with_variant) {
        cmd->add_option("--variant", flags.variant, "prompt variant")
            ->check(CLI::IsMember({"full", "no-examples", "no-classes", "lm-baseline"}));
        cmd->add_flag("--mock-model", flags.mock_model, "use the offline mock model");
    }
    cmd->add_option("--workers", flags.workers, "worker threads per stage");
    cmd->add_option("--sample", flags.sample, "sample N reference sources");
    cmd->add_option("--seed", flags.seed, "sampling seed");
    cmd->add_flag("--approx-ged", flags.approx_ged, "allow the approximate ged fallback");
}

cmom::Pipeline make_pipeline(const CommonFlags& flags) {
    cmom::PipelineConfig config = cmom::PipelineConfig::load(flags.config_path);
    if (flags.workers > 0) config.workers = flags.workers;
    if (flags.sample >= 0) config.sample = static_cast<size_t>(flags.sample);
    if (flags.seed >= 0) config.seed = static_cast<uint64_t>(flags.seed);
    config.ged_options.allow_approximate = flags.approx_ged;
    return cmom::Pipeline(std::move(config));
}

void print_report(const cmom::EvaluationReport& report) {
    std::printf(
        "P=%.4f R=%.4f F1=%.4f class_P=%.4f class_R=%.4f class_F1=%.4f |M_c|=%zu |M_r|=%zu\n",
        report.precision, report.recall, report.f1, report.class_precision, report.class_recall,
        report.class_f1, report.valid_count, report.reference_count);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"complex multi-ontology mapping toolkit"};
    app.require_subcommand(1);

    CommonFlags vocab_flags, select_flags, rank_flags, compose_flags, evaluate_flags,
        pipeline_flags;
    std::string sources_file;
    long long top_k = 50;
    std::string eval_mode = "graph";

    auto* vocab = app.add_subcommand("vocab", "extract source and target vocabularies");
    add_common(vocab, vocab_flags, /*with_variant=*/false);

    auto* select = app.add_subcommand("select", "select candidate target classes");
    add_common(select, select_flags, /*with_variant=*/false);
    select->add_option("--sources", sources_file, "file with one source IRI per line");

    auto* rank = app.add_subcommand("rank", "rank sources by embedding confidence");
    add_common(rank, rank_flags, /*with_variant=*/false);
    rank->add_option("-k,--top", top_k, "number of sources to keep");

    auto* compose = app.add_subcommand("compose", "generate mappings with the model");
    add_common(compose, compose_flags);

    auto* evaluate = app.add_subcommand("evaluate", "score mappings against references");
    add_common(evaluate, evaluate_flags);
    evaluate->add_option("--mode", eval_mode, "graph | class | baseline-classes")
        ->check(CLI::IsMember({"graph", "class", "baseline-classes"}));

    auto* pipeline = app.add_subcommand("pipeline", "run vocab, select, compose and evaluate");
    add_common(pipeline, pipeline_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (vocab->parsed()) {
            auto p = make_pipeline(vocab_flags);
            bool skipped = false;
            p.run_vocab(&skipped);
            std::printf("vocab: %s\n", skipped ? "up to date" : "written");
        } else if (select->parsed()) {
            auto p = make_pipeline(select_flags);
            std::vector<cmom::Iri> sources;
            if (!sources_file.empty()) {
                std::string text = cmom::slurp_file(sources_file);
                size_t pos = 0;
                while (pos < text.size()) {
                    size_t end = text.find('\n', pos);
                    if (end == std::string::npos) end = text.size();
                    std::string line = text.substr(pos, end - pos);
                    pos = end + 1;
                    if (!line.empty()) sources.emplace_back(line);
                }
            }
            bool skipped = false;
            p.run_select(sources, &skipped);
            std::printf("select: %s\n", skipped ? "up to date" : "written");
        } else if (rank->parsed()) {
            auto p = make_pipeline(rank_flags);
            auto ranked = p.run_rank(static_cast<size_t>(top_k));
            for (const auto& [iri, score] : ranked) {
                std::printf("%s\t%.6f\n", iri.value().c_str(), score);
            }
        } else if (compose->parsed()) {
            auto p = make_pipeline(compose_flags);
            bool skipped = false;
            p.run_compose(cmom::variant_from_string(compose_flags.variant),
                          compose_flags.mock_model, &skipped);
            std::printf("compose: %s\n", skipped ? "up to date" : "written");
        } else if (evaluate->parsed()) {
            auto p = make_pipeline(evaluate_flags);
            auto report = p.run_evaluate(cmom::eval_mode_from_string(eval_mode),
                                         cmom::variant_from_string(evaluate_flags.variant));
            print_report(report);
        } else if (pipeline->parsed()) {
            auto p = make_pipeline(pipeline_flags);
            auto summary = p.run_pipeline(cmom::variant_from_string(pipeline_flags.variant),
                                          pipeline_flags.mock_model);
            std::printf("%s\n", summary.dump(2).c_str());
        }
    } catch (const cmom::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const cmom::TransportError& e) {
        std::cerr << "model endpoint failure: " << e.what() << '\n';
        return kExitModel;
    } catch (const cmom::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const cmom::EvalError& e) {
        std::cerr << "evaluation error: " << e.what() << '\n';
        return kExitEval;
    } catch (const cmom::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitEval;
    }
    return kExitOk;
}
