#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cmom/compose.hpp"
#include "cmom/evalmetrics.hpp"
#include "cmom/patterns.hpp"
#include "cmom/selection.hpp"
#include "cmom/toml.hpp"

namespace cmom {

inline std::string slurp_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write file " + path.string());
    out << content;
}

/// Declarative pipeline configuration. Every constant has its default baked
/// in, so a minimal config only names the input files.
struct PipelineConfig {
    // [paths]
    std::filesystem::path source_ontology;
    std::vector<std::filesystem::path> target_ontologies;
    std::string example_pool = "source"; // "source" or a directory of OWL files
    std::filesystem::path output_dir = "out";

    // [task]
    std::string task_name = "task";

    // [selection] / [patterns]
    SelectionConfig selection;
    PatternConfig patterns;

    // [embedding]
    std::string embedding_provider = "hash"; // hash | file | http
    size_t embedding_dimension = 64;
    uint64_t embedding_seed = 42;
    std::filesystem::path embedding_path;
    std::string embedding_endpoint;
    std::string embedding_model = "text-embedding-3-small";
    std::string embedding_api_key_env = "OPENAI_API_KEY";

    // [model]
    ModelConfig model;

    // [cost]
    CostModel costs;
    GedOptions ged_options;

    // [vocab]
    std::vector<std::string> internal_synonym_properties;
    std::vector<std::string> external_synonym_properties;

    // [run]
    uint64_t seed = 42;
    int workers = 2;
    size_t sample = 0; // 0 = every reference source
    bool audit_log = true;

    [[nodiscard]] OwlParseOptions owl_options() const {
        OwlParseOptions options;
        for (const auto& property : internal_synonym_properties) {
            options.synonym_properties[property] = LabelProvenance::InternalSynonym;
        }
        for (const auto& property : external_synonym_properties) {
            options.synonym_properties[property] = LabelProvenance::ExternalSynonym;
        }
        return options;
    }

    static PipelineConfig from_text(std::string_view text,
                                    const std::filesystem::path& base_dir = ".") {
        toml::Table table = toml::parse(text);
        PipelineConfig config;

        auto resolve = [&](const std::string& p) -> std::filesystem::path {
            std::filesystem::path path(p);
            return path.is_absolute() ? path : base_dir / path;
        };

        std::string source = table.get_string("paths", "source", "");
        if (source.empty()) throw ConfigError("paths.source is required");
        config.source_ontology = resolve(source);
        for (const auto& target : table.get_string_array("paths", "targets")) {
            config.target_ontologies.push_back(resolve(target));
        }
        if (config.target_ontologies.empty()) {
            throw ConfigError("paths.targets must name at least one target ontology");
        }
        config.example_pool = table.get_string("paths", "examples", "source");
        if (config.example_pool != "source") {
            config.example_pool = resolve(config.example_pool).string();
        }
        config.output_dir = resolve(table.get_string("paths", "output", "out"));

        config.task_name = table.get_string("task", "name", "task");

        config.selection.alpha = table.get_number("selection", "alpha", 0.2);
        if (config.selection.alpha <= 0.0 || config.selection.alpha >= 1.0) {
            throw ConfigError("selection.alpha must lie strictly between 0 and 1");
        }
        config.selection.max_combo_size =
            static_cast<int>(table.get_integer("selection", "max_combo_size", 6));
        config.selection.max_results_per_source =
            static_cast<int>(table.get_integer("selection", "max_results_per_source", 10));
        config.selection.max_accepted_targets =
            static_cast<int>(table.get_integer("selection", "max_accepted_targets", 8));

        config.patterns.max_examples =
            static_cast<size_t>(table.get_integer("patterns", "max_examples", 10));

        config.embedding_provider = table.get_string("embedding", "provider", "hash");
        config.embedding_dimension =
            static_cast<size_t>(table.get_integer("embedding", "dimension", 64));
        config.embedding_seed = static_cast<uint64_t>(table.get_integer("embedding", "seed", 42));
        std::string embedding_path = table.get_string("embedding", "path", "");
        if (!embedding_path.empty()) config.embedding_path = resolve(embedding_path);
        config.embedding_endpoint = table.get_string("embedding", "endpoint", "");
        config.embedding_model =
            table.get_string("embedding", "model", "text-embedding-3-small");
        config.embedding_api_key_env =
            table.get_string("embedding", "api_key_env", "OPENAI_API_KEY");

        config.model.model_name = table.get_string("model", "name", "gpt-4o-mini");
        config.model.seed = table.get_integer("model", "seed", 42);
        config.model.temperature = table.get_number("model", "temperature", 0.0);
        config.model.endpoint =
            table.get_string("model", "endpoint", "https://api.openai.com/v1");
        config.model.max_attempts =
            static_cast<int>(table.get_integer("model", "max_attempts", 3));
        config.model.max_in_flight =
            static_cast<int>(table.get_integer("model", "max_in_flight", 4));
        config.model.api_key_env = table.get_string("model", "api_key_env", "OPENAI_API_KEY");
        config.model.backoff_base_ms =
            static_cast<int>(table.get_integer("model", "backoff_base_ms", 250));

        config.costs.sigma_class = table.get_number("cost", "sigma_class", 0.7);
        config.costs.sigma_property = table.get_number("cost", "sigma_property", 1.0);
        config.costs.node_insert = table.get_number("cost", "node_insert", 1.0);
        config.costs.node_delete = table.get_number("cost", "node_delete", 0.5);
        config.costs.edge_insert_delete = table.get_number("cost", "edge_insert_delete", 0.5);
        config.ged_options.exact_node_limit =
            static_cast<size_t>(table.get_integer("cost", "exact_node_limit", 16));

        config.internal_synonym_properties = table.get_string_array("vocab", "internal_synonyms");
        config.external_synonym_properties = table.get_string_array("vocab", "external_synonyms");

        config.seed = static_cast<uint64_t>(table.get_integer("run", "seed", 42));
        config.workers = static_cast<int>(table.get_integer("run", "workers", 2));
        if (config.workers < 1) throw ConfigError("run.workers must be at least 1");
        config.sample = static_cast<size_t>(table.get_integer("run", "sample", 0));
        config.audit_log = table.get_boolean("run", "audit", true);
        return config;
    }

    static PipelineConfig load(const std::filesystem::path& path) {
        return from_text(slurp_file(path), path.parent_path());
    }
};

} // namespace cmom
