#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "cmom/compose.hpp"
#include "cmom/config.hpp"
#include "cmom/evalmetrics.hpp"
#include "cmom/http_client.hpp"
#include "cmom/manchester.hpp"
#include "cmom/patterns.hpp"
#include "cmom/selection.hpp"
#include "cmom/vocabulary.hpp"

namespace cmom {

inline uint64_t fnv1a64(std::string_view data, uint64_t hash = 1469598103934665603ULL) {
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

/// Runs fn(0..count) across up to `workers` threads; the first exception wins.
template <typename Fn>
void parallel_for(size_t count, int workers, Fn&& fn) {
    if (count == 0) return;
    size_t thread_count = std::min<size_t>(std::max(workers, 1), count);
    if (thread_count == 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (size_t t = 0; t < thread_count; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

/// Reproducible sampling without replacement: an explicit Fisher-Yates
/// shuffle over the sorted input, then the first n entries.
inline std::vector<Iri> sample_sources(std::vector<Iri> sources, size_t n, uint64_t seed) {
    std::sort(sources.begin(), sources.end());
    std::mt19937_64 rng(seed);
    for (size_t i = sources.size(); i > 1; --i) {
        size_t j = rng() % i;
        std::swap(sources[i - 1], sources[j]);
    }
    if (n > 0 && n < sources.size()) sources.resize(n);
    return sources;
}

inline void require_file(const std::filesystem::path& path, const std::string& hint) {
    if (!std::filesystem::exists(path)) {
        throw ConfigError(path.string() + " not found; " + hint);
    }
}

enum class EvalMode { Graph, Class, BaselineClasses };

inline EvalMode eval_mode_from_string(std::string_view s) {
    if (s == "graph") return EvalMode::Graph;
    if (s == "class") return EvalMode::Class;
    if (s == "baseline-classes") return EvalMode::BaselineClasses;
    throw ConfigError("unknown evaluation mode '" + std::string(s) + "'");
}

/// Stage driver. All inter-stage state passes through files under the output
/// directory; a stage is skipped when its input digest matches the stamp.
class Pipeline {
  public:
    explicit Pipeline(PipelineConfig config) : config_(std::move(config)) {}

    [[nodiscard]] const PipelineConfig& config() const { return config_; }

    std::filesystem::path source_vocab_path() const { return config_.output_dir / "vocab" / "source.jsonl"; }
    std::filesystem::path target_vocab_path() const { return config_.output_dir / "vocab" / "target.jsonl"; }
    std::filesystem::path counts_path() const { return config_.output_dir / "vocab" / "counts.json"; }
    std::filesystem::path candidates_path() const { return config_.output_dir / "candidates" / "candidates.jsonl"; }
    std::filesystem::path examples_index_path() const { return config_.output_dir / "examples-index.jsonl"; }
    std::filesystem::path mappings_dir() const { return config_.output_dir / "mappings"; }
    std::filesystem::path compose_log_path() const { return config_.output_dir / "mappings" / "log.jsonl"; }
    std::filesystem::path audit_path() const { return config_.output_dir / "audit.jsonl"; }
    std::filesystem::path report_path() const { return config_.output_dir / "reports" / "report.tsv"; }
    std::filesystem::path summary_path() const { return config_.output_dir / "reports" / "summary.json"; }
    std::filesystem::path rank_path() const { return config_.output_dir / "reports" / "rank.tsv"; }

    /// Stage 1: extract both vocabularies and the per-ontology class counts.
    void run_vocab(bool* skipped = nullptr) {
        std::string digest = vocab_digest();
        if (stage_fresh("vocab", digest, {source_vocab_path(), target_vocab_path(), counts_path()})) {
            if (skipped != nullptr) *skipped = true;
            return;
        }
        if (skipped != nullptr) *skipped = false;
        ensure_inputs();

        auto source_vocab = build_vocabulary(std::span(&inputs_->source, 1), VocabularyKind::Source);
        auto target_vocab = build_vocabulary(inputs_->targets, VocabularyKind::Target);
        write_file(source_vocab_path(), dump_vocabulary(source_vocab));
        write_file(target_vocab_path(), dump_vocabulary(target_vocab));

        nlohmann::json counts = {{"source", {{inputs_->source.namespace_tag,
                                              inputs_->source.total_class_count()}}},
                                 {"targets", target_vocab.class_counts()},
                                 {"total_target_classes", target_vocab.total_class_count()}};
        write_file(counts_path(), counts.dump(2) + "\n");
        write_stamp("vocab", digest);
    }

    /// Stage 2: candidate class sets for every task source (or an explicit
    /// list), via both strategies plus aggregation.
    void run_select(std::vector<Iri> explicit_sources = {}, bool* skipped = nullptr) {
        require_file(source_vocab_path(), "run the vocab stage first");
        require_file(target_vocab_path(), "run the vocab stage first");

        std::vector<Iri> sources =
            explicit_sources.empty() ? task_sources() : std::move(explicit_sources);
        std::string digest = select_digest(sources);
        if (stage_fresh("select", digest, {candidates_path()})) {
            if (skipped != nullptr) *skipped = true;
            return;
        }
        if (skipped != nullptr) *skipped = false;

        auto source_vocab = load_vocabulary(slurp_file(source_vocab_path()));
        auto target_vocab = load_vocabulary(slurp_file(target_vocab_path()));
        auto provider = make_provider();

        // Warm the embedding cache single-threaded so workers only read.
        if (provider != nullptr) {
            for (const auto& name : target_vocab.names()) provider->embed(name.text);
        }

        std::vector<std::vector<CandidateSet>> per_source(sources.size());
        parallel_for(sources.size(), config_.workers, [&](size_t i) {
            std::vector<CandidateSet> pooled;
            for (const WeightedName* name : source_vocab.names_of(sources[i])) {
                auto lexical = lexical_select(*name, target_vocab, config_.selection);
                for (auto& set : lexical) pooled.push_back(std::move(set));
                if (provider != nullptr) {
                    auto embedded =
                        embedding_select(*name, target_vocab, *provider, config_.selection);
                    if (embedded.has_value()) pooled.push_back(std::move(*embedded));
                }
            }
            per_source[i] = aggregate(std::move(pooled), config_.selection);
        });

        std::string out;
        for (size_t i = 0; i < sources.size(); ++i) {
            if (per_source[i].empty()) {
                nlohmann::json row = {{"source_iri", sources[i].value()},
                                      {"source_name", ""},
                                      {"classes", nlohmann::json::array()},
                                      {"score", 0.0},
                                      {"origin", "lexical"},
                                      {"no_candidates", true}};
                out += row.dump();
                out += '\n';
                continue;
            }
            for (const auto& set : per_source[i]) {
                out += to_json(sources[i], set).dump();
                out += '\n';
            }
        }
        write_file(candidates_path(), out);
        write_stamp("select", digest);
    }

    /// Ranks sources by their best embedding-origin confidence, descending;
    /// sources tied with the k-th entry are all included.
    std::vector<std::pair<Iri, double>> run_rank(size_t k) {
        require_file(candidates_path(), "run the select stage first");
        std::map<Iri, double> best;
        for (const auto& [source, sets] : load_candidates()) {
            for (const auto& set : sets) {
                if (set.origin != CandidateOrigin::Embedding) continue;
                auto it = best.find(source);
                if (it == best.end() || set.score > it->second) best[source] = set.score;
            }
        }
        std::vector<std::pair<Iri, double>> ranked(best.begin(), best.end());
        std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            return a.second > b.second;
        });
        if (k == 0) {
            ranked.clear();
        } else if (k < ranked.size()) {
            size_t cut = k;
            while (cut < ranked.size() && ranked[cut].second == ranked[k - 1].second) ++cut;
            ranked.resize(cut);
        }
        std::string out = "source_iri\tscore\n";
        for (const auto& [iri, score] : ranked) {
            out += iri.value() + '\t' + std::to_string(score) + '\n';
        }
        write_file(rank_path(), out);
        return ranked;
    }

    /// Stage 3: prompt the model (or the offline mock) per source and write
    /// one mapping file per parsed answer.
    void run_compose(PromptVariant variant, bool mock, bool* skipped = nullptr) {
        require_file(candidates_path(), "run the select stage first");
        std::string digest = compose_digest(variant, mock);
        if (stage_fresh("compose", digest, {compose_log_path()})) {
            if (skipped != nullptr) *skipped = true;
            return;
        }
        if (skipped != nullptr) *skipped = false;
        ensure_inputs();

        auto candidates = load_candidates();
        std::vector<Iri> sources = task_sources();
        bool needs_classes =
            variant == PromptVariant::Full || variant == PromptVariant::NoExamples;

        MockChatModel mock_backend;
        std::optional<ChatClient> client;
        if (!mock) client.emplace(config_.model, default_http_post());
        CompletionBackend& backend = mock ? static_cast<CompletionBackend&>(mock_backend)
                                          : static_cast<CompletionBackend&>(*client);

        std::set<Iri> known = known_iris();

        struct Outcome {
            nlohmann::json log;
            std::optional<nlohmann::json> audit;
            std::optional<std::pair<std::filesystem::path, std::string>> file;
        };
        std::vector<Outcome> outcomes(sources.size());

        auto generate_all = [&] { parallel_for(sources.size(), config_.workers, [&](size_t i) {
            const Iri& source = sources[i];
            Outcome& outcome = outcomes[i];

            auto candidate_it = candidates.find(source);
            std::vector<CandidateSet> sets =
                candidate_it == candidates.end() ? std::vector<CandidateSet>{}
                                                 : candidate_it->second;
            if (sets.empty() && needs_classes) {
                outcome.log = {{"source_iri", source.value()},
                               {"valid", false},
                               {"error", "no candidate classes selected"}};
                return;
            }

            std::vector<SourceRef> selected;
            NamespaceSignature signature;
            if (!sets.empty()) {
                std::vector<Iri> unique;
                for (const auto& iri : sets.front().classes) {
                    if (std::find(unique.begin(), unique.end(), iri) == unique.end()) {
                        unique.push_back(iri);
                    }
                }
                for (const auto& iri : unique) selected.push_back({iri, label_of(iri)});
                signature = namespace_signature(sets.front().classes);
            }

            auto examples =
                filter_examples(inputs_->pool, signature, &source, config_.patterns);

            SourceRef subject{source, label_of(source)};
            GenerationResult result;
            try {
                result = generate_mapping(subject, selected, examples, variant, backend, &known);
            } catch (const TransportError& e) {
                outcome.log = {{"source_iri", source.value()},
                               {"valid", false},
                               {"error", std::string("model endpoint failure: ") + e.what()}};
                throw;
            }

            nlohmann::json log = {{"source_iri", source.value()},
                                  {"valid", result.parsed.has_value()},
                                  {"attempts", result.attempts},
                                  {"warnings", result.warnings}};
            if (result.parsed.has_value()) {
                auto file = mappings_dir() / (std::string(source.segment()) + ".owl");
                outcome.file = {file, serialize_mapping(*result.parsed, &inputs_->labels)};
                log["file"] = file.filename().string();
                log["manchester"] = to_manchester(*result.parsed, inputs_->labels);
            }
            outcome.log = std::move(log);
            if (config_.audit_log) {
                nlohmann::json messages = nlohmann::json::array();
                for (const auto& m : result.prompt) {
                    messages.push_back({{"role", std::string(to_string(m.role))},
                                        {"content", m.content}});
                }
                outcome.audit = nlohmann::json{{"source_iri", source.value()},
                                               {"variant", std::string(to_string(variant))},
                                               {"messages", messages},
                                               {"response", result.raw_text}};
            }
        }); };

        auto flush = [&] {
            std::string log_lines, audit_lines;
            for (auto& outcome : outcomes) {
                if (outcome.file.has_value()) {
                    write_file(outcome.file->first, outcome.file->second);
                }
                if (!outcome.log.is_null()) {
                    log_lines += outcome.log.dump();
                    log_lines += '\n';
                }
                if (outcome.audit.has_value()) {
                    audit_lines += outcome.audit->dump();
                    audit_lines += '\n';
                }
            }
            write_file(compose_log_path(), log_lines);
            if (config_.audit_log) write_file(audit_path(), audit_lines);
        };

        // Partial outputs survive an endpoint failure.
        try {
            generate_all();
        } catch (...) {
            flush();
            throw;
        }
        flush();

        // The example-pool index rides along for inspection.
        std::vector<std::string> files(inputs_->pool.size());
        write_file(examples_index_path(), dump_example_index(inputs_->pool, files));
        write_stamp("compose", digest);
    }

    /// Stage 4: score generated mappings (or candidate-set star graphs)
    /// against the reference logical definitions.
    EvaluationReport run_evaluate(EvalMode mode, PromptVariant variant_for_summary,
                                  bool* skipped = nullptr) {
        ensure_inputs();
        std::vector<Iri> sources = task_sources();

        std::vector<ScoredMapping> scored;
        scored.reserve(sources.size());
        std::map<Iri, std::vector<CandidateSet>> candidates;
        if (mode == EvalMode::BaselineClasses) {
            require_file(candidates_path(), "run the select stage first");
            candidates = load_candidates();
        }

        for (const auto& source : sources) {
            const ComplexMapping* reference = reference_for(source);
            if (reference == nullptr) continue;
            if (mode == EvalMode::BaselineClasses) {
                auto it = candidates.find(source);
                if (it == candidates.end() || it->second.empty() ||
                    it->second.front().classes.empty()) {
                    scored.emplace_back(source, std::nullopt, *reference, "no candidates");
                    continue;
                }
                // The star form has no logical structure by construction.
                const auto& classes = it->second.front().classes;
                ComplexMapping star = ComplexMapping::make(
                    source, classes.size() == 1
                                ? ClassExpression::named(classes.front())
                                : ClassExpression::intersection([&] {
                                      std::vector<ClassExpression> members;
                                      for (const auto& c : classes) {
                                          members.push_back(ClassExpression::named(c));
                                      }
                                      return members;
                                  }()));
                scored.emplace_back(source, std::move(star), *reference, "baseline-classes");
                continue;
            }
            auto file = mappings_dir() / (std::string(source.segment()) + ".owl");
            if (!std::filesystem::exists(file)) {
                scored.emplace_back(source, std::nullopt, *reference, "missing mapping file");
                continue;
            }
            try {
                auto mapping = parse_equivalence(slurp_file(file), source);
                scored.emplace_back(source, std::move(mapping), *reference);
            } catch (const Error& e) {
                scored.emplace_back(source, std::nullopt, *reference,
                                    std::string("unparseable: ") + e.what());
            }
        }

        EvaluationReport report = evaluate_rows(scored, mode == EvalMode::BaselineClasses);
        report.finalize(sources.size());

        write_file(report_path(), report_to_tsv(report));
        nlohmann::json summary =
            summary_to_json(report, config_.task_name, std::string(to_string(variant_for_summary)));
        if (mode == EvalMode::Class) {
            summary["P"] = report.class_precision;
            summary["R"] = report.class_recall;
            summary["F1"] = report.class_f1;
        }
        summary["mode"] = mode == EvalMode::Graph          ? "graph"
                          : mode == EvalMode::Class        ? "class"
                                                           : "baseline-classes";
        write_file(summary_path(), summary.dump(2) + "\n");
        if (skipped != nullptr) *skipped = false;
        return report;
    }

    /// vocab -> select -> compose -> evaluate; returns the summary record.
    nlohmann::json run_pipeline(PromptVariant variant, bool mock) {
        run_vocab();
        run_select();
        run_compose(variant, mock);
        run_evaluate(EvalMode::Graph, variant);
        return nlohmann::json::parse(slurp_file(summary_path()));
    }

    /// Task sources: reference mappings of the pool, sampled when configured.
    std::vector<Iri> task_sources() {
        ensure_inputs();
        std::vector<Iri> sources;
        for (const auto& example : inputs_->pool) sources.push_back(example.mapping.source);
        return sample_sources(std::move(sources), config_.sample, config_.seed);
    }

    const std::map<Iri, std::string>& labels() {
        ensure_inputs();
        return inputs_->labels;
    }

    std::map<Iri, std::vector<CandidateSet>> load_candidates() {
        std::map<Iri, std::vector<CandidateSet>> out;
        std::string text = slurp_file(candidates_path());
        size_t pos = 0;
        while (pos < text.size()) {
            size_t end = text.find('\n', pos);
            if (end == std::string::npos) end = text.size();
            auto line = text.substr(pos, end - pos);
            pos = end + 1;
            if (line.empty()) continue;
            nlohmann::json rec = nlohmann::json::parse(line);
            Iri source;
            CandidateSet set = candidate_from_json(rec, &source);
            if (rec.contains("no_candidates") && rec.at("no_candidates").get<bool>()) {
                out.emplace(source, std::vector<CandidateSet>{});
                continue;
            }
            out[source].push_back(std::move(set));
        }
        return out;
    }

  private:
    struct Inputs {
        Ontology source;
        std::vector<Ontology> targets;
        std::map<Iri, std::string> labels;
        std::vector<MappingExample> pool;
        Hierarchy hierarchy;
    };

    void ensure_inputs() {
        if (inputs_.has_value()) return;
        Inputs inputs;
        auto options = config_.owl_options();
        try {
            inputs.source = parse_ontology(slurp_file(config_.source_ontology), options);
        } catch (const ParseError& e) {
            throw ParseError(config_.source_ontology.string() + ": " + e.what());
        }
        for (const auto& path : config_.target_ontologies) {
            try {
                inputs.targets.push_back(parse_ontology(slurp_file(path), options));
            } catch (const ParseError& e) {
                throw ParseError(path.string() + ": " + e.what());
            }
        }

        for (const auto& [iri, cls] : inputs.source.classes) {
            inputs.labels[iri] = cls.main_label();
        }
        for (const auto& onto : inputs.targets) {
            for (const auto& [iri, cls] : onto.classes) inputs.labels[iri] = cls.main_label();
        }

        inputs.hierarchy.add_ontology(inputs.source, /*counts_toward_total=*/false);
        for (const auto& onto : inputs.targets) {
            inputs.hierarchy.add_ontology(onto, /*counts_toward_total=*/true);
        }

        if (config_.example_pool == "source") {
            inputs.pool = harvest_examples(inputs.source, &inputs.labels);
        } else {
            std::vector<std::filesystem::path> files;
            for (const auto& entry :
                 std::filesystem::directory_iterator(config_.example_pool)) {
                if (entry.is_regular_file()) files.push_back(entry.path());
            }
            std::sort(files.begin(), files.end());
            for (const auto& file : files) {
                std::string text = slurp_file(file);
                auto onto = parse_ontology(text, options);
                for (const auto& [iri, expr] : onto.logical_definitions) {
                    MappingExample example{ComplexMapping::make(iri, expr), text, {}};
                    example.signature =
                        namespace_signature(example.mapping.expression.named_class_iris());
                    inputs.pool.push_back(std::move(example));
                }
            }
        }
        inputs_ = std::move(inputs);
    }

    std::string label_of(const Iri& iri) {
        auto it = inputs_->labels.find(iri);
        if (it != inputs_->labels.end()) return it->second;
        return std::string(iri.segment());
    }

    const ComplexMapping* reference_for(const Iri& source) {
        for (const auto& example : inputs_->pool) {
            if (example.mapping.source == source) return &example.mapping;
        }
        return nullptr;
    }

    std::set<Iri> known_iris() {
        std::set<Iri> known;
        for (const auto& [iri, label] : inputs_->labels) known.insert(iri);
        return known;
    }

    EvaluationReport evaluate_rows(std::span<const ScoredMapping> scored, bool as_star) {
        EvaluationReport report;
        for (const auto& item : scored) {
            EvaluationRow row;
            row.source_iri = item.source.value();
            row.notes = item.note;
            if (item.generated.has_value()) {
                row.valid = true;
                MappingGraph candidate =
                    as_star ? star_graph(item.source,
                                         item.generated->expression.named_class_iris())
                            : to_graph(*item.generated);
                MappingGraph reference = to_graph(item.reference);
                MappingScore score = mapping_score(candidate, reference, inputs_->hierarchy,
                                                   config_.costs, config_.ged_options);
                row.score = score.score;
                if (!score.exact) {
                    row.notes += row.notes.empty() ? "approximate ged" : "; approximate ged";
                }
                auto predicted = item.generated->expression.named_class_iris();
                auto expected = item.reference.expression.named_class_iris();
                auto cls = class_set_scores(predicted, expected, inputs_->hierarchy);
                row.class_precision = cls.precision;
                row.class_recall = cls.recall;
            }
            report.rows.push_back(std::move(row));
        }
        return report;
    }

    std::shared_ptr<EmbeddingProvider> make_provider() {
        std::shared_ptr<EmbeddingProvider> inner;
        if (config_.embedding_provider == "hash") {
            inner = std::make_shared<HashEmbeddingProvider>(config_.embedding_dimension,
                                                            config_.embedding_seed);
        } else if (config_.embedding_provider == "file") {
            inner = std::make_shared<FileVectorStore>(slurp_file(config_.embedding_path));
        } else if (config_.embedding_provider == "http") {
            inner = std::make_shared<RemoteEmbeddingProvider>(
                config_.embedding_endpoint, config_.embedding_model,
                credential_from_env(config_.embedding_api_key_env), default_http_post());
        } else if (config_.embedding_provider == "none") {
            return nullptr;
        } else {
            throw ConfigError("unknown embedding provider '" + config_.embedding_provider + "'");
        }
        return std::make_shared<CachingProvider>(std::move(inner));
    }

    // Stage stamps: digest of the stage inputs, kept beside the outputs.
    std::filesystem::path stamp_path(const std::string& stage) const {
        return config_.output_dir / ".stamps" / (stage + ".json");
    }

    bool stage_fresh(const std::string& stage, const std::string& digest,
                     const std::vector<std::filesystem::path>& outputs) const {
        for (const auto& output : outputs) {
            if (!std::filesystem::exists(output)) return false;
        }
        auto stamp = stamp_path(stage);
        if (!std::filesystem::exists(stamp)) return false;
        try {
            nlohmann::json saved = nlohmann::json::parse(slurp_file(stamp));
            return saved.at("digest").get<std::string>() == digest;
        } catch (const std::exception&) {
            return false;
        }
    }

    void write_stamp(const std::string& stage, const std::string& digest) const {
        write_file(stamp_path(stage), nlohmann::json{{"digest", digest}}.dump() + "\n");
    }

    static std::string hex(uint64_t value) {
        char buffer[17];
        std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(value));
        return buffer;
    }

    std::string vocab_digest() const {
        uint64_t h = fnv1a64(slurp_file(config_.source_ontology));
        for (const auto& path : config_.target_ontologies) h = fnv1a64(slurp_file(path), h);
        for (const auto& [property, prov] : config_.owl_options().synonym_properties) {
            h = fnv1a64(property, h);
            h = fnv1a64(to_string(prov), h);
        }
        return hex(h);
    }

    std::string select_digest(std::span<const Iri> sources) const {
        uint64_t h = fnv1a64(slurp_file(source_vocab_path()));
        h = fnv1a64(slurp_file(target_vocab_path()), h);
        nlohmann::json cfg = {{"alpha", config_.selection.alpha},
                              {"max_combo_size", config_.selection.max_combo_size},
                              {"max_results", config_.selection.max_results_per_source},
                              {"max_accepted", config_.selection.max_accepted_targets},
                              {"provider", config_.embedding_provider},
                              {"dimension", config_.embedding_dimension},
                              {"seed", config_.embedding_seed}};
        h = fnv1a64(cfg.dump(), h);
        if (config_.embedding_provider == "file") {
            h = fnv1a64(slurp_file(config_.embedding_path), h);
        }
        for (const auto& source : sources) h = fnv1a64(source.value(), h);
        return hex(h);
    }

    std::string compose_digest(PromptVariant variant, bool mock) const {
        uint64_t h = fnv1a64(slurp_file(candidates_path()));
        nlohmann::json cfg = {{"variant", std::string(to_string(variant))},
                              {"mock", mock},
                              {"model", config_.model.model_name},
                              {"seed", config_.model.seed},
                              {"temperature", config_.model.temperature},
                              {"endpoint", config_.model.endpoint},
                              {"max_examples", config_.patterns.max_examples}};
        h = fnv1a64(cfg.dump(), h);
        h = fnv1a64(slurp_file(config_.source_ontology), h);
        return hex(h);
    }

    PipelineConfig config_;
    std::optional<Inputs> inputs_;
};

} // namespace cmom
