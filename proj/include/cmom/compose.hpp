#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "cmom/http.hpp"
#include "cmom/patterns.hpp"
#include "cmom/rdfxml.hpp"

namespace cmom {

struct PromptMessage {
    enum class Role { System, User };
    Role role;
    std::string content;

    bool operator==(const PromptMessage&) const = default;
};

inline std::string_view to_string(PromptMessage::Role role) {
    return role == PromptMessage::Role::System ? "system" : "user";
}

enum class PromptVariant { Full, NoExamples, NoClasses, LmBaseline };

inline std::string_view to_string(PromptVariant variant) {
    switch (variant) {
    case PromptVariant::Full: return "full";
    case PromptVariant::NoExamples: return "no-examples";
    case PromptVariant::NoClasses: return "no-classes";
    case PromptVariant::LmBaseline: return "lm-baseline";
    }
    return "full";
}

inline PromptVariant variant_from_string(std::string_view s) {
    if (s == "full") return PromptVariant::Full;
    if (s == "no-examples") return PromptVariant::NoExamples;
    if (s == "no-classes") return PromptVariant::NoClasses;
    if (s == "lm-baseline") return PromptVariant::LmBaseline;
    throw ConfigError("unknown prompt variant '" + std::string(s) + "'");
}

struct ModelConfig {
    std::string model_name = "gpt-4o-mini";
    long seed = 42;
    double temperature = 0.0;
    std::string endpoint = "https://api.openai.com/v1";
    int max_attempts = 3;
    int max_in_flight = 4;
    std::string api_key_env = "OPENAI_API_KEY";
    int backoff_base_ms = 250;
};

struct SourceRef {
    Iri iri;
    std::string label;
};

inline constexpr std::string_view kSystemMessage =
    "You will receive a request to construct a complex mapping in OWL format. You have to answer "
    "with an ontology in OWL format that can be read by rdflib, no explanations. Make sure to use "
    "an equivalentClass statement.";

inline constexpr std::string_view kPropertyRequirement =
    "You are only allowed to use properties from the Relation Ontology (RO) and the Basic Formal "
    "Ontology (BFO).";

struct BuiltPrompt {
    std::vector<PromptMessage> messages;
    std::vector<std::string> warnings;
};

/// Assembles the system message plus the user excerpts for the variant:
/// initial request, selected classes, examples, property requirement. A
/// variant that wants examples but has none falls back to the no-examples
/// wording, with a warning.
inline BuiltPrompt build_prompt(const SourceRef& source, std::span<const SourceRef> selected,
                                std::span<const MappingExample> examples, PromptVariant variant) {
    BuiltPrompt out;

    bool want_classes = variant == PromptVariant::Full || variant == PromptVariant::NoExamples;
    bool want_examples = variant == PromptVariant::Full || variant == PromptVariant::NoClasses;
    if (want_examples && examples.empty()) {
        out.warnings.push_back("no matching examples for " + source.iri.value() +
                               "; falling back to the no-examples wording");
        want_examples = false;
    }

    std::vector<std::string> excerpts;

    std::string initial = "Create a complex mapping in OWL format for the class " +
                          source.iri.value() + " (" + source.label + ")";
    initial += want_examples ? " according to the examples provided." : ".";
    excerpts.push_back(std::move(initial));

    if (want_classes) {
        std::string list;
        for (size_t i = 0; i < selected.size(); ++i) {
            if (i > 0) list += ", ";
            list += selected[i].iri.value() + " (" + selected[i].label + ")";
        }
        excerpts.push_back("You should use the following classes: " + list +
                           " and any others you find necessary to match the appropriate pattern "
                           "in the examples.");
    }

    if (want_examples) {
        std::string list = "This is a list of possible equivalentClass examples for complex "
                           "mappings:\n";
        for (const auto& example : examples) {
            list += '\n';
            list += example.owl_text;
        }
        excerpts.push_back(std::move(list));
    }

    excerpts.push_back(std::string(kPropertyRequirement));

    std::string user;
    for (size_t i = 0; i < excerpts.size(); ++i) {
        if (i > 0) user += '\n';
        user += excerpts[i];
    }
    out.messages.push_back({PromptMessage::Role::System, std::string(kSystemMessage)});
    out.messages.push_back({PromptMessage::Role::User, std::move(user)});
    return out;
}

/// Anything that can answer a chat prompt: the remote client or the mock.
class CompletionBackend {
  public:
    virtual ~CompletionBackend() = default;
    virtual std::string complete(const std::vector<PromptMessage>& messages) = 0;
    /// Transport attempts consumed by the last call.
    [[nodiscard]] virtual int last_attempts() const { return 1; }
};

/// OpenAI-compatible chat-completions client. Stateless requests carrying
/// {model, messages, seed, temperature}; retries per the shared policy and
/// caps concurrent requests at max_in_flight.
class ChatClient : public CompletionBackend {
  public:
    ChatClient(ModelConfig config, HttpPostFn post)
        : config_(std::move(config)), post_(std::move(post)),
          semaphore_(config_.max_in_flight > 0 ? config_.max_in_flight : 1) {}

    std::string complete(const std::vector<PromptMessage>& messages) override {
        nlohmann::json request = {{"model", config_.model_name},
                                  {"messages", nlohmann::json::array()},
                                  {"seed", config_.seed},
                                  {"temperature", config_.temperature}};
        for (const auto& m : messages) {
            request["messages"].push_back(
                {{"role", std::string(to_string(m.role))}, {"content", m.content}});
        }
        HttpHeaders headers;
        std::string key = credential_from_env(config_.api_key_env);
        if (!key.empty()) headers.emplace_back("Authorization", "Bearer " + key);

        RetryPolicy policy;
        policy.max_attempts = config_.max_attempts;
        policy.backoff_base_ms = config_.backoff_base_ms;

        HttpResult result;
        {
            detail::SemaphoreGuard guard(semaphore_);
            int attempts = 0;
            result = post_with_retry(post_, config_.endpoint + "/chat/completions", headers,
                                     request.dump(), policy, &attempts);
            set_last_attempts(attempts);
        }

        try {
            nlohmann::json body = nlohmann::json::parse(result.body);
            return body.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw TransportError("malformed completion response: " + std::string(e.what()), 0,
                                 false);
        }
    }

    [[nodiscard]] int last_attempts() const override {
        std::lock_guard<std::mutex> lock(attempts_mutex_);
        return last_attempts_;
    }

  private:
    void set_last_attempts(int attempts) {
        std::lock_guard<std::mutex> lock(attempts_mutex_);
        last_attempts_ = attempts;
    }

    ModelConfig config_;
    HttpPostFn post_;
    detail::Semaphore semaphore_;
    mutable std::mutex attempts_mutex_;
    int last_attempts_ = 1;
};

namespace detail {

inline std::string_view trimmed(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

/// Candidate RDF fragments of a raw model answer, most specific first.
inline std::vector<std::string> rdf_candidates(std::string_view raw) {
    std::vector<std::string> candidates;
    auto push = [&](std::string_view piece) {
        auto t = trimmed(piece);
        if (!t.empty()) candidates.emplace_back(t);
    };

    // Fenced code blocks win over everything else.
    size_t fence = raw.find("```");
    while (fence != std::string_view::npos) {
        size_t body_start = raw.find('\n', fence);
        size_t close = raw.find("```", fence + 3);
        if (body_start == std::string_view::npos || close == std::string_view::npos ||
            body_start > close) {
            break;
        }
        auto body = raw.substr(body_start + 1, close - body_start - 1);
        if (body.find('<') != std::string_view::npos) {
            push(body);
            break;
        }
        fence = raw.find("```", close + 3);
    }

    push(raw);

    size_t rdf_open = raw.find("<rdf:RDF");
    size_t rdf_close = raw.rfind("</rdf:RDF>");
    if (rdf_open != std::string_view::npos && rdf_close != std::string_view::npos &&
        rdf_close > rdf_open) {
        push(raw.substr(rdf_open, rdf_close + 10 - rdf_open));
    }

    size_t cls_open = raw.find("<owl:Class");
    size_t cls_close = raw.rfind("</owl:Class>");
    if (cls_open != std::string_view::npos && cls_close != std::string_view::npos &&
        cls_close > cls_open) {
        push(raw.substr(cls_open, cls_close + 12 - cls_open));
    }

    size_t first = raw.find('<');
    size_t last = raw.rfind('>');
    if (first != std::string_view::npos && last != std::string_view::npos && last > first) {
        push(raw.substr(first, last + 1 - first));
    }
    return candidates;
}

} // namespace detail

/// Pulls the equivalentClass statement out of a raw model answer: strips code
/// fences and prose margins, finds the RDF/XML fragment, and parses it.
/// IRIs outside `known_iris` are reported as warnings, not errors.
inline ComplexMapping extract_mapping(const std::string& raw_text, const Iri& source,
                                      const std::set<Iri>* known_iris = nullptr,
                                      std::vector<std::string>* warnings = nullptr) {
    std::optional<xml::Element> root;
    for (const auto& candidate : detail::rdf_candidates(raw_text)) {
        try {
            root = xml::parse(candidate);
            break;
        } catch (const ParseError&) {
            continue;
        }
    }
    if (!root.has_value()) throw InvalidOutputError("no parseable RDF in model output");

    std::vector<const xml::Element*> declarations;
    detail::collect_declarations(*root, declarations);

    const xml::Element* source_axiom = nullptr;
    bool any_axiom = false;
    for (const xml::Element* decl : declarations) {
        const std::string* about = detail::about_attr(*decl);
        if (about == nullptr) continue;
        for (const auto& child : decl->children) {
            if (!child.is(ns::owl, "equivalentClass")) continue;
            any_axiom = true;
            bool matches = false;
            try {
                matches = Iri(*about) == source;
            } catch (const Error&) {
                continue;
            }
            if (matches && source_axiom == nullptr) source_axiom = &child;
        }
    }
    if (!any_axiom) throw MissingAxiomError("model output has no equivalentClass statement");
    if (source_axiom == nullptr) {
        throw WrongSubjectError("equivalentClass statement is not about " + source.value());
    }

    ComplexMapping mapping =
        ComplexMapping::make(source, detail::expression_from_axiom(*source_axiom));

    if (known_iris != nullptr && warnings != nullptr) {
        auto check = [&](const Iri& iri) {
            if (known_iris->count(iri) == 0) {
                warnings->push_back("IRI outside the loaded vocabularies: " + iri.value());
            }
        };
        for (const auto& iri : mapping.expression.named_class_iris()) check(iri);
    }
    return mapping;
}

struct GenerationResult {
    std::string raw_text;
    std::optional<ComplexMapping> parsed;
    int attempts = 0;
    std::vector<std::string> warnings;
    std::vector<PromptMessage> prompt; // messages of the final request, for auditing
};

/// build_prompt -> complete -> extract_mapping, with one corrective re-ask
/// when extraction fails. A result without `parsed` counts as an invalid
/// mapping downstream.
inline GenerationResult generate_mapping(const SourceRef& source,
                                         std::span<const SourceRef> selected,
                                         std::span<const MappingExample> examples,
                                         PromptVariant variant, CompletionBackend& backend,
                                         const std::set<Iri>* known_iris = nullptr) {
    GenerationResult result;
    BuiltPrompt prompt = build_prompt(source, selected, examples, variant);
    result.warnings = prompt.warnings;

    std::vector<PromptMessage> messages = prompt.messages;
    for (int round = 0; round < 2; ++round) {
        result.raw_text = backend.complete(messages);
        ++result.attempts;
        result.prompt = messages;
        try {
            result.parsed =
                extract_mapping(result.raw_text, source.iri, known_iris, &result.warnings);
            return result;
        } catch (const Error& e) {
            result.warnings.push_back(std::string("extraction failed: ") + e.what());
            if (round == 0) {
                messages.push_back({PromptMessage::Role::User,
                                    "The previous answer could not be parsed: " +
                                        std::string(e.what()) +
                                        ". Answer with an ontology in OWL format only."});
            }
        }
    }
    return result;
}

/// Offline stand-in for the model. Given a prompt with examples it returns the
/// first example with the subject replaced by the requested class and its
/// class IRIs replaced, in document order, by the selected classes (recycling
/// the last one). Without examples it falls back to an intersection of the
/// selected classes, or to a fixed skeleton when nothing was provided.
class MockChatModel : public CompletionBackend {
  public:
    std::string complete(const std::vector<PromptMessage>& messages) override {
        const std::string* user = nullptr;
        for (const auto& m : messages) {
            if (m.role == PromptMessage::Role::User) {
                user = &m.content;
                break;
            }
        }
        if (user == nullptr) return {};

        std::string source = find_between(*user, "for the class ", " (");
        std::vector<std::string> selected = parse_selected(*user);
        std::string example = first_example(*user);

        if (!example.empty()) return substitute(example, source, selected);
        if (!selected.empty()) return intersection_answer(source, selected);
        return skeleton(source);
    }

  private:
    static std::string find_between(const std::string& text, std::string_view from,
                                    std::string_view to) {
        size_t start = text.find(from);
        if (start == std::string::npos) return {};
        start += from.size();
        size_t end = text.find(to, start);
        if (end == std::string::npos) return {};
        return text.substr(start, end - start);
    }

    static std::vector<std::string> parse_selected(const std::string& user) {
        std::string list = find_between(user, "You should use the following classes: ",
                                        " and any others you find necessary");
        std::vector<std::string> iris;
        size_t pos = 0;
        while (pos < list.size()) {
            size_t comma = list.find(", ", pos);
            std::string entry =
                comma == std::string::npos ? list.substr(pos) : list.substr(pos, comma - pos);
            size_t paren = entry.find(" (");
            if (paren != std::string::npos) entry = entry.substr(0, paren);
            if (!entry.empty()) iris.push_back(entry);
            if (comma == std::string::npos) break;
            pos = comma + 2;
        }
        return iris;
    }

    static std::string first_example(const std::string& user) {
        size_t sentinel = user.find("equivalentClass examples for complex mappings:");
        if (sentinel == std::string::npos) return {};
        size_t open = user.find("<owl:Class", sentinel);
        if (open == std::string::npos) return {};
        // Walk to the close tag balancing nested anonymous owl:Class elements.
        int depth = 0;
        size_t pos = open;
        while (pos < user.size()) {
            size_t next_open = user.find("<owl:Class", pos);
            size_t next_close = user.find("</owl:Class>", pos);
            if (next_close == std::string::npos) return {};
            if (next_open != std::string::npos && next_open < next_close) {
                ++depth;
                pos = next_open + 10;
            } else {
                --depth;
                pos = next_close + 12;
                if (depth == 0) return user.substr(open, pos - open);
            }
        }
        return {};
    }

    static bool keep_iri(const std::string& iri) {
        Iri parsed(iri);
        if (parsed.segment() == kAbnormalModifierSegment) return true;
        std::string tag = namespace_tag(parsed);
        return tag == "RO" || tag == "BFO";
    }

    static std::string substitute(const std::string& example, const std::string& source,
                                  const std::vector<std::string>& selected) {
        std::string out;
        out.reserve(example.size());
        size_t pos = 0;
        size_t next_class = 0;
        bool subject_seen = false;
        for (;;) {
            size_t about = example.find("rdf:about=\"", pos);
            size_t resource = example.find("rdf:resource=\"", pos);
            size_t hit = std::min(about, resource);
            if (hit == std::string::npos) break;
            bool is_about = hit == about;
            size_t open = example.find('"', hit);
            size_t close = example.find('"', open + 1);
            if (close == std::string::npos) break;
            std::string iri = example.substr(open + 1, close - open - 1);

            std::string replacement = iri;
            if (is_about && !subject_seen) {
                subject_seen = true;
                if (!source.empty()) replacement = source;
            } else if (!keep_iri(iri) && !selected.empty()) {
                replacement = selected[std::min(next_class, selected.size() - 1)];
                ++next_class;
            }
            out += example.substr(pos, open + 1 - pos);
            out += replacement;
            pos = close;
        }
        out += example.substr(pos);
        return out;
    }

    static std::string intersection_answer(const std::string& source,
                                           const std::vector<std::string>& selected) {
        std::vector<ClassExpression> members;
        for (const auto& iri : selected) members.push_back(ClassExpression::named(Iri(iri)));
        ClassExpression expr = members.size() == 1
                                   ? std::move(members.front())
                                   : ClassExpression::intersection(std::move(members));
        return serialize_mapping(ComplexMapping::make(Iri(source), std::move(expr)));
    }

    static std::string skeleton(const std::string& source) {
        auto expr = ClassExpression::some_values_from(
            Iri("http://purl.obolibrary.org/obo/BFO_0000051"),
            ClassExpression::named(Iri("http://purl.obolibrary.org/obo/PATO_0000001")));
        return serialize_mapping(ComplexMapping::make(Iri(source), std::move(expr)));
    }
};

} // namespace cmom
