#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>

#include "cmom/compose.hpp"
#include "cmom/http_client.hpp"
#include "support/fixtures.hpp"

using namespace cmom;
using testsupport::obo;

namespace {

SourceRef aplasia_source() { return {obo("HP_0010477"), "aplasia of the bladder"}; }

std::vector<SourceRef> aplasia_selected() {
    return {{obo("UBERON_0001255"), "urinary bladder"}, {obo("PATO_0001483"), "aplastic"}};
}

std::vector<MappingExample> cortisol_pool() {
    auto labels = testsupport::cortisol_labels();
    return {MappingExample::from_mapping(testsupport::cortisol_mapping(), &labels)};
}

const std::string& user_of(const BuiltPrompt& prompt) {
    REQUIRE(prompt.messages.size() == 2);
    REQUIRE(prompt.messages[0].role == PromptMessage::Role::System);
    REQUIRE(prompt.messages[1].role == PromptMessage::Role::User);
    return prompt.messages[1].content;
}

class ScriptedBackend : public CompletionBackend {
  public:
    explicit ScriptedBackend(std::vector<std::string> answers) : answers_(std::move(answers)) {}
    std::string complete(const std::vector<PromptMessage>& messages) override {
        last_messages = messages;
        auto answer = answers_[std::min(calls_, answers_.size() - 1)];
        ++calls_;
        return answer;
    }
    [[nodiscard]] size_t calls() const { return calls_; }
    std::vector<PromptMessage> last_messages;

  private:
    std::vector<std::string> answers_;
    size_t calls_ = 0;
};

} // namespace

TEST_CASE("system message is fixed and first") {
    auto prompt = build_prompt(aplasia_source(), {}, {}, PromptVariant::LmBaseline);
    REQUIRE(prompt.messages.size() == 2);
    CHECK(prompt.messages[0].content ==
          "You will receive a request to construct a complex mapping in OWL format. You have to "
          "answer with an ontology in OWL format that can be read by rdflib, no explanations. "
          "Make sure to use an equivalentClass statement.");
}

TEST_CASE("lm-baseline prompts carry only the request and the property rule") {
    auto prompt = build_prompt(aplasia_source(), {}, {}, PromptVariant::LmBaseline);
    CHECK(user_of(prompt) ==
          "Create a complex mapping in OWL format for the class "
          "http://purl.obolibrary.org/obo/HP_0010477 (aplasia of the bladder).\n"
          "You are only allowed to use properties from the Relation Ontology (RO) and the Basic "
          "Formal Ontology (BFO).");
}

TEST_CASE("full prompts assemble all four excerpts in order") {
    auto selected = aplasia_selected();
    auto pool = cortisol_pool();
    auto prompt = build_prompt(aplasia_source(), selected, pool, PromptVariant::Full);
    const auto& user = user_of(prompt);

    auto initial = user.find("Create a complex mapping in OWL format for the class "
                             "http://purl.obolibrary.org/obo/HP_0010477 (aplasia of the bladder) "
                             "according to the examples provided.");
    auto classes = user.find("You should use the following classes: "
                             "http://purl.obolibrary.org/obo/UBERON_0001255 (urinary bladder), "
                             "http://purl.obolibrary.org/obo/PATO_0001483 (aplastic) and any "
                             "others you find necessary to match the appropriate pattern in the "
                             "examples.");
    auto examples =
        user.find("This is a list of possible equivalentClass examples for complex mappings:");
    auto owl = user.find("<owl:Class rdf:about=\"http://purl.obolibrary.org/obo/HP_0008163\">");
    auto property = user.find("You are only allowed to use properties from the Relation Ontology "
                              "(RO) and the Basic Formal Ontology (BFO).");

    REQUIRE(initial != std::string::npos);
    REQUIRE(classes != std::string::npos);
    REQUIRE(examples != std::string::npos);
    REQUIRE(owl != std::string::npos);
    REQUIRE(property != std::string::npos);
    CHECK(initial < classes);
    CHECK(classes < examples);
    CHECK(examples < owl);
    CHECK(owl < property);
    CHECK(prompt.warnings.empty());
}

TEST_CASE("no-examples prompts use the plain request wording") {
    auto selected = aplasia_selected();
    auto prompt = build_prompt(aplasia_source(), selected, {}, PromptVariant::NoExamples);
    const auto& user = user_of(prompt);
    CHECK(user.find("according to the examples provided") == std::string::npos);
    CHECK(user.find("You should use the following classes:") != std::string::npos);
    CHECK(user.find("This is a list of possible equivalentClass examples") == std::string::npos);
}

TEST_CASE("a variant wanting examples falls back when the pool is empty") {
    auto selected = aplasia_selected();
    auto prompt = build_prompt(aplasia_source(), selected, {}, PromptVariant::Full);
    CHECK(user_of(prompt).find("according to the examples provided") == std::string::npos);
    CHECK(user_of(prompt).find("You should use the following classes:") != std::string::npos);
    REQUIRE(prompt.warnings.size() == 1);

    // no-classes with nothing to show degenerates to the baseline form.
    auto bare = build_prompt(aplasia_source(), selected, {}, PromptVariant::NoClasses);
    auto baseline = build_prompt(aplasia_source(), selected, {}, PromptVariant::LmBaseline);
    CHECK(bare.messages == baseline.messages);
    REQUIRE(bare.warnings.size() == 1);
}

TEST_CASE("prompts are deterministic and nested across variants") {
    auto selected = aplasia_selected();
    auto pool = cortisol_pool();

    auto once = build_prompt(aplasia_source(), selected, pool, PromptVariant::Full);
    auto twice = build_prompt(aplasia_source(), selected, pool, PromptVariant::Full);
    CHECK(once.messages == twice.messages);

    auto baseline = build_prompt(aplasia_source(), selected, pool, PromptVariant::LmBaseline);
    auto no_examples = build_prompt(aplasia_source(), selected, pool, PromptVariant::NoExamples);
    auto full = build_prompt(aplasia_source(), selected, pool, PromptVariant::Full);

    // Shared excerpts appear verbatim in the larger prompts.
    std::string shared_initial = "Create a complex mapping in OWL format for the class "
                                 "http://purl.obolibrary.org/obo/HP_0010477 (aplasia of the "
                                 "bladder)";
    std::string classes_excerpt = "You should use the following classes: ";
    for (const auto* prompt : {&baseline, &no_examples, &full}) {
        CHECK(user_of(*prompt).find(shared_initial) != std::string::npos);
        CHECK(user_of(*prompt).find(std::string(kPropertyRequirement)) != std::string::npos);
    }
    CHECK(user_of(baseline).find(classes_excerpt) == std::string::npos);
    CHECK(user_of(no_examples).find(classes_excerpt) != std::string::npos);
    CHECK(user_of(full).find(classes_excerpt) != std::string::npos);
}

TEST_CASE("chat client returns the first choice content") {
    HttpPostFn fake = [](const std::string& url, const HttpHeaders&, const std::string& body) {
        CHECK(url == "http://model.test/v1/chat/completions");
        nlohmann::json request = nlohmann::json::parse(body);
        CHECK(request.at("model") == "gpt-4o-mini");
        CHECK(request.at("seed") == 42);
        CHECK(request.at("temperature") == 0.0);
        CHECK(request.at("messages").size() == 2);
        nlohmann::json response = {
            {"choices", {{{"message", {{"role", "assistant"}, {"content", "<canned/>"}}}}}}};
        return HttpResult{200, response.dump()};
    };
    ModelConfig config;
    config.endpoint = "http://model.test/v1";
    config.backoff_base_ms = 0;
    ChatClient client(config, fake);
    auto prompt = build_prompt(aplasia_source(), {}, {}, PromptVariant::LmBaseline);
    CHECK(client.complete(prompt.messages) == "<canned/>");
    CHECK(client.last_attempts() == 1);
}

TEST_CASE("a 429 is retried and the attempt count recorded") {
    std::atomic<int> calls{0};
    HttpPostFn fake = [&](const std::string&, const HttpHeaders&, const std::string&) {
        if (calls.fetch_add(1) == 0) return HttpResult{429, "slow down"};
        nlohmann::json response = {
            {"choices", {{{"message", {{"content", "ok"}}}}}}};
        return HttpResult{200, response.dump()};
    };
    ModelConfig config;
    config.endpoint = "http://model.test/v1";
    config.backoff_base_ms = 0;
    ChatClient client(config, fake);
    CHECK(client.complete({{PromptMessage::Role::User, "hi"}}) == "ok");
    CHECK(client.last_attempts() == 2);
    CHECK(calls.load() == 2);
}

TEST_CASE("persistent server errors exhaust max_attempts") {
    std::atomic<int> calls{0};
    HttpPostFn fake = [&](const std::string&, const HttpHeaders&, const std::string&) {
        calls.fetch_add(1);
        return HttpResult{500, "boom"};
    };
    ModelConfig config;
    config.endpoint = "http://model.test/v1";
    config.max_attempts = 3;
    config.backoff_base_ms = 0;
    ChatClient client(config, fake);
    CHECK_THROWS_AS(client.complete({{PromptMessage::Role::User, "hi"}}), TransportError);
    CHECK(calls.load() == 3);
}

TEST_CASE("client errors other than 429 fail immediately") {
    std::atomic<int> calls{0};
    HttpPostFn fake = [&](const std::string&, const HttpHeaders&, const std::string&) {
        calls.fetch_add(1);
        return HttpResult{404, "nope"};
    };
    ModelConfig config;
    config.endpoint = "http://model.test/v1";
    config.backoff_base_ms = 0;
    ChatClient client(config, fake);
    CHECK_THROWS_AS(client.complete({{PromptMessage::Role::User, "hi"}}), TransportError);
    CHECK(calls.load() == 1);
}

TEST_CASE("chat client speaks to a real local endpoint") {
    httplib::Server server;
    server.Post("/v1/chat/completions", [](const httplib::Request& req, httplib::Response& res) {
        nlohmann::json request = nlohmann::json::parse(req.body);
        std::string content =
            "echo: " + request.at("messages").back().at("content").get<std::string>();
        nlohmann::json response = {{"choices", {{{"message", {{"content", content}}}}}}};
        res.set_content(response.dump(), "application/json");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    ModelConfig config;
    config.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1";
    ChatClient client(config, default_http_post());
    CHECK(client.complete({{PromptMessage::Role::User, "ping"}}) == "echo: ping");

    server.stop();
    thread.join();
}

TEST_CASE("extraction round-trips serialized mappings") {
    auto mapping = testsupport::cortisol_mapping();
    auto raw = serialize_mapping(mapping);
    CHECK(extract_mapping(raw, mapping.source) == mapping);

    auto fenced = "Sure, here you go:\n```xml\n" + raw + "```\nAnything else?";
    CHECK(extract_mapping(fenced, mapping.source) == mapping);
}

TEST_CASE("extraction failures carry their cause") {
    CHECK_THROWS_AS(extract_mapping("I cannot help", obo("HP_0010477")), InvalidOutputError);

    CHECK_THROWS_AS(
        extract_mapping("<owl:Class rdf:about=\"http://purl.obolibrary.org/obo/HP_0010477\"/>",
                        obo("HP_0010477")),
        MissingAxiomError);

    auto other = serialize_mapping(testsupport::cortisol_mapping());
    CHECK_THROWS_AS(extract_mapping(other, obo("HP_0010477")), WrongSubjectError);
}

TEST_CASE("IRIs outside the vocabulary surface as warnings") {
    auto mapping = testsupport::cortisol_mapping();
    std::set<Iri> known = {obo("PATO_0001997"), obo("CHEBI_17650"), obo("UBERON_0000178")};
    std::vector<std::string> warnings;
    auto parsed = extract_mapping(serialize_mapping(mapping), mapping.source, &known, &warnings);
    CHECK(parsed == mapping);
    REQUIRE(warnings.size() == 1); // PATO_0000460 is not in the vocabulary
    CHECK(warnings[0].find("PATO_0000460") != std::string::npos);
}

TEST_CASE("the mock substitutes selected classes into the first example") {
    auto selected = aplasia_selected();
    auto pool = cortisol_pool();
    MockChatModel mock;
    auto result = generate_mapping(aplasia_source(), selected, pool, PromptVariant::Full, mock);
    REQUIRE(result.parsed.has_value());
    CHECK(result.attempts == 1);
    CHECK(result.parsed->source == obo("HP_0010477"));

    auto classes = result.parsed->expression.named_class_iris();
    // Three substitutable slots, two selected classes: the last recycles.
    REQUIRE(classes.size() == 4);
    CHECK(classes[0] == obo("UBERON_0001255"));
    CHECK(classes[1] == obo("PATO_0001483"));
    CHECK(classes[2] == obo("PATO_0001483"));
    CHECK(classes[3] == obo("PATO_0000460")); // modifier kept
    // Properties are untouched.
    auto props = result.parsed->expression.property_iris();
    CHECK(props == testsupport::cortisol_mapping().expression.property_iris());
}

TEST_CASE("garbage answers consume the corrective re-ask and stay invalid") {
    ScriptedBackend backend({"nonsense", "more nonsense"});
    auto result =
        generate_mapping(aplasia_source(), {}, {}, PromptVariant::LmBaseline, backend);
    CHECK_FALSE(result.parsed.has_value());
    CHECK(result.attempts == 2);
    CHECK(backend.calls() == 2);
    // The corrective re-ask extends the conversation.
    CHECK(backend.last_messages.size() == 3);
    CHECK(backend.last_messages.back().content.find(
              "Answer with an ontology in OWL format only") != std::string::npos);
}

TEST_CASE("the mock answers promptless variants with its skeleton") {
    MockChatModel mock;
    auto result = generate_mapping(aplasia_source(), {}, {}, PromptVariant::LmBaseline, mock);
    REQUIRE(result.parsed.has_value());
    CHECK(result.parsed->source == obo("HP_0010477"));
    CHECK(result.parsed->expression.kind() == ClassExpression::Kind::SomeValuesFrom);
}

TEST_CASE("a parsed result serializes back to parseable OWL") {
    auto selected = aplasia_selected();
    auto pool = cortisol_pool();
    MockChatModel mock;
    for (auto variant : {PromptVariant::Full, PromptVariant::NoExamples, PromptVariant::NoClasses,
                         PromptVariant::LmBaseline}) {
        auto result = generate_mapping(aplasia_source(), selected, pool, variant, mock);
        REQUIRE(result.parsed.has_value());
        auto text = serialize_mapping(*result.parsed);
        CHECK(parse_equivalence(text, result.parsed->source) == *result.parsed);
    }
}
