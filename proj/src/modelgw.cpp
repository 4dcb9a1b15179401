#include "biaseval/modelgw.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <optional>
#include <thread>

#include "httplib.h"

#include "biaseval/rng.hpp"

namespace biaseval {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string strip_inline_whitespace(std::string text) {
    for (char& c : text) {
        if (c == '\n' || c == '\r' || c == '\t') {
            c = ' ';
        }
    }
    return text;
}

std::string overall_line(size_t biased, size_t total) {
    return std::to_string(biased) + " of " + std::to_string(total) +
           " sentences show media bias.";
}

// --- mock backends ---------------------------------------------------------

class MockEchoBackend : public ModelBackend {
public:
    std::string name() const override { return "mock-echo"; }

    std::string classify(const std::string&, const EvalArticle& article) override {
        nlohmann::json flagged = nlohmann::json::array();
        for (const AnnotatedSentence& s : article.sentences) {
            if (s.label != Label::Biased) {
                continue;
            }
            flagged.push_back({{"sentence", s.text},
                               {"bias_type", s.bias_type.value_or("Word Choice")},
                               {"bias_strength", s.strength.value_or(0.8)},
                               {"explanation", "Echoed from the gold annotation."}});
        }
        nlohmann::json verdict{{"biased_sentences", std::move(flagged)},
                               {"overall_assessment",
                                overall_line(article.biased_count(), article.sentences.size())}};
        return verdict.dump();
    }

    std::vector<std::string> generate_sentences(const SyntheticSpec&) override {
        throw PipelineError("the echo backend cannot generate sentences");
    }

    std::pair<std::string, double> annotate(const AnnotatedSentence&) override {
        throw PipelineError("the echo backend cannot annotate sentences");
    }
};

// Substring lexicon: deterministic, deliberately crude. The same table
// drives classification, gold annotation and the phrasing of generated
// sentences, so lexicon generation composed with lexicon classification is
// self-consistent in tests.
struct LexiconEntry {
    const char* phrase; // matched on lowercased text
    const char* type;   // canonical type name
    double strength;
};

constexpr LexiconEntry kLexicon[] = {
    {"disastrous", "Word Choice", 0.9},
    {"reckless", "Word Choice", 0.7},
    {"so-called", "Word Choice", 0.55},
    {"shameful", "Word Choice", 0.8},
    {"shocking", "Emotional Sensationalism", 0.85},
    {"fiasco", "Emotional Sensationalism", 0.75},
    {"outrage", "Emotional Sensationalism", 0.7},
    {"everyone knows", "Unsubstantiated Claims", 0.8},
    {"it is obvious that", "Opinionated", 0.6},
    {"clearly", "Opinionated", 0.5},
    {"sources say", "Ambiguous Attribution", 0.5},
    {"some critics say", "Ambiguous Attribution", 0.6},
    {"what about", "Whataboutism", 0.65},
    {"those people", "Discriminatory", 0.85},
    {"as usual", "Generalization", 0.45},
};

class MockLexiconBackend : public ModelBackend {
public:
    std::string name() const override { return "mock-lexicon"; }

    std::string classify(const std::string&, const EvalArticle& article) override {
        nlohmann::json flagged = nlohmann::json::array();
        size_t hits = 0;
        for (const AnnotatedSentence& s : article.sentences) {
            const LexiconEntry* hit = find_hit(s.text);
            if (!hit) {
                continue;
            }
            ++hits;
            flagged.push_back(
                {{"sentence", s.text},
                 {"bias_type", std::string(hit->type) + " Bias"},
                 {"bias_strength", hit->strength},
                 {"explanation", std::string("Contains the charged phrase \"") + hit->phrase +
                                     "\"."}});
        }
        nlohmann::json verdict{{"biased_sentences", std::move(flagged)},
                               {"overall_assessment", overall_line(hits, article.sentences.size())}};
        return verdict.dump();
    }

    std::vector<std::string> generate_sentences(const SyntheticSpec& spec) override {
        std::vector<std::string> out;
        out.reserve(spec.targets.size());
        for (size_t i = 0; i < spec.targets.size(); ++i) {
            const SyntheticSentenceTarget& t = spec.targets[i];
            if (t.label == Label::Biased) {
                out.push_back("Critics call the " + t.bias_type + " framing of " + spec.topic +
                              " downright " + graded_adjective(t.strength) + ", and paragraph " +
                              std::to_string(i + 1) + " shows why.");
            } else {
                out.push_back("Officials " + neutral_verb(i) + " the latest figures on " +
                              spec.topic + " in update " + std::to_string(i + 1) + ".");
            }
        }
        return out;
    }

    std::pair<std::string, double> annotate(const AnnotatedSentence& sentence) override {
        if (const LexiconEntry* hit = find_hit(sentence.text)) {
            return {std::string(hit->type) + " Bias", hit->strength};
        }
        return {"Opinionated Bias", 0.4};
    }

private:
    static const LexiconEntry* find_hit(const std::string& text) {
        const std::string lower = util::to_lower_ascii(text);
        for (const LexiconEntry& entry : kLexicon) {
            if (lower.find(entry.phrase) != std::string::npos) {
                return &entry;
            }
        }
        return nullptr;
    }

    // adjectives are lexicon phrases so the classifier re-finds them
    static std::string graded_adjective(double strength) {
        if (strength < 0.45) {
            return "so-called progress";
        }
        if (strength < 0.75) {
            return "reckless";
        }
        return "disastrous";
    }

    static std::string neutral_verb(size_t i) {
        static const char* verbs[] = {"published", "reviewed", "summarized"};
        return verbs[i % 3];
    }
};

class MockRandomBackend : public ModelBackend {
public:
    MockRandomBackend(const ModelConfig& config, const Taxonomy& taxonomy)
        : taxonomy_(taxonomy), p_(config.flag_probability), seed_(config.seed) {}

    std::string name() const override { return "mock-random"; }

    std::string classify(const std::string&, const EvalArticle& article) override {
        // per-article stream so results do not depend on processing order
        SeededRng rng(util::fnv1a64(article.id, seed_ ^ 0x5eedf00ddeadbeefULL));
        nlohmann::json flagged = nlohmann::json::array();
        size_t hits = 0;
        for (const AnnotatedSentence& s : article.sentences) {
            if (!rng.chance(p_)) {
                continue;
            }
            ++hits;
            const BiasType& type = taxonomy_.types()[rng.below(taxonomy_.size())];
            flagged.push_back({{"sentence", s.text},
                               {"bias_type", type.display_name()},
                               {"bias_strength", rng.real01()},
                               {"explanation", "Flagged by the random baseline."}});
        }
        nlohmann::json verdict{{"biased_sentences", std::move(flagged)},
                               {"overall_assessment", overall_line(hits, article.sentences.size())}};
        return verdict.dump();
    }

    std::vector<std::string> generate_sentences(const SyntheticSpec& spec) override {
        std::vector<std::string> out;
        out.reserve(spec.targets.size());
        for (size_t i = 0; i < spec.targets.size(); ++i) {
            out.push_back("Randomly drafted remark " + std::to_string(i + 1) + " about " +
                          spec.topic + ".");
        }
        return out;
    }

    std::pair<std::string, double> annotate(const AnnotatedSentence& sentence) override {
        SeededRng rng(util::fnv1a64(sentence.origin_id, seed_ ^ 0xa110ca7e5eedULL));
        const BiasType& type = taxonomy_.types()[rng.below(taxonomy_.size())];
        return {type.display_name(), rng.real01()};
    }

private:
    const Taxonomy& taxonomy_;
    double p_;
    uint64_t seed_;
};

// --- remote chat backend ---------------------------------------------------

class RemoteChatBackend : public ModelBackend {
public:
    RemoteChatBackend(const ModelConfig& config, const Taxonomy& taxonomy)
        : config_(config), taxonomy_(taxonomy) {
        if (config_.endpoint.empty()) {
            throw InputError("remote-chat backend needs an endpoint URL");
        }
        const size_t scheme = config_.endpoint.find("://");
        if (scheme == std::string::npos) {
            throw InputError("endpoint URL has no scheme: " + config_.endpoint);
        }
        const size_t slash = config_.endpoint.find('/', scheme + 3);
        if (slash == std::string::npos) {
            base_ = config_.endpoint;
            path_ = "/";
        } else {
            base_ = config_.endpoint.substr(0, slash);
            path_ = config_.endpoint.substr(slash);
        }
    }

    std::string name() const override { return config_.model_name; }

    std::string classify(const std::string& system_prompt, const EvalArticle& article) override {
        return post_chat(system_prompt, article.rendered_text());
    }

    std::vector<std::string> generate_sentences(const SyntheticSpec& spec) override {
        nlohmann::json targets = nlohmann::json::array();
        for (const SyntheticSentenceTarget& t : spec.targets) {
            if (t.label == Label::Biased) {
                targets.push_back({{"label", "biased"},
                                   {"bias_type", t.bias_type},
                                   {"bias_strength", t.strength}});
            } else {
                targets.push_back({{"label", "unbiased"}});
            }
        }
        nlohmann::json request{{"topic", spec.topic}, {"sentences", std::move(targets)}};
        const std::string system =
            "You write synthetic news articles for media-bias research. The "
            "user message lists one target per sentence: unbiased targets "
            "need a neutral factual sentence on the topic, biased targets "
            "need a sentence exhibiting the named bias type at roughly the "
            "named strength (0.0 to 1.0). Answer with a single JSON object "
            "{\"sentences\": [\"...\"]} containing exactly one string per "
            "target, in order, and no other text.";
        const std::string content = post_chat(system, request.dump());
        nlohmann::json doc;
        if (!extract_json_object(content, doc) || !doc.contains("sentences") ||
            !doc["sentences"].is_array()) {
            throw TransportError("generation response is not a {\"sentences\": [...]} object");
        }
        std::vector<std::string> out;
        for (const nlohmann::json& s : doc["sentences"]) {
            if (!s.is_string()) {
                throw TransportError("generation response holds a non-string sentence");
            }
            out.push_back(s.get<std::string>());
        }
        return out;
    }

    std::pair<std::string, double> annotate(const AnnotatedSentence& sentence) override {
        std::string system =
            "You are an expert in media bias. Classify the bias type of the "
            "biased sentence in the user message and rate its bias strength "
            "from 0.0 to 1.0. Answer with a single JSON object "
            "{\"bias_type\": \"...\", \"bias_strength\": 0.0} and no other "
            "text. The bias types:";
        for (const BiasType& type : taxonomy_.types()) {
            system += ' ' + type.display_name() + ';';
        }
        const std::string content = post_chat(system, sentence.text);
        nlohmann::json doc;
        if (!extract_json_object(content, doc) || !doc.contains("bias_type") ||
            !doc["bias_type"].is_string() || !doc.contains("bias_strength") ||
            !doc["bias_strength"].is_number()) {
            throw TransportError("annotation response lacks bias_type/bias_strength");
        }
        return {doc["bias_type"].get<std::string>(), doc["bias_strength"].get<double>()};
    }

private:
    std::string post_chat(const std::string& system_prompt, const std::string& user_message) {
        nlohmann::json body{
            {"model", config_.model_name},
            {"temperature", config_.temperature},
            {"messages",
             {{{"role", "system"}, {"content", system_prompt}},
              {{"role", "user"}, {"content", user_message}}}},
        };
        httplib::Client client(base_);
        const time_t secs = config_.request_timeout_ms / 1000;
        const time_t usecs = (config_.request_timeout_ms % 1000) * 1000;
        client.set_connection_timeout(secs, usecs);
        client.set_read_timeout(secs, usecs);
        client.set_write_timeout(secs, usecs);
        httplib::Headers headers;
        if (!config_.api_key_env.empty()) {
            if (const char* key = std::getenv(config_.api_key_env.c_str())) {
                headers.emplace("Authorization", std::string("Bearer ") + key);
            }
        }
        httplib::Result res = client.Post(path_, headers, body.dump(), "application/json");
        if (!res) {
            throw TransportError("request to " + base_ + path_ +
                                 " failed: " + httplib::to_string(res.error()));
        }
        if (res->status == 401 || res->status == 403) {
            throw PipelineError("endpoint rejected credentials (HTTP " +
                                std::to_string(res->status) + "): " + res->body);
        }
        if (res->status != 200) {
            throw TransportError("endpoint returned HTTP " + std::to_string(res->status) + ": " +
                                 res->body.substr(0, 200));
        }
        nlohmann::json doc = nlohmann::json::parse(res->body, nullptr, false);
        if (doc.is_discarded()) {
            throw TransportError("endpoint returned malformed JSON");
        }
        try {
            return doc.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception&) {
            throw TransportError("endpoint response has no choices[0].message.content");
        }
    }

    ModelConfig config_;
    const Taxonomy& taxonomy_;
    std::string base_;
    std::string path_;
};

} // namespace

// --- plumbing --------------------------------------------------------------

std::string to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::RemoteChat: return "remote-chat";
    case ModelKind::MockEcho: return "mock-echo";
    case ModelKind::MockLexicon: return "mock-lexicon";
    case ModelKind::MockRandom: return "mock-random";
    }
    return "mock-echo";
}

ModelKind parse_model_kind(std::string_view token) {
    std::string t = util::to_lower_ascii(util::trim(token));
    if (t == "remote-chat" || t == "remote") return ModelKind::RemoteChat;
    if (t == "mock-echo" || t == "echo") return ModelKind::MockEcho;
    if (t == "mock-lexicon" || t == "lexicon") return ModelKind::MockLexicon;
    if (t == "mock-random" || t == "random") return ModelKind::MockRandom;
    throw InputError("unknown model kind \"" + std::string(token) + "\"");
}

nlohmann::json call_record_to_json(const CallRecord& record) {
    const char* outcome = "ok";
    if (record.parse_outcome == CallRecord::ParseOutcome::Unparseable) {
        outcome = "unparseable";
    } else if (record.parse_outcome == CallRecord::ParseOutcome::SchemaError) {
        outcome = "schema_error";
    }
    return nlohmann::json{{"article_id", record.article_id},
                          {"request_digest", record.request_digest},
                          {"raw_response", record.raw_response},
                          {"parse_outcome", outcome},
                          {"latency_ms", record.latency_ms},
                          {"attempt_count", record.attempt_count}};
}

size_t SyntheticSpec::biased_count() const {
    return static_cast<size_t>(std::count_if(
        targets.begin(), targets.end(),
        [](const SyntheticSentenceTarget& t) { return t.label == Label::Biased; }));
}

std::vector<SyntheticSpec> schedule_synthetic_batch(size_t n_articles, const Taxonomy& taxonomy,
                                                    uint64_t rng_seed, int min_len, int max_len) {
    if (taxonomy.size() == 0) {
        throw InputError("cannot schedule synthetic articles over an empty taxonomy");
    }
    if (min_len < 2 || max_len < min_len) {
        throw InputError("schedule_synthetic_batch: need 2 <= min_len <= max_len");
    }
    static const char* kTopics[] = {
        "the city budget",       "a disputed zoning plan",   "the regional rail upgrade",
        "the school board vote", "a drought relief program", "the harbor cleanup",
        "a hospital merger",     "the election recount",     "a stadium subsidy",
        "the broadband rollout", "a recycling mandate",      "the census figures",
    };
    constexpr size_t kTopicCount = sizeof(kTopics) / sizeof(kTopics[0]);
    SeededRng rng(rng_seed);
    std::vector<std::string> deck; // dealt from the back, refilled when empty
    std::vector<SyntheticSpec> batch;
    batch.reserve(n_articles);
    for (size_t k = 0; k < n_articles; ++k) {
        SyntheticSpec spec;
        spec.article_id = "synt-a" + util::zero_pad(k, 4);
        spec.topic = kTopics[rng.below(kTopicCount)];
        const int len = rng.int_in(min_len, max_len);
        const double ratio = rng.real_in(0.2, 0.8);
        const long biased =
            std::clamp<long>(std::lround(ratio * len), 1, static_cast<long>(len) - 1);
        std::vector<int> mask(static_cast<size_t>(len), 0);
        std::fill(mask.begin(), mask.begin() + biased, 1);
        rng.shuffle(mask);
        for (int i = 0; i < len; ++i) {
            SyntheticSentenceTarget target;
            if (mask[static_cast<size_t>(i)]) {
                target.label = Label::Biased;
                if (deck.empty()) {
                    for (const BiasType& type : taxonomy.types()) {
                        deck.push_back(type.name);
                    }
                    rng.shuffle(deck);
                }
                target.bias_type = deck.back();
                deck.pop_back();
                target.strength = rng.int_in(1, 10) / 10.0;
            }
            spec.targets.push_back(std::move(target));
        }
        batch.push_back(std::move(spec));
    }
    return batch;
}

std::unique_ptr<ModelBackend> make_backend(const ModelConfig& config, const Taxonomy& taxonomy) {
    switch (config.kind) {
    case ModelKind::RemoteChat:
        return std::make_unique<RemoteChatBackend>(config, taxonomy);
    case ModelKind::MockEcho:
        return std::make_unique<MockEchoBackend>();
    case ModelKind::MockLexicon:
        return std::make_unique<MockLexiconBackend>();
    case ModelKind::MockRandom:
        return std::make_unique<MockRandomBackend>(config, taxonomy);
    }
    throw InputError("unhandled model kind");
}

// --- gateway ---------------------------------------------------------------

ModelGateway::ModelGateway(ModelConfig config, const Taxonomy& taxonomy)
    : ModelGateway(make_backend(config, taxonomy), config, taxonomy) {}

ModelGateway::ModelGateway(std::unique_ptr<ModelBackend> backend, ModelConfig config,
                           const Taxonomy& taxonomy)
    : config_(std::move(config)), taxonomy_(taxonomy), backend_(std::move(backend)),
      backend_name_(backend_->name()) {
    if (config_.temperature < 0) {
        throw InputError("temperature must be >= 0");
    }
    if (config_.parallelism_limit < 1) {
        throw InputError("parallelism_limit must be >= 1");
    }
    if (config_.max_retries < 0) {
        throw InputError("max_retries must be >= 0");
    }
}

namespace {

void backoff_sleep(int base_ms, int attempt) {
    if (base_ms <= 0) {
        return;
    }
    const int factor = 1 << std::min(attempt - 1, 6);
    std::this_thread::sleep_for(std::chrono::milliseconds(base_ms * factor));
}

} // namespace

std::pair<ArticleVerdict, CallRecord> ModelGateway::classify_article(const EvalArticle& article,
                                                                     const PromptConfig& prompt) {
    const std::string system = build_system_prompt(taxonomy_, prompt);
    CallRecord record;
    record.article_id = article.id;
    record.request_digest =
        util::hex64(util::fnv1a64(article.rendered_text(), util::fnv1a64(system)));
    std::string last_error;
    for (int attempt = 1;; ++attempt) {
        record.attempt_count = attempt;
        const auto t0 = Clock::now();
        try {
            record.raw_response = backend_->classify(system, article);
            record.latency_ms = ms_since(t0);
            ArticleVerdict verdict = parse_verdict(record.raw_response, taxonomy_);
            record.parse_outcome = CallRecord::ParseOutcome::Ok;
            return {std::move(verdict), record};
        } catch (const UnparseableVerdict& e) {
            record.latency_ms = ms_since(t0);
            record.parse_outcome = CallRecord::ParseOutcome::Unparseable;
            last_error = e.what();
        } catch (const VerdictSchemaError& e) {
            record.latency_ms = ms_since(t0);
            record.parse_outcome = CallRecord::ParseOutcome::SchemaError;
            last_error = e.what();
        } catch (const TransportError& e) {
            record.latency_ms = ms_since(t0);
            record.raw_response.clear();
            record.parse_outcome = CallRecord::ParseOutcome::Unparseable;
            last_error = e.what();
        }
        if (attempt > config_.max_retries) {
            throw ModelFailure("classification of article " + article.id + " failed after " +
                                   std::to_string(attempt) + " attempt(s): " + last_error,
                               record);
        }
        backoff_sleep(config_.retry_backoff_ms, attempt);
    }
}

std::vector<std::pair<ArticleVerdict, CallRecord>>
ModelGateway::classify_articles(const std::vector<EvalArticle>& articles,
                                const PromptConfig& prompt) {
    std::vector<std::optional<std::pair<ArticleVerdict, CallRecord>>> slots(articles.size());
    const size_t workers =
        std::min<size_t>(static_cast<size_t>(config_.parallelism_limit), articles.size());
    if (workers <= 1) {
        for (size_t i = 0; i < articles.size(); ++i) {
            slots[i] = classify_article(articles[i], prompt);
        }
    } else {
        std::atomic<size_t> next{0};
        std::mutex error_mutex;
        std::exception_ptr first_error;
        auto worker = [&] {
            for (;;) {
                const size_t i = next.fetch_add(1);
                if (i >= articles.size()) {
                    return;
                }
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (first_error) {
                        return;
                    }
                }
                try {
                    slots[i] = classify_article(articles[i], prompt);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) {
                        first_error = std::current_exception();
                    }
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (size_t w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
        for (std::thread& t : pool) {
            t.join();
        }
        if (first_error) {
            std::rethrow_exception(first_error);
        }
    }
    std::vector<std::pair<ArticleVerdict, CallRecord>> out;
    out.reserve(articles.size());
    for (auto& slot : slots) {
        out.push_back(std::move(*slot));
    }
    return out;
}

EvalArticle ModelGateway::generate_synthetic_article(const SyntheticSpec& spec) {
    if (spec.targets.empty()) {
        throw InputError("synthetic spec has no sentence targets");
    }
    std::vector<std::string> texts;
    std::string last_error;
    for (int attempt = 1;; ++attempt) {
        try {
            texts = backend_->generate_sentences(spec);
            break;
        } catch (const TransportError& e) {
            last_error = e.what();
        }
        if (attempt > config_.max_retries) {
            throw PipelineError("generation of article " + spec.article_id + " failed after " +
                                std::to_string(attempt) + " attempt(s): " + last_error);
        }
        backoff_sleep(config_.retry_backoff_ms, attempt);
    }
    if (texts.size() != spec.targets.size()) {
        throw PipelineError("generation of article " + spec.article_id + " returned " +
                            std::to_string(texts.size()) + " sentences, expected " +
                            std::to_string(spec.targets.size()));
    }
    EvalArticle article;
    article.id = spec.article_id;
    for (size_t i = 0; i < texts.size(); ++i) {
        const SyntheticSentenceTarget& target = spec.targets[i];
        AnnotatedSentence s;
        s.text = strip_inline_whitespace(texts[i]);
        if (util::trim(s.text).empty()) {
            throw PipelineError("generation of article " + spec.article_id +
                                " returned an empty sentence at position " + std::to_string(i));
        }
        s.label = target.label;
        if (target.label == Label::Biased) {
            s.bias_type = target.bias_type;
            s.strength = target.strength;
        }
        s.source = Source::Synthetic;
        s.article_id = spec.article_id;
        s.position = static_cast<int>(i);
        s.origin_id = "synthetic:" + spec.article_id + "-" + std::to_string(i);
        article.sentences.push_back(std::move(s));
    }
    return article;
}

std::pair<std::string, double> ModelGateway::annotate_gold(const AnnotatedSentence& sentence) {
    if (sentence.label != Label::Biased) {
        throw InputError("annotate_gold needs a biased sentence (origin " + sentence.origin_id +
                         ")");
    }
    if (sentence.bias_type) {
        throw InputError("annotate_gold called on an already-typed sentence (origin " +
                         sentence.origin_id + ")");
    }
    std::string last_raw;
    for (int ask = 0; ask < 2; ++ask) { // hallucinated answers get one re-ask
        std::pair<std::string, double> answer;
        std::string last_error;
        for (int attempt = 1;; ++attempt) {
            try {
                answer = backend_->annotate(sentence);
                break;
            } catch (const TransportError& e) {
                last_error = e.what();
            }
            if (attempt > config_.max_retries) {
                throw PipelineError("annotation of " + sentence.origin_id + " failed after " +
                                    std::to_string(attempt) + " attempt(s): " + last_error);
            }
            backoff_sleep(config_.retry_backoff_ms, attempt);
        }
        const LabelResolution res = taxonomy_.resolve_label(answer.first);
        if (!res.is_hallucinated()) {
            return {res.canonical, std::clamp(answer.second, 0.0, 1.0)};
        }
        last_raw = answer.first;
    }
    throw PipelineError("annotation of " + sentence.origin_id +
                        " failed: model named unknown type \"" + last_raw + "\" twice");
}

} // namespace biaseval
