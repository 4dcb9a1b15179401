#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "biaseval/corpus.hpp"
#include "biaseval/promptkit.hpp"
#include "biaseval/taxonomy.hpp"
#include "biaseval/util.hpp"

namespace biaseval {

enum class ModelKind { RemoteChat, MockEcho, MockLexicon, MockRandom };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view token);

struct ModelConfig {
    ModelKind kind = ModelKind::MockEcho;
    std::string endpoint;             // remote only, full URL of the chat route
    std::string model_name = "mock";
    double temperature = 0.15;
    int max_retries = 2;
    int request_timeout_ms = 30000;
    int parallelism_limit = 4;
    double flag_probability = 0.5;    // MockRandom only
    uint64_t seed = 0;                // mocks only
    std::string api_key_env = "BIASEVAL_API_KEY";
    int retry_backoff_ms = 250;       // doubles per attempt
};

struct CallRecord {
    enum class ParseOutcome { Ok, Unparseable, SchemaError };

    std::string article_id;
    std::string request_digest;
    std::string raw_response;
    ParseOutcome parse_outcome = ParseOutcome::Ok;
    double latency_ms = 0.0;
    int attempt_count = 0;
};

nlohmann::json call_record_to_json(const CallRecord& record);

/// Transient failure talking to a backend; the gateway retries these.
class TransportError : public PipelineError {
    using PipelineError::PipelineError;
};

/// Retries exhausted; carries the record of the final attempt.
class ModelFailure : public PipelineError {
public:
    ModelFailure(const std::string& message, CallRecord record)
        : PipelineError(message), record(std::move(record)) {}

    CallRecord record;
};

/// Per-sentence generation target; for biased targets the requested type and
/// strength become the gold annotation of the generated sentence.
struct SyntheticSentenceTarget {
    Label label = Label::Unbiased;
    std::string bias_type; // canonical name, biased targets only
    double strength = 0.0; // biased targets only
};

struct SyntheticSpec {
    std::string article_id;
    std::string topic;
    std::vector<SyntheticSentenceTarget> targets;

    size_t biased_count() const;
};

/// Deterministic batch plan: article lengths uniform in [min_len, max_len],
/// biased ratio uniform in [0.2, 0.8], strengths uniform on the grid
/// {0.1, ..., 1.0}, and bias types dealt from a repeatedly reshuffled full
/// deck so per-type request counts across the batch differ by at most one.
std::vector<SyntheticSpec> schedule_synthetic_batch(size_t n_articles, const Taxonomy& taxonomy,
                                                    uint64_t rng_seed, int min_len = 10,
                                                    int max_len = 30);

/// A model that can classify articles, write synthetic sentences and
/// annotate gold sentences. Implementations must be safe for concurrent
/// calls.
class ModelBackend {
public:
    virtual ~ModelBackend() = default;

    virtual std::string name() const = 0;

    /// Raw model text answering the classification prompt for the article.
    virtual std::string classify(const std::string& system_prompt, const EvalArticle& article) = 0;

    /// One sentence text per target, in order.
    virtual std::vector<std::string> generate_sentences(const SyntheticSpec& spec) = 0;

    /// (raw type label, strength) for a gold-biased sentence.
    virtual std::pair<std::string, double> annotate(const AnnotatedSentence& sentence) = 0;
};

std::unique_ptr<ModelBackend> make_backend(const ModelConfig& config, const Taxonomy& taxonomy);

/// Front door for all model traffic: builds prompts, retries transient and
/// unparseable responses with exponential backoff, enforces the parallelism
/// limit, and keeps a full per-call audit trail.
class ModelGateway {
public:
    ModelGateway(ModelConfig config, const Taxonomy& taxonomy);
    /// Injectable backend, used by tests for flaky/stub models.
    ModelGateway(std::unique_ptr<ModelBackend> backend, ModelConfig config,
                 const Taxonomy& taxonomy);

    const ModelConfig& config() const { return config_; }
    const std::string& backend_name() const { return backend_name_; }

    std::pair<ArticleVerdict, CallRecord> classify_article(const EvalArticle& article,
                                                           const PromptConfig& prompt);

    /// Classifies every article, at most parallelism_limit in flight;
    /// results are returned in article order regardless of scheduling.
    std::vector<std::pair<ArticleVerdict, CallRecord>>
    classify_articles(const std::vector<EvalArticle>& articles, const PromptConfig& prompt);

    /// Sentence texts from the model, gold annotations from the SyntheticSpec.
    EvalArticle generate_synthetic_article(const SyntheticSpec& spec);

    /// Canonical type name and clamped strength for an untyped gold biased
    /// sentence. A hallucinated answer triggers one re-ask, then an error.
    std::pair<std::string, double> annotate_gold(const AnnotatedSentence& sentence);

private:
    ModelConfig config_;
    const Taxonomy& taxonomy_;
    std::unique_ptr<ModelBackend> backend_;
    std::string backend_name_;
};

} // namespace biaseval
