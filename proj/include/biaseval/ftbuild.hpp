#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "biaseval/corpus.hpp"
#include "biaseval/modelgw.hpp"
#include "biaseval/promptkit.hpp"
#include "biaseval/taxonomy.hpp"

namespace biaseval {

/// One chat-format training example: the classification system prompt, the
/// article as plain text, and the gold verdict JSON as the target answer.
struct FinetuneRecord {
    std::string system;
    std::string user;
    std::string assistant;

    bool operator==(const FinetuneRecord&) const = default;
};

struct FinetuneDataset {
    std::vector<FinetuneRecord> records;
    /// The articles behind the records, annotations included.
    std::vector<EvalArticle> articles;
    /// Every sentence text used in any record; feeds decontamination.
    std::vector<std::string> contaminant_sentences;
};

/// Builds fine-tune datasets from the three sources: a flat sentence pool
/// (shuffled into articles), real article groups (contiguous snippets), or
/// model-generated synthetic articles. Assistant messages always come from
/// gold annotations, never from a classifier.
class FinetuneBuilder {
public:
    FinetuneBuilder(const Taxonomy& taxonomy, ModelGateway& gateway, PromptConfig prompt);

    /// Pool sentences are shuffled and joined into articles of random length;
    /// untyped biased sentences are enriched through the gateway first.
    FinetuneDataset build_from_pool(std::vector<AnnotatedSentence> pool, size_t n_articles,
                                    uint64_t rng_seed);

    /// Contiguous snippets of the given article groups, in group order.
    FinetuneDataset build_from_groups(const std::vector<BasilArticle>& groups, size_t n_articles,
                                      uint64_t rng_seed);

    /// Schedules a synthetic batch (even type distribution, random biased
    /// ratio and strengths) and asks the gateway to write the sentences.
    FinetuneDataset build_synthetic(size_t n_articles, uint64_t rng_seed);

    /// The gold verdict JSON used as the assistant message.
    std::string gold_assistant_message(const EvalArticle& article) const;

private:
    FinetuneDataset finalize(std::vector<EvalArticle> articles, size_t n_articles,
                             const char* source_name, bool enrich);

    const Taxonomy& taxonomy_;
    ModelGateway& gateway_;
    PromptConfig prompt_;
    std::string system_prompt_;
};

/// One {"messages": [...]} object per line, newline-terminated.
void emit_jsonl(const std::vector<FinetuneRecord>& records, const std::string& path);
std::vector<FinetuneRecord> load_finetune(const std::string& path);

/// Byte-level concatenation after validating every input line; returns the
/// total line count.
size_t merge_datasets(const std::vector<std::string>& input_paths, const std::string& out_path);

} // namespace biaseval
