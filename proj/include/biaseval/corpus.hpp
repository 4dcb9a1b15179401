#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace biaseval {

enum class Label { Biased, Unbiased };
enum class Source { Babe, Basil, Manual, Synthetic };

std::string to_string(Label label);
std::string to_string(Source source);
Label parse_label(std::string_view token);   // throws InputError on unknown token
Source parse_source(std::string_view token);

/// One gold sentence. `article_id` is empty for corpora of disconnected
/// sentences; `origin_id` is an opaque provenance key ("babe:17",
/// "basil:3-12:lex", ...).
struct AnnotatedSentence {
    std::string text;
    Label label = Label::Unbiased;
    std::optional<std::string> bias_type; // canonical name, biased only
    std::optional<double> strength;       // in [0,1], biased only
    Source source = Source::Manual;
    std::string origin_id;
    std::string article_id;
    int position = 0;

    bool operator==(const AnnotatedSentence&) const = default;
};

nlohmann::json sentence_to_json(const AnnotatedSentence& s);
AnnotatedSentence sentence_from_json(const nlohmann::json& j);

/// Ordered gold sentences rendered as one plain connected text for model
/// input.
struct EvalArticle {
    std::string id;
    std::vector<AnnotatedSentence> sentences;

    /// Sentences joined by single spaces, in order.
    std::string rendered_text() const;
    size_t biased_count() const;
};

struct BasilArticle {
    std::string article_id;
    std::vector<AnnotatedSentence> sentences;
};

struct DecontaminationRemoval {
    AnnotatedSentence sentence;
    int best_score = 0;
    std::string matched_contaminant;
};

struct DecontaminationReport {
    std::vector<AnnotatedSentence> kept;
    std::vector<DecontaminationRemoval> removed;
    int threshold = 80;

    nlohmann::json to_json() const;
};

// --- importers -------------------------------------------------------------

/// BABE-shaped file: TSV with a header naming at least `text` and `label`
/// columns; label tokens are case-insensitive ("biased", "non-biased" /
/// "unbiased", "no agreement"). No-agreement rows are dropped.
std::vector<AnnotatedSentence> load_babe(const std::string& path);

/// BASIL-shaped file: TSV with header columns `article_id`, `position`,
/// `label`, `text`; label is one of unbiased / lexical / informational /
/// biased. Both bias flavors collapse to Biased; the flavor is kept in
/// origin_id.
std::vector<BasilArticle> load_basil(const std::string& path);

// --- canonical corpus file -------------------------------------------------

/// Canonical TSV: origin_id, article_id, position, label, bias_type,
/// strength, text. Text is the last column, so embedded tabs survive a
/// round-trip; newlines are rejected at write time.
void write_corpus(const std::vector<AnnotatedSentence>& sentences, const std::string& path);
std::vector<AnnotatedSentence> load_corpus(const std::string& path);

/// Groups by article_id preserving first-seen order; sentences ordered by
/// position. Sentences without an article_id are skipped.
std::vector<BasilArticle> group_by_article(const std::vector<AnnotatedSentence>& sentences);

// --- operations ------------------------------------------------------------

DecontaminationReport decontaminate(const std::vector<AnnotatedSentence>& candidates,
                                    const std::vector<std::string>& contaminants,
                                    int threshold);

/// Shuffles the pool and partitions it into articles of uniformly drawn
/// target length; a final remnant shorter than min_len is kept rather than
/// dropping gold sentences.
std::vector<EvalArticle> assemble_articles(std::vector<AnnotatedSentence> sentences,
                                           uint64_t rng_seed,
                                           int min_len = 10,
                                           int max_len = 30,
                                           std::string_view id_prefix = "article");

/// Per source article, contiguous runs of target length in [min_len,
/// max_len]; groups with fewer than min_len sentences are emitted whole.
std::vector<EvalArticle> snippet_articles(const std::vector<BasilArticle>& groups,
                                          uint64_t rng_seed,
                                          int min_len = 10,
                                          int max_len = 30);

} // namespace biaseval
