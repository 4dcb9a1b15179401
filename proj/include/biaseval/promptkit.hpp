#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "biaseval/corpus.hpp"
#include "biaseval/taxonomy.hpp"
#include "biaseval/util.hpp"

namespace biaseval {

/// Working definition of media bias placed at the top of the system prompt.
inline constexpr std::string_view kDefaultBiasDefinition =
    "Media bias can be described as the tendency to, consciously or "
    "unconsciously, report a news story in a way that supports a pre-existing "
    "narrative instead of providing unprejudiced coverage of an issue.";

enum class TaxonomyVariant { FineGrained27, CoarseAlternate };

struct PromptConfig {
    TaxonomyVariant taxonomy_variant = TaxonomyVariant::FineGrained27;
    bool include_examples = true;
    std::string bias_definition = std::string(kDefaultBiasDefinition);
    std::string output_schema_version = "v1";
};

/// One sentence the model flagged as biased. `raw_type` is kept verbatim;
/// `resolution` maps it onto the taxonomy (or records a hallucination).
struct FlaggedSentence {
    std::string sentence;
    std::string raw_type;
    LabelResolution resolution;
    double strength = 0.0;
    std::string explanation;
};

struct ArticleVerdict {
    std::vector<FlaggedSentence> flagged;
    std::string overall_assessment;
};

class VerdictError : public PipelineError {
    using PipelineError::PipelineError;
};

/// No JSON object could be extracted from the model output.
class UnparseableVerdict : public VerdictError {
    using VerdictError::VerdictError;
};

/// A JSON object was found but does not follow the verdict schema.
class VerdictSchemaError : public VerdictError {
    using VerdictError::VerdictError;
};

/// Finds the first balanced, parseable JSON object embedded in `raw` (code
/// fences and prose around it are ignored). Returns false when none exists.
bool extract_json_object(const std::string& raw, nlohmann::json& out);

/// Deterministic system prompt: expert role, the media-bias definition,
/// numbered task steps, every taxonomy definition, and the output JSON
/// schema. FineGrained27 insists on a 27-type taxonomy.
std::string build_system_prompt(const Taxonomy& taxonomy, const PromptConfig& config);

/// The article as plain connected text, nothing else.
std::string build_user_message(const EvalArticle& article);

/// Tolerant verdict parse: strips code fences and prose around the outermost
/// JSON object, validates the schema, clamps strengths into [0,1] and
/// resolves every raw bias type against the taxonomy. Clamps and repairs are
/// appended to `warnings` when given.
ArticleVerdict parse_verdict(const std::string& raw, const Taxonomy& taxonomy,
                             std::vector<std::string>* warnings = nullptr);

/// Serializes a verdict back into the wire schema; parse_verdict of the dump
/// reproduces the verdict.
nlohmann::json verdict_to_json(const ArticleVerdict& verdict);

} // namespace biaseval
