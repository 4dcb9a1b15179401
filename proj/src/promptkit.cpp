#include "biaseval/promptkit.hpp"

#include <algorithm>
#include <cmath>

namespace biaseval {

// Brace matching skips string contents so quoted braces do not confuse it;
// balanced blocks that fail to parse are skipped and the scan moves on.
bool extract_json_object(const std::string& raw, nlohmann::json& out) {
    for (size_t start = raw.find('{'); start != std::string::npos;
         start = raw.find('{', start + 1)) {
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (size_t i = start; i < raw.size(); ++i) {
            const char c = raw[i];
            if (in_string) {
                if (escaped) {
                    escaped = false;
                } else if (c == '\\') {
                    escaped = true;
                } else if (c == '"') {
                    in_string = false;
                }
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                if (--depth == 0) {
                    nlohmann::json parsed = nlohmann::json::parse(
                        raw.substr(start, i - start + 1), nullptr, false);
                    if (!parsed.is_discarded()) {
                        out = std::move(parsed);
                        return true;
                    }
                    break; // balanced but invalid, try the next '{'
                }
            }
        }
    }
    return false;
}

namespace {

void warn(std::vector<std::string>* warnings, std::string message) {
    if (warnings) {
        warnings->push_back(std::move(message));
    }
}

double read_strength(const nlohmann::json& item, const std::string& path,
                     std::vector<std::string>* warnings) {
    const nlohmann::json& v = item.at("bias_strength");
    if (v.is_number()) {
        return v.get<double>();
    }
    if (v.is_string()) {
        // fine-tuned endpoints occasionally quote the number
        try {
            double parsed = std::stod(v.get<std::string>());
            warn(warnings, path + ".bias_strength: numeric string accepted");
            return parsed;
        } catch (const std::exception&) {
            throw VerdictSchemaError(path + ".bias_strength: not a number");
        }
    }
    throw VerdictSchemaError(path + ".bias_strength: not a number");
}

} // namespace

std::string build_system_prompt(const Taxonomy& taxonomy, const PromptConfig& config) {
    if (config.taxonomy_variant == TaxonomyVariant::FineGrained27 && taxonomy.size() != 27) {
        throw InputError("fine-grained prompt variant needs a 27-type taxonomy, got " +
                         std::to_string(taxonomy.size()));
    }
    std::string prompt;
    prompt +=
        "You are an expert in media bias detection and classification. You "
        "analyze news articles sentence by sentence and answer only in the "
        "requested format.\n\n";
    prompt += config.bias_definition;
    prompt += "\n\n";
    prompt +=
        "Work through the article you are given step by step:\n"
        "1. Read the article and consider it sentence by sentence.\n"
        "2. Identify every sentence that shows media bias.\n"
        "3. Categorize each biased sentence with exactly one bias type from "
        "the list below.\n"
        "4. Rate the bias strength of each biased sentence on a scale from "
        "0.0 (no bias at all) to 1.0 (very extreme bias). Report bias "
        "strengths as numbers, not descriptive words; stick with numbers.\n"
        "5. Write a short explanation for each biased sentence and an "
        "overall assessment of the whole article.\n"
        "6. Return the results as a single JSON object following the schema "
        "below, with no other text.\n\n";
    prompt += "The bias types:\n\n";
    for (const BiasType& type : taxonomy.types()) {
        prompt += taxonomy.render_definition(type, config.include_examples);
        prompt += "\n\n";
    }
    prompt += "Output JSON schema (";
    prompt += config.output_schema_version;
    prompt += "):\n";
    prompt +=
        "{\n"
        "  \"biased_sentences\": [\n"
        "    {\n"
        "      \"sentence\": \"<the biased sentence, quoted from the article>\",\n"
        "      \"bias_type\": \"<one bias type from the list above>\",\n"
        "      \"bias_strength\": <number between 0.0 and 1.0>,\n"
        "      \"explanation\": \"<why this sentence is biased>\"\n"
        "    }\n"
        "  ],\n"
        "  \"overall_assessment\": \"<a short assessment of the article as a whole>\"\n"
        "}\n"
        "If no sentence is biased, return an empty \"biased_sentences\" list.";
    return prompt;
}

std::string build_user_message(const EvalArticle& article) {
    if (article.sentences.empty()) {
        throw InputError("cannot build a user message from an empty article");
    }
    return article.rendered_text();
}

ArticleVerdict parse_verdict(const std::string& raw, const Taxonomy& taxonomy,
                             std::vector<std::string>* warnings) {
    nlohmann::json doc;
    if (!extract_json_object(raw, doc)) {
        throw UnparseableVerdict("no JSON object found in model output");
    }
    if (!doc.contains("biased_sentences")) {
        throw VerdictSchemaError("biased_sentences: missing");
    }
    if (!doc["biased_sentences"].is_array()) {
        throw VerdictSchemaError("biased_sentences: not an array");
    }
    ArticleVerdict verdict;
    size_t index = 0;
    for (const nlohmann::json& item : doc["biased_sentences"]) {
        const std::string path = "biased_sentences[" + std::to_string(index++) + "]";
        if (!item.is_object()) {
            throw VerdictSchemaError(path + ": not an object");
        }
        FlaggedSentence flag;
        if (!item.contains("sentence") || !item["sentence"].is_string()) {
            throw VerdictSchemaError(path + ".sentence: missing or not a string");
        }
        flag.sentence = item["sentence"].get<std::string>();
        if (!item.contains("bias_type") || !item["bias_type"].is_string()) {
            throw VerdictSchemaError(path + ".bias_type: missing or not a string");
        }
        flag.raw_type = item["bias_type"].get<std::string>();
        if (util::trim(flag.raw_type).empty()) {
            throw VerdictSchemaError(path + ".bias_type: empty");
        }
        if (!item.contains("bias_strength")) {
            throw VerdictSchemaError(path + ".bias_strength: missing");
        }
        flag.strength = read_strength(item, path, warnings);
        if (!std::isfinite(flag.strength)) {
            throw VerdictSchemaError(path + ".bias_strength: not finite");
        }
        if (flag.strength < 0.0 || flag.strength > 1.0) {
            warn(warnings, path + ".bias_strength: clamped " +
                               std::to_string(flag.strength) + " into [0,1]");
            flag.strength = std::clamp(flag.strength, 0.0, 1.0);
        }
        if (item.contains("explanation") && item["explanation"].is_string()) {
            flag.explanation = item["explanation"].get<std::string>();
        } else {
            warn(warnings, path + ".explanation: missing, recorded empty");
        }
        flag.resolution = taxonomy.resolve_label(flag.raw_type);
        verdict.flagged.push_back(std::move(flag));
    }
    if (doc.contains("overall_assessment") && doc["overall_assessment"].is_string()) {
        verdict.overall_assessment = doc["overall_assessment"].get<std::string>();
    } else {
        warn(warnings, "overall_assessment: missing, recorded empty");
    }
    return verdict;
}

nlohmann::json verdict_to_json(const ArticleVerdict& verdict) {
    nlohmann::json flagged = nlohmann::json::array();
    for (const FlaggedSentence& f : verdict.flagged) {
        flagged.push_back({{"sentence", f.sentence},
                           {"bias_type", f.raw_type},
                           {"bias_strength", f.strength},
                           {"explanation", f.explanation}});
    }
    return nlohmann::json{{"biased_sentences", std::move(flagged)},
                          {"overall_assessment", verdict.overall_assessment}};
}

} // namespace biaseval
