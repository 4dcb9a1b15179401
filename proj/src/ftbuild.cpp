#include "biaseval/ftbuild.hpp"

#include <utility>

#include "biaseval/util.hpp"

namespace biaseval {

FinetuneBuilder::FinetuneBuilder(const Taxonomy& taxonomy, ModelGateway& gateway,
                                 PromptConfig prompt)
    : taxonomy_(taxonomy), gateway_(gateway), prompt_(std::move(prompt)),
      system_prompt_(build_system_prompt(taxonomy_, prompt_)) {}

std::string FinetuneBuilder::gold_assistant_message(const EvalArticle& article) const {
    nlohmann::json flagged = nlohmann::json::array();
    for (const AnnotatedSentence& s : article.sentences) {
        if (s.label != Label::Biased) {
            continue;
        }
        if (!s.bias_type || !s.strength) {
            throw InputError("gold sentence " + s.origin_id +
                             " lacks a bias type or strength; enrich it first");
        }
        const BiasType* type = taxonomy_.lookup_type(*s.bias_type);
        if (!type) {
            throw InputError("gold sentence " + s.origin_id + " carries unknown type \"" +
                             *s.bias_type + "\"");
        }
        flagged.push_back({{"sentence", s.text},
                           {"bias_type", type->display_name()},
                           {"bias_strength", *s.strength},
                           {"explanation", "This sentence shows " + type->display_name() +
                                               " at bias strength " +
                                               util::format_strength(*s.strength) + "."}});
    }
    nlohmann::json verdict{
        {"biased_sentences", std::move(flagged)},
        {"overall_assessment", std::to_string(article.biased_count()) + " of " +
                                   std::to_string(article.sentences.size()) +
                                   " sentences show media bias."}};
    return verdict.dump();
}

FinetuneDataset FinetuneBuilder::finalize(std::vector<EvalArticle> articles, size_t n_articles,
                                          const char* source_name, bool enrich) {
    if (articles.size() < n_articles) {
        throw InputError(std::string(source_name) + ": only " + std::to_string(articles.size()) +
                         " articles can be built, " + std::to_string(n_articles) +
                         " requested; supply more sentences");
    }
    articles.resize(n_articles);
    FinetuneDataset dataset;
    for (EvalArticle& article : articles) {
        if (enrich) {
            for (AnnotatedSentence& s : article.sentences) {
                if (s.label == Label::Biased && !s.bias_type) {
                    auto [type, strength] = gateway_.annotate_gold(s);
                    s.bias_type = type;
                    if (!s.strength) {
                        s.strength = strength;
                    }
                }
            }
        }
        FinetuneRecord record;
        record.system = system_prompt_;
        record.user = build_user_message(article);
        record.assistant = gold_assistant_message(article);
        dataset.records.push_back(std::move(record));
        for (const AnnotatedSentence& s : article.sentences) {
            dataset.contaminant_sentences.push_back(s.text);
        }
    }
    dataset.articles = std::move(articles);
    return dataset;
}

FinetuneDataset FinetuneBuilder::build_from_pool(std::vector<AnnotatedSentence> pool,
                                                 size_t n_articles, uint64_t rng_seed) {
    if (n_articles == 0) {
        return {};
    }
    std::vector<EvalArticle> articles =
        assemble_articles(std::move(pool), rng_seed, 10, 30, "ft-pool");
    return finalize(std::move(articles), n_articles, "pool dataset", true);
}

FinetuneDataset FinetuneBuilder::build_from_groups(const std::vector<BasilArticle>& groups,
                                                   size_t n_articles, uint64_t rng_seed) {
    if (n_articles == 0) {
        return {};
    }
    std::vector<EvalArticle> articles = snippet_articles(groups, rng_seed, 10, 30);
    return finalize(std::move(articles), n_articles, "snippet dataset", true);
}

FinetuneDataset FinetuneBuilder::build_synthetic(size_t n_articles, uint64_t rng_seed) {
    if (n_articles == 0) {
        return {};
    }
    std::vector<SyntheticSpec> batch =
        schedule_synthetic_batch(n_articles, taxonomy_, rng_seed, 10, 30);
    std::vector<EvalArticle> articles;
    articles.reserve(batch.size());
    for (const SyntheticSpec& spec : batch) {
        articles.push_back(gateway_.generate_synthetic_article(spec));
    }
    return finalize(std::move(articles), n_articles, "synthetic dataset", false);
}

void emit_jsonl(const std::vector<FinetuneRecord>& records, const std::string& path) {
    std::string out;
    for (const FinetuneRecord& r : records) {
        nlohmann::json line{
            {"messages",
             {{{"role", "system"}, {"content", r.system}},
              {{"role", "user"}, {"content", r.user}},
              {{"role", "assistant"}, {"content", r.assistant}}}},
        };
        out += line.dump();
        out += '\n';
    }
    util::write_file(path, out);
}

namespace {

FinetuneRecord record_from_line(const std::string& line, const std::string& where) {
    nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("messages") ||
        !doc["messages"].is_array()) {
        throw InputError(where + ": not a {\"messages\": [...]} object");
    }
    FinetuneRecord record;
    bool have_system = false, have_user = false, have_assistant = false;
    for (const nlohmann::json& m : doc["messages"]) {
        if (!m.is_object() || !m.contains("role") || !m.contains("content") ||
            !m["role"].is_string() || !m["content"].is_string()) {
            throw InputError(where + ": message without string role/content");
        }
        const std::string role = m["role"].get<std::string>();
        const std::string content = m["content"].get<std::string>();
        if (role == "system") {
            record.system = content;
            have_system = true;
        } else if (role == "user") {
            record.user = content;
            have_user = true;
        } else if (role == "assistant") {
            record.assistant = content;
            have_assistant = true;
        } else {
            throw InputError(where + ": unknown role \"" + role + "\"");
        }
    }
    if (!have_system || !have_user || !have_assistant) {
        throw InputError(where + ": needs system, user and assistant messages");
    }
    return record;
}

} // namespace

std::vector<FinetuneRecord> load_finetune(const std::string& path) {
    std::vector<FinetuneRecord> records;
    std::vector<std::string> lines = util::read_lines(path);
    for (size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) {
            continue;
        }
        records.push_back(record_from_line(lines[i], path + ":" + std::to_string(i + 1)));
    }
    return records;
}

size_t merge_datasets(const std::vector<std::string>& input_paths, const std::string& out_path) {
    std::string merged;
    size_t total_lines = 0;
    for (const std::string& path : input_paths) {
        std::string content = util::read_file(path);
        // validate before appending so a broken input never half-merges
        std::vector<std::string> lines = util::read_lines(path);
        for (size_t i = 0; i < lines.size(); ++i) {
            if (lines[i].empty()) {
                continue;
            }
            record_from_line(lines[i], path + ":" + std::to_string(i + 1));
            ++total_lines;
        }
        merged += content;
        if (!content.empty() && content.back() != '\n') {
            merged += '\n';
        }
    }
    util::write_file(out_path, merged);
    return total_lines;
}

} // namespace biaseval
