#include "biaseval/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "biaseval/rng.hpp"
#include "biaseval/textmatch.hpp"
#include "biaseval/util.hpp"

namespace biaseval {

namespace {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, const std::string& context) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw InputError(context + ": bad number \"" + s + "\"");
    }
    return v;
}

int parse_int(const std::string& s, const std::string& context) {
    int v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw InputError(context + ": bad integer \"" + s + "\"");
    }
    return v;
}

// header-driven TSV: returns column index by (case-insensitive) name
size_t header_column(const std::vector<std::string>& header, std::string_view name,
                     const std::string& path) {
    for (size_t i = 0; i < header.size(); ++i) {
        if (util::iequals_ascii(util::trim(header[i]), name)) {
            return i;
        }
    }
    throw InputError(path + ": header is missing column \"" + std::string(name) + "\"");
}

} // namespace

std::string to_string(Label label) {
    return label == Label::Biased ? "biased" : "unbiased";
}

std::string to_string(Source source) {
    switch (source) {
    case Source::Babe: return "babe";
    case Source::Basil: return "basil";
    case Source::Manual: return "manual";
    case Source::Synthetic: return "synthetic";
    }
    return "manual";
}

Label parse_label(std::string_view token) {
    std::string t = util::to_lower_ascii(util::trim(token));
    if (t == "biased") {
        return Label::Biased;
    }
    if (t == "unbiased" || t == "non-biased" || t == "non biased") {
        return Label::Unbiased;
    }
    throw InputError("unknown label token \"" + std::string(token) + "\"");
}

Source parse_source(std::string_view token) {
    std::string t = util::to_lower_ascii(util::trim(token));
    if (t == "babe") return Source::Babe;
    if (t == "basil") return Source::Basil;
    if (t == "manual") return Source::Manual;
    if (t == "synthetic") return Source::Synthetic;
    throw InputError("unknown source token \"" + std::string(token) + "\"");
}

nlohmann::json sentence_to_json(const AnnotatedSentence& s) {
    nlohmann::json j{
        {"text", s.text},
        {"label", to_string(s.label)},
        {"source", to_string(s.source)},
        {"origin_id", s.origin_id},
        {"article_id", s.article_id},
        {"position", s.position},
    };
    if (s.bias_type) {
        j["bias_type"] = *s.bias_type;
    }
    if (s.strength) {
        j["strength"] = *s.strength;
    }
    return j;
}

AnnotatedSentence sentence_from_json(const nlohmann::json& j) {
    AnnotatedSentence s;
    s.text = j.at("text").get<std::string>();
    s.label = parse_label(j.at("label").get<std::string>());
    s.source = parse_source(j.at("source").get<std::string>());
    s.origin_id = j.at("origin_id").get<std::string>();
    s.article_id = j.value("article_id", std::string());
    s.position = j.value("position", 0);
    if (j.contains("bias_type") && !j["bias_type"].is_null()) {
        s.bias_type = j["bias_type"].get<std::string>();
    }
    if (j.contains("strength") && !j["strength"].is_null()) {
        s.strength = j["strength"].get<double>();
    }
    return s;
}

std::string EvalArticle::rendered_text() const {
    std::string out;
    for (size_t i = 0; i < sentences.size(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += sentences[i].text;
    }
    return out;
}

size_t EvalArticle::biased_count() const {
    return static_cast<size_t>(
        std::count_if(sentences.begin(), sentences.end(),
                      [](const AnnotatedSentence& s) { return s.label == Label::Biased; }));
}

nlohmann::json DecontaminationReport::to_json() const {
    nlohmann::json removed_rows = nlohmann::json::array();
    for (const auto& r : removed) {
        removed_rows.push_back({{"origin_id", r.sentence.origin_id},
                                {"text", r.sentence.text},
                                {"best_score", r.best_score},
                                {"matched_contaminant", r.matched_contaminant}});
    }
    nlohmann::json kept_ids = nlohmann::json::array();
    for (const auto& s : kept) {
        kept_ids.push_back(s.origin_id);
    }
    return nlohmann::json{{"threshold", threshold},
                          {"kept_count", kept.size()},
                          {"removed_count", removed.size()},
                          {"kept", kept_ids},
                          {"removed", removed_rows}};
}

// --- importers -------------------------------------------------------------

std::vector<AnnotatedSentence> load_babe(const std::string& path) {
    std::vector<std::string> lines = util::read_lines(path);
    std::vector<AnnotatedSentence> out;
    if (lines.empty()) {
        return out;
    }
    std::vector<std::string> header = util::split(lines[0], '\t');
    const size_t text_col = header_column(header, "text", path);
    const size_t label_col = header_column(header, "label", path);
    for (size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) {
            continue;
        }
        const std::string where = path + ":" + std::to_string(i + 1);
        std::vector<std::string> cols = util::split(lines[i], '\t');
        if (cols.size() != header.size()) {
            throw InputError(where + ": expected " + std::to_string(header.size()) +
                             " columns, got " + std::to_string(cols.size()));
        }
        std::string token = util::to_lower_ascii(util::trim(cols[label_col]));
        if (token == "no agreement" || token == "no-agreement") {
            continue;
        }
        AnnotatedSentence s;
        s.text = cols[text_col];
        try {
            s.label = parse_label(token);
        } catch (const InputError& e) {
            throw InputError(where + ": " + e.what());
        }
        s.source = Source::Babe;
        // 1-based file line, matching loader error messages
        s.origin_id = "babe:" + std::to_string(i + 1);
        s.position = static_cast<int>(out.size());
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<BasilArticle> load_basil(const std::string& path) {
    std::vector<std::string> lines = util::read_lines(path);
    std::vector<BasilArticle> groups;
    if (lines.empty()) {
        return groups;
    }
    std::vector<std::string> header = util::split(lines[0], '\t');
    const size_t article_col = header_column(header, "article_id", path);
    const size_t position_col = header_column(header, "position", path);
    const size_t label_col = header_column(header, "label", path);
    const size_t text_col = header_column(header, "text", path);
    std::map<std::string, size_t> group_index;
    for (size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) {
            continue;
        }
        const std::string where = path + ":" + std::to_string(i + 1);
        std::vector<std::string> cols = util::split(lines[i], '\t');
        if (cols.size() != header.size()) {
            throw InputError(where + ": expected " + std::to_string(header.size()) +
                             " columns, got " + std::to_string(cols.size()));
        }
        AnnotatedSentence s;
        s.text = cols[text_col];
        s.article_id = util::trim(cols[article_col]);
        s.position = parse_int(util::trim(cols[position_col]), where);
        s.source = Source::Basil;
        std::string token = util::to_lower_ascii(util::trim(cols[label_col]));
        std::string flavor;
        if (token == "lexical") {
            s.label = Label::Biased;
            flavor = ":lex";
        } else if (token == "informational") {
            s.label = Label::Biased;
            flavor = ":inf";
        } else {
            try {
                s.label = parse_label(token);
            } catch (const InputError& e) {
                throw InputError(where + ": " + e.what());
            }
        }
        s.origin_id = "basil:" + s.article_id + "-" + std::to_string(s.position) + flavor;
        auto [it, inserted] = group_index.emplace(s.article_id, groups.size());
        if (inserted) {
            groups.push_back(BasilArticle{s.article_id, {}});
        }
        groups[it->second].sentences.push_back(std::move(s));
    }
    for (auto& g : groups) {
        std::stable_sort(g.sentences.begin(), g.sentences.end(),
                         [](const AnnotatedSentence& a, const AnnotatedSentence& b) {
                             return a.position < b.position;
                         });
    }
    return groups;
}

// --- canonical corpus file -------------------------------------------------

void write_corpus(const std::vector<AnnotatedSentence>& sentences, const std::string& path) {
    std::string out = "origin_id\tarticle_id\tposition\tlabel\tbias_type\tstrength\ttext\n";
    for (const auto& s : sentences) {
        if (s.text.find('\n') != std::string::npos) {
            throw InputError("corpus sentence contains a newline (origin " + s.origin_id + ")");
        }
        out += s.origin_id + '\t' + s.article_id + '\t' + std::to_string(s.position) + '\t' +
               to_string(s.label) + '\t' + (s.bias_type ? *s.bias_type : "") + '\t' +
               (s.strength ? format_double(*s.strength) : "") + '\t' + s.text + '\n';
    }
    util::write_file(path, out);
}

std::vector<AnnotatedSentence> load_corpus(const std::string& path) {
    std::vector<std::string> lines = util::read_lines(path);
    std::vector<AnnotatedSentence> out;
    for (size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) {
            continue;
        }
        const std::string where = path + ":" + std::to_string(i + 1);
        std::vector<std::string> cols = util::split_limit(lines[i], '\t', 7);
        if (cols.size() != 7) {
            throw InputError(where + ": expected 7 columns");
        }
        AnnotatedSentence s;
        s.origin_id = cols[0];
        s.article_id = cols[1];
        s.position = parse_int(cols[2], where);
        try {
            s.label = parse_label(cols[3]);
        } catch (const InputError& e) {
            throw InputError(where + ": " + e.what());
        }
        if (!cols[4].empty()) {
            s.bias_type = cols[4];
        }
        if (!cols[5].empty()) {
            s.strength = parse_double(cols[5], where);
        }
        s.text = cols[6];
        size_t colon = s.origin_id.find(':');
        s.source = parse_source(colon == std::string::npos ? std::string("manual")
                                                           : s.origin_id.substr(0, colon));
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<BasilArticle> group_by_article(const std::vector<AnnotatedSentence>& sentences) {
    std::vector<BasilArticle> groups;
    std::map<std::string, size_t> index;
    for (const auto& s : sentences) {
        if (s.article_id.empty()) {
            continue;
        }
        auto [it, inserted] = index.emplace(s.article_id, groups.size());
        if (inserted) {
            groups.push_back(BasilArticle{s.article_id, {}});
        }
        groups[it->second].sentences.push_back(s);
    }
    for (auto& g : groups) {
        std::stable_sort(g.sentences.begin(), g.sentences.end(),
                         [](const AnnotatedSentence& a, const AnnotatedSentence& b) {
                             return a.position < b.position;
                         });
    }
    return groups;
}

// --- operations ------------------------------------------------------------

DecontaminationReport decontaminate(const std::vector<AnnotatedSentence>& candidates,
                                    const std::vector<std::string>& contaminants,
                                    int threshold) {
    if (threshold < 0 || threshold > 100) {
        throw InputError("decontamination threshold must be in [0,100]");
    }
    DecontaminationReport report;
    report.threshold = threshold;
    std::vector<std::string> normalized_contaminants;
    normalized_contaminants.reserve(contaminants.size());
    for (const auto& c : contaminants) {
        normalized_contaminants.push_back(textmatch::normalize(c));
    }
    for (const auto& candidate : candidates) {
        const std::string norm = textmatch::normalize(candidate.text);
        int best = -1;
        size_t witness = 0;
        for (size_t i = 0; i < normalized_contaminants.size(); ++i) {
            const std::string& cont = normalized_contaminants[i];
            if (textmatch::partial_ratio_bound_normalized(norm, cont) <= best) {
                continue;
            }
            int score = textmatch::partial_ratio_normalized(norm, cont);
            if (score > best) {
                best = score;
                witness = i;
                if (best == 100) {
                    break;
                }
            }
        }
        if (best > threshold) {
            report.removed.push_back(
                DecontaminationRemoval{candidate, best, contaminants[witness]});
        } else {
            report.kept.push_back(candidate);
        }
    }
    return report;
}

std::vector<EvalArticle> assemble_articles(std::vector<AnnotatedSentence> sentences,
                                           uint64_t rng_seed, int min_len, int max_len,
                                           std::string_view id_prefix) {
    if (min_len < 1 || max_len < min_len) {
        throw InputError("assemble_articles: need 1 <= min_len <= max_len");
    }
    SeededRng rng(rng_seed);
    rng.shuffle(sentences);
    std::vector<EvalArticle> articles;
    size_t idx = 0;
    while (idx < sentences.size()) {
        const size_t target = static_cast<size_t>(rng.int_in(min_len, max_len));
        const size_t take = std::min(target, sentences.size() - idx);
        EvalArticle article;
        article.id = std::string(id_prefix) + "-a" + util::zero_pad(articles.size(), 4);
        article.sentences.assign(sentences.begin() + static_cast<long>(idx),
                                 sentences.begin() + static_cast<long>(idx + take));
        articles.push_back(std::move(article));
        idx += take;
    }
    return articles;
}

std::vector<EvalArticle> snippet_articles(const std::vector<BasilArticle>& groups,
                                          uint64_t rng_seed, int min_len, int max_len) {
    if (min_len < 1 || max_len < min_len) {
        throw InputError("snippet_articles: need 1 <= min_len <= max_len");
    }
    SeededRng rng(rng_seed);
    std::vector<EvalArticle> articles;
    for (const auto& group : groups) {
        size_t idx = 0;
        size_t snippet = 0;
        while (idx < group.sentences.size()) {
            const size_t target = static_cast<size_t>(rng.int_in(min_len, max_len));
            const size_t take = std::min(target, group.sentences.size() - idx);
            EvalArticle article;
            article.id = "basil-" + group.article_id + "-s" + std::to_string(snippet++);
            article.sentences.assign(group.sentences.begin() + static_cast<long>(idx),
                                     group.sentences.begin() + static_cast<long>(idx + take));
            articles.push_back(std::move(article));
            idx += take;
        }
    }
    return articles;
}

} // namespace biaseval
