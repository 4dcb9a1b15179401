#include "biaseval/evalcore.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "biaseval/rng.hpp"
#include "biaseval/textmatch.hpp"
#include "biaseval/util.hpp"

namespace biaseval {

const std::vector<double> kDefaultSweepGrid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

std::string to_string(Outcome outcome) {
    switch (outcome) {
    case Outcome::TP: return "TP";
    case Outcome::FP: return "FP";
    case Outcome::FN: return "FN";
    case Outcome::TN: return "TN";
    }
    return "TN";
}

Outcome parse_outcome(std::string_view token) {
    if (token == "TP") return Outcome::TP;
    if (token == "FP") return Outcome::FP;
    if (token == "FN") return Outcome::FN;
    if (token == "TN") return Outcome::TN;
    throw InputError("unknown outcome token \"" + std::string(token) + "\"");
}

std::vector<SentenceOutcome> align(const ArticleVerdict& verdict, const EvalArticle& article,
                                   int threshold) {
    struct Candidate {
        int score;
        size_t gold_idx;
        size_t flag_idx;
    };
    std::vector<Candidate> candidates;
    for (size_t fi = 0; fi < verdict.flagged.size(); ++fi) {
        for (size_t gi = 0; gi < article.sentences.size(); ++gi) {
            const int score =
                textmatch::partial_ratio(verdict.flagged[fi].sentence, article.sentences[gi].text);
            if (score > threshold) {
                candidates.push_back({score, gi, fi});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.gold_idx != b.gold_idx) return a.gold_idx < b.gold_idx;
        return a.flag_idx < b.flag_idx;
    });
    std::vector<int> gold_match(article.sentences.size(), -1);  // flag index or -1
    std::vector<int> gold_score(article.sentences.size(), -1);
    std::vector<bool> flag_used(verdict.flagged.size(), false);
    for (const Candidate& c : candidates) {
        if (flag_used[c.flag_idx] || gold_match[c.gold_idx] != -1) {
            continue;
        }
        gold_match[c.gold_idx] = static_cast<int>(c.flag_idx);
        gold_score[c.gold_idx] = c.score;
        flag_used[c.flag_idx] = true;
    }
    std::vector<SentenceOutcome> outcomes;
    outcomes.reserve(article.sentences.size() + verdict.flagged.size());
    for (size_t gi = 0; gi < article.sentences.size(); ++gi) {
        const AnnotatedSentence& gold = article.sentences[gi];
        SentenceOutcome row;
        row.gold = gold;
        row.article_id = article.id;
        row.predicted_biased = gold_match[gi] != -1;
        if (row.predicted_biased) {
            row.flag = verdict.flagged[static_cast<size_t>(gold_match[gi])];
            row.match_score = gold_score[gi];
        }
        if (gold.label == Label::Biased) {
            row.outcome = row.predicted_biased ? Outcome::TP : Outcome::FN;
        } else {
            row.outcome = row.predicted_biased ? Outcome::FP : Outcome::TN;
        }
        outcomes.push_back(std::move(row));
    }
    for (size_t fi = 0; fi < verdict.flagged.size(); ++fi) {
        if (flag_used[fi]) {
            continue;
        }
        SentenceOutcome row;
        row.article_id = article.id;
        row.predicted_biased = true;
        row.flag = verdict.flagged[fi];
        row.outcome = Outcome::FP;
        outcomes.push_back(std::move(row));
    }
    return outcomes;
}

ConfusionCounts confusion(const std::vector<SentenceOutcome>& outcomes, bool include_unmatched) {
    ConfusionCounts c;
    for (const SentenceOutcome& row : outcomes) {
        if (row.is_unmatched_flag()) {
            if (include_unmatched) {
                ++c.fp;
            }
            continue;
        }
        switch (row.outcome) {
        case Outcome::TP: ++c.tp; break;
        case Outcome::FP: ++c.fp; break;
        case Outcome::FN: ++c.fn; break;
        case Outcome::TN: ++c.tn; break;
        }
    }
    return c;
}

Metrics metrics(const ConfusionCounts& counts) {
    if (counts.total() == 0) {
        throw InputError("metrics are undefined over all-zero counts");
    }
    Metrics m;
    const double tp = static_cast<double>(counts.tp);
    m.precision = (counts.tp + counts.fp) > 0 ? tp / static_cast<double>(counts.tp + counts.fp) : 0.0;
    m.recall = (counts.tp + counts.fn) > 0 ? tp / static_cast<double>(counts.tp + counts.fn) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    m.accuracy = static_cast<double>(counts.tp + counts.tn) / static_cast<double>(counts.total());
    return m;
}

namespace {

void count_flag(TypeDistribution& dist, const FlaggedSentence& flag) {
    const std::string& label = flag.resolution.counting_label();
    ++dist.counts[label];
    ++dist.total;
    if (flag.resolution.is_hallucinated()) {
        ++dist.hallucinated[label];
    }
}

} // namespace

TypeDistribution type_distribution(const std::vector<ArticleVerdict>& verdicts) {
    TypeDistribution dist;
    for (const ArticleVerdict& v : verdicts) {
        for (const FlaggedSentence& f : v.flagged) {
            count_flag(dist, f);
        }
    }
    return dist;
}

TypeDistribution type_distribution(const std::vector<SentenceOutcome>& outcomes) {
    TypeDistribution dist;
    for (const SentenceOutcome& row : outcomes) {
        if (row.flag) {
            count_flag(dist, *row.flag);
        }
    }
    return dist;
}

double jsd(const std::map<std::string, long long>& p, const std::map<std::string, long long>& q) {
    long long p_total = 0, q_total = 0;
    for (const auto& [label, n] : p) {
        (void)label;
        p_total += n;
    }
    for (const auto& [label, n] : q) {
        (void)label;
        q_total += n;
    }
    if (p_total <= 0 || q_total <= 0) {
        throw InputError("jsd needs two distributions with positive totals");
    }
    std::set<std::string> labels;
    for (const auto& [label, n] : p) {
        if (n > 0) labels.insert(label);
    }
    for (const auto& [label, n] : q) {
        if (n > 0) labels.insert(label);
    }
    double sum = 0.0;
    for (const std::string& label : labels) {
        auto ip = p.find(label);
        auto iq = q.find(label);
        const double pi =
            ip == p.end() ? 0.0 : static_cast<double>(ip->second) / static_cast<double>(p_total);
        const double qi =
            iq == q.end() ? 0.0 : static_cast<double>(iq->second) / static_cast<double>(q_total);
        const double mi = 0.5 * (pi + qi);
        if (pi > 0.0) {
            sum += 0.5 * pi * std::log2(pi / mi);
        }
        if (qi > 0.0) {
            sum += 0.5 * qi * std::log2(qi / mi);
        }
    }
    return sum;
}

double jsd(const TypeDistribution& p, const TypeDistribution& q) {
    return jsd(p.counts, q.counts);
}

std::vector<SweepPoint> strength_filter_sweep(const std::vector<SentenceOutcome>& outcomes,
                                              const std::vector<double>& thresholds,
                                              bool include_unmatched) {
    for (size_t i = 1; i < thresholds.size(); ++i) {
        if (thresholds[i] <= thresholds[i - 1]) {
            throw InputError("sweep thresholds must be strictly ascending");
        }
    }
    for (const SentenceOutcome& row : outcomes) {
        if ((row.outcome == Outcome::TP || row.outcome == Outcome::FP) && !row.flag) {
            throw InputError("sweep needs an assigned strength on every positive outcome");
        }
    }
    std::vector<SweepPoint> points;
    points.reserve(thresholds.size());
    for (const double t : thresholds) {
        SweepPoint point;
        point.threshold = t;
        ConfusionCounts& c = point.counts;
        for (const SentenceOutcome& row : outcomes) {
            if (row.is_unmatched_flag()) {
                // a dropped extra flag has no gold locus, so it just vanishes
                if (include_unmatched && row.flag->strength >= t) {
                    ++c.fp;
                }
                continue;
            }
            switch (row.outcome) {
            case Outcome::TP:
                row.flag->strength < t ? ++c.fn : ++c.tp;
                break;
            case Outcome::FP:
                row.flag->strength < t ? ++c.tn : ++c.fp;
                break;
            case Outcome::FN: ++c.fn; break;
            case Outcome::TN: ++c.tn; break;
            }
        }
        point.metrics = metrics(point.counts);
        points.push_back(std::move(point));
    }
    return points;
}

std::pair<double, double> tp_fp_strength_gap(const std::vector<SentenceOutcome>& outcomes) {
    double tp_sum = 0.0, fp_sum = 0.0;
    long long tp_n = 0, fp_n = 0;
    for (const SentenceOutcome& row : outcomes) {
        if (!row.flag) {
            continue;
        }
        if (row.outcome == Outcome::TP) {
            tp_sum += row.flag->strength;
            ++tp_n;
        } else if (row.outcome == Outcome::FP) {
            fp_sum += row.flag->strength;
            ++fp_n;
        }
    }
    if (tp_n == 0) {
        throw InputError("strength gap undefined: no true positives");
    }
    if (fp_n == 0) {
        throw InputError("strength gap undefined: no false positives");
    }
    return {tp_sum / static_cast<double>(tp_n), fp_sum / static_cast<double>(fp_n)};
}

std::vector<SentenceOutcome> majority_vote(
    const std::vector<std::vector<SentenceOutcome>>& per_model_outcomes) {
    if (per_model_outcomes.empty()) {
        throw InputError("majority vote needs at least one model");
    }
    // reference gold order from the first model's ledger
    std::vector<const SentenceOutcome*> reference;
    for (const SentenceOutcome& row : per_model_outcomes[0]) {
        if (!row.is_unmatched_flag()) {
            reference.push_back(&row);
        }
    }
    std::vector<std::map<std::string, bool>> votes(per_model_outcomes.size());
    for (size_t m = 0; m < per_model_outcomes.size(); ++m) {
        for (const SentenceOutcome& row : per_model_outcomes[m]) {
            if (!row.is_unmatched_flag()) {
                votes[m][row.gold->origin_id] = row.predicted_biased;
            }
        }
    }
    for (size_t m = 0; m < per_model_outcomes.size(); ++m) {
        std::vector<std::string> missing;
        for (const SentenceOutcome* row : reference) {
            if (!votes[m].count(row->gold->origin_id)) {
                missing.push_back(row->gold->origin_id);
            }
        }
        if (votes[m].size() != reference.size() || !missing.empty()) {
            std::string detail;
            for (size_t i = 0; i < missing.size() && i < 5; ++i) {
                detail += (i ? ", " : " missing: ") + missing[i];
            }
            throw InputError("majority vote needs every model to cover every gold sentence; "
                             "model " +
                             std::to_string(m) + " covers " + std::to_string(votes[m].size()) +
                             " of " + std::to_string(reference.size()) + detail);
        }
    }
    const size_t n_models = per_model_outcomes.size();
    std::vector<SentenceOutcome> ensemble;
    ensemble.reserve(reference.size());
    for (const SentenceOutcome* row : reference) {
        size_t biased_votes = 0;
        for (size_t m = 0; m < n_models; ++m) {
            if (votes[m].at(row->gold->origin_id)) {
                ++biased_votes;
            }
        }
        SentenceOutcome out;
        out.gold = row->gold;
        out.article_id = row->article_id;
        out.predicted_biased = 2 * biased_votes > n_models; // ties stay unbiased
        if (out.gold->label == Label::Biased) {
            out.outcome = out.predicted_biased ? Outcome::TP : Outcome::FN;
        } else {
            out.outcome = out.predicted_biased ? Outcome::FP : Outcome::TN;
        }
        ensemble.push_back(std::move(out));
    }
    return ensemble;
}

std::vector<SentenceOutcome> random_baseline(const std::vector<AnnotatedSentence>& gold, double p,
                                             uint64_t rng_seed,
                                             const std::vector<std::string>& type_universe) {
    if (p < 0.0 || p > 1.0) {
        throw InputError("baseline flag probability must be in [0,1]");
    }
    if (type_universe.empty()) {
        throw InputError("baseline needs a non-empty type universe");
    }
    SeededRng rng(rng_seed);
    std::vector<SentenceOutcome> outcomes;
    outcomes.reserve(gold.size());
    for (const AnnotatedSentence& g : gold) {
        SentenceOutcome row;
        row.gold = g;
        row.article_id = g.article_id;
        row.predicted_biased = rng.chance(p);
        if (row.predicted_biased) {
            FlaggedSentence flag;
            flag.sentence = g.text;
            flag.raw_type = type_universe[rng.below(type_universe.size())];
            flag.resolution.kind = LabelResolution::Kind::Canonical;
            flag.resolution.canonical = flag.raw_type;
            flag.resolution.raw = flag.raw_type;
            flag.strength = rng.real01();
            flag.explanation = "Flagged by the random baseline.";
            row.flag = std::move(flag);
        }
        if (g.label == Label::Biased) {
            row.outcome = row.predicted_biased ? Outcome::TP : Outcome::FN;
        } else {
            row.outcome = row.predicted_biased ? Outcome::FP : Outcome::TN;
        }
        outcomes.push_back(std::move(row));
    }
    return outcomes;
}

TypeAccuracy type_accuracy(const std::vector<SentenceOutcome>& outcomes, int support_floor) {
    TypeAccuracy result;
    result.support_floor = support_floor;
    long long correct_total = 0;
    for (const SentenceOutcome& row : outcomes) {
        if (row.outcome != Outcome::TP || !row.flag || !row.gold || !row.gold->bias_type) {
            continue;
        }
        const std::string& gold_type = *row.gold->bias_type;
        const bool correct = !row.flag->resolution.is_hallucinated() &&
                             row.flag->resolution.canonical == gold_type;
        auto& [n_correct, n_checked] = result.per_type[gold_type];
        n_checked += 1;
        if (correct) {
            n_correct += 1;
            ++correct_total;
        }
        ++result.checked;
    }
    if (result.checked == 0) {
        throw InputError("type accuracy undefined: no typed true positives");
    }
    result.overall = static_cast<double>(correct_total) / static_cast<double>(result.checked);
    for (const auto& [type, counts] : result.per_type) {
        if (counts.second >= support_floor) {
            result.per_type_accuracy[type] =
                static_cast<double>(counts.first) / static_cast<double>(counts.second);
        }
    }
    return result;
}

StrengthDifference strength_difference(const std::vector<SentenceOutcome>& outcomes,
                                       int support_floor) {
    StrengthDifference result;
    result.support_floor = support_floor;
    double sum = 0.0;
    for (const SentenceOutcome& row : outcomes) {
        if (row.outcome != Outcome::TP || !row.flag || !row.gold || !row.gold->strength) {
            continue;
        }
        const double diff = std::fabs(row.flag->strength - *row.gold->strength);
        sum += diff;
        ++result.checked;
        if (row.gold->bias_type) {
            auto& [type_sum, type_n] = result.per_type[*row.gold->bias_type];
            type_sum += diff;
            type_n += 1;
        }
    }
    if (result.checked == 0) {
        throw InputError("strength difference undefined: no true positives with gold strengths");
    }
    result.mean_abs = sum / static_cast<double>(result.checked);
    for (const auto& [type, acc] : result.per_type) {
        if (acc.second >= support_floor) {
            result.per_type_mean[type] = acc.first / static_cast<double>(acc.second);
        }
    }
    return result;
}

namespace {

const char* kind_token(LabelResolution::Kind kind) {
    switch (kind) {
    case LabelResolution::Kind::Canonical: return "canonical";
    case LabelResolution::Kind::Aliased: return "aliased";
    case LabelResolution::Kind::Hallucinated: return "hallucinated";
    }
    return "hallucinated";
}

LabelResolution::Kind parse_kind(const std::string& token) {
    if (token == "canonical") return LabelResolution::Kind::Canonical;
    if (token == "aliased") return LabelResolution::Kind::Aliased;
    if (token == "hallucinated") return LabelResolution::Kind::Hallucinated;
    throw InputError("unknown resolution kind \"" + token + "\"");
}

} // namespace

nlohmann::json outcome_to_json(const SentenceOutcome& outcome) {
    nlohmann::json j{{"article_id", outcome.article_id},
                     {"outcome", to_string(outcome.outcome)},
                     {"predicted_biased", outcome.predicted_biased},
                     {"match_score", outcome.match_score}};
    j["gold"] = outcome.gold ? sentence_to_json(*outcome.gold) : nlohmann::json(nullptr);
    if (outcome.flag) {
        j["flag"] = {{"sentence", outcome.flag->sentence},
                     {"raw_type", outcome.flag->raw_type},
                     {"strength", outcome.flag->strength},
                     {"explanation", outcome.flag->explanation},
                     {"resolution",
                      {{"kind", kind_token(outcome.flag->resolution.kind)},
                       {"canonical", outcome.flag->resolution.canonical},
                       {"raw", outcome.flag->resolution.raw}}}};
    } else {
        j["flag"] = nullptr;
    }
    return j;
}

SentenceOutcome outcome_from_json(const nlohmann::json& j) {
    SentenceOutcome outcome;
    outcome.article_id = j.at("article_id").get<std::string>();
    outcome.outcome = parse_outcome(j.at("outcome").get<std::string>());
    outcome.predicted_biased = j.at("predicted_biased").get<bool>();
    outcome.match_score = j.value("match_score", -1);
    if (j.contains("gold") && !j["gold"].is_null()) {
        outcome.gold = sentence_from_json(j["gold"]);
    }
    if (j.contains("flag") && !j["flag"].is_null()) {
        const nlohmann::json& f = j["flag"];
        FlaggedSentence flag;
        flag.sentence = f.at("sentence").get<std::string>();
        flag.raw_type = f.at("raw_type").get<std::string>();
        flag.strength = f.at("strength").get<double>();
        flag.explanation = f.value("explanation", std::string());
        const nlohmann::json& r = f.at("resolution");
        flag.resolution.kind = parse_kind(r.at("kind").get<std::string>());
        flag.resolution.canonical = r.value("canonical", std::string());
        flag.resolution.raw = r.value("raw", std::string());
        outcome.flag = std::move(flag);
    }
    return outcome;
}

void write_ledger(const std::vector<SentenceOutcome>& outcomes, const std::string& path) {
    std::string out;
    for (const SentenceOutcome& row : outcomes) {
        out += outcome_to_json(row).dump();
        out += '\n';
    }
    util::write_file(path, out);
}

std::vector<SentenceOutcome> load_ledger(const std::string& path) {
    std::vector<SentenceOutcome> outcomes;
    std::vector<std::string> lines = util::read_lines(path);
    for (size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) {
            continue;
        }
        nlohmann::json doc = nlohmann::json::parse(lines[i], nullptr, false);
        if (doc.is_discarded()) {
            throw InputError(path + ":" + std::to_string(i + 1) + ": malformed ledger line");
        }
        try {
            outcomes.push_back(outcome_from_json(doc));
        } catch (const nlohmann::json::exception& e) {
            throw InputError(path + ":" + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return outcomes;
}

} // namespace biaseval
