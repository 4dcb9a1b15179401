#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "biaseval/corpus.hpp"
#include "biaseval/promptkit.hpp"

namespace biaseval {

enum class Outcome { TP, FP, FN, TN };

std::string to_string(Outcome outcome);
Outcome parse_outcome(std::string_view token);

/// One ledger row. Rows with a gold sentence book-keep that sentence; rows
/// without one record an extra flagged sentence that aligned to no gold
/// sentence (always an FP event).
struct SentenceOutcome {
    std::optional<AnnotatedSentence> gold;
    bool predicted_biased = false;
    std::optional<FlaggedSentence> flag; // the aligned or unmatched prediction
    Outcome outcome = Outcome::TN;
    std::string article_id;
    int match_score = -1; // fuzzy score of the alignment, -1 when none

    bool is_unmatched_flag() const { return !gold.has_value(); }
};

struct ConfusionCounts {
    long long tp = 0;
    long long fp = 0;
    long long fn = 0;
    long long tn = 0;

    long long total() const { return tp + fp + fn + tn; }
    bool operator==(const ConfusionCounts&) const = default;
};

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
};

struct TypeDistribution {
    std::map<std::string, long long> counts;       // canonical or verbatim hallucinated label
    std::map<std::string, long long> hallucinated; // verbatim label -> count, subset of counts
    long long total = 0;
};

struct SweepPoint {
    double threshold = 0.0;
    ConfusionCounts counts;
    Metrics metrics;
};

/// Fig-1-style grid 0.1 .. 0.9.
extern const std::vector<double> kDefaultSweepGrid;

/// Matches flagged sentences one-to-one onto gold sentences by best fuzzy
/// score (ties broken by gold order, then flag order); a pair aligns only
/// above the threshold. Gold sentences then book-keep TP/FN/FP/TN; leftover
/// flags become unmatched FP rows.
std::vector<SentenceOutcome> align(const ArticleVerdict& verdict, const EvalArticle& article,
                                   int threshold = 80);

/// Tallies outcomes. Strict sentence bookkeeping skips unmatched-flag rows
/// so per-corpus totals equal the gold sentence count; the raw variant adds
/// them to fp.
ConfusionCounts confusion(const std::vector<SentenceOutcome>& outcomes,
                          bool include_unmatched = false);

/// precision, recall, f1, accuracy; throws on all-zero counts.
Metrics metrics(const ConfusionCounts& counts);

TypeDistribution type_distribution(const std::vector<ArticleVerdict>& verdicts);
/// Same tally from ledger rows; every flagged sentence appears on exactly
/// one row, so totals agree with the verdict-level tally.
TypeDistribution type_distribution(const std::vector<SentenceOutcome>& outcomes);

/// Jensen-Shannon divergence, base-2 logs, over the union support of the
/// two count maps normalized to probabilities. Throws on a zero total.
double jsd(const std::map<std::string, long long>& p, const std::map<std::string, long long>& q);
double jsd(const TypeDistribution& p, const TypeDistribution& q);

/// For each threshold t, positives with assigned strength < t flip to
/// negatives (TP to FN, FP to TN, unmatched flags vanish) and metrics are
/// recomputed.
std::vector<SweepPoint> strength_filter_sweep(const std::vector<SentenceOutcome>& outcomes,
                                              const std::vector<double>& thresholds,
                                              bool include_unmatched = false);

/// Mean assigned strength over TPs and over FPs; throws naming the class
/// that is empty.
std::pair<double, double> tp_fp_strength_gap(const std::vector<SentenceOutcome>& outcomes);

/// Ensemble over per-model ledgers covering the same gold sentences: biased
/// iff strictly more than half the models flagged the sentence; ties mean
/// unbiased. Unmatched-flag rows do not vote.
std::vector<SentenceOutcome> majority_vote(
    const std::vector<std::vector<SentenceOutcome>>& per_model_outcomes);

/// Flags each gold sentence independently with probability p, assigning a
/// uniformly random type from the given universe and a uniform strength.
std::vector<SentenceOutcome> random_baseline(const std::vector<AnnotatedSentence>& gold, double p,
                                             uint64_t rng_seed,
                                             const std::vector<std::string>& type_universe);

struct TypeAccuracy {
    double overall = 0.0;
    long long checked = 0;                                         // TPs with a typed gold
    std::map<std::string, std::pair<long long, long long>> per_type; // gold type -> (correct, n)
    std::map<std::string, double> per_type_accuracy;               // only types with n >= floor
    int support_floor = 12;
};

/// Over TP rows with typed gold: fraction whose resolved predicted type
/// equals the gold type. Throws when no such row exists.
TypeAccuracy type_accuracy(const std::vector<SentenceOutcome>& outcomes, int support_floor = 12);

struct StrengthDifference {
    double mean_abs = 0.0;
    long long checked = 0;
    std::map<std::string, std::pair<double, long long>> per_type; // gold type -> (sum |d|, n)
    std::map<std::string, double> per_type_mean;                  // only types with n >= floor
    int support_floor = 5;
};

/// Mean |predicted - gold| strength over TP rows carrying both strengths.
StrengthDifference strength_difference(const std::vector<SentenceOutcome>& outcomes,
                                       int support_floor = 5);

nlohmann::json outcome_to_json(const SentenceOutcome& outcome);
SentenceOutcome outcome_from_json(const nlohmann::json& j);

/// JSON-lines ledger, one SentenceOutcome per line; the full analysis stage
/// replays from this file alone.
void write_ledger(const std::vector<SentenceOutcome>& outcomes, const std::string& path);
std::vector<SentenceOutcome> load_ledger(const std::string& path);

} // namespace biaseval
