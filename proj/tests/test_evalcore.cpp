#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "biaseval/evalcore.hpp"

#include "biaseval/modelgw.hpp"
#include "biaseval/util.hpp"

#include "helpers.hpp"

#include <cmath>

using namespace biaseval;

namespace {

FlaggedSentence make_flag(const Taxonomy& tax, std::string text, std::string raw_type,
                          double strength) {
    FlaggedSentence f;
    f.sentence = std::move(text);
    f.raw_type = std::move(raw_type);
    f.resolution = tax.resolve_label(f.raw_type);
    f.strength = strength;
    f.explanation = "test flag";
    return f;
}

// a gold row with an attached prediction, bypassing fuzzy alignment
SentenceOutcome make_row(const Taxonomy& tax, Outcome outcome, double flag_strength,
                         const std::string& flag_type = "Political Bias",
                         const std::string& gold_type = "Political", double gold_strength = 0.5) {
    static int counter = 0;
    SentenceOutcome row;
    AnnotatedSentence gold;
    gold.text = "gold sentence " + std::to_string(counter++);
    gold.label = (outcome == Outcome::TP || outcome == Outcome::FN) ? Label::Biased
                                                                    : Label::Unbiased;
    if (gold.label == Label::Biased) {
        gold.bias_type = gold_type;
        gold.strength = gold_strength;
    }
    gold.origin_id = "manual:" + std::to_string(counter);
    row.gold = gold;
    row.article_id = "a0";
    row.outcome = outcome;
    row.predicted_biased = outcome == Outcome::TP || outcome == Outcome::FP;
    if (row.predicted_biased) {
        row.flag = make_flag(tax, gold.text, flag_type, flag_strength);
        row.match_score = 100;
    }
    return row;
}

SentenceOutcome unmatched_row(const Taxonomy& tax, double strength) {
    SentenceOutcome row;
    row.article_id = "a0";
    row.predicted_biased = true;
    row.outcome = Outcome::FP;
    row.flag = make_flag(tax, "an invented sentence", "Political Bias", strength);
    return row;
}

} // namespace

TEST_CASE("outcome tokens round-trip") {
    for (Outcome o : {Outcome::TP, Outcome::FP, Outcome::FN, Outcome::TN}) {
        CHECK(parse_outcome(to_string(o)) == o);
    }
    CHECK_THROWS_AS(parse_outcome("XX"), InputError);
}

TEST_CASE("aligning an echoed verdict gives a perfect confusion matrix") {
    const Taxonomy tax = testutil::load_default_taxonomy();
    ModelConfig config;
    config.kind = ModelKind::MockEcho;
    ModelGateway gateway(config, tax);

    auto pool = testutil::make_sentences(80, 0.5, 80);
    for (auto& s : pool) {
        if (s.label == Label::Biased) {
            s.bias_type = "Political";
            s.strength = 0.7;
        }
    }
    const auto articles = assemble_articles(pool, 3, 10, 30, "echo");
    for (const auto& article : articles) {
        const auto [verdict, record] = gateway.classify_article(article, PromptConfig{});
        const auto outcomes = align(verdict, article);
        REQUIRE(outcomes.size() == article.sentences.size()); // no unmatched flags
        for (const auto& row : outcomes) {
            REQUIRE(row.gold.has_value());
            if (row.gold->label == Label::Biased) {
                CHECK(row.outcome == Outcome::TP);
                CHECK(row.match_score == 100);
                REQUIRE(row.flag.has_value());
                CHECK(row.flag->sentence == row.gold->text);
            } else {
                CHECK(row.outcome == Outcome::TN);
                CHECK_FALSE(row.flag.has_value());
                CHECK(row.match_score == -1);
            }
        }
        const ConfusionCounts c = confusion(outcomes);
        CHECK(c.tp == static_cast<long long>(article.biased_count()));
        CHECK(c.tn == static_cast<long long>(article.sentences.size() - article.biased_count()));
        CHECK(c.fp == 0);
        CHECK(c.fn == 0);
    }
}

TEST_CASE("an empty verdict yields only misses and correct rejections") {
    const Taxonomy tax = testutil::load_default_taxonomy();
    (void)tax;
    EvalArticle article;
    article.id = "quiet";
    article.sentences = testutil::make_sentences(12, 0.5, 81);
    const auto outcomes = align(ArticleVerdict{}, article);
    REQUIRE(outcomes.size() == article.sentences.size());
    for (const auto& row : outcomes) {
        CHECK_FALSE(row.predicted_biased);
        CHECK(row.outcome ==
              (row.gold->label == Label::Biased ? Outcome::FN : Outcome::TN));
    }
}

TEST_CASE("a clipped quotation still aligns to its gold sentence") {
    const Taxonomy tax = testutil::load_default_taxonomy();
    EvalArticle article;
    article.id = "clip";
    article.sentences = testutil::make_sentences(2, 0.0, 82);
    article.sentences[0].text = "He told reporters the plan failed after the second audit.";
    article.sentences[0].label = Label::Biased;
    article.sentences[1].text = "The festival drew record crowds.";

    ArticleVerdict verdict;
    verdict.flagged = {make_flag(tax, "the plan failed after the second audit", "Political Bias", 0.6)};

    const auto outcomes = align(verdict, article, 80);
    REQUIRE(outcomes.size() == 2);
    CHECK(outcomes[0].outcome == Outcome::TP);
    CHECK(outcomes[0].match_score == 100); // containment after normalization
    CHECK(outcomes[1].outcome == Outcome::TN);
}

TEST_CASE("flags that match nothing become extra false-positive rows") {
    const Taxonomy tax = testutil::load_default_taxonomy();
    EvalArticle article;
    article.id = "extra";
    article.sentences = testutil::make_sentences(3, 0.0, 83);
    article.sentences[0].label = Label::Biased;

    ArticleVerdict verdict;
    verdict.flagged = {make_flag(tax, "a completely invented quotation", "Political Bias", 0.9)};

    const auto outcomes = align(verdict, article, 80);
    REQUIRE(outcomes.size() == 4);
    CHECK(outcomes[0].outcome == Outcome::FN); // the gold biased sentence went unmatched
    CHECK(outcomes[3].is_unmatched_flag());
    CHECK(outcomes[3].outcome == Outcome::FP);
    CHECK(outcomes[3].predicted_biased);
    REQUIRE(outcomes[3].flag.has_value());
    CHECK(outcomes[3].flag->sentence == "a completely invented quotation");

    // strict and raw bookkeeping differ exactly by the unmatched flags
    const ConfusionCounts strict = confusion(outcomes, false);
    const ConfusionCounts raw = confusion(outcomes, true);
    CHECK(strict.total() == 3);
    CHECK(strict.fp == 0);
    CHECK(raw.fp == 1);
    CHECK(raw.total() == 4);
    CHECK(raw.tp == strict.tp);
    CHECK(raw.fn == strict.fn);
    CHECK(raw.tn == strict.tn);
}

TEST_CASE("alignment is one-to-one with the best score winning") {
    const Taxonomy tax = testutil::load_default_taxonomy();
    EvalArticle article;
    article.id = "dupes";
    article.sentences = testutil::make_sentences(2, 1.0, 84);
    article.sentences[0].text = "The ministry announced the budget.";
    article.sentences[1].text = "The ministry announced the budget!";

    ArticleVerdict verdict;
    verdict.flagged = {make_flag(tax, "The ministry announced the budget.", "Political Bias", 0.5),
                       make_flag(tax, "The ministry announced the budget.", "Political Bias", 0.5)};

    const auto outcomes = align(verdict, article, 80);
    REQUIRE(outcomes.size() == 2); // both flags found a home
    CHECK(outcomes[0].outcome == Outcome::TP);
    CHECK(outcomes[0].match_score == 100);
    CHECK(outcomes[1].outcome == Outcome::TP);
    CHECK(outcomes[1].match_score < 100); // the near-duplicate got the weaker score
    CHECK(outcomes[1].match_score > 80);

    // a single flag can satisfy only one of the two
    verdict.flagged.pop_back();
    const auto partial = align(verdict, article, 80);
    CHECK(partial[0].outcome == Outcome::TP);
    CHECK(partial[1].outcome == Outcome::FN);
}

TEST_CASE("the alignment threshold is strict") {
    const Taxonomy tax = testutil::load_default_taxonomy();
    EvalArticle article;
    article.id = "strict";
    article.sentences = testutil::make_sentences(1, 1.0, 85);

    ArticleVerdict verdict;
    verdict.flagged = {make_flag(tax, article.sentences[0].text, "Political Bias", 0.5)};

    // an exact copy scores 100, which is not strictly above 100
    const auto at_cap = align(verdict, article, 100);
    REQUIRE(at_cap.size() == 2);
    CHECK(at_cap[0].outcome == Outcome::FN);
    CHECK(at_cap[1].is_unmatched_flag());

    const auto normal = align(verdict, article, 99);
    REQUIRE(normal.size() == 1);
    CHECK(normal[0].outcome == Outcome::TP);
}

TEST_CASE("published-style confusion rows reproduce their metrics") {
    // frozen reference values, tolerance one part in a thousand
    {
        const ConfusionCounts c{576, 214, 154, 524};
        const Metrics m = metrics(c);
        CHECK(m.f1 == doctest::Approx(0.758).epsilon(0.0015));
        CHECK(m.recall == doctest::Approx(0.790).epsilon(0.0015));
        CHECK(m.precision == doctest::Approx(0.729).epsilon(0.0015));
        CHECK(m.accuracy == doctest::Approx(0.749).epsilon(0.0015));
    }
    {
        const ConfusionCounts c{366, 489, 457, 2818};
        const Metrics m = metrics(c);
        CHECK(m.f1 == doctest::Approx(0.436).epsilon(0.0015));
        CHECK(m.recall == doctest::Approx(0.445).epsilon(0.0015));
        CHECK(m.precision == doctest::Approx(0.429).epsilon(0.0015));
        CHECK(m.accuracy == doctest::Approx(0.771).epsilon(0.0015));
    }
}

TEST_CASE("metric edge cases stay defined except the empty matrix") {
    const Metrics all_tn = metrics(ConfusionCounts{0, 0, 0, 10});
    CHECK(all_tn.precision == 0.0);
    CHECK(all_tn.recall == 0.0);
    CHECK(all_tn.f1 == 0.0);
    CHECK(all_tn.accuracy == 1.0);

    const Metrics all_fp = metrics(ConfusionCounts{0, 5, 0, 0});
    CHECK(all_fp.precision == 0.0);
    CHECK(all_fp.accuracy == 0.0);

    const Metrics perfect = metrics(ConfusionCounts{7, 0, 0, 3});
    CHECK(perfect.precision == 1.0);
    CHECK(perfect.recall == 1.0);
    CHECK(perfect.f1 == 1.0);
    CHECK(perfect.accuracy == 1.0);

    CHECK_THROWS_AS(metrics(ConfusionCounts{}), InputError);
}

TEST_CASE("type tallies agree between verdicts and ledger rows") {
    const Taxonomy tax = testutil::load_default_taxonomy();

    ArticleVerdict verdict;
    verdict.flagged = {make_flag(tax, "s1", "Word Choice Bias", 0.5),
                       make_flag(tax, "s2", "Loaded Language Bias", 0.5), // alias of Word Choice
                       make_flag(tax, "s3", "Political Bias", 0.5),
                       make_flag(tax, "s4", "Quantum Vibe Bias", 0.5)};

    const TypeDistribution from_verdicts = type_distribution(std::vector<ArticleVerdict>{verdict});
    CHECK(from_verdicts.total == 4);
    CHECK(from_verdicts.counts.at("Word Choice") == 2);
    CHECK(from_verdicts.counts.at("Political") == 1);
    CHECK(from_verdicts.counts.at("Quantum Vibe Bias") == 1);
    REQUIRE(from_verdicts.hallucinated.size() == 1);
    CHECK(from_verdicts.hallucinated.at("Quantum Vibe Bias") == 1);

    // route the same verdict through alignment; nothing matches the gold
    // text, so every flag survives as an unmatched row and the tally agrees
    EvalArticle article;
    article.id = "tally";
    article.sentences = testutil::make_sentences(2, 0.5, 86);
    const auto outcomes = align(verdict, article, 80);
    const TypeDistribution from_rows = type_distribution(outcomes);
    CHECK(from_rows.counts == from_verdicts.counts);
    CHECK(from_rows.hallucinated == from_verdicts.hallucinated);
    CHECK(from_rows.total == from_verdicts.total);
}

TEST_CASE("jensen-shannon divergence matches the frozen oracle value") {
    const std::map<std::string, long long> p{{"a", 3}, {"b", 1}};
    const std::map<std::string, long long> q{{"a", 1}, {"b", 3}};
    CHECK(jsd(p, q) == doctest::Approx(0.18872187554086717).epsilon(1e-12));
}

TEST_CASE("jensen-shannon divergence properties") {
    const std::map<std::string, long long> p{{"a", 5}, {"b", 2}, {"c", 9}};
    CHECK(jsd(p, p) == 0.0);

    // identical shapes at different scales are the same distribution
    const std::map<std::string, long long> scaled{{"a", 50}, {"b", 20}, {"c", 90}};
    CHECK(jsd(p, scaled) == 0.0);

    // disjoint supports sit at the top of the range
    CHECK(jsd({{"a", 4}}, {{"b", 9}}) == doctest::Approx(1.0).epsilon(1e-12));

    SeededRng rng(87);
    const std::vector<std::string> labels{"a", "b", "c", "d", "e"};
    for (int i = 0; i < 500; ++i) {
        std::map<std::string, long long> x, y;
        for (const auto& label : labels) {
            if (rng.chance(0.7)) x[label] = rng.int_in(1, 40);
            if (rng.chance(0.7)) y[label] = rng.int_in(1, 40);
        }
        if (x.empty()) x["a"] = 1;
        if (y.empty()) y["b"] = 1;
        const double forward = jsd(x, y);
        CHECK(forward == doctest::Approx(jsd(y, x)).epsilon(1e-12));
        CHECK(forward >= 0.0);
        CHECK(forward <= 1.0 + 1e-12);
    }

    CHECK_THROWS_AS(jsd({}, p), InputError);
    CHECK_THROWS_AS(jsd(p, {{"a", 0}}), InputError);

    TypeDistribution dp, dq;
    dp.counts = {{"a", 3}, {"b", 1}};
    dp.total = 4;
    dq.counts = {{"a", 1}, {"b", 3}};
    dq.total = 4;
    CHECK(jsd(dp, dq) == jsd(dp.counts, dq.counts));
}

TEST_CASE("strength filtering flips weak positives and reports clean curves") {
    const Taxonomy tax = testutil::load_default_taxonomy();
    std::vector<SentenceOutcome> rows;
    // TPs at strengths .2 .4 .6 .8, FPs at .3 .5, plus fixed FN and TNs
    for (double s : {0.2, 0.4, 0.6, 0.8}) {
        rows.push_back(make_row(tax, Outcome::TP, s));
    }
    for (double s : {0.3, 0.5}) {
        rows.push_back(make_row(tax, Outcome::FP, s));
    }
    rows.push_back(make_row(tax, Outcome::FN, 0.0));
    rows.push_back(make_row(tax, Outcome::TN, 0.0));
    rows.push_back(make_row(tax, Outcome::TN, 0.0));
    rows.push_back(unmatched_row(tax, 0.45));

    const auto points = strength_filter_sweep(rows, kDefaultSweepGrid);
    REQUIRE(points.size() == 9);

    // at t = 0.1 nothing is filtered; totals cover the nine gold rows
    CHECK(points[0].counts == ConfusionCounts{4, 2, 1, 2});
    // at t = 0.5: TPs .2/.4 flip to FN, FP .3 flips to TN, FP .5 stays (>= t)
    CHECK(points[4].counts == ConfusionCounts{2, 1, 3, 3});
    // past every strength only the fixed negatives remain
    CHECK(points[8].counts == ConfusionCounts{0, 0, 5, 4});

    for (size_t i = 0; i < points.size(); ++i) {
        CHECK(points[i].counts.total() == 9); // gold bookkeeping never leaks rows
        if (i > 0) {
            CHECK(points[i].counts.tp <= points[i - 1].counts.tp);
            CHECK(points[i].counts.fp <= points[i - 1].counts.fp);
            CHECK(points[i].metrics.recall <= points[i - 1].metrics.recall);
        }
    }

    // raw bookkeeping keeps the unmatched flag while its strength survives
    const auto raw = strength_filter_sweep(rows, kDefaultSweepGrid, true);
    CHECK(raw[0].counts.fp == 3);
    CHECK(raw[0].counts.total() == 10);
    CHECK(raw[3].counts.fp == 2);  // the 0.3 FP flipped, the 0.45 unmatched flag survives
    CHECK(raw[4].counts.fp == 1);  // at 0.5 the unmatched flag vanishes too
    CHECK(raw[4].counts.total() == 9);

    CHECK_THROWS_AS(strength_filter_sweep(rows, {0.5, 0.5}), InputError);
    CHECK_THROWS_AS(strength_filter_sweep(rows, {0.5, 0.4}), InputError);

    // positives without an attached flag cannot be swept
    std::vector<SentenceOutcome> broken = rows;
    broken[0].flag.reset();
    CHECK_THROWS_AS(strength_filter_sweep(broken, kDefaultSweepGrid), InputError);
}

TEST_CASE("sweeping at the extremes reproduces identity and zero recall") {
    const Taxonomy tax = testutil::load_default_taxonomy();
    std::vector<SentenceOutcome> rows;
    for (double s : {0.15, 0.55, 0.95}) {
        rows.push_back(make_row(tax, Outcome::TP, s));
        rows.push_back(make_row(tax, Outcome::FP, s));
    }
    rows.push_back(make_row(tax, Outcome::TN, 0.0));

    const auto identity = strength_filter_sweep(rows, {0.0});
    CHECK(identity[0].counts == confusion(rows));

    const auto wipe = strength_filter_sweep(rows, {1.01});
    CHECK(wipe[0].counts.tp == 0);
    CHECK(wipe[0].counts.fp == 0);
    CHECK(wipe[0].metrics.recall == 0.0);
}

TEST_CASE("the strength gap separates true from false positives") {
    const Taxonomy tax = testutil::load_default_taxonomy();
    std::vector<SentenceOutcome> rows;
    rows.push_back(make_row(tax, Outcome::TP, 0.9));
    rows.push_back(make_row(tax, Outcome::TP, 0.7));
    rows.push_back(make_row(tax, Outcome::FP, 0.2));
    rows.push_back(make_row(tax, Outcome::FP, 0.4));
    rows.push_back(make_row(tax, Outcome::TN, 0.0));
    rows.push_back(unmatched_row(tax, 0.6)); // unmatched FPs count toward the FP mean

    const auto [tp_mean, fp_mean] = tp_fp_strength_gap(rows);
    CHECK(tp_mean == doctest::Approx(0.8));
    CHECK(fp_mean == doctest::Approx((0.2 + 0.4 + 0.6) / 3.0));
    CHECK(tp_mean > fp_mean);

    std::vector<SentenceOutcome> no_tp{make_row(tax, Outcome::FP, 0.5)};
    CHECK_THROWS_WITH_AS(tp_fp_strength_gap(no_tp), doctest::Contains("true positives"),
                         InputError);
    std::vector<SentenceOutcome> no_fp{make_row(tax, Outcome::TP, 0.5)};
    CHECK_THROWS_WITH_AS(tp_fp_strength_gap(no_fp), doctest::Contains("false positives"),
                         InputError);
}

TEST_CASE("majority vote flips sentences only with a strict majority") {
    const Taxonomy tax = testutil::load_default_taxonomy();

    // four gold sentences: two biased, two unbiased
    std::vector<AnnotatedSentence> gold = testutil::make_sentences(4, 0.0, 88);
    gold[0].label = Label::Biased;
    gold[1].label = Label::Biased;

    auto model_with_votes = [&](const std::vector<bool>& votes) {
        std::vector<SentenceOutcome> rows;
        for (size_t i = 0; i < gold.size(); ++i) {
            SentenceOutcome row;
            row.gold = gold[i];
            row.article_id = "a0";
            row.predicted_biased = votes[i];
            if (votes[i]) {
                row.flag = make_flag(tax, gold[i].text, "Political Bias", 0.5);
            }
            row.outcome = gold[i].label == Label::Biased
                              ? (votes[i] ? Outcome::TP : Outcome::FN)
                              : (votes[i] ? Outcome::FP : Outcome::TN);
            rows.push_back(row);
        }
        return rows;
    };

    // sentence 0: 2/3 yes; sentence 1: 1/3 yes; sentence 2: 3/3 yes; sentence 3: 0/3
    const auto ensemble = majority_vote({model_with_votes({true, true, true, false}),
                                         model_with_votes({true, false, true, false}),
                                         model_with_votes({false, false, true, false})});
    REQUIRE(ensemble.size() == 4);
    CHECK(ensemble[0].outcome == Outcome::TP);
    CHECK(ensemble[1].outcome == Outcome::FN);
    CHECK(ensemble[2].outcome == Outcome::FP);
    CHECK(ensemble[3].outcome == Outcome::TN);
    for (size_t i = 0; i < 4; ++i) {
        CHECK(ensemble[i].gold->origin_id == gold[i].origin_id); // model-0 order kept
    }

    // an even split is not a strict majority, so ties stay unbiased
    const auto tied = majority_vote({model_with_votes({true, true, false, false}),
                                     model_with_votes({true, false, false, false}),
                                     model_with_votes({false, true, false, false}),
                                     model_with_votes({false, false, false, false})});
    CHECK(tied[0].outcome == Outcome::FN); // 2 of 4 votes
    CHECK(tied[1].outcome == Outcome::FN);

    // voting a single model against itself changes nothing
    const auto base = model_with_votes({true, false, true, false});
    const auto solo = majority_vote({base});
    for (size_t i = 0; i < 4; ++i) {
        CHECK(solo[i].outcome == base[i].outcome);
    }

    // unmatched flags are passengers, never voters
    auto with_extra = model_with_votes({true, true, false, false});
    with_extra.push_back(unmatched_row(tax, 0.9));
    const auto cleaned = majority_vote({with_extra, with_extra, with_extra});
    CHECK(cleaned.size() == 4);

    // a model missing a gold sentence is rejected loudly
    auto short_model = model_with_votes({true, true, true, false});
    short_model.pop_back();
    try {
        majority_vote({model_with_votes({true, true, true, false}), short_model});
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find(gold[3].origin_id) != std::string::npos);
    }

    CHECK_THROWS_AS(majority_vote({}), InputError);
}

TEST_CASE("the random baseline flips coins per sentence, reproducibly") {
    auto gold = testutil::make_sentences(400, 0.5, 89);
    const std::vector<std::string> universe{"Political", "Word Choice", "Opinionated"};

    const auto never = random_baseline(gold, 0.0, 1, universe);
    for (const auto& row : never) {
        CHECK_FALSE(row.predicted_biased);
        CHECK_FALSE(row.flag.has_value());
    }
    const ConfusionCounts never_counts = confusion(never);
    CHECK(never_counts.tp == 0);
    CHECK(never_counts.fp == 0);

    const auto always = random_baseline(gold, 1.0, 1, universe);
    for (const auto& row : always) {
        CHECK(row.predicted_biased);
        REQUIRE(row.flag.has_value());
        CHECK(row.flag->strength >= 0.0);
        CHECK(row.flag->strength < 1.0);
        const bool known = std::find(universe.begin(), universe.end(),
                                     row.flag->resolution.canonical) != universe.end();
        CHECK(known);
    }
    const ConfusionCounts always_counts = confusion(always);
    CHECK(always_counts.fn == 0);
    CHECK(always_counts.tn == 0);
    CHECK(always_counts.tp + always_counts.fp == 400);

    // reproducible per seed, different across seeds
    const auto a = random_baseline(gold, 0.5, 7, universe);
    const auto b = random_baseline(gold, 0.5, 7, universe);
    REQUIRE(a.size() == b.size());
    int differences = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].predicted_biased == b[i].predicted_biased);
        CHECK(a[i].outcome == b[i].outcome);
    }
    const auto c = random_baseline(gold, 0.5, 8, universe);
    for (size_t i = 0; i < a.size(); ++i) {
        differences += a[i].predicted_biased != c[i].predicted_biased;
    }
    CHECK(differences > 0);

    // the flag rate concentrates around p
    long long flagged = 0;
    for (const auto& row : a) {
        flagged += row.predicted_biased ? 1 : 0;
    }
    CHECK(flagged > 140);
    CHECK(flagged < 260);

    CHECK_THROWS_AS(random_baseline(gold, 1.5, 1, universe), InputError);
    CHECK_THROWS_AS(random_baseline(gold, 0.5, 1, {}), InputError);
}

TEST_CASE("type accuracy scores only typed true positives, with a support floor") {
    const Taxonomy tax = testutil::load_default_taxonomy();
    std::vector<SentenceOutcome> rows;
    // Political gold: 3 correct, 1 wrong prediction
    for (int i = 0; i < 3; ++i) {
        rows.push_back(make_row(tax, Outcome::TP, 0.6, "Political Bias", "Political"));
    }
    rows.push_back(make_row(tax, Outcome::TP, 0.6, "Word Choice Bias", "Political"));
    // Opinionated gold: 1 wrong (hallucinated prediction counts as wrong)
    rows.push_back(make_row(tax, Outcome::TP, 0.6, "Glitter Bias", "Opinionated"));
    // an aliased prediction resolving to the gold type counts as correct
    rows.push_back(make_row(tax, Outcome::TP, 0.6, "Loaded Language Bias", "Word Choice"));
    // non-TP rows and untyped gold are ignored
    rows.push_back(make_row(tax, Outcome::FP, 0.6));
    rows.push_back(make_row(tax, Outcome::FN, 0.0));
    {
        SentenceOutcome untyped = make_row(tax, Outcome::TP, 0.6);
        untyped.gold->bias_type.reset();
        rows.push_back(untyped);
    }

    const TypeAccuracy acc = type_accuracy(rows, 2);
    CHECK(acc.checked == 6);
    CHECK(acc.overall == doctest::Approx(4.0 / 6.0));
    CHECK(acc.per_type.at("Political") == std::pair<long long, long long>{3, 4});
    CHECK(acc.per_type.at("Opinionated") == std::pair<long long, long long>{0, 1});
    CHECK(acc.per_type.at("Word Choice") == std::pair<long long, long long>{1, 1});
    // floor 2: only Political clears it
    REQUIRE(acc.per_type_accuracy.size() == 1);
    CHECK(acc.per_type_accuracy.at("Political") == doctest::Approx(0.75));

    CHECK_THROWS_AS(type_accuracy({make_row(tax, Outcome::TN, 0.0)}), InputError);
}

TEST_CASE("strength difference averages absolute gaps on true positives") {
    const Taxonomy tax = testutil::load_default_taxonomy();
    std::vector<SentenceOutcome> rows;
    rows.push_back(make_row(tax, Outcome::TP, 0.9, "Political Bias", "Political", 0.5));  // |d| = 0.4
    rows.push_back(make_row(tax, Outcome::TP, 0.3, "Political Bias", "Political", 0.5));  // |d| = 0.2
    rows.push_back(make_row(tax, Outcome::TP, 0.5, "Political Bias", "Opinionated", 0.8)); // 0.3
    rows.push_back(make_row(tax, Outcome::FP, 0.9));
    {
        SentenceOutcome no_gold_strength = make_row(tax, Outcome::TP, 0.6);
        no_gold_strength.gold->strength.reset();
        rows.push_back(no_gold_strength);
    }

    const StrengthDifference diff = strength_difference(rows, 2);
    CHECK(diff.checked == 3);
    CHECK(diff.mean_abs == doctest::Approx((0.4 + 0.2 + 0.3) / 3.0));
    REQUIRE(diff.per_type_mean.size() == 1); // only Political has 2+ samples
    CHECK(diff.per_type_mean.at("Political") == doctest::Approx(0.3));

    CHECK_THROWS_AS(strength_difference({make_row(tax, Outcome::FN, 0.0)}), InputError);
}

TEST_CASE("ledger rows survive a json round-trip byte for byte") {
    const Taxonomy tax = testutil::load_default_taxonomy();
    std::vector<SentenceOutcome> rows;
    rows.push_back(make_row(tax, Outcome::TP, 0.8));
    rows.push_back(make_row(tax, Outcome::FN, 0.0));
    rows.push_back(make_row(tax, Outcome::TN, 0.0));
    rows.push_back(make_row(tax, Outcome::TP, 0.6, "Glitter Bias", "Political"));
    rows.push_back(unmatched_row(tax, 0.95));

    for (const auto& row : rows) {
        const nlohmann::json j = outcome_to_json(row);
        const SentenceOutcome back = outcome_from_json(j);
        CHECK(outcome_to_json(back).dump() == j.dump());
        CHECK(back.is_unmatched_flag() == row.is_unmatched_flag());
        CHECK(back.outcome == row.outcome);
        CHECK(back.match_score == row.match_score);
        if (row.flag) {
            CHECK(back.flag->resolution.kind == row.flag->resolution.kind);
            CHECK(back.flag->resolution.raw == row.flag->resolution.raw);
        }
    }

    testutil::TempDir dir("ledger");
    const std::string path = dir.path("rows.jsonl");
    write_ledger(rows, path);
    const auto loaded = load_ledger(path);
    REQUIRE(loaded.size() == rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(outcome_to_json(loaded[i]).dump() == outcome_to_json(rows[i]).dump());
    }

    // rewriting the loaded ledger is byte-stable
    const std::string again = dir.path("rows2.jsonl");
    write_ledger(loaded, again);
    CHECK(util::read_file(path) == util::read_file(again));

    util::write_file(dir.path("bad.jsonl"), "{\"article_id\": 5}\n");
    CHECK_THROWS_AS(load_ledger(dir.path("bad.jsonl")), InputError);
    util::write_file(dir.path("junk.jsonl"), "not json\n");
    try {
        load_ledger(dir.path("junk.jsonl"));
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find(":1") != std::string::npos);
    }
}
