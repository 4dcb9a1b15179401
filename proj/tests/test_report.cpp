#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "biaseval/report.hpp"

#include "biaseval/util.hpp"

#include "helpers.hpp"

#include <regex>

using namespace biaseval;

namespace {

MetricsRow row_from_counts(const std::string& name, long long tp, long long fp, long long fn,
                           long long tn) {
    MetricsRow row;
    row.model_name = name;
    row.counts = ConfusionCounts{tp, fp, fn, tn};
    row.metrics = metrics(row.counts);
    return row;
}

} // namespace

TEST_CASE("metrics tables bold the per-column best and round-trip via csv") {
    testutil::TempDir dir("metrics");
    std::vector<MetricsRow> rows;
    rows.push_back(row_from_counts("strong-model", 576, 214, 154, 524));
    rows.push_back(row_from_counts("weak-model", 366, 489, 457, 2818));
    rows.push_back(row_from_counts("middling", 400, 300, 330, 438));

    const std::string csv_path = dir.path("metrics.csv");
    const std::string md_path = dir.path("metrics.md");
    emit_metrics_table(rows, csv_path, md_path);

    const std::string csv = util::read_file(csv_path);
    CHECK(csv.rfind("model,tp,fp,fn,tn,f1,recall,precision,accuracy\n", 0) == 0);
    CHECK(csv.find("strong-model,576,214,154,524,0.758,0.789,0.729,0.749\n") !=
          std::string::npos);
    CHECK(csv.find("**") == std::string::npos); // bolding never leaks into csv

    const std::string md = util::read_file(md_path);
    // the strong model owns f1/recall/precision, the weak one accuracy
    CHECK(md.find("| strong-model | 576 | 214 | 154 | 524 | **0.758** | **0.789** | "
                  "**0.729** | 0.749 |") != std::string::npos);
    CHECK(md.find("**0.771**") != std::string::npos);
    CHECK(md.find("| middling | 400 | 300 | 330 | 438 | 0.559 |") != std::string::npos);

    const auto loaded = load_metrics_table(csv_path);
    REQUIRE(loaded.size() == rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(loaded[i].model_name == rows[i].model_name);
        CHECK(loaded[i].counts == rows[i].counts);
        // metric cells come back at the emitted 3-decimal rounding
        CHECK(loaded[i].metrics.f1 == doctest::Approx(rows[i].metrics.f1).epsilon(0.001));
        CHECK(loaded[i].metrics.accuracy ==
              doctest::Approx(rows[i].metrics.accuracy).epsilon(0.001));
    }

    CHECK_THROWS_AS(emit_metrics_table({}, csv_path, md_path), InputError);

    util::write_file(dir.path("short.csv"), "model,tp\nx,1\n");
    CHECK_THROWS_AS(load_metrics_table(dir.path("short.csv")), InputError);
    util::write_file(dir.path("bad.csv"),
                     "model,tp,fp,fn,tn,f1,recall,precision,accuracy\nx,a,0,0,0,0,0,0,0\n");
    CHECK_THROWS_AS(load_metrics_table(dir.path("bad.csv")), InputError);
}

TEST_CASE("ties at the displayed rounding share the bold marker") {
    testutil::TempDir dir("ties");
    // identical counts, so every metric ties across both rows
    std::vector<MetricsRow> rows;
    rows.push_back(row_from_counts("twin-a", 50, 10, 20, 80));
    rows.push_back(row_from_counts("twin-b", 50, 10, 20, 80));
    emit_metrics_table(rows, dir.path("m.csv"), dir.path("m.md"));
    const std::string md = util::read_file(dir.path("m.md"));
    const std::regex bold_marker("\\*\\*");
    const size_t bold_cells =
        static_cast<size_t>(std::distance(std::sregex_iterator(md.begin(), md.end(),
                                                               bold_marker),
                                          std::sregex_iterator())) /
        2;
    CHECK(bold_cells == 8); // four metric columns in both rows

    // a single row never gets decoration
    emit_metrics_table({rows[0]}, dir.path("solo.csv"), dir.path("solo.md"));
    CHECK(util::read_file(dir.path("solo.md")).find("**") == std::string::npos);
}

TEST_CASE("type tables filter display labels but not the divergence row") {
    testutil::TempDir dir("types");

    TypeColumn finetuned;
    finetuned.model_name = "tuned";
    finetuned.dist.counts = {{"Word Choice", 240}, {"Spin", 130}, {"Cherry Picking", 40}};
    finetuned.dist.total = 410;
    TypeColumn baseline;
    baseline.model_name = "base";
    baseline.dist.counts = {{"Word Choice", 180}, {"Spin", 90}, {"Moon Bias", 120}};
    baseline.dist.hallucinated = {{"Moon Bias", 120}};
    baseline.dist.total = 390;
    baseline.jsd_vs_finetune = jsd(baseline.dist, finetuned.dist);

    emit_type_table({finetuned, baseline}, dir.path("t.csv"), dir.path("t.md"), 100);
    const std::string csv = util::read_file(dir.path("t.csv"));
    const std::string md = util::read_file(dir.path("t.md"));

    // shown: Word Choice (240 and 180 > 100), Moon Bias (120 > 100);
    // hidden: Spin (both <= 100... 130 > 100, so shown), Cherry Picking (40)
    CHECK(csv.find("Word Choice,240,180\n") != std::string::npos);
    CHECK(csv.find("Spin,130,90\n") != std::string::npos);
    CHECK(csv.find("Moon Bias,0,120\n") != std::string::npos);
    CHECK(csv.find("Cherry Picking") == std::string::npos);

    // ordering: combined totals Word Choice 420 > Spin 220 > Moon Bias 120
    CHECK(csv.find("Word Choice") < csv.find("Spin,"));
    CHECK(csv.find("Spin,") < csv.find("Moon Bias"));

    CHECK(csv.find("identified_total,410,390\n") != std::string::npos);
    CHECK(csv.find("hallucinated_total,0,120\n") != std::string::npos);

    // the JSD row uses the full distributions even though a label was hidden
    const std::string expected = util::format_fixed(*baseline.jsd_vs_finetune, 3);
    CHECK(csv.find("jsd_base2_vs_finetune,," + expected + "\n") != std::string::npos);
    CHECK(md.find("| JSD (base 2, vs fine-tune set) | - | " + expected + " |") !=
          std::string::npos);

    // a tighter filter hides everything except the summary block
    emit_type_table({finetuned, baseline}, dir.path("t2.csv"), dir.path("t2.md"), 1000);
    const std::string tight = util::read_file(dir.path("t2.csv"));
    CHECK(tight.find("Word Choice") == std::string::npos);
    CHECK(tight.find("identified_total,410,390\n") != std::string::npos);
}

TEST_CASE("hallucination reports are long-format, sorted and csv-safe") {
    testutil::TempDir dir("hall");
    TypeColumn clean;
    clean.model_name = "clean";
    TypeColumn messy;
    messy.model_name = "messy";
    messy.dist.hallucinated = {{"Moods, Bad", 4}, {"Alpha Bias", 9}, {"Zeta Bias", 9}};

    emit_hallucinations({clean, messy}, dir.path("h.csv"));
    const std::string csv = util::read_file(dir.path("h.csv"));
    CHECK(csv.rfind("model,label,count\n", 0) == 0);
    // count descending, then label ascending for equal counts
    CHECK(csv.find("messy,Alpha Bias,9\n") < csv.find("messy,Zeta Bias,9\n"));
    CHECK(csv.find("messy,Zeta Bias,9\n") < csv.find("messy,\"Moods, Bad\",4\n"));
    CHECK(csv.find("clean,") == std::string::npos); // nothing to report

    // comma-free output with no hallucinations anywhere stays header-only
    emit_hallucinations({clean}, dir.path("empty.csv"));
    CHECK(util::read_file(dir.path("empty.csv")) == "model,label,count\n");
}

TEST_CASE("sweep exports one long-format row per threshold and metric") {
    testutil::TempDir dir("sweep");
    const Taxonomy tax = testutil::load_default_taxonomy();

    std::vector<SweepPoint> points;
    for (size_t i = 0; i < kDefaultSweepGrid.size(); ++i) {
        SweepPoint p;
        p.threshold = kDefaultSweepGrid[i];
        p.counts = ConfusionCounts{10 - static_cast<long long>(i), 5, static_cast<long long>(i),
                                   5};
        p.metrics = metrics(p.counts);
        points.push_back(p);
    }
    emit_sweep_data(points, dir.path("s.csv"));
    const auto lines = util::read_lines(dir.path("s.csv"));
    REQUIRE(lines.size() == 1 + 9 * 4); // header + four metric rows per threshold
    CHECK(lines[0] == "threshold,metric,value");
    CHECK(lines[1].rfind("0.10,f1,", 0) == 0);
    CHECK(lines[2].rfind("0.10,recall,", 0) == 0);
    CHECK(lines[3].rfind("0.10,precision,", 0) == 0);
    CHECK(lines[4].rfind("0.10,accuracy,", 0) == 0);
    CHECK(lines[33].rfind("0.90,f1,", 0) == 0);

    std::vector<SweepPoint> unsorted = points;
    std::swap(unsorted[0], unsorted[1]);
    CHECK_THROWS_AS(emit_sweep_data(unsorted, dir.path("bad.csv")), InputError);
    (void)tax;
}

TEST_CASE("manifests record digests, seed and artifacts deterministically") {
    testutil::TempDir dir("manifest");

    CHECK(digest_hex("abc") == digest_hex("abc"));
    CHECK(digest_hex("abc") != digest_hex("abd"));
    CHECK(digest_hex("").size() == 16);

    const std::string stamp = utc_timestamp();
    CHECK(std::regex_match(stamp,
                           std::regex(R"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z)")));

    RunManifest manifest;
    manifest.run_id = "echo-demo-s1";
    manifest.model_digest = digest_hex("model config");
    manifest.prompt_digest = digest_hex("system prompt");
    manifest.corpus_digest = digest_hex("corpus bytes");
    manifest.seed = 42;
    manifest.created_utc = stamp;
    manifest.artifacts = {{"ledger", "runs/echo-demo-s1/ledger.jsonl"},
                          {"metrics", "runs/echo-demo-s1/metrics.csv"}};

    const std::string path = dir.path("manifest.json");
    write_manifest(manifest, path);
    const nlohmann::json j = nlohmann::json::parse(util::read_file(path));
    CHECK(j["run_id"] == "echo-demo-s1");
    CHECK(j["seed"] == 42);
    CHECK(j["model_digest"] == manifest.model_digest);
    CHECK(j["artifacts"]["ledger"] == "runs/echo-demo-s1/ledger.jsonl");
    CHECK(util::read_file(path).back() == '\n');
}
