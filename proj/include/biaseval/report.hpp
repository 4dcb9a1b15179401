#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "biaseval/evalcore.hpp"

namespace biaseval {

struct MetricsRow {
    std::string model_name;
    ConfusionCounts counts;
    Metrics metrics;
};

/// CSV and markdown twins with columns TP FP FN TN F1 Recall Precision
/// Accuracy; metric cells rounded to 3 decimals, per-column best values
/// bolded in the markdown table only so the CSV stays parseable.
void emit_metrics_table(const std::vector<MetricsRow>& rows, const std::string& csv_path,
                        const std::string& md_path);

/// Parses a metrics.csv back into rows (counts exactly, metrics at the
/// emitted rounding).
std::vector<MetricsRow> load_metrics_table(const std::string& csv_path);

struct TypeColumn {
    std::string model_name;
    TypeDistribution dist;
    /// Divergence of this model's identified types against its fine-tune
    /// distribution, computed over the unfiltered counts.
    std::optional<double> jsd_vs_finetune;
};

/// Wide type-count table; a label is shown when some model identified it
/// more than `min_count` times, while JSD rows always reflect the full
/// distributions.
void emit_type_table(const std::vector<TypeColumn>& columns, const std::string& csv_path,
                     const std::string& md_path, long long min_count = 100);

/// Long-format per-model tally of hallucinated labels (model,label,count).
void emit_hallucinations(const std::vector<TypeColumn>& columns, const std::string& csv_path);

/// Long-format plot data: threshold,metric,value.
void emit_sweep_data(const std::vector<SweepPoint>& points, const std::string& csv_path);

struct RunManifest {
    std::string run_id;
    std::string model_digest;
    std::string prompt_digest;
    std::string corpus_digest;
    uint64_t seed = 0;
    std::string created_utc;
    std::map<std::string, std::string> artifacts; // name -> path

    nlohmann::json to_json() const;
};

void write_manifest(const RunManifest& manifest, const std::string& path);

std::string digest_hex(std::string_view data);
std::string utc_timestamp();

} // namespace biaseval
