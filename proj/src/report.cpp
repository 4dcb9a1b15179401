#include "biaseval/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ctime>
#include <limits>
#include <set>

#include "biaseval/util.hpp"

namespace biaseval {

namespace {

long long rounded_milli(double v) {
    return std::llround(v * 1000.0);
}

std::string fmt3(double v) {
    return util::format_fixed(v, 3);
}

// cells per row, metric columns only
std::array<double, 4> metric_cells(const MetricsRow& row) {
    return {row.metrics.f1, row.metrics.recall, row.metrics.precision, row.metrics.accuracy};
}

} // namespace

void emit_metrics_table(const std::vector<MetricsRow>& rows, const std::string& csv_path,
                        const std::string& md_path) {
    if (rows.empty()) {
        throw InputError("metrics table needs at least one row");
    }
    std::array<long long, 4> best{};
    best.fill(std::numeric_limits<long long>::min());
    for (const MetricsRow& row : rows) {
        const auto cells = metric_cells(row);
        for (size_t i = 0; i < cells.size(); ++i) {
            best[i] = std::max(best[i], rounded_milli(cells[i]));
        }
    }
    std::string csv = "model,tp,fp,fn,tn,f1,recall,precision,accuracy\n";
    std::string md = "| Model | TP | FP | FN | TN | F1 | Recall | Precision | Accuracy |\n"
                     "| --- | --- | --- | --- | --- | --- | --- | --- | --- |\n";
    for (const MetricsRow& row : rows) {
        const auto cells = metric_cells(row);
        csv += row.model_name + ',' + std::to_string(row.counts.tp) + ',' +
               std::to_string(row.counts.fp) + ',' + std::to_string(row.counts.fn) + ',' +
               std::to_string(row.counts.tn);
        md += "| " + row.model_name + " | " + std::to_string(row.counts.tp) + " | " +
              std::to_string(row.counts.fp) + " | " + std::to_string(row.counts.fn) + " | " +
              std::to_string(row.counts.tn);
        for (size_t i = 0; i < cells.size(); ++i) {
            const std::string value = fmt3(cells[i]);
            csv += ',' + value;
            // ties at the displayed rounding share the bold marker
            if (rounded_milli(cells[i]) == best[i] && rows.size() > 1) {
                md += " | **" + value + "**";
            } else {
                md += " | " + value;
            }
        }
        csv += '\n';
        md += " |\n";
    }
    util::write_file(csv_path, csv);
    util::write_file(md_path, md);
}

std::vector<MetricsRow> load_metrics_table(const std::string& csv_path) {
    std::vector<std::string> lines = util::read_lines(csv_path);
    std::vector<MetricsRow> rows;
    for (size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) {
            continue;
        }
        std::vector<std::string> cols = util::split(lines[i], ',');
        if (cols.size() != 9) {
            throw InputError(csv_path + ":" + std::to_string(i + 1) + ": expected 9 columns");
        }
        MetricsRow row;
        row.model_name = cols[0];
        try {
            row.counts.tp = std::stoll(cols[1]);
            row.counts.fp = std::stoll(cols[2]);
            row.counts.fn = std::stoll(cols[3]);
            row.counts.tn = std::stoll(cols[4]);
            row.metrics.f1 = std::stod(cols[5]);
            row.metrics.recall = std::stod(cols[6]);
            row.metrics.precision = std::stod(cols[7]);
            row.metrics.accuracy = std::stod(cols[8]);
        } catch (const std::exception&) {
            throw InputError(csv_path + ":" + std::to_string(i + 1) + ": bad numeric cell");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void emit_type_table(const std::vector<TypeColumn>& columns, const std::string& csv_path,
                     const std::string& md_path, long long min_count) {
    // the display filter keeps labels some model identified > min_count
    // times; JSD was computed upstream over the unfiltered distributions
    std::set<std::string> shown;
    for (const TypeColumn& col : columns) {
        for (const auto& [label, count] : col.dist.counts) {
            if (count > min_count) {
                shown.insert(label);
            }
        }
    }
    std::vector<std::string> labels(shown.begin(), shown.end());
    auto total_for = [&](const std::string& label) {
        long long total = 0;
        for (const TypeColumn& col : columns) {
            auto it = col.dist.counts.find(label);
            if (it != col.dist.counts.end()) {
                total += it->second;
            }
        }
        return total;
    };
    std::sort(labels.begin(), labels.end(), [&](const std::string& a, const std::string& b) {
        const long long ta = total_for(a), tb = total_for(b);
        if (ta != tb) return ta > tb;
        return a < b;
    });
    std::string csv = "type";
    std::string md = "| Type |";
    std::string md_rule = "| --- |";
    for (const TypeColumn& col : columns) {
        csv += ',' + col.model_name;
        md += ' ' + col.model_name + " |";
        md_rule += " --- |";
    }
    csv += '\n';
    md += '\n' + md_rule + '\n';
    for (const std::string& label : labels) {
        csv += label;
        md += "| " + label + " |";
        for (const TypeColumn& col : columns) {
            auto it = col.dist.counts.find(label);
            const long long count = it == col.dist.counts.end() ? 0 : it->second;
            csv += ',' + std::to_string(count);
            md += ' ' + std::to_string(count) + " |";
        }
        csv += '\n';
        md += '\n';
    }
    csv += "identified_total";
    md += "| Identified total |";
    for (const TypeColumn& col : columns) {
        csv += ',' + std::to_string(col.dist.total);
        md += ' ' + std::to_string(col.dist.total) + " |";
    }
    csv += '\n';
    md += '\n';
    csv += "hallucinated_total";
    md += "| Hallucinated labels |";
    for (const TypeColumn& col : columns) {
        long long total = 0;
        for (const auto& [label, count] : col.dist.hallucinated) {
            (void)label;
            total += count;
        }
        csv += ',' + std::to_string(total);
        md += ' ' + std::to_string(total) + " |";
    }
    csv += '\n';
    md += '\n';
    csv += "jsd_base2_vs_finetune";
    md += "| JSD (base 2, vs fine-tune set) |";
    for (const TypeColumn& col : columns) {
        const std::string cell = col.jsd_vs_finetune ? fmt3(*col.jsd_vs_finetune) : "";
        csv += ',' + cell;
        md += ' ' + (cell.empty() ? std::string("-") : cell) + " |";
    }
    csv += '\n';
    md += '\n';
    util::write_file(csv_path, csv);
    util::write_file(md_path, md);
}

void emit_hallucinations(const std::vector<TypeColumn>& columns, const std::string& csv_path) {
    std::string csv = "model,label,count\n";
    for (const TypeColumn& col : columns) {
        std::vector<std::pair<std::string, long long>> rows(col.dist.hallucinated.begin(),
                                                            col.dist.hallucinated.end());
        std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        for (const auto& [label, count] : rows) {
            if (label.find(',') != std::string::npos || label.find('"') != std::string::npos) {
                std::string quoted = "\"";
                for (char c : label) {
                    quoted += c;
                    if (c == '"') {
                        quoted += '"';
                    }
                }
                quoted += '"';
                csv += col.model_name + ',' + quoted + ',' + std::to_string(count) + '\n';
            } else {
                csv += col.model_name + ',' + label + ',' + std::to_string(count) + '\n';
            }
        }
    }
    util::write_file(csv_path, csv);
}

void emit_sweep_data(const std::vector<SweepPoint>& points, const std::string& csv_path) {
    for (size_t i = 1; i < points.size(); ++i) {
        if (points[i].threshold <= points[i - 1].threshold) {
            throw InputError("sweep points must have ascending thresholds");
        }
    }
    std::string csv = "threshold,metric,value\n";
    for (const SweepPoint& point : points) {
        const std::string t = util::format_fixed(point.threshold, 2);
        csv += t + ",f1," + fmt3(point.metrics.f1) + '\n';
        csv += t + ",recall," + fmt3(point.metrics.recall) + '\n';
        csv += t + ",precision," + fmt3(point.metrics.precision) + '\n';
        csv += t + ",accuracy," + fmt3(point.metrics.accuracy) + '\n';
    }
    util::write_file(csv_path, csv);
}

nlohmann::json RunManifest::to_json() const {
    return nlohmann::json{{"run_id", run_id},
                          {"model_digest", model_digest},
                          {"prompt_digest", prompt_digest},
                          {"corpus_digest", corpus_digest},
                          {"seed", seed},
                          {"created_utc", created_utc},
                          {"artifacts", artifacts}};
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    util::write_file(path, manifest.to_json().dump(2) + "\n");
}

std::string digest_hex(std::string_view data) {
    return util::hex64(util::fnv1a64(data));
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return std::string(buf);
}

} // namespace biaseval
