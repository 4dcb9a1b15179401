#include "biaseval/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "biaseval/corpus.hpp"
#include "biaseval/ftbuild.hpp"
#include "biaseval/report.hpp"
#include "biaseval/taxonomy.hpp"
#include "biaseval/util.hpp"

namespace biaseval {

namespace fs = std::filesystem;

namespace {

nlohmann::json parse_json_file(const std::string& path) {
    if (!fs::exists(path)) {
        throw InputError("file not found: " + path);
    }
    nlohmann::json doc = nlohmann::json::parse(util::read_file(path), nullptr, false);
    if (doc.is_discarded()) {
        throw InputError("malformed JSON in " + path);
    }
    return doc;
}

void ensure_parent_dir(const std::string& path) {
    const fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) {
        fs::create_directories(parent);
    }
}

const CorpusSpec& corpus_spec(const PipelineConfig& cfg, const std::string& name) {
    auto it = cfg.corpora.find(name);
    if (it == cfg.corpora.end()) {
        std::string known;
        for (const auto& [n, spec] : cfg.corpora) {
            (void)spec;
            known += known.empty() ? n : ", " + n;
        }
        throw InputError("unknown corpus \"" + name + "\" (configured: " + known + ")");
    }
    return it->second;
}

const ModelConfig& model_config(const PipelineConfig& cfg, const std::string& name) {
    auto it = cfg.models.find(name);
    if (it == cfg.models.end()) {
        std::string known;
        for (const auto& [n, mc] : cfg.models) {
            (void)mc;
            known += known.empty() ? n : ", " + n;
        }
        throw InputError("unknown model \"" + name + "\" (configured: " + known + ")");
    }
    return it->second;
}

std::string canonical_path(const PipelineConfig& cfg, const std::string& name,
                           const CorpusSpec& spec) {
    if (!spec.canonical.empty()) {
        return spec.canonical;
    }
    if (spec.kind == "canonical") {
        return spec.path;
    }
    return cfg.out_dir + "/corpus/" + name + ".tsv";
}

std::string metrics_line(const ConfusionCounts& c, const Metrics& m) {
    return "TP " + std::to_string(c.tp) + "  FP " + std::to_string(c.fp) + "  FN " +
           std::to_string(c.fn) + "  TN " + std::to_string(c.tn) + "  |  F1 " +
           util::format_fixed(m.f1, 3) + "  recall " + util::format_fixed(m.recall, 3) +
           "  precision " + util::format_fixed(m.precision, 3) + "  accuracy " +
           util::format_fixed(m.accuracy, 3);
}

std::string ledger_display_name(const std::string& path) {
    const fs::path p(path);
    if (p.filename() == "ledger.jsonl" && p.has_parent_path() &&
        !p.parent_path().filename().empty()) {
        return p.parent_path().filename().string();
    }
    std::string stem = p.stem().string(); // drops .jsonl
    if (stem.size() > 7 && stem.ends_with(".ledger")) {
        stem.resize(stem.size() - 7);
    }
    return stem;
}

// --- subcommand bodies -----------------------------------------------------

int cmd_ingest(const PipelineConfig& cfg, const std::string& only_corpus) {
    bool matched = false;
    for (const auto& [name, spec] : cfg.corpora) {
        if (!only_corpus.empty() && name != only_corpus) {
            continue;
        }
        matched = true;
        const std::string target = canonical_path(cfg, name, spec);
        if (spec.kind == "babe") {
            std::vector<AnnotatedSentence> sentences = load_babe(spec.path);
            ensure_parent_dir(target);
            write_corpus(sentences, target);
            std::cout << "ingested " << name << ": " << sentences.size() << " sentences -> "
                      << target << "\n";
        } else if (spec.kind == "basil") {
            std::vector<BasilArticle> groups = load_basil(spec.path);
            std::vector<AnnotatedSentence> sentences;
            for (const BasilArticle& g : groups) {
                sentences.insert(sentences.end(), g.sentences.begin(), g.sentences.end());
            }
            ensure_parent_dir(target);
            write_corpus(sentences, target);
            std::cout << "ingested " << name << ": " << groups.size() << " articles, "
                      << sentences.size() << " sentences -> " << target << "\n";
        } else if (spec.kind == "canonical") {
            std::vector<AnnotatedSentence> sentences = load_corpus(spec.path);
            std::cout << "validated " << name << ": " << sentences.size() << " sentences ("
                      << spec.path << ")\n";
        } else {
            throw InputError("corpus \"" + name + "\" has unknown kind \"" + spec.kind + "\"");
        }
    }
    if (!matched) {
        throw InputError(only_corpus.empty() ? "no corpora configured"
                                             : "unknown corpus \"" + only_corpus + "\"");
    }
    return 0;
}

int cmd_decontaminate(const PipelineConfig& cfg, const std::string& corpus_name,
                      const std::vector<std::string>& contaminant_files, int threshold) {
    const CorpusSpec& spec = corpus_spec(cfg, corpus_name);
    const std::string source = canonical_path(cfg, corpus_name, spec);
    std::vector<AnnotatedSentence> sentences = load_corpus(source);
    std::vector<std::string> contaminants;
    for (const std::string& file : contaminant_files) {
        for (std::string& line : util::read_lines(file)) {
            if (!line.empty()) {
                contaminants.push_back(std::move(line));
            }
        }
    }
    DecontaminationReport report = decontaminate(sentences, contaminants, threshold);
    const std::string kept_path = cfg.out_dir + "/corpus/" + corpus_name + ".decontaminated.tsv";
    const std::string report_path =
        cfg.out_dir + "/corpus/" + corpus_name + ".decontamination.json";
    ensure_parent_dir(kept_path);
    write_corpus(report.kept, kept_path);
    util::write_file(report_path, report.to_json().dump(2) + "\n");
    std::cout << "decontaminated " << corpus_name << ": kept " << report.kept.size()
              << ", removed " << report.removed.size() << " (threshold " << threshold << ", "
              << contaminants.size() << " contaminant sentences)\n"
              << "  corpus: " << kept_path << "\n  report: " << report_path << "\n";
    return 0;
}

int cmd_build_ft(const PipelineConfig& cfg, const std::string& source,
                 const std::string& corpus_name, const std::string& model_name, size_t n,
                 uint64_t seed, const std::string& out_path) {
    Taxonomy taxonomy = Taxonomy::load(cfg.taxonomy_path);
    ModelGateway gateway(model_config(cfg, model_name), taxonomy);
    FinetuneBuilder builder(taxonomy, gateway, cfg.prompt);
    FinetuneDataset dataset;
    if (source == "synt") {
        dataset = builder.build_synthetic(n, seed);
    } else if (source == "pool" || source == "snippets") {
        if (corpus_name.empty()) {
            throw InputError("--corpus is required for source \"" + source + "\"");
        }
        const CorpusSpec& spec = corpus_spec(cfg, corpus_name);
        std::vector<AnnotatedSentence> sentences =
            load_corpus(canonical_path(cfg, corpus_name, spec));
        if (source == "pool") {
            dataset = builder.build_from_pool(std::move(sentences), n, seed);
        } else {
            std::vector<BasilArticle> groups = group_by_article(sentences);
            if (groups.empty()) {
                throw InputError("corpus \"" + corpus_name +
                                 "\" has no article ids; use source pool instead");
            }
            dataset = builder.build_from_groups(groups, n, seed);
        }
    } else {
        throw InputError("unknown fine-tune source \"" + source +
                         "\" (expected pool, snippets or synt)");
    }
    ensure_parent_dir(out_path);
    emit_jsonl(dataset.records, out_path);
    std::string sidecar;
    for (const std::string& s : dataset.contaminant_sentences) {
        sidecar += s;
        sidecar += '\n';
    }
    util::write_file(out_path + ".contaminants.txt", sidecar);
    std::cout << "built " << dataset.records.size() << " fine-tune records (" << source
              << ", seed " << seed << ") -> " << out_path << "\n"
              << "  contaminant sentences: " << dataset.contaminant_sentences.size() << " -> "
              << out_path << ".contaminants.txt\n";
    return 0;
}

int cmd_merge_ft(const std::vector<std::string>& inputs, const std::string& out_path) {
    ensure_parent_dir(out_path);
    const size_t lines = merge_datasets(inputs, out_path);
    std::string sidecar;
    bool all_sidecars = true;
    for (const std::string& input : inputs) {
        const std::string side = input + ".contaminants.txt";
        if (!fs::exists(side)) {
            all_sidecars = false;
            break;
        }
        std::string content = util::read_file(side);
        sidecar += content;
        if (!content.empty() && content.back() != '\n') {
            sidecar += '\n';
        }
    }
    std::cout << "merged " << inputs.size() << " datasets, " << lines << " records -> "
              << out_path << "\n";
    if (all_sidecars) {
        util::write_file(out_path + ".contaminants.txt", sidecar);
        std::cout << "  merged contaminant sidecars -> " << out_path << ".contaminants.txt\n";
    }
    return 0;
}

int cmd_evaluate(const PipelineConfig& cfg, const std::string& model_name,
                 const std::string& corpus_name, const std::string& corpus_file, uint64_t seed,
                 int threshold, const std::string& out_dir) {
    Taxonomy taxonomy = Taxonomy::load(cfg.taxonomy_path);
    const ModelConfig& mc = model_config(cfg, model_name);
    std::string source = corpus_file;
    if (source.empty()) {
        source = canonical_path(cfg, corpus_name, corpus_spec(cfg, corpus_name));
    }
    std::vector<AnnotatedSentence> sentences = load_corpus(source);
    if (sentences.empty()) {
        throw InputError("corpus " + source + " is empty");
    }
    const bool grouped = std::any_of(sentences.begin(), sentences.end(),
                                     [](const AnnotatedSentence& s) {
                                         return !s.article_id.empty();
                                     });
    std::vector<EvalArticle> articles =
        grouped ? snippet_articles(group_by_article(sentences), seed)
                : assemble_articles(std::move(sentences), seed);
    ModelGateway gateway(mc, taxonomy);
    std::vector<std::pair<ArticleVerdict, CallRecord>> results =
        gateway.classify_articles(articles, cfg.prompt);
    std::vector<SentenceOutcome> outcomes;
    for (size_t i = 0; i < articles.size(); ++i) {
        std::vector<SentenceOutcome> rows = align(results[i].first, articles[i], threshold);
        outcomes.insert(outcomes.end(), std::make_move_iterator(rows.begin()),
                        std::make_move_iterator(rows.end()));
    }
    const std::string run_id = model_name + "-" + corpus_name + "-s" + std::to_string(seed);
    const std::string run_dir = out_dir.empty() ? cfg.out_dir + "/runs/" + run_id : out_dir;
    fs::create_directories(run_dir);
    write_ledger(outcomes, run_dir + "/ledger.jsonl");
    std::string audit;
    for (const auto& [verdict, record] : results) {
        (void)verdict;
        audit += call_record_to_json(record).dump();
        audit += '\n';
    }
    util::write_file(run_dir + "/audit.jsonl", audit);
    RunManifest manifest;
    manifest.run_id = run_id;
    manifest.model_digest = digest_hex(nlohmann::json{{"kind", to_string(mc.kind)},
                                                      {"endpoint", mc.endpoint},
                                                      {"model_name", mc.model_name},
                                                      {"temperature", mc.temperature},
                                                      {"flag_probability", mc.flag_probability},
                                                      {"seed", mc.seed}}
                                           .dump());
    manifest.prompt_digest = digest_hex(build_system_prompt(taxonomy, cfg.prompt));
    manifest.corpus_digest = digest_hex(util::read_file(source));
    manifest.seed = seed;
    manifest.created_utc = utc_timestamp();
    manifest.artifacts = {{"ledger", run_dir + "/ledger.jsonl"},
                          {"audit", run_dir + "/audit.jsonl"}};
    write_manifest(manifest, run_dir + "/manifest.json");
    const ConfusionCounts strict = confusion(outcomes, false);
    std::cout << "evaluated " << articles.size() << " articles (" << outcomes.size()
              << " ledger rows) with " << model_name << "\n"
              << "  strict: " << metrics_line(strict, metrics(strict)) << "\n";
    const long long unmatched =
        static_cast<long long>(std::count_if(outcomes.begin(), outcomes.end(),
                                             [](const SentenceOutcome& o) {
                                                 return o.is_unmatched_flag();
                                             }));
    if (unmatched > 0) {
        const ConfusionCounts raw = confusion(outcomes, true);
        std::cout << "  with " << unmatched
                  << " unmatched flags as FP: " << metrics_line(raw, metrics(raw)) << "\n";
    }
    std::cout << "  run dir: " << run_dir << "\n";
    return 0;
}

int cmd_analyze(const PipelineConfig& cfg, const std::vector<std::string>& ledger_paths,
                const std::string& ft_path, const std::string& out_dir, int type_floor,
                int strength_floor, bool include_unmatched) {
    const std::string analysis_dir = out_dir.empty() ? cfg.out_dir + "/analysis" : out_dir;
    fs::create_directories(analysis_dir);
    std::vector<std::pair<std::string, std::vector<SentenceOutcome>>> runs;
    for (const std::string& path : ledger_paths) {
        runs.emplace_back(ledger_display_name(path), load_ledger(path));
        if (runs.back().second.empty()) {
            throw InputError("ledger " + path + " is empty");
        }
    }
    std::optional<TypeDistribution> ft_dist;
    if (!ft_path.empty()) {
        Taxonomy taxonomy = Taxonomy::load(cfg.taxonomy_path);
        std::vector<ArticleVerdict> gold_verdicts;
        for (const FinetuneRecord& record : load_finetune(ft_path)) {
            gold_verdicts.push_back(parse_verdict(record.assistant, taxonomy));
        }
        ft_dist = type_distribution(gold_verdicts);
    }

    std::vector<MetricsRow> rows;
    for (const auto& [name, outcomes] : runs) {
        MetricsRow row;
        row.model_name = name;
        row.counts = confusion(outcomes, false);
        row.metrics = metrics(row.counts);
        rows.push_back(row);
        const bool any_unmatched =
            std::any_of(outcomes.begin(), outcomes.end(),
                        [](const SentenceOutcome& o) { return o.is_unmatched_flag(); });
        if (any_unmatched) {
            MetricsRow raw;
            raw.model_name = name + "+unmatched";
            raw.counts = confusion(outcomes, true);
            raw.metrics = metrics(raw.counts);
            rows.push_back(raw);
        }
    }
    if (runs.size() >= 2) {
        std::vector<std::vector<SentenceOutcome>> per_model;
        for (const auto& [name, outcomes] : runs) {
            (void)name;
            per_model.push_back(outcomes);
        }
        try {
            std::vector<SentenceOutcome> ensemble = majority_vote(per_model);
            MetricsRow row;
            row.model_name = "majority";
            row.counts = confusion(ensemble, false);
            row.metrics = metrics(row.counts);
            rows.push_back(row);
        } catch (const InputError& e) {
            std::cout << "note: majority vote skipped: " << e.what() << "\n";
        }
    }
    emit_metrics_table(rows, analysis_dir + "/metrics.csv", analysis_dir + "/metrics.md");

    std::vector<TypeColumn> columns;
    for (const auto& [name, outcomes] : runs) {
        TypeColumn col;
        col.model_name = name;
        col.dist = type_distribution(outcomes);
        if (ft_dist && col.dist.total > 0 && ft_dist->total > 0) {
            col.jsd_vs_finetune = jsd(col.dist, *ft_dist);
        }
        columns.push_back(std::move(col));
    }
    emit_type_table(columns, analysis_dir + "/types.csv", analysis_dir + "/types.md");
    emit_hallucinations(columns, analysis_dir + "/hallucinations.csv");

    const std::vector<double>& grid =
        cfg.sweep_grid.empty() ? kDefaultSweepGrid : cfg.sweep_grid;
    for (size_t i = 0; i < runs.size(); ++i) {
        const std::string sweep_path = i == 0
                                           ? analysis_dir + "/sweep.csv"
                                           : analysis_dir + "/sweep-" + runs[i].first + ".csv";
        emit_sweep_data(strength_filter_sweep(runs[i].second, grid, include_unmatched),
                        sweep_path);
    }

    std::vector<SentenceOutcome> combined;
    for (const auto& [name, outcomes] : runs) {
        (void)name;
        combined.insert(combined.end(), outcomes.begin(), outcomes.end());
    }
    write_ledger(combined, analysis_dir + "/ledger.jsonl");

    RunManifest manifest;
    std::string ledger_digests;
    for (const std::string& path : ledger_paths) {
        ledger_digests += digest_hex(util::read_file(path));
    }
    manifest.run_id = "analysis-" + digest_hex(ledger_digests);
    manifest.corpus_digest = digest_hex(ledger_digests);
    manifest.prompt_digest = "";
    std::string names;
    for (const auto& [name, outcomes] : runs) {
        (void)outcomes;
        names += names.empty() ? name : "," + name;
    }
    manifest.model_digest = digest_hex(names);
    manifest.seed = cfg.seed;
    manifest.created_utc = utc_timestamp();
    manifest.artifacts = {{"metrics_csv", analysis_dir + "/metrics.csv"},
                         {"metrics_md", analysis_dir + "/metrics.md"},
                         {"types_csv", analysis_dir + "/types.csv"},
                         {"types_md", analysis_dir + "/types.md"},
                         {"sweep", analysis_dir + "/sweep.csv"},
                         {"hallucinations", analysis_dir + "/hallucinations.csv"},
                         {"ledger", analysis_dir + "/ledger.jsonl"}};
    write_manifest(manifest, analysis_dir + "/manifest.json");

    for (const auto& [name, outcomes] : runs) {
        std::cout << name << ":\n";
        const ConfusionCounts strict = confusion(outcomes, false);
        std::cout << "  " << metrics_line(strict, metrics(strict)) << "\n";
        try {
            const auto [tp_mean, fp_mean] = tp_fp_strength_gap(outcomes);
            std::cout << "  mean strength: TP " << util::format_fixed(tp_mean, 3) << ", FP "
                      << util::format_fixed(fp_mean, 3) << "\n";
        } catch (const InputError&) {
            // no gap without both classes; nothing to report
        }
        try {
            const TypeAccuracy ta = type_accuracy(outcomes, type_floor);
            std::cout << "  type accuracy: " << util::format_fixed(ta.overall, 3) << " over "
                      << ta.checked << " true positives\n";
            for (const auto& [type, acc] : ta.per_type_accuracy) {
                std::cout << "    " << type << ": " << util::format_fixed(acc, 3) << " ("
                          << ta.per_type.at(type).second << " checked)\n";
            }
        } catch (const InputError&) {
        }
        try {
            const StrengthDifference sd = strength_difference(outcomes, strength_floor);
            std::cout << "  strength difference: " << util::format_fixed(sd.mean_abs, 3)
                      << " over " << sd.checked << " true positives\n";
            for (const auto& [type, mean] : sd.per_type_mean) {
                std::cout << "    " << type << ": " << util::format_fixed(mean, 3) << " ("
                          << sd.per_type.at(type).second << " checked)\n";
            }
        } catch (const InputError&) {
        }
    }
    std::cout << "analysis written to " << analysis_dir << "\n";
    return 0;
}

} // namespace

// --- configuration ---------------------------------------------------------

PromptConfig prompt_config_from_json(const nlohmann::json& j) {
    PromptConfig prompt;
    const std::string variant = util::to_lower_ascii(j.value("variant", std::string("fine27")));
    if (variant == "fine27" || variant == "fine-grained" || variant == "fine") {
        prompt.taxonomy_variant = TaxonomyVariant::FineGrained27;
    } else if (variant == "coarse" || variant == "coarse-alternate") {
        prompt.taxonomy_variant = TaxonomyVariant::CoarseAlternate;
    } else {
        throw InputError("unknown prompt variant \"" + variant + "\"");
    }
    prompt.include_examples = j.value("include_examples", true);
    prompt.bias_definition = j.value("bias_definition", std::string(kDefaultBiasDefinition));
    prompt.output_schema_version = j.value("schema_version", std::string("v1"));
    return prompt;
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
    ModelConfig mc;
    if (!j.contains("kind") || !j["kind"].is_string()) {
        throw InputError("model config needs a string \"kind\"");
    }
    mc.kind = parse_model_kind(j["kind"].get<std::string>());
    mc.endpoint = j.value("endpoint", std::string());
    mc.model_name = j.value("model_name", std::string("mock"));
    mc.temperature = j.value("temperature", 0.15);
    mc.max_retries = j.value("max_retries", 2);
    mc.request_timeout_ms = j.value("request_timeout_ms", 30000);
    mc.parallelism_limit = j.value("parallelism_limit", 4);
    mc.flag_probability = j.value("flag_probability", 0.5);
    mc.seed = j.value("seed", static_cast<uint64_t>(0));
    mc.api_key_env = j.value("api_key_env", std::string("BIASEVAL_API_KEY"));
    mc.retry_backoff_ms = j.value("retry_backoff_ms", 250);
    if (mc.kind == ModelKind::RemoteChat && mc.endpoint.empty()) {
        throw InputError("remote-chat model config needs an endpoint");
    }
    return mc;
}

PipelineConfig load_pipeline_config(const std::string& path) {
    nlohmann::json doc = parse_json_file(path);
    PipelineConfig cfg;
    try {
        cfg.taxonomy_path = doc.value("taxonomy", cfg.taxonomy_path);
        if (doc.contains("corpora")) {
            for (const auto& [name, body] : doc["corpora"].items()) {
                CorpusSpec spec;
                spec.kind = body.value("kind", std::string("canonical"));
                spec.path = body.value("path", std::string());
                spec.canonical = body.value("canonical", std::string());
                cfg.corpora[name] = std::move(spec);
            }
        }
        if (doc.contains("models")) {
            for (const auto& [name, body] : doc["models"].items()) {
                cfg.models[name] = model_config_from_json(body);
            }
        }
        if (doc.contains("prompt")) {
            cfg.prompt = prompt_config_from_json(doc["prompt"]);
        }
        cfg.seed = doc.value("seed", cfg.seed);
        cfg.match_threshold = doc.value("match_threshold", cfg.match_threshold);
        if (doc.contains("sweep_grid")) {
            cfg.sweep_grid = doc["sweep_grid"].get<std::vector<double>>();
        }
        cfg.out_dir = doc.value("out_dir", cfg.out_dir);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    if (cfg.match_threshold < 0 || cfg.match_threshold > 100) {
        throw InputError("match_threshold must be in [0,100]");
    }
    if (!fs::exists(cfg.taxonomy_path)) {
        throw InputError("taxonomy file not found: " + cfg.taxonomy_path);
    }
    for (const auto& [name, spec] : cfg.corpora) {
        if (!spec.path.empty() && !fs::exists(spec.path)) {
            throw InputError("corpus \"" + name + "\" points to a missing file: " + spec.path);
        }
    }
    return cfg;
}

// --- entry points ----------------------------------------------------------

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"media-bias detection evaluation pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "pipeline configuration JSON")->expected(1);

    std::string ingest_corpus;
    CLI::App* ingest = app.add_subcommand("ingest", "load raw corpora, emit canonical files");
    ingest->add_option("--corpus", ingest_corpus, "only this corpus");

    std::string dec_corpus;
    std::vector<std::string> dec_contaminants;
    std::optional<int> dec_threshold;
    CLI::App* dec = app.add_subcommand("decontaminate", "remove fine-tune overlap from a corpus");
    dec->add_option("--corpus", dec_corpus, "corpus name")->required();
    dec->add_option("--contaminants", dec_contaminants, "contaminant sentence files (one per line)")
        ->required()
        ->expected(-1);
    dec->add_option("--threshold", dec_threshold, "fuzzy match threshold (default from config)");

    std::string ft_source, ft_corpus, ft_model, ft_out;
    size_t ft_n = 100;
    std::optional<uint64_t> ft_seed;
    CLI::App* build = app.add_subcommand("build-ft", "build a fine-tune JSONL dataset");
    build->add_option("--source", ft_source, "pool | snippets | synt")->required();
    build->add_option("--corpus", ft_corpus, "corpus name (pool/snippets)");
    build->add_option("--model", ft_model, "model for enrichment/generation")->required();
    build->add_option("-n,--n-articles", ft_n, "article count (default 100)");
    build->add_option("--seed", ft_seed, "seed override");
    build->add_option("--out", ft_out, "output JSONL path")->required();

    std::vector<std::string> merge_inputs;
    std::string merge_out;
    CLI::App* merge = app.add_subcommand("merge-ft", "concatenate fine-tune JSONL files");
    merge->add_option("--inputs", merge_inputs, "input JSONL files, in order")
        ->required()
        ->expected(-1);
    merge->add_option("--out", merge_out, "output JSONL path")->required();

    std::string eval_model, eval_corpus, eval_corpus_file, eval_out;
    std::optional<uint64_t> eval_seed;
    std::optional<int> eval_threshold;
    CLI::App* eval = app.add_subcommand("evaluate", "classify a corpus and write the ledger");
    eval->add_option("--model", eval_model, "model name")->required();
    eval->add_option("--corpus", eval_corpus, "corpus name")->required();
    eval->add_option("--corpus-file", eval_corpus_file, "canonical TSV overriding the corpus path");
    eval->add_option("--seed", eval_seed, "seed override");
    eval->add_option("--threshold", eval_threshold, "alignment threshold override");
    eval->add_option("--out", eval_out, "run directory override");

    std::vector<std::string> an_ledgers;
    std::string an_ft, an_out;
    int an_type_floor = 12;
    int an_strength_floor = 5;
    bool an_include_unmatched = false;
    CLI::App* analyze = app.add_subcommand("analyze", "tables, JSD, sweep and ensemble from ledgers");
    analyze->add_option("--ledger", an_ledgers, "ledger JSONL files")->required()->expected(-1);
    analyze->add_option("--ft", an_ft, "fine-tune JSONL as the JSD reference distribution");
    analyze->add_option("--out", an_out, "analysis directory override");
    analyze->add_option("--type-floor", an_type_floor, "support floor for per-type accuracy");
    analyze->add_option("--strength-floor", an_strength_floor,
                        "support floor for per-type strength difference");
    analyze->add_flag("--include-unmatched", an_include_unmatched,
                      "count unmatched flags as FPs in the sweep");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        auto need_config = [&]() -> PipelineConfig {
            if (config_path.empty()) {
                throw InputError("--config is required for this command");
            }
            return load_pipeline_config(config_path);
        };
        if (ingest->parsed()) {
            return cmd_ingest(need_config(), ingest_corpus);
        }
        if (dec->parsed()) {
            PipelineConfig cfg = need_config();
            return cmd_decontaminate(cfg, dec_corpus, dec_contaminants,
                                     dec_threshold.value_or(cfg.match_threshold));
        }
        if (build->parsed()) {
            PipelineConfig cfg = need_config();
            return cmd_build_ft(cfg, util::to_lower_ascii(ft_source), ft_corpus, ft_model, ft_n,
                                ft_seed.value_or(cfg.seed), ft_out);
        }
        if (merge->parsed()) {
            return cmd_merge_ft(merge_inputs, merge_out);
        }
        if (eval->parsed()) {
            PipelineConfig cfg = need_config();
            return cmd_evaluate(cfg, eval_model, eval_corpus, eval_corpus_file,
                                eval_seed.value_or(cfg.seed),
                                eval_threshold.value_or(cfg.match_threshold), eval_out);
        }
        if (analyze->parsed()) {
            return cmd_analyze(need_config(), an_ledgers, an_ft, an_out, an_type_floor,
                               an_strength_floor, an_include_unmatched);
        }
        throw InputError("no subcommand given");
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const PipelineError& e) {
        std::cerr << "pipeline failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected failure: " << e.what() << "\n";
        return 2;
    }
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<std::string> full;
    full.reserve(args.size() + 1);
    full.push_back("biaseval");
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(full.size());
    for (const std::string& a : full) {
        argv.push_back(a.c_str());
    }
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

} // namespace biaseval
