#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "biaseval/evalcore.hpp"
#include "biaseval/modelgw.hpp"
#include "biaseval/promptkit.hpp"

namespace biaseval {

struct CorpusSpec {
    std::string kind; // "babe" | "basil" | "canonical"
    std::string path;
    std::string canonical; // canonical TSV used downstream; defaulted when empty
};

struct PipelineConfig {
    std::string taxonomy_path = "data/taxonomy.json";
    std::map<std::string, CorpusSpec> corpora;
    std::map<std::string, ModelConfig> models;
    PromptConfig prompt;
    uint64_t seed = 1;
    int match_threshold = 80;
    std::vector<double> sweep_grid;
    std::string out_dir = "out";
};

PipelineConfig load_pipeline_config(const std::string& path);
ModelConfig model_config_from_json(const nlohmann::json& j);
PromptConfig prompt_config_from_json(const nlohmann::json& j);

/// Full command-line entry point; returns the process exit code
/// (0 success, 1 input error, 2 pipeline failure).
int run_cli(int argc, const char* const* argv);
/// Same, args given without the program name. Used by tests.
int run_cli(const std::vector<std::string>& args);

} // namespace biaseval
