#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "persona_audit/model.hpp"

namespace persona_audit {

struct ModelConfig {
    std::vector<std::string> generators{"gpt-4o-mini"};
    std::string scenario = "gpt-4o";
    std::string judge = "gpt-4o-mini";
    std::string embedding = "all-mpnet-base-v2";
};

struct ProviderConfig {
    std::string chat_base_url = "https://api.openai.com/v1";
    std::string chat_api_key_env = "OPENAI_API_KEY";
    std::string embed_base_url;     // defaults to chat_base_url
    std::string embed_api_key_env;  // defaults to chat_api_key_env
    int embedding_dimension = 768;
    double temperature = 0.0;
    double judge_temperature = 0.0;
    double scenario_temperature = 1.0;
    int max_tokens = 512;
    int judge_max_tokens = 1024;
    int scenario_max_tokens = 4096;
    int max_in_flight = 4;
    int retry_budget = 3;
    int backoff_base_ms = 250;
    int backoff_cap_ms = 8000;
    int judge_reask_budget = 2;
    int batch_retry_budget = 2;
    std::string cache_path;  // defaults to <run_dir>/cache.jsonl
};

struct ReportConfig {
    int distance_decimals = 3;  // cosine distances and win rates
    int std_decimals = 4;
    int percent_decimals = 1;
};

struct Config {
    std::string run_dir = "run";
    ModelConfig models;
    ProviderConfig providers;
    ReportConfig report;
    std::vector<DemographicAxis> axes = default_axis_registry();
    std::vector<ContextualDimension> dimensions = default_dimension_registry();
    std::optional<std::uint64_t> mock_seed;  // set via --mock; replaces every provider

    std::filesystem::path resolved_cache_path() const;

    static Config from_json(const json& j);
    static Config load(const std::filesystem::path& path);
    json to_json() const;
};

}  // namespace persona_audit
