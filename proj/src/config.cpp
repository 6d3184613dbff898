#include "persona_audit/config.hpp"

#include <stdexcept>

namespace persona_audit {

std::filesystem::path Config::resolved_cache_path() const {
    if (!providers.cache_path.empty()) return providers.cache_path;
    return std::filesystem::path(run_dir) / "cache.jsonl";
}

namespace {

template <typename T>
void read_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

Config Config::from_json(const json& j) {
    Config c;
    read_if(j, "run_dir", c.run_dir);

    if (j.contains("models")) {
        const json& m = j.at("models");
        read_if(m, "generators", c.models.generators);
        read_if(m, "scenario", c.models.scenario);
        read_if(m, "judge", c.models.judge);
        read_if(m, "embedding", c.models.embedding);
    }
    if (j.contains("providers")) {
        const json& p = j.at("providers");
        read_if(p, "chat_base_url", c.providers.chat_base_url);
        read_if(p, "chat_api_key_env", c.providers.chat_api_key_env);
        read_if(p, "embed_base_url", c.providers.embed_base_url);
        read_if(p, "embed_api_key_env", c.providers.embed_api_key_env);
        read_if(p, "embedding_dimension", c.providers.embedding_dimension);
        read_if(p, "temperature", c.providers.temperature);
        read_if(p, "judge_temperature", c.providers.judge_temperature);
        read_if(p, "scenario_temperature", c.providers.scenario_temperature);
        read_if(p, "max_tokens", c.providers.max_tokens);
        read_if(p, "judge_max_tokens", c.providers.judge_max_tokens);
        read_if(p, "scenario_max_tokens", c.providers.scenario_max_tokens);
        read_if(p, "max_in_flight", c.providers.max_in_flight);
        read_if(p, "retry_budget", c.providers.retry_budget);
        read_if(p, "backoff_base_ms", c.providers.backoff_base_ms);
        read_if(p, "backoff_cap_ms", c.providers.backoff_cap_ms);
        read_if(p, "judge_reask_budget", c.providers.judge_reask_budget);
        read_if(p, "batch_retry_budget", c.providers.batch_retry_budget);
        read_if(p, "cache_path", c.providers.cache_path);
    }
    if (j.contains("report")) {
        const json& r = j.at("report");
        read_if(r, "distance_decimals", c.report.distance_decimals);
        read_if(r, "std_decimals", c.report.std_decimals);
        read_if(r, "percent_decimals", c.report.percent_decimals);
    }
    if (j.contains("registry")) {
        const json& r = j.at("registry");
        if (r.contains("axes")) {
            c.axes = axes_from_json(r.at("axes"));
        } else if (r.contains("preset")) {
            const std::string preset = r.at("preset").get<std::string>();
            if (preset != kDefaultRegistryPreset) {
                throw std::invalid_argument("unknown registry preset: " + preset);
            }
            c.axes = default_axis_registry();
        }
    }
    if (j.contains("dimensions")) {
        c.dimensions = dimensions_from_json(j.at("dimensions"));
    }
    validate_registry(c.axes);
    if (c.models.generators.empty()) throw std::invalid_argument("config: no generator models");
    if (c.providers.embedding_dimension <= 0) throw std::invalid_argument("config: bad embedding dimension");
    if (c.providers.max_in_flight <= 0) throw std::invalid_argument("config: max_in_flight must be >= 1");
    return c;
}

Config Config::load(const std::filesystem::path& path) {
    return from_json(json::parse(read_file(path)));
}

json Config::to_json() const {
    return json{
        {"run_dir", run_dir},
        {"models",
         {{"generators", models.generators},
          {"scenario", models.scenario},
          {"judge", models.judge},
          {"embedding", models.embedding}}},
        {"providers",
         {{"chat_base_url", providers.chat_base_url},
          {"chat_api_key_env", providers.chat_api_key_env},
          {"embed_base_url", providers.embed_base_url},
          {"embed_api_key_env", providers.embed_api_key_env},
          {"embedding_dimension", providers.embedding_dimension},
          {"temperature", providers.temperature},
          {"judge_temperature", providers.judge_temperature},
          {"scenario_temperature", providers.scenario_temperature},
          {"max_tokens", providers.max_tokens},
          {"judge_max_tokens", providers.judge_max_tokens},
          {"scenario_max_tokens", providers.scenario_max_tokens},
          {"max_in_flight", providers.max_in_flight},
          {"retry_budget", providers.retry_budget},
          {"backoff_base_ms", providers.backoff_base_ms},
          {"backoff_cap_ms", providers.backoff_cap_ms},
          {"judge_reask_budget", providers.judge_reask_budget},
          {"batch_retry_budget", providers.batch_retry_budget},
          {"cache_path", providers.cache_path}}},
        {"report",
         {{"distance_decimals", report.distance_decimals},
          {"std_decimals", report.std_decimals},
          {"percent_decimals", report.percent_decimals}}},
        {"registry", {{"axes", axes_to_json(axes)}}},
        {"dimensions", dimensions_to_json(dimensions)},
    };
}

}  // namespace persona_audit
