#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "persona_audit/providers.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

namespace persona_audit {

json ChatRequest::canonical_body() const {
    json j{{"model", model},
           {"system", system_text},
           {"user", user_text},
           {"temperature", temperature},
           {"max_tokens", max_tokens}};
    if (attempt > 0) j["attempt"] = attempt;
    return j;
}

void ChatRequest::validate() const {
    if (model.empty()) throw std::invalid_argument("chat request: empty model id");
    if (user_text.empty()) throw std::invalid_argument("chat request: empty user text");
    if (temperature < 0.0) throw std::invalid_argument("chat request: negative temperature");
}

double EmbeddingVector::norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
}

bool ProviderError::retryable() const {
    if (kind_ == Kind::transport) return true;
    if (kind_ == Kind::status) {
        return status_ == 408 || status_ == 429 || status_ >= 500;
    }
    return false;
}

std::chrono::milliseconds BackoffPolicy::delay(int attempt_index, double uniform01) const {
    double raw = static_cast<double>(base.count()) * std::pow(2.0, attempt_index);
    raw = std::min(raw, static_cast<double>(cap.count()));
    const double jittered = raw / 2.0 + uniform01 * (raw / 2.0);
    const auto ms = static_cast<long long>(std::min(jittered, static_cast<double>(cap.count())));
    return std::chrono::milliseconds(ms);
}

SleepFn real_sleep() {
    return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

UniformFn default_uniform() {
    return [] {
        thread_local std::mt19937_64 rng(std::random_device{}());
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    };
}

namespace {

struct ParsedUrl {
    std::string origin;  // scheme://host[:port]
    std::string prefix;  // path prefix, no trailing slash
};

ParsedUrl parse_base_url(const std::string& base_url) {
    const auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos) {
        throw std::invalid_argument("base url must include a scheme: " + base_url);
    }
    const auto path_start = base_url.find('/', scheme_end + 3);
    ParsedUrl out;
    if (path_start == std::string::npos) {
        out.origin = base_url;
    } else {
        out.origin = base_url.substr(0, path_start);
        out.prefix = base_url.substr(path_start);
    }
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
    return out;
}

std::string api_key_from_env(const std::string& env_name) {
    if (env_name.empty()) return "";
    const char* value = std::getenv(env_name.c_str());
    return value ? value : "";
}

json post_json(const HttpEndpoint& endpoint, const std::string& path, const json& body,
               const std::string& context) {
    const ParsedUrl url = parse_base_url(endpoint.base_url);
    httplib::Client client(url.origin);
    client.set_connection_timeout(endpoint.timeout_seconds, 0);
    client.set_read_timeout(endpoint.timeout_seconds, 0);
    client.set_write_timeout(endpoint.timeout_seconds, 0);

    httplib::Headers headers;
    const std::string key = api_key_from_env(endpoint.api_key_env);
    if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);

    const auto res = client.Post(url.prefix + path, headers, body.dump(), "application/json");
    if (!res) {
        throw ProviderError(ProviderError::Kind::transport,
                            context + ": transport failure (" + httplib::to_string(res.error()) + ")");
    }
    if (res->status < 200 || res->status >= 300) {
        throw ProviderError(ProviderError::Kind::status,
                            context + ": HTTP " + std::to_string(res->status) + ": " + res->body,
                            res->status);
    }
    json parsed = json::parse(res->body, nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded()) {
        throw ProviderError(ProviderError::Kind::empty_completion, context + ": unparseable response body");
    }
    return parsed;
}

}  // namespace

OpenAiChatClient::OpenAiChatClient(HttpEndpoint endpoint, BackoffPolicy backoff, SleepFn sleep,
                                   UniformFn uniform)
    : endpoint_(std::move(endpoint)), backoff_(backoff), sleep_(std::move(sleep)),
      uniform_(std::move(uniform)) {}

std::string OpenAiChatClient::chat(const ChatRequest& request) {
    request.validate();
    const std::string context = "chat(" + request.model + ")";
    json messages = json::array();
    if (!request.system_text.empty()) {
        messages.push_back(json{{"role", "system"}, {"content", request.system_text}});
    }
    messages.push_back(json{{"role", "user"}, {"content", request.user_text}});
    const json body{{"model", request.model},
                    {"messages", messages},
                    {"temperature", request.temperature},
                    {"max_tokens", request.max_tokens}};

    return with_retries(backoff_, sleep_, uniform_, [&] {
        const json res = post_json(endpoint_, "/chat/completions", body, context);
        if (!res.contains("choices") || !res["choices"].is_array() || res["choices"].empty()) {
            throw ProviderError(ProviderError::Kind::empty_completion, context + ": no choices in response");
        }
        const json& message = res["choices"][0].value("message", json::object());
        std::string content = message.value("content", "");
        if (content.empty()) {
            throw ProviderError(ProviderError::Kind::empty_completion, context + ": empty completion");
        }
        return content;
    });
}

OpenAiEmbeddingClient::OpenAiEmbeddingClient(HttpEndpoint endpoint, std::string model, int dimension,
                                             BackoffPolicy backoff, SleepFn sleep, UniformFn uniform)
    : endpoint_(std::move(endpoint)), model_(std::move(model)), dimension_(dimension),
      backoff_(backoff), sleep_(std::move(sleep)), uniform_(std::move(uniform)) {}

std::vector<EmbeddingVector> OpenAiEmbeddingClient::embed(const std::vector<std::string>& texts) {
    if (texts.empty()) throw std::invalid_argument("embed: no texts");
    const std::string context = "embed(" + model_ + ")";
    const json body{{"model", model_}, {"input", texts}};

    return with_retries(backoff_, sleep_, uniform_, [&] {
        const json res = post_json(endpoint_, "/embeddings", body, context);
        if (!res.contains("data") || !res["data"].is_array() || res["data"].size() != texts.size()) {
            throw ProviderError(ProviderError::Kind::empty_completion,
                                context + ": embedding count mismatch");
        }
        std::vector<EmbeddingVector> out(texts.size());
        for (const auto& item : res["data"]) {
            const std::size_t index = item.at("index").get<std::size_t>();
            if (index >= out.size()) {
                throw ProviderError(ProviderError::Kind::empty_completion, context + ": bad index");
            }
            out[index].values = item.at("embedding").get<std::vector<double>>();
            out[index].model = model_;
            if (static_cast<int>(out[index].values.size()) != dimension_) {
                throw ProviderError(ProviderError::Kind::dimension_mismatch,
                                    context + ": expected dimension " + std::to_string(dimension_) +
                                        ", got " + std::to_string(out[index].values.size()));
            }
        }
        return out;
    });
}

CachingChatProvider::CachingChatProvider(ChatProvider& inner, CacheStore& cache)
    : inner_(inner), cache_(cache) {}

std::string CachingChatProvider::cache_key(const ChatRequest& request) const {
    return CacheStore::make_key("chat", request.model, canonical_json(request.canonical_body()));
}

std::optional<std::string> CachingChatProvider::lookup(const ChatRequest& request) const {
    return cache_.get(cache_key(request));
}

std::string CachingChatProvider::call_inner(const ChatRequest& request) { return inner_.chat(request); }

void CachingChatProvider::store(const ChatRequest& request, const std::string& response) {
    cache_.put(cache_key(request), "chat", request.model, response);
}

std::string CachingChatProvider::chat(const ChatRequest& request) {
    if (auto hit = lookup(request)) return *hit;
    std::string fresh = inner_.chat(request);
    store(request, fresh);
    return fresh;
}

CachingEmbeddingProvider::CachingEmbeddingProvider(EmbeddingProvider& inner, CacheStore& cache)
    : inner_(inner), cache_(cache) {}

std::string CachingEmbeddingProvider::key_for(const std::string& text) const {
    const json body{{"input", text}, {"dimension", inner_.dimension()}};
    return CacheStore::make_key("embeddings", inner_.model(), canonical_json(body));
}

std::vector<EmbeddingVector> CachingEmbeddingProvider::embed(const std::vector<std::string>& texts) {
    if (texts.empty()) throw std::invalid_argument("embed: no texts");
    std::vector<EmbeddingVector> out(texts.size());
    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (auto hit = cache_.get(key_for(texts[i]))) {
            out[i].values = json::parse(*hit).get<std::vector<double>>();
            out[i].model = inner_.model();
        } else {
            missing.push_back(i);
        }
    }
    if (!missing.empty()) {
        std::vector<std::string> miss_texts;
        miss_texts.reserve(missing.size());
        for (std::size_t i : missing) miss_texts.push_back(texts[i]);
        const auto fresh = inner_.embed(miss_texts);
        for (std::size_t k = 0; k < missing.size(); ++k) {
            out[missing[k]] = fresh[k];
            cache_.put(key_for(texts[missing[k]]), "embeddings", inner_.model(),
                       json(fresh[k].values).dump());
        }
    }
    return out;
}

}  // namespace persona_audit
