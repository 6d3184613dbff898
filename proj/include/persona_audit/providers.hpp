#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "persona_audit/cache.hpp"
#include "persona_audit/util.hpp"

namespace persona_audit {

struct ChatRequest {
    std::string model;
    std::string system_text;  // may be empty (no system message on the wire)
    std::string user_text;
    double temperature = 0.0;
    int max_tokens = 512;
    int attempt = 0;  // re-ask counter; part of the cache identity when > 0

    /// Canonical body used for cache keys and the mock provider.
    json canonical_body() const;
    void validate() const;
};

struct EmbeddingVector {
    std::vector<double> values;
    std::string model;

    std::size_t dimension() const { return values.size(); }
    double norm() const;
};

class ProviderError : public std::runtime_error {
  public:
    enum class Kind { transport, status, empty_completion, dimension_mismatch };

    ProviderError(Kind kind, const std::string& message, int status = 0)
        : std::runtime_error(message), kind_(kind), status_(status) {}

    Kind kind() const { return kind_; }
    int status() const { return status_; }
    /// Transport failures and throttling/server statuses are worth retrying;
    /// other client errors are not.
    bool retryable() const;

  private:
    Kind kind_;
    int status_;
};

class ChatProvider {
  public:
    virtual ~ChatProvider() = default;
    virtual std::string chat(const ChatRequest& request) = 0;
    virtual std::string name() const = 0;
};

class EmbeddingProvider {
  public:
    virtual ~EmbeddingProvider() = default;
    /// One vector per text, order-preserving.
    virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) = 0;
    virtual int dimension() const = 0;
    virtual std::string model() const = 0;
};

// ---- retry with exponential backoff -----------------------------------------

struct BackoffPolicy {
    int retry_budget = 3;
    std::chrono::milliseconds base{250};
    std::chrono::milliseconds cap{8000};

    /// Delay before retry i (0-based): raw = base * 2^i, jittered to
    /// [raw/2, raw], then capped.
    std::chrono::milliseconds delay(int attempt_index, double uniform01) const;
};

using SleepFn = std::function<void(std::chrono::milliseconds)>;
using UniformFn = std::function<double()>;

SleepFn real_sleep();
UniformFn default_uniform();

/// Runs fn up to 1 + policy.retry_budget times, sleeping per the backoff
/// schedule between attempts. Only retryable ProviderErrors are retried; the
/// last error propagates once the budget is exhausted.
template <typename Fn>
auto with_retries(const BackoffPolicy& policy, const SleepFn& sleep, const UniformFn& uniform, Fn&& fn) {
    int attempt = 0;
    for (;;) {
        try {
            return fn();
        } catch (const ProviderError& e) {
            if (!e.retryable() || attempt >= policy.retry_budget) throw;
            sleep(policy.delay(attempt, uniform()));
            ++attempt;
        }
    }
}

// ---- OpenAI-compatible HTTP clients ------------------------------------------

struct HttpEndpoint {
    std::string base_url;     // e.g. "https://api.openai.com/v1"
    std::string api_key_env;  // env var holding the bearer token; empty -> no auth header
    int timeout_seconds = 120;
};

class OpenAiChatClient : public ChatProvider {
  public:
    OpenAiChatClient(HttpEndpoint endpoint, BackoffPolicy backoff, SleepFn sleep = real_sleep(),
                     UniformFn uniform = default_uniform());
    std::string chat(const ChatRequest& request) override;
    std::string name() const override { return "openai-chat"; }

  private:
    HttpEndpoint endpoint_;
    BackoffPolicy backoff_;
    SleepFn sleep_;
    UniformFn uniform_;
};

class OpenAiEmbeddingClient : public EmbeddingProvider {
  public:
    OpenAiEmbeddingClient(HttpEndpoint endpoint, std::string model, int dimension,
                          BackoffPolicy backoff, SleepFn sleep = real_sleep(),
                          UniformFn uniform = default_uniform());
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
    int dimension() const override { return dimension_; }
    std::string model() const override { return model_; }

  private:
    HttpEndpoint endpoint_;
    std::string model_;
    int dimension_;
    BackoffPolicy backoff_;
    SleepFn sleep_;
    UniformFn uniform_;
};

// ---- caching wrappers ---------------------------------------------------------

/// Transparent read-through cache around a ChatProvider. chat() serves hits
/// byte-identically with no inner call and appends fresh results immediately.
/// The split lookup/call/store surface lets batch runners commit fresh
/// entries in deterministic (plan) order instead of completion order.
class CachingChatProvider : public ChatProvider {
  public:
    CachingChatProvider(ChatProvider& inner, CacheStore& cache);

    std::string chat(const ChatRequest& request) override;
    std::string name() const override { return inner_.name() + "+cache"; }

    std::string cache_key(const ChatRequest& request) const;
    std::optional<std::string> lookup(const ChatRequest& request) const;
    std::string call_inner(const ChatRequest& request);
    void store(const ChatRequest& request, const std::string& response);

  private:
    ChatProvider& inner_;
    CacheStore& cache_;
};

/// Read-through cache around an EmbeddingProvider, keyed per text. Fresh
/// entries are appended in input order.
class CachingEmbeddingProvider : public EmbeddingProvider {
  public:
    CachingEmbeddingProvider(EmbeddingProvider& inner, CacheStore& cache);

    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
    int dimension() const override { return inner_.dimension(); }
    std::string model() const override { return inner_.model(); }

  private:
    std::string key_for(const std::string& text) const;

    EmbeddingProvider& inner_;
    CacheStore& cache_;
};

}  // namespace persona_audit
