#pragma once

#include <optional>
#include <string>
#include <vector>

#include "persona_audit/config.hpp"
#include "persona_audit/corpus.hpp"
#include "persona_audit/judging.hpp"
#include "persona_audit/runstore.hpp"
#include "persona_audit/sensitivity.hpp"
#include "persona_audit/stats.hpp"

namespace persona_audit {

struct StageSummary {
    std::string stage;
    std::size_t planned = 0;
    std::size_t already_stored = 0;
    std::size_t cache_hits = 0;
    std::size_t executed = 0;  // fresh provider calls
    std::size_t failed = 0;
    std::size_t unusable_pairs = 0;  // judge stage: pairs excluded after re-asks
    std::vector<std::string> errors;

    bool ok() const { return failed == 0; }
    std::string to_text() const;
};

/// Executes every planned chat call that is not already stored. Provider
/// calls run in parallel under the in-flight bound; results, including fresh
/// cache entries, are committed serially in plan order so reruns are
/// byte-identical. Failed calls are reported and left for a resumed run.
StageSummary respond_stage(RunStore& store, const std::vector<PlannedCall>& plan,
                           CachingChatProvider& chat, const Config& config);

/// Embeds every stored response that lacks an embedding, in store order.
StageSummary embed_stage(RunStore& store, CachingEmbeddingProvider& embed, const Config& config,
                         int batch_size = 64);

/// Issues the two order-swapped judge calls per (model, scenario, combo) pair
/// whose responses are stored. First pass runs in parallel over fresh
/// prompts; invalid verdicts are re-asked serially up to the re-ask budget.
StageSummary judge_stage(RunStore& store, const Corpus& corpus, CachingChatProvider& judge,
                         const Config& config);

// ---- analysis --------------------------------------------------------------

struct AxisMetrics {
    std::string axis;
    MetricMatrix cos_all, cos_nopd, cos_pd;
    MetricMatrix wr_all, wr_nopd, wr_pd;
};

struct ModelMetrics {
    std::string model;
    std::vector<AxisMetrics> axes;
    BiasSummary bias_all, bias_nopd, bias_pd;
    std::optional<double> cos_pct_change;  // AvgStd change NoPD -> PD
    std::optional<double> wr_pct_change;
    std::vector<AxisExtremes> extremes_cos;
    std::vector<AxisExtremes> extremes_wr;
    std::vector<std::pair<std::string, std::optional<double>>> axis_means_cos;
    std::vector<std::pair<std::string, std::optional<double>>> axis_means_wr;
    std::size_t scenario_count = 0;
    std::size_t distance_pairs = 0;
    std::size_t judged_pairs = 0;
    std::size_t unusable_pairs = 0;
};

struct MetricsBundle {
    std::string corpus_fingerprint;
    std::string registry_fingerprint;
    std::vector<ModelMetrics> models;

    json to_json() const;
    static MetricsBundle from_json(const json& j);
};

/// Builds every per-axis matrix (cosine distance and win rate, All/NoPD/PD),
/// bias summaries, extremes rankings and axis means from the stored records.
/// Missing prerequisite stores are named in the thrown error.
MetricsBundle analyze(const RunStore& store, const Config& config);

std::filesystem::path metrics_bundle_path(const RunStore& store);
void write_metrics(const RunStore& store, const MetricsBundle& bundle);
MetricsBundle load_metrics(const RunStore& store);

}  // namespace persona_audit
