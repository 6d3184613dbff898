#include "persona_audit/pipeline.hpp"

#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "persona_audit/kernels.hpp"
#include "persona_audit/parallel.hpp"

namespace persona_audit {

std::string StageSummary::to_text() const {
    std::ostringstream out;
    out << stage << ": planned " << planned << ", already stored " << already_stored << ", cache hits "
        << cache_hits << ", executed " << executed << ", failed " << failed;
    if (stage == "judge") out << ", unusable pairs " << unusable_pairs;
    out << "\n";
    for (std::size_t i = 0; i < errors.size() && i < 10; ++i) out << "  error: " << errors[i] << "\n";
    if (errors.size() > 10) out << "  (" << errors.size() - 10 << " more)\n";
    return out.str();
}

namespace {

struct CallResult {
    std::string text;
    bool fresh = false;
    std::string error;
};

/// Parallel map over requests with cache-aware calls; fresh cache writes are
/// deferred to the caller so they land in deterministic order.
std::vector<CallResult> run_chat_batch(const std::vector<ChatRequest>& requests,
                                       CachingChatProvider& chat, int max_in_flight) {
    std::vector<CallResult> results(requests.size());
    parallel_for_bounded(requests.size(), max_in_flight, [&](std::size_t i) {
        CallResult& r = results[i];
        try {
            if (auto hit = chat.lookup(requests[i])) {
                r.text = *hit;
            } else {
                r.text = chat.call_inner(requests[i]);
                r.fresh = true;
            }
        } catch (const std::exception& e) {
            r.error = e.what();
        }
    });
    return results;
}

}  // namespace

StageSummary respond_stage(RunStore& store, const std::vector<PlannedCall>& plan,
                           CachingChatProvider& chat, const Config& config) {
    StageSummary summary;
    summary.stage = "respond";
    summary.planned = plan.size();

    std::unordered_set<std::string> stored;
    for (const auto& r : store.load_responses()) stored.insert(r.key());

    std::vector<const PlannedCall*> todo;
    for (const auto& call : plan) {
        const std::string key = call.model + "|" + call.spec.scenario_id + "|" + call.spec.combo.key();
        if (stored.count(key)) {
            ++summary.already_stored;
        } else {
            todo.push_back(&call);
        }
    }

    std::vector<ChatRequest> requests;
    requests.reserve(todo.size());
    for (const PlannedCall* call : todo) {
        ChatRequest r;
        r.model = call->model;
        r.system_text = call->spec.system_text;
        r.user_text = call->spec.user_text;
        r.temperature = config.providers.temperature;
        r.max_tokens = config.providers.max_tokens;
        requests.push_back(std::move(r));
    }

    const auto results = run_chat_batch(requests, chat, config.providers.max_in_flight);
    for (std::size_t i = 0; i < todo.size(); ++i) {
        const CallResult& r = results[i];
        if (!r.error.empty()) {
            ++summary.failed;
            summary.errors.push_back(todo[i]->spec.scenario_id + "/" + todo[i]->spec.combo.key() + ": " +
                                     r.error);
            continue;
        }
        if (r.fresh) {
            chat.store(requests[i], r.text);
            ++summary.executed;
        } else {
            ++summary.cache_hits;
        }
        store.append_response({todo[i]->spec, todo[i]->model, r.text});
    }
    return summary;
}

StageSummary embed_stage(RunStore& store, CachingEmbeddingProvider& embed, const Config& config,
                         int batch_size) {
    (void)config;
    StageSummary summary;
    summary.stage = "embed";
    if (batch_size < 1) batch_size = 1;

    const auto responses = store.load_responses();
    summary.planned = responses.size();

    std::unordered_set<std::string> stored;
    for (const auto& e : store.load_embeddings()) stored.insert(e.key());

    std::vector<const GenerationRecord*> todo;
    for (const auto& r : responses) {
        if (stored.count(r.key())) {
            ++summary.already_stored;
        } else {
            todo.push_back(&r);
        }
    }

    // Batches run serially: one provider call covers many texts, and the
    // per-text cache appends stay in store order.
    for (std::size_t begin = 0; begin < todo.size(); begin += static_cast<std::size_t>(batch_size)) {
        const std::size_t end = std::min(todo.size(), begin + static_cast<std::size_t>(batch_size));
        std::vector<std::string> texts;
        texts.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i) texts.push_back(todo[i]->response_text);
        std::vector<EmbeddingVector> vectors;
        try {
            vectors = embed.embed(texts);
            summary.executed += texts.size();
        } catch (const std::exception& e) {
            summary.failed += texts.size();
            summary.errors.push_back(e.what());
            continue;
        }
        for (std::size_t i = begin; i < end; ++i) {
            EmbeddingRecord rec;
            rec.scenario_id = todo[i]->spec.scenario_id;
            rec.combo = todo[i]->spec.combo;
            rec.model = todo[i]->model;
            rec.embedding_model = embed.model();
            rec.values = std::move(vectors[i - begin].values);
            store.append_embedding(rec);
        }
    }
    return summary;
}

namespace {

struct JudgePairTask {
    const Scenario* scenario = nullptr;
    DemographicCombo combo;
    std::string model;
    std::string demog_response;
    std::string baseline_response;
};

}  // namespace

StageSummary judge_stage(RunStore& store, const Corpus& corpus, CachingChatProvider& judge,
                         const Config& config) {
    StageSummary summary;
    summary.stage = "judge";

    std::unordered_map<std::string, const Scenario*> scenarios;
    for (const auto& s : corpus.scenarios) scenarios[s.id] = &s;

    std::unordered_map<std::string, std::string> responses;  // key -> text
    for (const auto& r : store.load_responses()) responses[r.key()] = r.response_text;

    std::unordered_set<std::string> stored;
    for (const auto& j : store.load_judgments()) stored.insert(j.key());

    const auto combos = enumerate_combos(config.axes);

    // Pair tasks in deterministic (model, scenario, combo) order; baseline
    // responses are the comparison side and are never judged against themselves.
    std::vector<JudgePairTask> tasks;
    for (const auto& model : config.models.generators) {
        for (const auto& s : corpus.scenarios) {
            const auto baseline_it = responses.find(model + "|" + s.id + "|baseline");
            if (baseline_it == responses.end()) continue;
            for (const auto& combo : combos) {
                if (combo.is_baseline()) continue;
                const auto demog_it = responses.find(model + "|" + s.id + "|" + combo.key());
                if (demog_it == responses.end()) continue;
                JudgePairTask t;
                t.scenario = &s;
                t.combo = combo;
                t.model = model;
                t.demog_response = demog_it->second;
                t.baseline_response = baseline_it->second;
                tasks.push_back(std::move(t));
            }
        }
    }
    summary.planned = tasks.size() * 2;

    JudgeOptions base_options;
    base_options.judge_model = config.models.judge;
    base_options.temperature = config.providers.judge_temperature;
    base_options.max_tokens = config.providers.judge_max_tokens;
    base_options.reask_budget = config.providers.judge_reask_budget;

    struct OrderSlot {
        const JudgePairTask* task = nullptr;
        int order = 1;
        ChatRequest request;
        bool skip = false;
    };
    std::vector<OrderSlot> slots;
    slots.reserve(tasks.size() * 2);
    for (const auto& t : tasks) {
        JudgeOptions options = base_options;
        options.generator_model = t.model;
        auto requests = judge_requests(*t.scenario, t.combo, t.demog_response, t.baseline_response, options);
        for (int order = 1; order <= 2; ++order) {
            OrderSlot slot;
            slot.task = &t;
            slot.order = order;
            slot.request = std::move(requests[static_cast<std::size_t>(order - 1)]);
            JudgmentRecord probe;
            probe.scenario_id = t.scenario->id;
            probe.combo = t.combo;
            probe.model = t.model;
            probe.order = order;
            slot.skip = stored.count(probe.key()) > 0;
            if (slot.skip) ++summary.already_stored;
            slots.push_back(std::move(slot));
        }
    }

    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!slots[i].skip) live.push_back(i);
    }
    std::vector<ChatRequest> requests;
    requests.reserve(live.size());
    for (std::size_t i : live) requests.push_back(slots[i].request);
    const auto results = run_chat_batch(requests, judge, config.providers.max_in_flight);

    // Serial commit + re-ask pass, in slot order. Re-asks repeat the identical
    // prompt; the attempt counter only keeps their cache entries distinct.
    std::map<std::string, std::array<bool, 2>> pair_valid;  // pair key -> per-order validity
    for (std::size_t k = 0; k < live.size(); ++k) {
        const OrderSlot& slot = slots[live[k]];
        const CallResult& first = results[k];
        JudgmentRecord rec;
        rec.scenario_id = slot.task->scenario->id;
        rec.combo = slot.task->combo;
        rec.model = slot.task->model;
        rec.judge_model = config.models.judge;
        rec.order = slot.order;

        std::string error = first.error;
        if (error.empty()) {
            if (first.fresh) {
                judge.store(slot.request, first.text);
                ++summary.executed;
            } else {
                ++summary.cache_hits;
            }
            rec.raw = first.text;
            try {
                rec.verdict = parse_verdict(rec.raw);
                rec.score = score_pair(rec.verdict, slot.order == 1 ? 'A' : 'B');
            } catch (const InvalidVerdictError&) {
                for (int attempt = 1; attempt <= config.providers.judge_reask_budget; ++attempt) {
                    ChatRequest reask = slot.request;
                    reask.attempt = attempt;
                    try {
                        rec.raw = judge.chat(reask);
                        ++summary.executed;
                        rec.verdict = parse_verdict(rec.raw);
                        rec.score = score_pair(rec.verdict, slot.order == 1 ? 'A' : 'B');
                        break;
                    } catch (const InvalidVerdictError&) {
                        rec.verdict = Verdict::Invalid;
                        rec.score.reset();
                    } catch (const std::exception& e) {
                        error = e.what();
                        break;
                    }
                }
            }
        }
        if (!error.empty()) {
            ++summary.failed;
            summary.errors.push_back(rec.scenario_id + "/" + rec.combo.key() + " order " +
                                     std::to_string(slot.order) + ": " + error);
            continue;
        }
        store.append_judgment(rec);
        const std::string pair_key = rec.model + "|" + rec.scenario_id + "|" + rec.combo.key();
        pair_valid.try_emplace(pair_key, std::array<bool, 2>{true, true});
        if (rec.verdict == Verdict::Invalid) pair_valid[pair_key][slot.order - 1] = false;
    }
    for (const auto& [key, valid] : pair_valid) {
        if (!valid[0] || !valid[1]) ++summary.unusable_pairs;
    }
    return summary;
}

// ---- analysis ----------------------------------------------------------------

namespace {

json bias_summary_to_json(const BiasSummary& b) {
    json axes = json::array();
    for (std::size_t i = 0; i < b.axes.size(); ++i) {
        axes.push_back(json{{"axis", b.axes[i]},
                            {"cos_std", b.cos_stds[i] ? json(*b.cos_stds[i]) : json(nullptr)},
                            {"wr_std", b.wr_stds[i] ? json(*b.wr_stds[i]) : json(nullptr)}});
    }
    return json{{"split", b.split},
                {"axes", std::move(axes)},
                {"avg_std_cos", b.avg_std_cos ? json(*b.avg_std_cos) : json(nullptr)},
                {"avg_std_wr", b.avg_std_wr ? json(*b.avg_std_wr) : json(nullptr)}};
}

BiasSummary bias_summary_from_json(const json& j) {
    BiasSummary b;
    b.split = j.at("split").get<std::string>();
    for (const auto& a : j.at("axes")) {
        b.axes.push_back(a.at("axis").get<std::string>());
        b.cos_stds.push_back(a.at("cos_std").is_null() ? std::nullopt
                                                       : std::optional(a.at("cos_std").get<double>()));
        b.wr_stds.push_back(a.at("wr_std").is_null() ? std::nullopt
                                                     : std::optional(a.at("wr_std").get<double>()));
    }
    if (!j.at("avg_std_cos").is_null()) b.avg_std_cos = j.at("avg_std_cos").get<double>();
    if (!j.at("avg_std_wr").is_null()) b.avg_std_wr = j.at("avg_std_wr").get<double>();
    return b;
}

json extreme_selection_to_json(const ExtremeSelection& s) {
    return json{{"res_identities", s.res_identities},
                {"sub_identities", s.sub_identities},
                {"res_marginal", s.res_marginal ? json(*s.res_marginal) : json(nullptr)},
                {"sub_cell", s.sub_cell ? json(*s.sub_cell) : json(nullptr)}};
}

ExtremeSelection extreme_selection_from_json(const json& j) {
    ExtremeSelection s;
    s.res_identities = j.at("res_identities").get<std::vector<std::string>>();
    s.sub_identities = j.at("sub_identities").get<std::vector<std::string>>();
    if (!j.at("res_marginal").is_null()) s.res_marginal = j.at("res_marginal").get<double>();
    if (!j.at("sub_cell").is_null()) s.sub_cell = j.at("sub_cell").get<double>();
    return s;
}

json axis_extremes_to_json(const AxisExtremes& e) {
    return json{{"axis", e.axis},
                {"lowest", extreme_selection_to_json(e.lowest)},
                {"highest", extreme_selection_to_json(e.highest)}};
}

AxisExtremes axis_extremes_from_json(const json& j) {
    return AxisExtremes{j.at("axis").get<std::string>(),
                        extreme_selection_from_json(j.at("lowest")),
                        extreme_selection_from_json(j.at("highest"))};
}

json axis_means_to_json(const std::vector<std::pair<std::string, std::optional<double>>>& means) {
    json arr = json::array();
    for (const auto& [axis, mean] : means) {
        arr.push_back(json{{"axis", axis}, {"mean", mean ? json(*mean) : json(nullptr)}});
    }
    return arr;
}

std::vector<std::pair<std::string, std::optional<double>>> axis_means_from_json(const json& j) {
    std::vector<std::pair<std::string, std::optional<double>>> out;
    for (const auto& m : j) {
        out.emplace_back(m.at("axis").get<std::string>(),
                         m.at("mean").is_null() ? std::nullopt
                                                : std::optional(m.at("mean").get<double>()));
    }
    return out;
}

}  // namespace

json MetricsBundle::to_json() const {
    json models_json = json::array();
    for (const auto& m : models) {
        json axes = json::array();
        for (const auto& a : m.axes) {
            axes.push_back(json{{"axis", a.axis},
                                {"cos_all", a.cos_all.to_json()},
                                {"cos_nopd", a.cos_nopd.to_json()},
                                {"cos_pd", a.cos_pd.to_json()},
                                {"wr_all", a.wr_all.to_json()},
                                {"wr_nopd", a.wr_nopd.to_json()},
                                {"wr_pd", a.wr_pd.to_json()}});
        }
        json extremes_cos = json::array(), extremes_wr = json::array();
        for (const auto& e : m.extremes_cos) extremes_cos.push_back(axis_extremes_to_json(e));
        for (const auto& e : m.extremes_wr) extremes_wr.push_back(axis_extremes_to_json(e));
        models_json.push_back(json{
            {"model", m.model},
            {"axes", std::move(axes)},
            {"bias_all", bias_summary_to_json(m.bias_all)},
            {"bias_nopd", bias_summary_to_json(m.bias_nopd)},
            {"bias_pd", bias_summary_to_json(m.bias_pd)},
            {"cos_pct_change", m.cos_pct_change ? json(*m.cos_pct_change) : json(nullptr)},
            {"wr_pct_change", m.wr_pct_change ? json(*m.wr_pct_change) : json(nullptr)},
            {"extremes_cos", std::move(extremes_cos)},
            {"extremes_wr", std::move(extremes_wr)},
            {"axis_means_cos", axis_means_to_json(m.axis_means_cos)},
            {"axis_means_wr", axis_means_to_json(m.axis_means_wr)},
            {"scenario_count", m.scenario_count},
            {"distance_pairs", m.distance_pairs},
            {"judged_pairs", m.judged_pairs},
            {"unusable_pairs", m.unusable_pairs},
        });
    }
    return json{{"corpus_fingerprint", corpus_fingerprint},
                {"registry_fingerprint", registry_fingerprint},
                {"models", std::move(models_json)}};
}

MetricsBundle MetricsBundle::from_json(const json& j) {
    MetricsBundle b;
    b.corpus_fingerprint = j.at("corpus_fingerprint").get<std::string>();
    b.registry_fingerprint = j.at("registry_fingerprint").get<std::string>();
    for (const auto& mj : j.at("models")) {
        ModelMetrics m;
        m.model = mj.at("model").get<std::string>();
        for (const auto& aj : mj.at("axes")) {
            AxisMetrics a;
            a.axis = aj.at("axis").get<std::string>();
            a.cos_all = MetricMatrix::from_json(aj.at("cos_all"));
            a.cos_nopd = MetricMatrix::from_json(aj.at("cos_nopd"));
            a.cos_pd = MetricMatrix::from_json(aj.at("cos_pd"));
            a.wr_all = MetricMatrix::from_json(aj.at("wr_all"));
            a.wr_nopd = MetricMatrix::from_json(aj.at("wr_nopd"));
            a.wr_pd = MetricMatrix::from_json(aj.at("wr_pd"));
            m.axes.push_back(std::move(a));
        }
        m.bias_all = bias_summary_from_json(mj.at("bias_all"));
        m.bias_nopd = bias_summary_from_json(mj.at("bias_nopd"));
        m.bias_pd = bias_summary_from_json(mj.at("bias_pd"));
        if (!mj.at("cos_pct_change").is_null()) m.cos_pct_change = mj.at("cos_pct_change").get<double>();
        if (!mj.at("wr_pct_change").is_null()) m.wr_pct_change = mj.at("wr_pct_change").get<double>();
        for (const auto& e : mj.at("extremes_cos")) m.extremes_cos.push_back(axis_extremes_from_json(e));
        for (const auto& e : mj.at("extremes_wr")) m.extremes_wr.push_back(axis_extremes_from_json(e));
        m.axis_means_cos = axis_means_from_json(mj.at("axis_means_cos"));
        m.axis_means_wr = axis_means_from_json(mj.at("axis_means_wr"));
        m.scenario_count = mj.at("scenario_count").get<std::size_t>();
        m.distance_pairs = mj.at("distance_pairs").get<std::size_t>();
        m.judged_pairs = mj.at("judged_pairs").get<std::size_t>();
        m.unusable_pairs = mj.at("unusable_pairs").get<std::size_t>();
        b.models.push_back(std::move(m));
    }
    return b;
}

MetricsBundle analyze(const RunStore& store, const Config& config) {
    if (!std::filesystem::exists(store.corpus_path())) {
        throw std::runtime_error("analyze: missing corpus at " + store.corpus_path().string());
    }
    if (!std::filesystem::exists(store.responses_path())) {
        throw std::runtime_error("analyze: missing responses at " + store.responses_path().string());
    }
    if (!std::filesystem::exists(store.embeddings_path())) {
        throw std::runtime_error("analyze: missing embeddings at " + store.embeddings_path().string());
    }

    const Corpus corpus = corpus_from_jsonl(read_jsonl(store.corpus_path()));
    std::unordered_map<std::string, const Scenario*> scenarios;
    for (const auto& s : corpus.scenarios) scenarios[s.id] = &s;

    std::unordered_map<std::string, std::vector<double>> embeddings;
    for (auto& e : store.load_embeddings()) embeddings[e.key()] = std::move(e.values);

    const auto responses = store.load_responses();
    const auto judgments = store.load_judgments();

    MetricsBundle bundle;
    bundle.corpus_fingerprint = corpus.fingerprint();
    bundle.registry_fingerprint = registry_fingerprint(config.axes);

    for (const auto& model : config.models.generators) {
        ModelMetrics metrics;
        metrics.model = model;
        metrics.scenario_count = corpus.scenarios.size();

        std::map<std::string, std::size_t> axis_index;
        for (const auto& axis : config.axes) {
            AxisMetrics a;
            a.axis = axis.name;
            a.cos_all = MetricMatrix(axis.name, axis.identities);
            a.cos_nopd = MetricMatrix(axis.name, axis.identities);
            a.cos_pd = MetricMatrix(axis.name, axis.identities);
            a.wr_all = MetricMatrix(axis.name, axis.identities);
            a.wr_nopd = MetricMatrix(axis.name, axis.identities);
            a.wr_pd = MetricMatrix(axis.name, axis.identities);
            axis_index[axis.name] = metrics.axes.size();
            metrics.axes.push_back(std::move(a));
        }

        // Cosine distances: demographic vs baseline embedding per scenario,
        // computed with the batched kernel.
        struct DistanceTask {
            const Scenario* scenario;
            const DemographicCombo* combo;
        };
        std::vector<DistanceTask> tasks;
        std::vector<std::vector<double>> demog_vecs, baseline_vecs;
        for (const auto& r : responses) {
            if (r.model != model || r.spec.combo.is_baseline()) continue;
            const auto scenario_it = scenarios.find(r.spec.scenario_id);
            if (scenario_it == scenarios.end()) continue;
            const auto demog = embeddings.find(r.key());
            const auto baseline = embeddings.find(model + "|" + r.spec.scenario_id + "|baseline");
            if (demog == embeddings.end() || baseline == embeddings.end()) continue;
            if (!axis_index.count(r.spec.combo.axis)) continue;
            tasks.push_back({scenario_it->second, &r.spec.combo});
            demog_vecs.push_back(demog->second);
            baseline_vecs.push_back(baseline->second);
        }
        const std::vector<double> distances = kernels::cosine_distance_batch(demog_vecs, baseline_vecs);
        metrics.distance_pairs = distances.size();
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            AxisMetrics& a = metrics.axes[axis_index.at(tasks[i].combo->axis)];
            a.cos_all.add(tasks[i].combo->sub_identity, tasks[i].combo->res_identity, distances[i]);
            (tasks[i].scenario->power_disparity ? a.cos_pd : a.cos_nopd)
                .add(tasks[i].combo->sub_identity, tasks[i].combo->res_identity, distances[i]);
        }

        // Win rates: both presentation orders must carry a valid score.
        struct PairScores {
            std::optional<double> s1, s2;
            const DemographicCombo* combo = nullptr;
            const Scenario* scenario = nullptr;
        };
        std::map<std::string, PairScores> pairs;  // ordered for deterministic reduction
        for (const auto& judgment : judgments) {
            if (judgment.model != model) continue;
            const auto scenario_it = scenarios.find(judgment.scenario_id);
            if (scenario_it == scenarios.end()) continue;
            if (!axis_index.count(judgment.combo.axis)) continue;
            auto& p = pairs[judgment.scenario_id + "|" + judgment.combo.key()];
            p.scenario = scenario_it->second;
            p.combo = &judgment.combo;
            (judgment.order == 1 ? p.s1 : p.s2) = judgment.score;
        }
        for (const auto& [key, p] : pairs) {
            if (!p.s1 || !p.s2) {
                ++metrics.unusable_pairs;
                continue;
            }
            ++metrics.judged_pairs;
            const double wr = win_rate(*p.s1, *p.s2);
            AxisMetrics& a = metrics.axes[axis_index.at(p.combo->axis)];
            a.wr_all.add(p.combo->sub_identity, p.combo->res_identity, wr);
            (p.scenario->power_disparity ? a.wr_pd : a.wr_nopd)
                .add(p.combo->sub_identity, p.combo->res_identity, wr);
        }

        // Summaries, extremes, means.
        const auto collect = [&](auto member) {
            std::vector<MetricMatrix> out;
            for (const auto& a : metrics.axes) out.push_back(a.*member);
            return out;
        };
        metrics.bias_all = summarize_bias("All", collect(&AxisMetrics::cos_all), collect(&AxisMetrics::wr_all));
        metrics.bias_nopd =
            summarize_bias("NoPD", collect(&AxisMetrics::cos_nopd), collect(&AxisMetrics::wr_nopd));
        metrics.bias_pd = summarize_bias("PD", collect(&AxisMetrics::cos_pd), collect(&AxisMetrics::wr_pd));
        if (metrics.bias_nopd.avg_std_cos && metrics.bias_pd.avg_std_cos) {
            metrics.cos_pct_change = percent_change(*metrics.bias_nopd.avg_std_cos, *metrics.bias_pd.avg_std_cos);
        }
        if (metrics.bias_nopd.avg_std_wr && metrics.bias_pd.avg_std_wr) {
            metrics.wr_pct_change = percent_change(*metrics.bias_nopd.avg_std_wr, *metrics.bias_pd.avg_std_wr);
        }
        for (const auto& a : metrics.axes) {
            metrics.extremes_cos.push_back(rank_extremes(a.cos_all));
            metrics.extremes_wr.push_back(rank_extremes(a.wr_all));
            metrics.axis_means_cos.emplace_back(a.axis, a.cos_all.overall());
            metrics.axis_means_wr.emplace_back(a.axis, a.wr_all.overall());
        }
        bundle.models.push_back(std::move(metrics));
    }
    return bundle;
}

std::filesystem::path metrics_bundle_path(const RunStore& store) {
    return store.metrics_dir() / "metrics.json";
}

void write_metrics(const RunStore& store, const MetricsBundle& bundle) {
    write_file(metrics_bundle_path(store), bundle.to_json().dump(2) + "\n");
}

MetricsBundle load_metrics(const RunStore& store) {
    const auto path = metrics_bundle_path(store);
    if (!std::filesystem::exists(path)) {
        throw std::runtime_error("missing metrics bundle at " + path.string() + "; run analyze first");
    }
    return MetricsBundle::from_json(json::parse(read_file(path)));
}

}  // namespace persona_audit
