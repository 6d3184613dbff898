#include "persona_audit/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <memory>

#include "persona_audit/config.hpp"
#include "persona_audit/corpus.hpp"
#include "persona_audit/mock_provider.hpp"
#include "persona_audit/pipeline.hpp"
#include "persona_audit/planner.hpp"
#include "persona_audit/report.hpp"
#include "persona_audit/stats.hpp"

namespace persona_audit {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitProvider = 2;
constexpr int kExitValidation = 3;

std::string current_timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Everything the stages need, wired either to the mock or to HTTP clients.
struct ProviderSet {
    std::unique_ptr<CacheStore> cache;
    std::unique_ptr<MockProvider> mock;
    std::unique_ptr<OpenAiChatClient> http_chat;
    std::unique_ptr<OpenAiEmbeddingClient> http_embed;
    std::unique_ptr<CachingChatProvider> chat;
    std::unique_ptr<CachingEmbeddingProvider> embed;
};

ProviderSet make_providers(const Config& config) {
    ProviderSet p;
    p.cache = std::make_unique<CacheStore>(config.resolved_cache_path());
    BackoffPolicy backoff;
    backoff.retry_budget = config.providers.retry_budget;
    backoff.base = std::chrono::milliseconds(config.providers.backoff_base_ms);
    backoff.cap = std::chrono::milliseconds(config.providers.backoff_cap_ms);
    if (config.mock_seed) {
        p.mock = std::make_unique<MockProvider>(*config.mock_seed, config.providers.embedding_dimension);
        p.chat = std::make_unique<CachingChatProvider>(*p.mock, *p.cache);
        p.embed = std::make_unique<CachingEmbeddingProvider>(*p.mock, *p.cache);
        return p;
    }
    HttpEndpoint chat_endpoint{config.providers.chat_base_url, config.providers.chat_api_key_env};
    HttpEndpoint embed_endpoint{
        config.providers.embed_base_url.empty() ? config.providers.chat_base_url
                                                : config.providers.embed_base_url,
        config.providers.embed_api_key_env.empty() ? config.providers.chat_api_key_env
                                                   : config.providers.embed_api_key_env};
    p.http_chat = std::make_unique<OpenAiChatClient>(chat_endpoint, backoff);
    p.http_embed = std::make_unique<OpenAiEmbeddingClient>(
        embed_endpoint, config.models.embedding, config.providers.embedding_dimension, backoff);
    p.chat = std::make_unique<CachingChatProvider>(*p.http_chat, *p.cache);
    p.embed = std::make_unique<CachingEmbeddingProvider>(*p.http_embed, *p.cache);
    return p;
}

RunManifest make_manifest(const Config& config, const std::string& corpus_fingerprint) {
    RunManifest m;
    m.generator_models = config.models.generators;
    m.scenario_model = config.models.scenario;
    m.judge_model = config.models.judge;
    m.embedding_model = config.mock_seed ? "mock-embed" : config.models.embedding;
    m.embedding_dimension = config.providers.embedding_dimension;
    m.corpus_fingerprint = corpus_fingerprint;
    m.registry_fingerprint = registry_fingerprint(config.axes);
    m.generation_temperature = config.providers.temperature;
    m.judge_temperature = config.providers.judge_temperature;
    for (const auto& g : config.models.generators) {
        if (g == config.models.judge) m.self_judging = true;
    }
    m.mock_seed = config.mock_seed;
    m.timestamp = current_timestamp_utc();
    // Content-derived id, independent of where the run directory lives.
    json id_material{{"registry", axes_to_json(config.axes)},
                     {"dimensions", dimensions_to_json(config.dimensions)},
                     {"generators", config.models.generators},
                     {"judge", config.models.judge},
                     {"embedding", m.embedding_model},
                     {"corpus", corpus_fingerprint}};
    if (config.mock_seed) id_material["mock_seed"] = *config.mock_seed;
    m.run_id = sha256_hex(canonical_json(id_material)).substr(0, 12);
    return m;
}

Corpus load_corpus_file(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw std::runtime_error("missing corpus file: " + path.string());
    }
    return corpus_from_jsonl(read_jsonl(path));
}

struct CliOptions {
    std::string config_path;
    std::string run_dir_override;
    std::optional<std::uint64_t> mock_seed;

    Config load() const {
        Config c = config_path.empty() ? Config{} : Config::load(config_path);
        if (!run_dir_override.empty()) c.run_dir = run_dir_override;
        if (mock_seed) c.mock_seed = mock_seed;
        return c;
    }
};

int cmd_gen_scenarios(const CliOptions& cli, const std::string& out_path) {
    const Config config = cli.load();
    ProviderSet providers = make_providers(config);

    CorpusGenerationOptions options;
    options.model = config.mock_seed ? "mock-generator" : config.models.scenario;
    options.temperature = config.providers.scenario_temperature;
    options.max_tokens = config.providers.scenario_max_tokens;
    options.batch_retry_budget = config.providers.batch_retry_budget;
    options.max_in_flight = config.providers.max_in_flight;
    options.leak_lexicon = leak_lexicon(config.axes);

    const Corpus corpus = generate_corpus(*providers.chat, config.dimensions, options);
    write_jsonl(out_path, corpus_to_jsonl(corpus));
    const auto report = validate_corpus(corpus, config.axes, config.dimensions);
    std::cout << "wrote " << corpus.scenarios.size() << " scenarios to " << out_path << "\n";
    std::cout << "corpus fingerprint: " << corpus.fingerprint() << "\n";
    std::cout << report.to_text();
    return report.passed() ? kExitOk : kExitValidation;
}

int cmd_validate_corpus(const CliOptions& cli, const std::string& corpus_path) {
    const Config config = cli.load();
    const Corpus corpus = load_corpus_file(corpus_path);
    const auto report = validate_corpus(corpus, config.axes, config.dimensions);
    std::cout << report.to_text();
    return report.passed() ? kExitOk : kExitValidation;
}

int cmd_plan(const CliOptions& cli, const std::string& corpus_path, const std::string& out_path) {
    const Config config = cli.load();
    const Corpus corpus = load_corpus_file(corpus_path);
    const std::vector<std::string> models =
        config.mock_seed ? std::vector<std::string>{"mock-generator"} : config.models.generators;
    const auto plan = plan_run(corpus, config.axes, config.dimensions, models);
    write_jsonl(out_path, plan_to_jsonl(plan));
    std::cout << "wrote " << plan.size() << " planned calls to " << out_path << "\n";
    return kExitOk;
}

int cmd_respond(const CliOptions& cli, std::string plan_path) {
    Config config = cli.load();
    if (config.mock_seed) config.models.generators = {"mock-generator"};
    RunStore store(config.run_dir);
    if (plan_path.empty()) plan_path = store.plan_path().string();
    if (!std::filesystem::exists(plan_path)) {
        throw std::runtime_error("missing plan file: " + plan_path + "; run the plan subcommand first");
    }
    const auto plan = plan_from_jsonl(read_jsonl(plan_path));

    std::string corpus_fingerprint;
    if (std::filesystem::exists(store.corpus_path())) {
        corpus_fingerprint = load_corpus_file(store.corpus_path()).fingerprint();
    }
    store.write_manifest(make_manifest(config, corpus_fingerprint));

    ProviderSet providers = make_providers(config);
    const auto summary = respond_stage(store, plan, *providers.chat, config);
    std::cout << summary.to_text();
    return summary.ok() ? kExitOk : kExitProvider;
}

int cmd_embed(const CliOptions& cli) {
    const Config config = cli.load();
    RunStore store(config.run_dir);
    ProviderSet providers = make_providers(config);
    const auto summary = embed_stage(store, *providers.embed, config);
    std::cout << summary.to_text();
    return summary.ok() ? kExitOk : kExitProvider;
}

int cmd_judge(const CliOptions& cli, std::string corpus_path) {
    Config config = cli.load();
    if (config.mock_seed) {
        config.models.generators = {"mock-generator"};
        config.models.judge = "mock-judge";
    }
    RunStore store(config.run_dir);
    if (corpus_path.empty()) corpus_path = store.corpus_path().string();
    const Corpus corpus = load_corpus_file(corpus_path);
    ProviderSet providers = make_providers(config);
    const auto summary = judge_stage(store, corpus, *providers.chat, config);
    std::cout << summary.to_text();
    return summary.ok() ? kExitOk : kExitProvider;
}

int cmd_analyze(const CliOptions& cli) {
    Config config = cli.load();
    if (config.mock_seed) config.models.generators = {"mock-generator"};
    RunStore store(config.run_dir);
    const auto bundle = analyze(store, config);
    write_metrics(store, bundle);
    std::cout << "wrote " << metrics_bundle_path(store).string() << " (" << bundle.models.size()
              << " models, " << config.axes.size() << " axes)\n";
    return kExitOk;
}

int cmd_report(const CliOptions& cli) {
    const Config config = cli.load();
    RunStore store(config.run_dir);
    const auto bundle = load_metrics(store);
    write_reports(store, bundle, config);
    std::cout << "wrote reports under " << store.reports_dir().string() << "\n";
    return kExitOk;
}

int cmd_validate_human(const std::string& ratings_path) {
    const auto records = parse_human_validation_csv(read_file(ratings_path));
    const auto report = validate_human(records);
    std::cout << human_validation_report_text(report);
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Demographic bias audit harness for persona-prompted chat models"};
    app.name("persona-audit");
    app.require_subcommand(1);

    CliOptions cli;
    app.add_option("--config", cli.config_path, "Path to the JSON config file")->expected(1);
    std::uint64_t mock_seed = 0;
    auto* mock_opt =
        app.add_option("--mock", mock_seed, "Replace all providers with the deterministic mock (seed)");
    app.add_option("--run", cli.run_dir_override, "Run directory (overrides config run_dir)");

    std::string out_path = "corpus.jsonl";
    auto* gen = app.add_subcommand("gen-scenarios", "Generate the scenario corpus");
    gen->add_option("--out", out_path, "Output corpus JSONL path");

    std::string corpus_arg;
    auto* validate = app.add_subcommand("validate-corpus", "Validate a corpus file");
    validate->add_option("corpus", corpus_arg, "Corpus JSONL path")->required();

    std::string plan_corpus, plan_out = "plan.jsonl";
    auto* plan = app.add_subcommand("plan", "Enumerate combos and emit the run plan");
    plan->add_option("--corpus", plan_corpus, "Corpus JSONL path")->required();
    plan->add_option("--out", plan_out, "Output plan JSONL path");

    std::string respond_plan;
    auto* respond = app.add_subcommand("respond", "Execute planned response generations");
    respond->add_option("--plan", respond_plan, "Plan JSONL path (default <run_dir>/plan.jsonl)");

    auto* embed = app.add_subcommand("embed", "Embed stored responses");

    std::string judge_corpus;
    auto* judge = app.add_subcommand("judge", "Run dual-order pairwise judging");
    judge->add_option("--corpus", judge_corpus, "Corpus JSONL path (default <run_dir>/corpus.jsonl)");

    auto* analyze_cmd = app.add_subcommand("analyze", "Build metric matrices and summaries");
    auto* report_cmd = app.add_subcommand("report", "Render heatmaps and markdown tables");

    std::string ratings_path;
    auto* human = app.add_subcommand("validate-human", "Agreement stats for human ratings");
    human->add_option("ratings", ratings_path, "Ratings CSV path")->required();

    std::vector<const char*> argv;
    argv.push_back("persona-audit");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    if (mock_opt->count() > 0) cli.mock_seed = mock_seed;

    try {
        if (gen->parsed()) return cmd_gen_scenarios(cli, out_path);
        if (validate->parsed()) return cmd_validate_corpus(cli, corpus_arg);
        if (plan->parsed()) return cmd_plan(cli, plan_corpus, plan_out);
        if (respond->parsed()) return cmd_respond(cli, respond_plan);
        if (embed->parsed()) return cmd_embed(cli);
        if (judge->parsed()) return cmd_judge(cli, judge_corpus);
        if (analyze_cmd->parsed()) return cmd_analyze(cli);
        if (report_cmd->parsed()) return cmd_report(cli);
        if (human->parsed()) return cmd_validate_human(ratings_path);
    } catch (const ProviderError& e) {
        std::cerr << "provider error: " << e.what() << "\n";
        return kExitProvider;
    } catch (const CorpusIncompleteError& e) {
        std::cerr << "provider error: " << e.what() << "\n";
        return kExitProvider;
    } catch (const CorpusValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n" << e.report.to_text();
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace persona_audit
