#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "persona_audit/judging.hpp"
#include "persona_audit/planner.hpp"
#include "persona_audit/providers.hpp"

namespace persona_audit {

struct GenerationRecord {
    PromptSpec spec;
    std::string model;
    std::string response_text;

    std::string key() const { return model + "|" + spec.scenario_id + "|" + spec.combo.key(); }
    json to_json() const;
    static GenerationRecord from_json(const json& j);
};

struct EmbeddingRecord {
    std::string scenario_id;
    DemographicCombo combo;
    std::string model;  // generator whose response was embedded
    std::string embedding_model;
    std::vector<double> values;

    std::string key() const { return model + "|" + scenario_id + "|" + combo.key(); }
    json to_json() const;
    static EmbeddingRecord from_json(const json& j);
};

/// One run = one directory. All artifacts are JSONL/CSV/SVG so runs diff
/// cleanly; loaders tolerate absent files and return empty sets so stages can
/// resume from whatever exists.
class RunStore {
  public:
    explicit RunStore(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path manifest_path() const { return dir_ / "manifest.json"; }
    std::filesystem::path corpus_path() const { return dir_ / "corpus.jsonl"; }
    std::filesystem::path plan_path() const { return dir_ / "plan.jsonl"; }
    std::filesystem::path responses_path() const { return dir_ / "responses.jsonl"; }
    std::filesystem::path embeddings_path() const { return dir_ / "embeddings.jsonl"; }
    std::filesystem::path judgments_path() const { return dir_ / "judgments.jsonl"; }
    std::filesystem::path metrics_dir() const { return dir_ / "metrics"; }
    std::filesystem::path reports_dir() const { return dir_ / "reports"; }

    void write_manifest(const RunManifest& manifest) const;
    std::optional<RunManifest> load_manifest() const;

    std::vector<GenerationRecord> load_responses() const;
    std::vector<EmbeddingRecord> load_embeddings() const;
    std::vector<JudgmentRecord> load_judgments() const;

    void append_response(const GenerationRecord& record) const;
    void append_embedding(const EmbeddingRecord& record) const;
    void append_judgment(const JudgmentRecord& record) const;

  private:
    std::filesystem::path dir_;
};

}  // namespace persona_audit
