#include "persona_audit/runstore.hpp"

namespace persona_audit {

json GenerationRecord::to_json() const {
    json j = spec.to_json();
    j["model"] = model;
    j["response_text"] = response_text;
    return j;
}

GenerationRecord GenerationRecord::from_json(const json& j) {
    GenerationRecord r;
    r.spec = PromptSpec::from_json(j);
    r.model = j.at("model").get<std::string>();
    r.response_text = j.at("response_text").get<std::string>();
    return r;
}

json EmbeddingRecord::to_json() const {
    return json{{"scenario_id", scenario_id},
                {"combo", combo.to_json()},
                {"model", model},
                {"embedding_model", embedding_model},
                {"values", values}};
}

EmbeddingRecord EmbeddingRecord::from_json(const json& j) {
    EmbeddingRecord r;
    r.scenario_id = j.at("scenario_id").get<std::string>();
    r.combo = DemographicCombo::from_json(j.at("combo"));
    r.model = j.at("model").get<std::string>();
    r.embedding_model = j.at("embedding_model").get<std::string>();
    r.values = j.at("values").get<std::vector<double>>();
    return r;
}

RunStore::RunStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

void RunStore::write_manifest(const RunManifest& manifest) const {
    write_file(manifest_path(), manifest.to_json().dump(2) + "\n");
}

std::optional<RunManifest> RunStore::load_manifest() const {
    if (!std::filesystem::exists(manifest_path())) return std::nullopt;
    return RunManifest::from_json(json::parse(read_file(manifest_path())));
}

namespace {
template <typename T>
std::vector<T> load_records(const std::filesystem::path& path) {
    std::vector<T> out;
    if (!std::filesystem::exists(path)) return out;
    for (const json& j : read_jsonl(path)) out.push_back(T::from_json(j));
    return out;
}
}  // namespace

std::vector<GenerationRecord> RunStore::load_responses() const {
    return load_records<GenerationRecord>(responses_path());
}

std::vector<EmbeddingRecord> RunStore::load_embeddings() const {
    return load_records<EmbeddingRecord>(embeddings_path());
}

std::vector<JudgmentRecord> RunStore::load_judgments() const {
    return load_records<JudgmentRecord>(judgments_path());
}

void RunStore::append_response(const GenerationRecord& record) const {
    append_jsonl(responses_path(), record.to_json());
}

void RunStore::append_embedding(const EmbeddingRecord& record) const {
    append_jsonl(embeddings_path(), record.to_json());
}

void RunStore::append_judgment(const JudgmentRecord& record) const {
    append_jsonl(judgments_path(), record.to_json());
}

}  // namespace persona_audit
