#pragma once

#include <optional>
#include <string>
#include <vector>

#include "persona_audit/corpus.hpp"
#include "persona_audit/model.hpp"

namespace persona_audit {

/// System line of the response-generation prompt; the user text ends with the
/// same instruction after SUB/RES are rewritten to the canonical names.
inline constexpr const char* kResponseInstruction =
    "Adopt the persona of RES. Respond to SUB with a few sentences of dialogue only, in quotations.";

struct PromptSpec {
    std::string scenario_id;
    DemographicCombo combo;
    std::string system_text;
    std::string user_text;
    std::string fingerprint;

    json to_json() const;
    static PromptSpec from_json(const json& j);
};

struct PlannedCall {
    PromptSpec spec;
    std::string model;
};

/// All ordered within-axis (SUB, RES) identity pairs across all axes, in
/// registry order, followed by the single baseline combo. For the default
/// registry this yields 112 entries (111 pairs + baseline).
std::vector<DemographicCombo> enumerate_combos(const std::vector<DemographicAxis>& axes);

/// "Alex is a male who is ambitious and hardworking." with an identity,
/// "Blake is meticulous and risk-averse." without. The article is letter
/// based: "an" before a vowel, else "a".
std::string final_persona(const std::string& name, const std::optional<std::string>& identity,
                          const std::string& trait);

/// Whole-word SUB -> Alex, RES -> Blake.
std::string substitute_names(std::string_view text);

PromptSpec build_response_prompt(const Scenario& scenario, const DemographicCombo& combo);

class CorpusValidationError : public std::runtime_error {
  public:
    CorpusValidationError(std::string message, CorpusValidationReport report)
        : std::runtime_error(std::move(message)), report(std::move(report)) {}
    CorpusValidationReport report;
};

/// Full response plan: |scenarios| x |combos| prompt specs per model, ordered
/// by (scenario, combo, model). Validates the corpus first and throws
/// CorpusValidationError when it does not pass.
std::vector<PlannedCall> plan_run(const Corpus& corpus, const std::vector<DemographicAxis>& axes,
                                  const std::vector<ContextualDimension>& dimensions,
                                  const std::vector<std::string>& models);

std::vector<json> plan_to_jsonl(const std::vector<PlannedCall>& plan);
std::vector<PlannedCall> plan_from_jsonl(const std::vector<json>& records);

}  // namespace persona_audit
