#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "persona_audit/model.hpp"
#include "persona_audit/providers.hpp"

namespace persona_audit {

struct Corpus {
    std::vector<Scenario> scenarios;

    /// SHA-256 over the canonical serialized scenario list.
    std::string fingerprint() const;
};

/// The scenario-generation prompt for one (dimension, power flag) batch.
/// Exactly one of the two power-dynamic blocks is included: the equal-power
/// line without power disparity, the RES-advantage lines with it.
/// Throws std::invalid_argument for an unregistered dimension.
std::string build_scenario_prompt(const std::string& dimension, bool power_disparity,
                                  const std::vector<ContextualDimension>& registry);

struct ParsedBatch {
    std::vector<Scenario> scenarios;
    std::vector<std::string> warnings;
};

/// Fewer than 5 parseable blocks; carries whatever parsed cleanly.
class PartialParseError : public std::runtime_error {
  public:
    PartialParseError(std::string message, ParsedBatch partial)
        : std::runtime_error(std::move(message)), partial(std::move(partial)) {}
    ParsedBatch partial;
};

/// Extracts up to 5 scenarios from one generation batch. Blocks are
/// introduced by "Scenario <n>:" and contain body text, a "SUB:" trait line
/// and a "RES:" trait line; the trailing persona-adoption line is stripped
/// from the stored body. Traits are lowercased and trimmed. Blocks missing a
/// trait line or a SUB/RES body token are dropped with a warning; fewer than
/// 5 surviving blocks raises PartialParseError.
ParsedBatch parse_scenario_batch(const std::string& raw, const std::string& dimension,
                                 bool power_disparity);

struct CorpusGenerationOptions {
    std::string model;
    double temperature = 1.0;
    int max_tokens = 4096;
    int batch_retry_budget = 2;
    int max_in_flight = 4;
    int scenarios_per_batch = 5;
    std::vector<std::string> leak_lexicon;  // parsed blocks that leak an identity are dropped
};

/// One or more (dimension, power flag) slots could not be filled.
class CorpusIncompleteError : public std::runtime_error {
  public:
    CorpusIncompleteError(std::string message, std::vector<std::string> missing_slots, Corpus partial)
        : std::runtime_error(std::move(message)), missing_slots(std::move(missing_slots)),
          partial(std::move(partial)) {}
    std::vector<std::string> missing_slots;
    Corpus partial;
};

/// Issues one power-disparity and one equal-standing batch per dimension,
/// retrying failed batches up to the retry budget, and assembles the corpus
/// in deterministic order (dimension order, equal-standing first, ordinal).
Corpus generate_corpus(ChatProvider& provider, const std::vector<ContextualDimension>& dimensions,
                       const CorpusGenerationOptions& options);

struct CorpusValidationReport {
    struct DimensionCount {
        std::string dimension;
        int nopd = 0;
        int pd = 0;
    };
    std::vector<DimensionCount> counts;
    int expected_per_flag = 5;
    std::vector<std::string> violations;
    std::vector<std::string> warnings;
    // Scenario realism is out of reach for automated checks and stays a
    // human-review item; the report only covers structure and identity leaks.
    bool realism_requires_human_review = true;

    bool passed() const;
    std::string to_text() const;
};

CorpusValidationReport validate_corpus(const Corpus& corpus,
                                       const std::vector<DemographicAxis>& axes,
                                       const std::vector<ContextualDimension>& dimensions,
                                       std::vector<std::string> warnings = {});

std::vector<json> corpus_to_jsonl(const Corpus& corpus);
Corpus corpus_from_jsonl(const std::vector<json>& records);

}  // namespace persona_audit
