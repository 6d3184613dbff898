#pragma once

#include <optional>
#include <string>
#include <vector>

#include "persona_audit/util.hpp"

namespace persona_audit {

// Canonical names for the two interlocutors. The corpus stores the abstract
// SUB/RES tokens; prompts substitute these unisex names.
inline constexpr const char* kSubName = "Alex";
inline constexpr const char* kResName = "Blake";

struct ContextualDimension {
    std::string name;
    bool operator==(const ContextualDimension&) const = default;
};

struct DemographicAxis {
    std::string name;
    std::vector<std::string> identities;  // 3-5 entries, unique within the axis
    bool operator==(const DemographicAxis&) const = default;
};

/// One social situation. `body` keeps the abstract SUB/RES tokens; traits are
/// lowercase phrases free of demographic identity strings.
struct Scenario {
    std::string id;  // "<dimension-slug>-<pd|nopd>-<ordinal>"
    std::string dimension;
    bool power_disparity = false;
    std::string body;
    std::string sub_trait;
    std::string res_trait;
    bool operator==(const Scenario&) const = default;
};

/// A within-axis (SUB identity, RES identity) pair, or the baseline with all
/// three fields empty. Mixed states are invalid by construction.
struct DemographicCombo {
    std::string axis;
    std::string sub_identity;
    std::string res_identity;

    static DemographicCombo baseline() { return {}; }
    static DemographicCombo make(std::string axis, std::string sub, std::string res);

    bool is_baseline() const { return axis.empty(); }
    bool valid() const;
    /// "baseline" or "<axis>|<sub>|<res>"; stable join key across stores.
    std::string key() const;

    json to_json() const;  // null for baseline
    static DemographicCombo from_json(const json& j);

    bool operator==(const DemographicCombo&) const = default;
};

struct RunManifest {
    std::string run_id;
    std::vector<std::string> generator_models;
    std::string scenario_model;
    std::string judge_model;
    std::string embedding_model;
    int embedding_dimension = 0;
    std::string corpus_fingerprint;
    std::string registry_fingerprint;
    double generation_temperature = 0.0;
    double judge_temperature = 0.0;
    bool self_judging = false;  // judge model also appears among the generators
    std::optional<std::uint64_t> mock_seed;
    std::string timestamp;  // ISO-8601, excluded from the fingerprint

    json to_json() const;
    static RunManifest from_json(const json& j);
    /// Deterministic content hash; timestamp excluded.
    std::string fingerprint() const;
};

// ---- registries ----------------------------------------------------------

/// The 8 default demographic axes, in table order. 29 identities in total.
std::vector<DemographicAxis> default_axis_registry();

/// The 10 default contextual dimensions.
std::vector<ContextualDimension> default_dimension_registry();

/// Name of the built-in default registry preset.
inline constexpr const char* kDefaultRegistryPreset = "paper-2024";

json axes_to_json(const std::vector<DemographicAxis>& axes);
std::vector<DemographicAxis> axes_from_json(const json& j);
json dimensions_to_json(const std::vector<ContextualDimension>& dims);
std::vector<ContextualDimension> dimensions_from_json(const json& j);

/// Lowercase hex SHA-256 of the canonical serialized registry.
std::string registry_fingerprint(const std::vector<DemographicAxis>& axes);

/// Throws std::invalid_argument on duplicate axis names, duplicate identities
/// within an axis, or empty entries.
void validate_registry(const std::vector<DemographicAxis>& axes);

bool has_dimension(const std::vector<ContextualDimension>& dims, const std::string& name);

// ---- identity leak checking -----------------------------------------------

/// All registered identity strings plus naive plural forms, lowercased.
/// Identities ending in " person" also contribute a " people" form.
std::vector<std::string> leak_lexicon(const std::vector<DemographicAxis>& axes);

/// Lexicon phrases that occur (case-insensitive, whole-word) in `text`.
std::vector<std::string> find_identity_leaks(std::string_view text, const std::vector<std::string>& lexicon);

/// Structural problems with a scenario: missing SUB/RES tokens, empty traits,
/// identity leaks in body or traits. Empty result means the scenario is valid.
std::vector<std::string> scenario_problems(const Scenario& s, const std::vector<std::string>& lexicon);

json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const json& j);

}  // namespace persona_audit
