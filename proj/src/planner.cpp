#include "persona_audit/planner.hpp"

#include <cctype>

namespace persona_audit {

json PromptSpec::to_json() const {
    return json{{"scenario_id", scenario_id},
                {"combo", combo.to_json()},
                {"system_text", system_text},
                {"user_text", user_text},
                {"fingerprint", fingerprint}};
}

PromptSpec PromptSpec::from_json(const json& j) {
    PromptSpec s;
    s.scenario_id = j.at("scenario_id").get<std::string>();
    s.combo = DemographicCombo::from_json(j.at("combo"));
    s.system_text = j.at("system_text").get<std::string>();
    s.user_text = j.at("user_text").get<std::string>();
    s.fingerprint = j.at("fingerprint").get<std::string>();
    return s;
}

std::vector<DemographicCombo> enumerate_combos(const std::vector<DemographicAxis>& axes) {
    if (axes.empty()) throw std::invalid_argument("enumerate_combos: empty registry");
    std::vector<DemographicCombo> out;
    for (const auto& axis : axes) {
        for (const auto& sub : axis.identities) {
            for (const auto& res : axis.identities) {
                out.push_back(DemographicCombo::make(axis.name, sub, res));
            }
        }
    }
    out.push_back(DemographicCombo::baseline());
    return out;
}

namespace {
bool vowel_letter(char c) {
    switch (std::tolower(static_cast<unsigned char>(c))) {
        case 'a':
        case 'e':
        case 'i':
        case 'o':
        case 'u':
            return true;
        default:
            return false;
    }
}
}  // namespace

std::string final_persona(const std::string& name, const std::optional<std::string>& identity,
                          const std::string& trait) {
    if (trim(trait).empty()) throw std::invalid_argument("final_persona: empty trait");
    if (!identity || identity->empty()) {
        return name + " is " + trait + ".";
    }
    const std::string id = to_lower(*identity);
    const char* article = vowel_letter(id.front()) ? "an" : "a";
    return name + " is " + article + " " + id + " who is " + trait + ".";
}

std::string substitute_names(std::string_view text) {
    return replace_word(replace_word(text, "SUB", kSubName), "RES", kResName);
}

PromptSpec build_response_prompt(const Scenario& scenario, const DemographicCombo& combo) {
    if (!combo.valid()) throw std::invalid_argument("build_response_prompt: malformed combo");
    if (trim(scenario.body).empty()) throw std::invalid_argument("build_response_prompt: empty scenario body");

    const std::optional<std::string> sub_id =
        combo.is_baseline() ? std::nullopt : std::optional<std::string>(combo.sub_identity);
    const std::optional<std::string> res_id =
        combo.is_baseline() ? std::nullopt : std::optional<std::string>(combo.res_identity);

    std::string user = scenario.body;
    user += "\n" + final_persona(kSubName, sub_id, scenario.sub_trait);
    user += "\n" + final_persona(kResName, res_id, scenario.res_trait);
    user += "\n";
    user += kResponseInstruction;

    PromptSpec spec;
    spec.scenario_id = scenario.id;
    spec.combo = combo;
    spec.system_text = kResponseInstruction;
    spec.user_text = substitute_names(user);
    spec.fingerprint = sha256_hex(canonical_json(json{{"scenario_id", spec.scenario_id},
                                                      {"combo", spec.combo.to_json()},
                                                      {"system_text", spec.system_text},
                                                      {"user_text", spec.user_text}}));
    return spec;
}

std::vector<PlannedCall> plan_run(const Corpus& corpus, const std::vector<DemographicAxis>& axes,
                                  const std::vector<ContextualDimension>& dimensions,
                                  const std::vector<std::string>& models) {
    // Structural validity gates planning; the 5/5-per-dimension counts are a
    // corpus-completeness property and partial corpora may still be planned.
    auto report = validate_corpus(corpus, axes, dimensions);
    if (!report.violations.empty()) {
        throw CorpusValidationError("plan_run: corpus has validation violations", std::move(report));
    }
    const auto combos = enumerate_combos(axes);
    std::vector<PlannedCall> plan;
    plan.reserve(corpus.scenarios.size() * combos.size() * models.size());
    for (const auto& scenario : corpus.scenarios) {
        for (const auto& combo : combos) {
            const PromptSpec spec = build_response_prompt(scenario, combo);
            for (const auto& model : models) {
                plan.push_back({spec, model});
            }
        }
    }
    return plan;
}

std::vector<json> plan_to_jsonl(const std::vector<PlannedCall>& plan) {
    std::vector<json> out;
    out.reserve(plan.size());
    for (const auto& call : plan) {
        json j = call.spec.to_json();
        j["model"] = call.model;
        out.push_back(std::move(j));
    }
    return out;
}

std::vector<PlannedCall> plan_from_jsonl(const std::vector<json>& records) {
    std::vector<PlannedCall> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        out.push_back({PromptSpec::from_json(r), r.at("model").get<std::string>()});
    }
    return out;
}

}  // namespace persona_audit
