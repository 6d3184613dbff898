#include "persona_audit/model.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace persona_audit {

DemographicCombo DemographicCombo::make(std::string axis, std::string sub, std::string res) {
    DemographicCombo c{std::move(axis), std::move(sub), std::move(res)};
    if (!c.valid() || c.is_baseline()) {
        throw std::invalid_argument("demographic combo requires axis, sub and res identities");
    }
    return c;
}

bool DemographicCombo::valid() const {
    const bool all = !axis.empty() && !sub_identity.empty() && !res_identity.empty();
    const bool none = axis.empty() && sub_identity.empty() && res_identity.empty();
    return all || none;
}

std::string DemographicCombo::key() const {
    if (is_baseline()) return "baseline";
    return axis + "|" + sub_identity + "|" + res_identity;
}

json DemographicCombo::to_json() const {
    if (is_baseline()) return nullptr;
    return json{{"axis", axis}, {"sub_identity", sub_identity}, {"res_identity", res_identity}};
}

DemographicCombo DemographicCombo::from_json(const json& j) {
    if (j.is_null()) return baseline();
    return make(j.at("axis").get<std::string>(), j.at("sub_identity").get<std::string>(),
                j.at("res_identity").get<std::string>());
}

json RunManifest::to_json() const {
    json j{
        {"run_id", run_id},
        {"generator_models", generator_models},
        {"scenario_model", scenario_model},
        {"judge_model", judge_model},
        {"embedding_model", embedding_model},
        {"embedding_dimension", embedding_dimension},
        {"corpus_fingerprint", corpus_fingerprint},
        {"registry_fingerprint", registry_fingerprint},
        {"generation_temperature", generation_temperature},
        {"judge_temperature", judge_temperature},
        {"self_judging", self_judging},
        {"timestamp", timestamp},
    };
    if (mock_seed) j["mock_seed"] = *mock_seed;
    return j;
}

RunManifest RunManifest::from_json(const json& j) {
    RunManifest m;
    m.run_id = j.at("run_id").get<std::string>();
    m.generator_models = j.at("generator_models").get<std::vector<std::string>>();
    m.scenario_model = j.at("scenario_model").get<std::string>();
    m.judge_model = j.at("judge_model").get<std::string>();
    m.embedding_model = j.at("embedding_model").get<std::string>();
    m.embedding_dimension = j.at("embedding_dimension").get<int>();
    m.corpus_fingerprint = j.at("corpus_fingerprint").get<std::string>();
    m.registry_fingerprint = j.at("registry_fingerprint").get<std::string>();
    m.generation_temperature = j.at("generation_temperature").get<double>();
    m.judge_temperature = j.at("judge_temperature").get<double>();
    m.self_judging = j.at("self_judging").get<bool>();
    if (j.contains("mock_seed")) m.mock_seed = j.at("mock_seed").get<std::uint64_t>();
    m.timestamp = j.value("timestamp", "");
    return m;
}

std::string RunManifest::fingerprint() const {
    json j = to_json();
    j.erase("timestamp");
    return sha256_hex(canonical_json(j));
}

std::vector<DemographicAxis> default_axis_registry() {
    return {
        {"Race", {"Caucasian", "African", "Hispanic", "Middle-Eastern", "Asian"}},
        {"Gender Identity", {"Male", "Female", "Non-binary", "Transgender"}},
        {"Age", {"Young person", "Middle-aged person", "Old person"}},
        {"Religion", {"Christian", "Muslim", "Buddhist", "Jewish", "Atheist"}},
        {"Political Stance", {"Conservative", "Liberal", "Centrist"}},
        {"Disability", {"Abled person", "Physically disabled person", "Mentally disabled person"}},
        {"Nationality", {"Native-born citizen", "Immigrant", "Migrant worker"}},
        {"Physical Appearance",
         {"Ugly-looking person", "Average-looking person", "Attractive-looking person"}},
    };
}

std::vector<ContextualDimension> default_dimension_registry() {
    return {
        {"Workplace/Hiring"},
        {"Criminal Justice System"},
        {"Healthcare Access"},
        {"Neighbourhood and Inter-family"},
        {"Finance/Banking Matters"},
        {"Social Media and Information Access"},
        {"Political Rights/Government"},
        {"Housing and Real Estate"},
        {"School/Education"},
        {"Social Welfare and Public Assistance"},
    };
}

json axes_to_json(const std::vector<DemographicAxis>& axes) {
    json arr = json::array();
    for (const auto& a : axes) arr.push_back(json{{"name", a.name}, {"identities", a.identities}});
    return arr;
}

std::vector<DemographicAxis> axes_from_json(const json& j) {
    std::vector<DemographicAxis> out;
    for (const auto& a : j) {
        out.push_back({a.at("name").get<std::string>(), a.at("identities").get<std::vector<std::string>>()});
    }
    validate_registry(out);
    return out;
}

json dimensions_to_json(const std::vector<ContextualDimension>& dims) {
    json arr = json::array();
    for (const auto& d : dims) arr.push_back(d.name);
    return arr;
}

std::vector<ContextualDimension> dimensions_from_json(const json& j) {
    std::vector<ContextualDimension> out;
    std::set<std::string> seen;
    for (const auto& d : j) {
        std::string name = d.get<std::string>();
        if (name.empty()) throw std::invalid_argument("empty dimension name");
        if (!seen.insert(name).second) throw std::invalid_argument("duplicate dimension: " + name);
        out.push_back({std::move(name)});
    }
    return out;
}

std::string registry_fingerprint(const std::vector<DemographicAxis>& axes) {
    return sha256_hex(canonical_json(axes_to_json(axes)));
}

void validate_registry(const std::vector<DemographicAxis>& axes) {
    std::set<std::string> axis_names;
    for (const auto& a : axes) {
        if (a.name.empty()) throw std::invalid_argument("empty axis name");
        if (!axis_names.insert(a.name).second) throw std::invalid_argument("duplicate axis: " + a.name);
        if (a.identities.empty()) throw std::invalid_argument("axis without identities: " + a.name);
        std::set<std::string> ids;
        for (const auto& id : a.identities) {
            if (id.empty()) throw std::invalid_argument("empty identity in axis " + a.name);
            if (!ids.insert(id).second) {
                throw std::invalid_argument("duplicate identity '" + id + "' in axis " + a.name);
            }
        }
    }
}

bool has_dimension(const std::vector<ContextualDimension>& dims, const std::string& name) {
    return std::any_of(dims.begin(), dims.end(), [&](const auto& d) { return d.name == name; });
}

std::vector<std::string> leak_lexicon(const std::vector<DemographicAxis>& axes) {
    std::set<std::string> entries;
    for (const auto& a : axes) {
        for (const auto& id : a.identities) {
            const std::string low = to_lower(id);
            entries.insert(low);
            entries.insert(low + "s");
            static const std::string person = " person";
            if (low.size() > person.size() && low.ends_with(person)) {
                entries.insert(low.substr(0, low.size() - person.size()) + " people");
            }
        }
    }
    return {entries.begin(), entries.end()};
}

std::vector<std::string> find_identity_leaks(std::string_view text, const std::vector<std::string>& lexicon) {
    std::vector<std::string> hits;
    for (const auto& phrase : lexicon) {
        if (contains_word(text, phrase)) hits.push_back(phrase);
    }
    return hits;
}

std::vector<std::string> scenario_problems(const Scenario& s, const std::vector<std::string>& lexicon) {
    std::vector<std::string> problems;
    if (s.body.empty()) problems.push_back("empty body");
    if (!contains_word(s.body, "SUB")) problems.push_back("body lacks SUB token");
    if (!contains_word(s.body, "RES")) problems.push_back("body lacks RES token");
    if (trim(s.sub_trait).empty()) problems.push_back("empty sub_trait");
    if (trim(s.res_trait).empty()) problems.push_back("empty res_trait");
    for (const char* field : {"body", "sub_trait", "res_trait"}) {
        const std::string& text = field == std::string_view("body") ? s.body
                                  : field == std::string_view("sub_trait") ? s.sub_trait
                                                                           : s.res_trait;
        for (const auto& hit : find_identity_leaks(text, lexicon)) {
            problems.push_back(std::string("identity leak in ") + field + ": " + hit);
        }
    }
    return problems;
}

json scenario_to_json(const Scenario& s) {
    return json{{"id", s.id},
                {"dimension", s.dimension},
                {"power_disparity", s.power_disparity},
                {"body", s.body},
                {"sub_trait", s.sub_trait},
                {"res_trait", s.res_trait}};
}

Scenario scenario_from_json(const json& j) {
    Scenario s;
    s.id = j.at("id").get<std::string>();
    s.dimension = j.at("dimension").get<std::string>();
    s.power_disparity = j.at("power_disparity").get<bool>();
    s.body = j.at("body").get<std::string>();
    s.sub_trait = j.at("sub_trait").get<std::string>();
    s.res_trait = j.at("res_trait").get<std::string>();
    return s;
}

}  // namespace persona_audit
