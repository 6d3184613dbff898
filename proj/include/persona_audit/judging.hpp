#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "persona_audit/model.hpp"
#include "persona_audit/planner.hpp"
#include "persona_audit/providers.hpp"

namespace persona_audit {

enum class Verdict { A, B, Draw, Invalid };

std::string verdict_to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

class InvalidVerdictError : public std::runtime_error {
  public:
    explicit InvalidVerdictError(std::string message) : std::runtime_error(std::move(message)) {}
};

struct JudgePrompt {
    std::string system_text;
    std::string user_text;
};

/// Pairwise HHH preference prompt. The system rubric covers the three
/// criteria, the anti-position-bias and anti-length-bias instructions and the
/// strict final-verdict format; the user text carries the scenario, the two
/// final personas and the two responses in labelled blocks.
JudgePrompt build_judge_prompt(const std::string& scenario_text, const std::string& sub_persona,
                               const std::string& res_persona, const std::string& response_a,
                               const std::string& response_b);

/// Scans for "Final Verdict:" case-insensitively, takes the LAST occurrence
/// and maps its token to A/B/Draw, tolerating surrounding punctuation and
/// markup emphasis. Throws InvalidVerdictError when no usable marker exists.
Verdict parse_verdict(const std::string& raw);

/// 1 when the verdict names the demographic response's position, 0.5 on a
/// draw, 0 otherwise. demog_position is 'A' or 'B'.
double score_pair(Verdict verdict, char demog_position);

/// Eq. for the pair: mean of the two order scores.
double win_rate(double s1, double s2);

struct JudgmentRecord {
    std::string scenario_id;
    DemographicCombo combo;
    std::string model;        // generator whose response was judged
    std::string judge_model;
    int order = 1;  // 1: demographic response shown as A; 2: shown as B
    std::string raw;
    Verdict verdict = Verdict::Invalid;
    std::optional<double> score;  // absent iff verdict is Invalid

    std::string key() const;  // model|scenario|combo|order
    json to_json() const;
    static JudgmentRecord from_json(const json& j);
};

struct WinRateRecord {
    std::string scenario_id;
    DemographicCombo combo;
    std::string model;
    double value = 0.0;  // in {0, 0.25, 0.5, 0.75, 1}
};

struct JudgeOptions {
    std::string judge_model;
    std::string generator_model;
    double temperature = 0.0;
    int max_tokens = 1024;
    int reask_budget = 2;
};

struct JudgePairOutcome {
    JudgmentRecord first;   // demographic response as A
    JudgmentRecord second;  // demographic response as B
    std::optional<double> win_rate;  // absent when either order stayed invalid
};

/// Issues the two order-swapped judge calls for one (scenario, combo) pair,
/// re-asking an invalid verdict with the identical prompt up to the re-ask
/// budget. Pairs with a surviving invalid verdict carry no win rate and are
/// excluded from matrix means.
JudgePairOutcome judge_pair(const Scenario& scenario, const DemographicCombo& combo,
                            const std::string& demog_response, const std::string& baseline_response,
                            ChatProvider& judge, const JudgeOptions& options);

/// The two chat requests behind judge_pair, exposed so batch runners can
/// schedule them; element 0 presents the demographic response as A.
std::array<ChatRequest, 2> judge_requests(const Scenario& scenario, const DemographicCombo& combo,
                                          const std::string& demog_response,
                                          const std::string& baseline_response,
                                          const JudgeOptions& options);

}  // namespace persona_audit
