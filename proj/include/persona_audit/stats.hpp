#pragma once

#include <optional>
#include <string>
#include <vector>

#include "persona_audit/sensitivity.hpp"

namespace persona_audit {

/// Population standard deviation over the matrix's defined combination cells
/// (marginals and the overall mean are not cells and are excluded).
/// Throws std::domain_error when every cell is undefined.
double axis_std(const MetricMatrix& m);

/// Arithmetic mean of per-axis standard deviations. Throws on empty input.
double avg_std(const std::vector<double>& per_axis_stds);

/// (value - base) / base * 100. Undefined when base == 0.
std::optional<double> percent_change(double base, double value);

/// Per-axis variability of one metric under one scenario split.
struct BiasSummary {
    std::string split;  // "All" | "NoPD" | "PD"
    std::vector<std::string> axes;
    std::vector<std::optional<double>> cos_stds;  // aligned with axes
    std::vector<std::optional<double>> wr_stds;
    std::optional<double> avg_std_cos;
    std::optional<double> avg_std_wr;
};

BiasSummary summarize_bias(const std::string& split, const std::vector<MetricMatrix>& cos_matrices,
                           const std::vector<MetricMatrix>& wr_matrices);

// ---- extremes ranking ------------------------------------------------------

/// One end of the ranking: the RES identity with the extreme column marginal,
/// then within that column the SUB identity with the extreme cell. Ties list
/// every tied identity in identity order; the SUB scan uses the first tied
/// RES column.
struct ExtremeSelection {
    std::vector<std::string> res_identities;
    std::vector<std::string> sub_identities;
    std::optional<double> res_marginal;
    std::optional<double> sub_cell;

    std::string joined_res() const;  // "Hispanic/Caucasian" style for ties
    std::string joined_sub() const;
};

struct AxisExtremes {
    std::string axis;
    ExtremeSelection lowest;
    ExtremeSelection highest;
};

AxisExtremes rank_extremes(const MetricMatrix& m);

// ---- inter-rater agreement ---------------------------------------------------

/// Cohen's kappa between two equal-length label sequences. When chance
/// agreement is exactly 1, returns 1 if observed agreement is 1 and the
/// undefined marker otherwise. Throws on empty or mismatched input.
std::optional<double> cohen_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// Fleiss' kappa over an items x raters label matrix. Every item must have
/// the same number n >= 2 of ratings. Degenerate marginals (chance agreement
/// exactly 1) yield the undefined marker.
std::optional<double> fleiss_kappa(const std::vector<std::vector<std::string>>& ratings);

// ---- human validation ---------------------------------------------------------

struct HumanValidationRecord {
    std::string judge_id;
    std::string item_id;
    std::string human_verdict;  // A | B | Draw
    std::string ai_verdict;
    std::optional<int> likert;  // 1-5, stage-2 rows only

    bool converging() const { return human_verdict == ai_verdict; }
};

struct JudgeLikert {
    std::string judge_id;
    std::optional<double> overall;
    std::optional<double> converging;
    std::optional<double> diverging;
};

struct LikertSummary {
    // rating-weighted means over all stage-2 rows
    std::optional<double> overall_mean;
    std::optional<double> converging_mean;
    std::optional<double> diverging_mean;
    std::vector<JudgeLikert> per_judge;
    // unweighted means of the per-judge means (differ from the above when
    // judges rate unequal counts; both are reported)
    std::optional<double> judge_mean_overall;
    std::optional<double> judge_mean_converging;
    std::optional<double> judge_mean_diverging;
};

LikertSummary likert_summary(const std::vector<HumanValidationRecord>& records);

struct HumanValidationReport {
    std::size_t n_records = 0;
    std::size_t n_stage2 = 0;
    std::vector<std::pair<std::string, std::optional<double>>> per_judge_kappa;  // vs the AI verdicts
    std::optional<double> mean_kappa;
    std::optional<double> fleiss_humans;   // among human judges
    std::optional<double> fleiss_with_ai;  // human judges plus the AI as one more rater
    std::size_t fleiss_item_count = 0;     // items rated by every judge
    LikertSummary likert;
};

HumanValidationReport validate_human(const std::vector<HumanValidationRecord>& records);

/// CSV columns: judge_id,item_id,human_verdict,ai_verdict,likert
/// (likert blank on stage-1 rows). Throws std::invalid_argument on malformed
/// rows, unknown verdict labels or Likert values outside 1-5.
std::vector<HumanValidationRecord> parse_human_validation_csv(const std::string& csv_text);

std::string human_validation_report_text(const HumanValidationReport& r);

}  // namespace persona_audit
