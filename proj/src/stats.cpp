#include "persona_audit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace persona_audit {

double axis_std(const MetricMatrix& m) {
    const std::vector<double> values = m.defined_cell_means();
    if (values.empty()) throw std::domain_error("axis_std: matrix has no defined cells");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size()));
}

double avg_std(const std::vector<double>& per_axis_stds) {
    if (per_axis_stds.empty()) throw std::invalid_argument("avg_std: no axes");
    double sum = 0.0;
    for (double s : per_axis_stds) sum += s;
    return sum / static_cast<double>(per_axis_stds.size());
}

std::optional<double> percent_change(double base, double value) {
    if (base == 0.0) return std::nullopt;
    return (value - base) / base * 100.0;
}

namespace {
std::optional<double> try_axis_std(const MetricMatrix& m) {
    if (m.defined_cell_means().empty()) return std::nullopt;
    return axis_std(m);
}

std::optional<double> avg_defined(const std::vector<std::optional<double>>& stds) {
    std::vector<double> defined;
    for (const auto& s : stds) {
        if (s) defined.push_back(*s);
    }
    if (defined.empty()) return std::nullopt;
    return avg_std(defined);
}
}  // namespace

BiasSummary summarize_bias(const std::string& split, const std::vector<MetricMatrix>& cos_matrices,
                           const std::vector<MetricMatrix>& wr_matrices) {
    if (cos_matrices.size() != wr_matrices.size()) {
        throw std::invalid_argument("summarize_bias: axis count mismatch");
    }
    BiasSummary out;
    out.split = split;
    for (std::size_t i = 0; i < cos_matrices.size(); ++i) {
        if (cos_matrices[i].axis() != wr_matrices[i].axis()) {
            throw std::invalid_argument("summarize_bias: axis order mismatch");
        }
        out.axes.push_back(cos_matrices[i].axis());
        out.cos_stds.push_back(try_axis_std(cos_matrices[i]));
        out.wr_stds.push_back(try_axis_std(wr_matrices[i]));
    }
    out.avg_std_cos = avg_defined(out.cos_stds);
    out.avg_std_wr = avg_defined(out.wr_stds);
    return out;
}

namespace {
std::string join_slash(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += "/";
        out += p;
    }
    return out;
}

ExtremeSelection select_extreme(const MetricMatrix& m, bool lowest) {
    ExtremeSelection sel;
    const auto better = [lowest](double a, double b) { return lowest ? a < b : a > b; };

    for (std::size_t c = 0; c < m.cols().size(); ++c) {
        const auto marginal = m.col_marginal(c);
        if (!marginal) continue;
        if (!sel.res_marginal || better(*marginal, *sel.res_marginal)) {
            sel.res_marginal = *marginal;
            sel.res_identities = {m.cols()[c]};
        } else if (*marginal == *sel.res_marginal) {
            sel.res_identities.push_back(m.cols()[c]);
        }
    }
    if (sel.res_identities.empty()) return sel;

    // SUB scan runs within the first tied RES column.
    const std::size_t col = m.col_index(sel.res_identities.front());
    for (std::size_t r = 0; r < m.rows().size(); ++r) {
        const auto cell = m.cell_mean(r, col);
        if (!cell) continue;
        if (!sel.sub_cell || better(*cell, *sel.sub_cell)) {
            sel.sub_cell = *cell;
            sel.sub_identities = {m.rows()[r]};
        } else if (*cell == *sel.sub_cell) {
            sel.sub_identities.push_back(m.rows()[r]);
        }
    }
    return sel;
}
}  // namespace

std::string ExtremeSelection::joined_res() const { return join_slash(res_identities); }
std::string ExtremeSelection::joined_sub() const { return join_slash(sub_identities); }

AxisExtremes rank_extremes(const MetricMatrix& m) {
    return AxisExtremes{m.axis(), select_extreme(m, true), select_extreme(m, false)};
}

std::optional<double> cohen_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() || a.size() != b.size()) {
        throw std::invalid_argument("cohen_kappa: sequences must be non-empty and equal length");
    }
    const double n = static_cast<double>(a.size());
    std::map<std::string, double> freq_a, freq_b;
    double observed = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        freq_a[a[i]] += 1.0;
        freq_b[b[i]] += 1.0;
        if (a[i] == b[i]) observed += 1.0;
    }
    const double p_o = observed / n;
    double p_e = 0.0;
    for (const auto& [label, count_a] : freq_a) {
        const auto it = freq_b.find(label);
        if (it != freq_b.end()) p_e += (count_a / n) * (it->second / n);
    }
    if (p_e >= 1.0) {
        if (p_o == 1.0) return 1.0;
        return std::nullopt;
    }
    return (p_o - p_e) / (1.0 - p_e);
}

std::optional<double> fleiss_kappa(const std::vector<std::vector<std::string>>& ratings) {
    if (ratings.empty()) throw std::invalid_argument("fleiss_kappa: no items");
    const std::size_t n_raters = ratings.front().size();
    if (n_raters < 2) throw std::invalid_argument("fleiss_kappa: need at least 2 raters per item");
    for (const auto& item : ratings) {
        if (item.size() != n_raters) throw std::invalid_argument("fleiss_kappa: ragged rating matrix");
    }
    const double n = static_cast<double>(n_raters);
    const double big_n = static_cast<double>(ratings.size());

    std::map<std::string, double> category_totals;
    double p_bar = 0.0;
    for (const auto& item : ratings) {
        std::map<std::string, double> counts;
        for (const auto& label : item) {
            counts[label] += 1.0;
            category_totals[label] += 1.0;
        }
        double sum_sq = 0.0;
        for (const auto& [label, c] : counts) sum_sq += c * c;
        p_bar += (sum_sq - n) / (n * (n - 1.0));
    }
    p_bar /= big_n;

    double p_e = 0.0;
    for (const auto& [label, total] : category_totals) {
        const double p_j = total / (big_n * n);
        p_e += p_j * p_j;
    }
    if (p_e >= 1.0) return std::nullopt;
    return (p_bar - p_e) / (1.0 - p_e);
}

namespace {
std::optional<double> mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return std::nullopt;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}
}  // namespace

LikertSummary likert_summary(const std::vector<HumanValidationRecord>& records) {
    LikertSummary out;
    std::vector<double> all, conv, div;
    std::map<std::string, std::array<std::vector<double>, 3>> per_judge;  // overall, conv, div
    for (const auto& r : records) {
        if (!r.likert) continue;
        const double v = static_cast<double>(*r.likert);
        all.push_back(v);
        per_judge[r.judge_id][0].push_back(v);
        if (r.converging()) {
            conv.push_back(v);
            per_judge[r.judge_id][1].push_back(v);
        } else {
            div.push_back(v);
            per_judge[r.judge_id][2].push_back(v);
        }
    }
    out.overall_mean = mean_of(all);
    out.converging_mean = mean_of(conv);
    out.diverging_mean = mean_of(div);

    std::vector<double> jm_all, jm_conv, jm_div;
    for (const auto& [judge, buckets] : per_judge) {
        JudgeLikert jl;
        jl.judge_id = judge;
        jl.overall = mean_of(buckets[0]);
        jl.converging = mean_of(buckets[1]);
        jl.diverging = mean_of(buckets[2]);
        if (jl.overall) jm_all.push_back(*jl.overall);
        if (jl.converging) jm_conv.push_back(*jl.converging);
        if (jl.diverging) jm_div.push_back(*jl.diverging);
        out.per_judge.push_back(std::move(jl));
    }
    out.judge_mean_overall = mean_of(jm_all);
    out.judge_mean_converging = mean_of(jm_conv);
    out.judge_mean_diverging = mean_of(jm_div);
    return out;
}

HumanValidationReport validate_human(const std::vector<HumanValidationRecord>& records) {
    HumanValidationReport out;
    out.n_records = records.size();
    for (const auto& r : records) {
        if (r.likert) ++out.n_stage2;
    }

    std::set<std::string> judges;
    for (const auto& r : records) judges.insert(r.judge_id);

    std::vector<double> kappas;
    for (const auto& judge : judges) {
        std::vector<std::string> human, ai;
        for (const auto& r : records) {
            if (r.judge_id == judge) {
                human.push_back(r.human_verdict);
                ai.push_back(r.ai_verdict);
            }
        }
        auto k = human.empty() ? std::nullopt : cohen_kappa(human, ai);
        if (k) kappas.push_back(*k);
        out.per_judge_kappa.emplace_back(judge, k);
    }
    out.mean_kappa = mean_of(kappas);

    // Fleiss runs over items rated by every judge; the AI verdict joins as one
    // more rater for the second variant.
    std::map<std::string, std::map<std::string, std::string>> by_item;  // item -> judge -> verdict
    std::map<std::string, std::string> ai_by_item;
    for (const auto& r : records) {
        by_item[r.item_id][r.judge_id] = r.human_verdict;
        ai_by_item[r.item_id] = r.ai_verdict;
    }
    std::vector<std::vector<std::string>> humans_matrix, with_ai_matrix;
    for (const auto& [item, votes] : by_item) {
        if (votes.size() != judges.size()) continue;
        std::vector<std::string> row;
        for (const auto& judge : judges) row.push_back(votes.at(judge));
        with_ai_matrix.push_back(row);
        with_ai_matrix.back().push_back(ai_by_item.at(item));
        humans_matrix.push_back(std::move(row));
    }
    out.fleiss_item_count = humans_matrix.size();
    if (!humans_matrix.empty() && judges.size() >= 2) {
        out.fleiss_humans = fleiss_kappa(humans_matrix);
    }
    if (!with_ai_matrix.empty() && judges.size() + 1 >= 2) {
        out.fleiss_with_ai = fleiss_kappa(with_ai_matrix);
    }
    out.likert = likert_summary(records);
    return out;
}

namespace {
const std::set<std::string>& verdict_labels() {
    static const std::set<std::string> labels{"A", "B", "Draw"};
    return labels;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}
}  // namespace

std::vector<HumanValidationRecord> parse_human_validation_csv(const std::string& csv_text) {
    std::istringstream in(csv_text);
    std::string line;
    std::vector<HumanValidationRecord> out;
    bool first = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (first) {
            first = false;
            if (!fields.empty() && fields[0] == "judge_id") continue;  // header row
        }
        if (fields.size() < 4 || fields.size() > 5) {
            throw std::invalid_argument("ratings csv line " + std::to_string(line_no) +
                                        ": expected 4 or 5 columns");
        }
        HumanValidationRecord r;
        r.judge_id = fields[0];
        r.item_id = fields[1];
        r.human_verdict = fields[2];
        r.ai_verdict = fields[3];
        if (r.judge_id.empty() || r.item_id.empty()) {
            throw std::invalid_argument("ratings csv line " + std::to_string(line_no) +
                                        ": empty judge_id or item_id");
        }
        for (const std::string* v : {&r.human_verdict, &r.ai_verdict}) {
            if (!verdict_labels().count(*v)) {
                throw std::invalid_argument("ratings csv line " + std::to_string(line_no) +
                                            ": unknown verdict '" + *v + "'");
            }
        }
        if (fields.size() == 5 && !fields[4].empty()) {
            int likert = 0;
            try {
                likert = std::stoi(fields[4]);
            } catch (const std::exception&) {
                throw std::invalid_argument("ratings csv line " + std::to_string(line_no) +
                                            ": bad likert '" + fields[4] + "'");
            }
            if (likert < 1 || likert > 5) {
                throw std::invalid_argument("ratings csv line " + std::to_string(line_no) +
                                            ": likert out of range");
            }
            r.likert = likert;
        }
        out.push_back(std::move(r));
    }
    return out;
}

namespace {
std::string opt_str(const std::optional<double>& v, int decimals = 3) {
    return v ? fmt_fixed(*v, decimals) : "n/a";
}
}  // namespace

std::string human_validation_report_text(const HumanValidationReport& r) {
    std::ostringstream out;
    out << "records: " << r.n_records << " (stage-2 with Likert: " << r.n_stage2 << ")\n";
    out << "\n| Judge | Cohen's kappa (vs AI) | Likert overall | Likert (conv.) | Likert (div.) |\n";
    out << "|---|---|---|---|---|\n";
    for (const auto& [judge, kappa] : r.per_judge_kappa) {
        const JudgeLikert* jl = nullptr;
        for (const auto& j : r.likert.per_judge) {
            if (j.judge_id == judge) jl = &j;
        }
        out << "| " << judge << " | " << opt_str(kappa) << " | " << (jl ? opt_str(jl->overall) : "n/a")
            << " | " << (jl ? opt_str(jl->converging) : "n/a") << " | "
            << (jl ? opt_str(jl->diverging) : "n/a") << " |\n";
    }
    out << "| Mean (unweighted over judges) | " << opt_str(r.mean_kappa) << " | "
        << opt_str(r.likert.judge_mean_overall) << " | " << opt_str(r.likert.judge_mean_converging)
        << " | " << opt_str(r.likert.judge_mean_diverging) << " |\n";
    out << "\nRating-weighted Likert means: overall " << opt_str(r.likert.overall_mean) << ", converging "
        << opt_str(r.likert.converging_mean) << ", diverging " << opt_str(r.likert.diverging_mean) << "\n";
    out << "Fleiss' kappa among human judges: " << opt_str(r.fleiss_humans) << " (items rated by all: "
        << r.fleiss_item_count << ")\n";
    out << "Fleiss' kappa including the AI judge: " << opt_str(r.fleiss_with_ai) << "\n";
    return out.str();
}

}  // namespace persona_audit
