#include <doctest.h>

#include <cmath>

#include "persona_audit/stats.hpp"
#include "persona_audit/util.hpp"

using namespace persona_audit;

namespace {

MetricMatrix matrix_from_values(const std::vector<std::vector<double>>& values) {
    std::vector<std::string> rows, cols;
    for (std::size_t i = 0; i < values.size(); ++i) rows.push_back("id" + std::to_string(i));
    for (std::size_t i = 0; i < values.front().size(); ++i) cols.push_back("id" + std::to_string(i));
    MetricMatrix m("Axis", rows, cols);
    for (std::size_t r = 0; r < values.size(); ++r) {
        for (std::size_t c = 0; c < values[r].size(); ++c) m.set_cell(r, c, values[r][c], 1);
    }
    return m;
}

/// Independent two-pass population std over a flat list.
double brute_force_std(const std::vector<double>& xs) {
    long double mean = 0.0L;
    for (double x : xs) mean += x;
    mean /= static_cast<long double>(xs.size());
    long double ss = 0.0L;
    for (double x : xs) ss += (static_cast<long double>(x) - mean) * (static_cast<long double>(x) - mean);
    return static_cast<double>(std::sqrt(ss / static_cast<long double>(xs.size())));
}

}  // namespace

TEST_CASE("axis std basics") {
    CHECK(axis_std(matrix_from_values({{0.3, 0.3}, {0.3, 0.3}})) == doctest::Approx(0.0));
    CHECK(axis_std(matrix_from_values({{0.0, 1.0}})) == doctest::Approx(0.5));

    MetricMatrix empty("Axis", std::vector<std::string>{"a"});
    CHECK_THROWS_AS(axis_std(empty), std::domain_error);
}

TEST_CASE("axis std matches an independent brute force on random matrices") {
    SplitMix64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::vector<double>> values(3, std::vector<double>(3));
        std::vector<double> flat;
        for (auto& row : values) {
            for (double& v : row) {
                v = rng.next_double();
                flat.push_back(v);
            }
        }
        CHECK(std::fabs(axis_std(matrix_from_values(values)) - brute_force_std(flat)) <= 1e-12);
    }
}

TEST_CASE("axis std scale equivariance") {
    SplitMix64 rng(31);
    std::vector<std::vector<double>> values(2, std::vector<double>(2));
    for (auto& row : values) {
        for (double& v : row) v = rng.next_double();
    }
    const double base = axis_std(matrix_from_values(values));
    const double a = -2.5, b = 0.7;
    std::vector<std::vector<double>> scaled = values;
    for (auto& row : scaled) {
        for (double& v : row) v = a * v + b;
    }
    CHECK(axis_std(matrix_from_values(scaled)) == doctest::Approx(std::fabs(a) * base).epsilon(1e-12));
}

TEST_CASE("avg std") {
    CHECK(avg_std({0.02, 0.04}) == doctest::Approx(0.03));
    CHECK(avg_std({0.0, 0.0, 0.0}) == doctest::Approx(0.0));
    CHECK(avg_std(std::vector<double>(8, 0.123)) == doctest::Approx(0.123));
    CHECK_THROWS_AS(avg_std({}), std::invalid_argument);
}

TEST_CASE("percent change reproduces published split values") {
    // fixture pairs from the power-disparity split table
    CHECK(fmt_percent(*percent_change(0.0198, 0.0231), 1) == "+16.7%");
    CHECK(fmt_percent(*percent_change(0.0125, 0.0114), 1) == "-8.8%");
    CHECK(fmt_percent(*percent_change(0.0830, 0.0909), 1) == "+9.5%");
    CHECK(fmt_percent(*percent_change(0.5, 0.5), 1) == "0.0%");
    CHECK_FALSE(percent_change(0.0, 0.1).has_value());
}

TEST_CASE("summarize_bias aggregates per-axis stds") {
    const auto cos_a = matrix_from_values({{0.0, 1.0}});   // std 0.5
    const auto cos_b = matrix_from_values({{0.2, 0.2}});   // std 0
    const auto wr_a = matrix_from_values({{0.25, 0.75}});  // std 0.25
    const auto wr_b = matrix_from_values({{0.5, 0.5}});    // std 0
    const BiasSummary s = summarize_bias("All", {cos_a, cos_b}, {wr_a, wr_b});
    CHECK(s.split == "All");
    REQUIRE(s.axes.size() == 2);
    CHECK(*s.avg_std_cos == doctest::Approx(0.25));
    CHECK(*s.avg_std_wr == doctest::Approx(0.125));

    MetricMatrix empty("Axis", std::vector<std::string>{"x"});
    const BiasSummary degenerate = summarize_bias("PD", {empty}, {empty});
    CHECK_FALSE(degenerate.avg_std_cos.has_value());
}

TEST_CASE("rank extremes on a simple matrix") {
    // columns: marginals 0.2 and 0.3 -> lowest RES id0, highest RES id1
    MetricMatrix m = matrix_from_values({{0.1, 0.4}, {0.3, 0.2}});
    const AxisExtremes e = rank_extremes(m);
    CHECK(e.lowest.joined_res() == "id0");
    CHECK(*e.lowest.res_marginal == doctest::Approx(0.2));
    CHECK(e.lowest.joined_sub() == "id0");  // min cell in column id0 is 0.1 at row id0
    CHECK(e.highest.joined_res() == "id1");
    CHECK(e.highest.joined_sub() == "id0");  // max cell in column id1 is 0.4 at row id0
}

TEST_CASE("rank extremes reports ties in identity order") {
    MetricMatrix m = matrix_from_values({{0.1, 0.1}, {0.3, 0.3}});
    const AxisExtremes e = rank_extremes(m);
    CHECK(e.lowest.joined_res() == "id0/id1");
    CHECK(e.highest.joined_res() == "id0/id1");
    // sub scan runs in the first tied column
    CHECK(e.lowest.joined_sub() == "id0");
    CHECK(e.highest.joined_sub() == "id1");

    MetricMatrix tied_cells = matrix_from_values({{0.2, 0.9}, {0.2, 0.1}});
    const AxisExtremes t = rank_extremes(tied_cells);
    CHECK(t.lowest.joined_res() == "id0");
    CHECK(t.lowest.joined_sub() == "id0/id1");
}

TEST_CASE("rank extremes agrees with an exhaustive scan on random matrices") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.next_below(4);
        std::vector<std::vector<double>> values(n, std::vector<double>(n));
        for (auto& row : values) {
            for (double& v : row) v = rng.next_double();
        }
        MetricMatrix m = matrix_from_values(values);

        // independent exhaustive scan
        std::vector<double> marginals(n);
        for (std::size_t c = 0; c < n; ++c) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r) s += values[r][c];
            marginals[c] = s / static_cast<double>(n);
        }
        const auto scan = [&](bool lowest) {
            std::size_t best = 0;
            for (std::size_t c = 1; c < n; ++c) {
                if (lowest ? marginals[c] < marginals[best] : marginals[c] > marginals[best]) best = c;
            }
            std::size_t best_row = 0;
            for (std::size_t r = 1; r < n; ++r) {
                if (lowest ? values[r][best] < values[best_row][best]
                           : values[r][best] > values[best_row][best]) {
                    best_row = r;
                }
            }
            return std::pair{best, best_row};
        };
        const AxisExtremes e = rank_extremes(m);
        const auto [lo_col, lo_row] = scan(true);
        const auto [hi_col, hi_row] = scan(false);
        REQUIRE(e.lowest.res_identities.size() == 1);  // ties have measure zero here
        CHECK(e.lowest.res_identities[0] == m.cols()[lo_col]);
        CHECK(e.lowest.sub_identities[0] == m.rows()[lo_row]);
        CHECK(e.highest.res_identities[0] == m.cols()[hi_col]);
        CHECK(e.highest.sub_identities[0] == m.rows()[hi_row]);
    }
}

TEST_CASE("cohen kappa") {
    SUBCASE("identical non-degenerate sequences") {
        CHECK(*cohen_kappa({"A", "B", "A"}, {"A", "B", "A"}) == doctest::Approx(1.0));
    }
    SUBCASE("hand-built zero case: p_o = p_e = 0.5") {
        CHECK(*cohen_kappa({"A", "A", "B", "B"}, {"A", "B", "A", "B"}) == doctest::Approx(0.0));
    }
    SUBCASE("degenerate marginals") {
        CHECK(*cohen_kappa({"A", "A"}, {"A", "A"}) == doctest::Approx(1.0));  // p_e = 1, p_o = 1
        // one deviation: p_o = 3/4, p_e = 1 * 3/4, kappa = 0
        CHECK(*cohen_kappa({"A", "A", "A", "A"}, {"A", "A", "A", "B"}) == doctest::Approx(0.0));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(cohen_kappa({}, {}), std::invalid_argument);
        CHECK_THROWS_AS(cohen_kappa({"A"}, {"A", "B"}), std::invalid_argument);
    }
    SUBCASE("matches a brute-force contingency implementation on random pairs") {
        SplitMix64 rng(404);
        const std::vector<std::string> labels{"A", "B", "Draw"};
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t n = 5 + rng.next_below(40);
            std::vector<std::string> a, b;
            for (std::size_t i = 0; i < n; ++i) {
                a.push_back(labels[rng.next_below(3)]);
                b.push_back(labels[rng.next_below(3)]);
            }
            // independent oracle via a full 3x3 contingency table
            double table[3][3] = {};
            const auto index = [&](const std::string& s) {
                return s == "A" ? 0 : s == "B" ? 1 : 2;
            };
            for (std::size_t i = 0; i < n; ++i) table[index(a[i])][index(b[i])] += 1.0;
            double p_o = 0.0, p_e = 0.0;
            for (int k = 0; k < 3; ++k) {
                p_o += table[k][k] / static_cast<double>(n);
                double row = 0.0, col = 0.0;
                for (int j = 0; j < 3; ++j) {
                    row += table[k][j];
                    col += table[j][k];
                }
                p_e += (row / n) * (col / n);
            }
            const auto kappa = cohen_kappa(a, b);
            if (p_e >= 1.0) {
                if (p_o == 1.0) {
                    CHECK(*kappa == doctest::Approx(1.0));
                } else {
                    CHECK_FALSE(kappa.has_value());
                }
            } else {
                REQUIRE(kappa.has_value());
                CHECK(std::fabs(*kappa - (p_o - p_e) / (1.0 - p_e)) <= 1e-12);
            }
            CHECK(*kappa <= 1.0 + 1e-12);
            // symmetry
            const auto swapped = cohen_kappa(b, a);
            CHECK(*kappa == doctest::Approx(*swapped).epsilon(1e-12));
        }
    }
}

TEST_CASE("fleiss kappa") {
    SUBCASE("unanimity with multiple categories") {
        CHECK(*fleiss_kappa({{"A", "A", "A"}, {"B", "B", "B"}}) == doctest::Approx(1.0));
    }
    SUBCASE("single category everywhere is degenerate") {
        CHECK_FALSE(fleiss_kappa({{"A", "A"}, {"A", "A"}}).has_value());
    }
    SUBCASE("ragged input rejected") {
        CHECK_THROWS_AS(fleiss_kappa({{"A", "B"}, {"A"}}), std::invalid_argument);
        CHECK_THROWS_AS(fleiss_kappa({{"A"}}), std::invalid_argument);
        CHECK_THROWS_AS(fleiss_kappa({}), std::invalid_argument);
    }
    SUBCASE("two raters match a direct per-item agreement formula") {
        SplitMix64 rng(505);
        const std::vector<std::string> labels{"A", "B", "Draw"};
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t items = 6 + rng.next_below(30);
            std::vector<std::vector<std::string>> ratings(items, std::vector<std::string>(2));
            for (auto& row : ratings) {
                row[0] = labels[rng.next_below(3)];
                row[1] = labels[rng.next_below(3)];
            }
            // direct formula: with n=2, P_i = 1 on agreement else 0
            double p_bar = 0.0;
            double counts[3] = {};
            const auto index = [&](const std::string& s) {
                return s == "A" ? 0 : s == "B" ? 1 : 2;
            };
            for (const auto& row : ratings) {
                if (row[0] == row[1]) p_bar += 1.0;
                counts[index(row[0])] += 1.0;
                counts[index(row[1])] += 1.0;
            }
            p_bar /= static_cast<double>(items);
            double p_e = 0.0;
            for (double c : counts) {
                const double p = c / (2.0 * items);
                p_e += p * p;
            }
            const auto kappa = fleiss_kappa(ratings);
            if (p_e >= 1.0) {
                CHECK_FALSE(kappa.has_value());
            } else {
                REQUIRE(kappa.has_value());
                CHECK(std::fabs(*kappa - (p_bar - p_e) / (1.0 - p_e)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("likert summary partitions by convergence") {
    std::vector<HumanValidationRecord> records;
    const auto add = [&](const char* judge, const char* item, const char* human, const char* ai,
                         std::optional<int> likert) {
        records.push_back({judge, item, human, ai, likert});
    };
    add("j1", "i1", "A", "A", 5);
    add("j1", "i2", "B", "B", 5);
    add("j1", "i3", "Draw", "Draw", 4);
    add("j1", "i4", "A", "B", 3);
    add("j1", "i5", "B", "A", 2);

    const LikertSummary s = likert_summary(records);
    CHECK(*s.converging_mean == doctest::Approx(14.0 / 3.0));  // {5,5,4}
    CHECK(*s.diverging_mean == doctest::Approx(2.5));          // {3,2}
    CHECK(*s.overall_mean == doctest::Approx(19.0 / 5.0));
    CHECK(fmt_fixed(*s.converging_mean, 3) == "4.667");
}

TEST_CASE("likert summary with no diverging rows leaves the partition undefined") {
    std::vector<HumanValidationRecord> records{{"j1", "i1", "A", "A", 5}, {"j1", "i2", "B", "B", 4}};
    const LikertSummary s = likert_summary(records);
    CHECK(s.converging_mean.has_value());
    CHECK_FALSE(s.diverging_mean.has_value());
}

TEST_CASE("judge-unweighted likert mean from a per-judge fixture") {
    // per-judge converging means 4.900 / 4.311 / 4.929; the unweighted mean of
    // the three judge means is 4.713 at 3 decimals
    const double mean = (4.900 + 4.311 + 4.929) / 3.0;
    CHECK(fmt_fixed(mean, 3) == "4.713");

    // likert_summary averages judges the same way: build ratings whose
    // per-judge means are exact in binary-friendly fractions
    std::vector<HumanValidationRecord> records{
        {"j1", "i1", "A", "A", 5}, {"j1", "i2", "A", "A", 4},  // mean 4.5
        {"j2", "i1", "A", "A", 3},                             // mean 3.0
        {"j3", "i1", "A", "A", 5}, {"j3", "i2", "A", "A", 5},  // mean 5.0
    };
    const LikertSummary s = likert_summary(records);
    CHECK(*s.judge_mean_converging == doctest::Approx((4.5 + 3.0 + 5.0) / 3.0).epsilon(1e-12));
}

TEST_CASE("judge-unweighted mean of per-judge means uses each judge once") {
    // judge means: j1 -> 5.0 (one rating), j2 -> 3.0 (three ratings)
    std::vector<HumanValidationRecord> records{
        {"j1", "i1", "A", "A", 5},
        {"j2", "i1", "A", "A", 3},
        {"j2", "i2", "A", "A", 3},
        {"j2", "i3", "A", "A", 3},
    };
    const LikertSummary s = likert_summary(records);
    CHECK(*s.judge_mean_overall == doctest::Approx(4.0));   // (5 + 3) / 2
    CHECK(*s.overall_mean == doctest::Approx(3.5));         // rating-weighted
}

TEST_CASE("human validation csv ingest and report") {
    const std::string csv =
        "judge_id,item_id,human_verdict,ai_verdict,likert\n"
        "j1,i1,A,A,\n"
        "j1,i2,B,A,\n"
        "j2,i1,A,A,5\n"
        "j2,i2,A,A,4\n";
    const auto records = parse_human_validation_csv(csv);
    REQUIRE(records.size() == 4);
    CHECK_FALSE(records[0].likert.has_value());
    CHECK(records[2].likert.has_value());
    CHECK(records[0].converging());
    CHECK_FALSE(records[1].converging());

    const auto report = validate_human(records);
    CHECK(report.n_records == 4);
    CHECK(report.n_stage2 == 2);
    CHECK(report.fleiss_item_count == 2);
    REQUIRE(report.per_judge_kappa.size() == 2);
    const std::string text = human_validation_report_text(report);
    CHECK(text.find("Cohen's kappa") != std::string::npos);
    CHECK(text.find("Fleiss' kappa among human judges") != std::string::npos);

    CHECK_THROWS_AS(parse_human_validation_csv("j1,i1,A\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_human_validation_csv("j1,i1,A,Maybe,\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_human_validation_csv("j1,i1,A,B,9\n"), std::invalid_argument);
}
