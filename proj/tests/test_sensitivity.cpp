#include <doctest.h>

#include "persona_audit/sensitivity.hpp"
#include "persona_audit/util.hpp"

using namespace persona_audit;

namespace {
const DemographicAxis kToy{"Toy", {"P", "Q"}};
}

TEST_CASE("sensitivity cell is a plain mean with an undefined marker") {
    CHECK(*sensitivity_cell({0.3, 0.3, 0.3}) == doctest::Approx(0.3));
    CHECK(*sensitivity_cell({0.0, 1.0}) == doctest::Approx(0.5));
    CHECK_FALSE(sensitivity_cell({}).has_value());
}

TEST_CASE("2x2 matrix marginals and overall") {
    MetricMatrix m = build_matrix(kToy, {{"P", "P", 0.1, 1}, {"P", "Q", 0.2, 1},
                                         {"Q", "P", 0.3, 1}, {"Q", "Q", 0.4, 1}});
    CHECK(*m.overall() == doctest::Approx(0.25));
    CHECK(*m.row_marginal(0) == doctest::Approx(0.15));
    CHECK(*m.row_marginal(1) == doctest::Approx(0.35));
    CHECK(*m.col_marginal(0) == doctest::Approx(0.2));
    CHECK(*m.col_marginal(1) == doctest::Approx(0.3));
    CHECK(axis_mean(m) == doctest::Approx(0.25));
}

TEST_CASE("marginals weight by observation count") {
    // hand-computed weighted mean: (0.1*1 + 0.3*3) / 4 = 0.25
    MetricMatrix m(kToy.name, kToy.identities);
    m.set_cell(0, 0, 0.1, 1);
    m.set_cell(0, 1, 0.3, 3);
    CHECK(*m.row_marginal(0) == doctest::Approx(0.25));
    CHECK(*m.overall() == doctest::Approx(0.25));
    CHECK_FALSE(m.row_marginal(1).has_value());
    CHECK(m.col_marginal(0).has_value());  // one defined cell is enough
}

TEST_CASE("undefined cells stay undefined") {
    MetricMatrix m(kToy.name, kToy.identities);
    CHECK_FALSE(m.overall().has_value());
    CHECK_FALSE(m.row_marginal(0).has_value());
    CHECK_FALSE(m.cell_mean(1, 1).has_value());
    CHECK(m.defined_cell_means().empty());
    CHECK_THROWS_AS(axis_mean(m), std::domain_error);
}

TEST_CASE("accumulation equals flat recomputation") {
    SplitMix64 rng(5);
    MetricMatrix m(kToy.name, kToy.identities);
    double flat_sum = 0.0;
    int n = 0;
    for (int i = 0; i < 200; ++i) {
        const auto& sub = kToy.identities[rng.next_below(2)];
        const auto& res = kToy.identities[rng.next_below(2)];
        const double v = rng.next_double();
        m.add(sub, res, v);
        flat_sum += v;
        ++n;
    }
    CHECK(*m.overall() == doctest::Approx(flat_sum / n).epsilon(1e-12));
}

TEST_CASE("matrix json round trip") {
    MetricMatrix m(kToy.name, kToy.identities);
    m.set_cell(0, 1, 0.123456, 7);
    const MetricMatrix restored = MetricMatrix::from_json(m.to_json());
    CHECK(restored.axis() == m.axis());
    CHECK(*restored.cell_mean(0, 1) == doctest::Approx(0.123456));
    CHECK(restored.cell_count(0, 1) == 7);
    CHECK_FALSE(restored.cell_mean(0, 0).has_value());
}

TEST_CASE("axis ranking fixture") {
    // Published axis-level example: Religion 0.190 vs Physical Appearance 0.162.
    MetricMatrix religion("Religion", {"X"});
    religion.set_cell(0, 0, 0.190, 100);
    MetricMatrix appearance("Physical Appearance", {"X"});
    appearance.set_cell(0, 0, 0.162, 100);
    CHECK(axis_mean(religion) > axis_mean(appearance));
    CHECK(axis_mean(religion) == doctest::Approx(0.190));
}

TEST_CASE("heatmap csv layout for a 2x2 matrix") {
    MetricMatrix m = build_matrix(kToy, {{"P", "P", 0.1, 1}, {"P", "Q", 0.2, 1},
                                         {"Q", "P", 0.3, 1}, {"Q", "Q", 0.4, 1}});
    const std::string csv = matrix_to_csv(m, "cosine_distance", 3);
    // header comment + header row + 2 data rows + margin row
    CHECK(csv.find("SUB\\RES,P,Q,MARGIN") != std::string::npos);
    CHECK(csv.find("P,0.100,0.200,0.150") != std::string::npos);
    CHECK(csv.find("Q,0.300,0.400,0.350") != std::string::npos);
    CHECK(csv.find("MARGIN,0.200,0.300,0.250") != std::string::npos);

    MetricMatrix empty(kToy.name, kToy.identities);
    CHECK(matrix_to_csv(empty, "win_rate", 3).find("n/a") != std::string::npos);
}
