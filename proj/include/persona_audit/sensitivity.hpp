#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "persona_audit/model.hpp"
#include "persona_audit/util.hpp"

namespace persona_audit {

/// Sum/count accumulator for one (SUB, RES) cell. count == 0 means the cell
/// is undefined; undefined cells are never imputed as 0.
struct CellStat {
    double sum = 0.0;
    std::int64_t count = 0;

    void add(double v) {
        sum += v;
        ++count;
    }
    std::optional<double> mean() const {
        if (count == 0) return std::nullopt;
        return sum / static_cast<double>(count);
    }
};

/// Per-axis grid of per-combination means. Rows are SUB identities, columns
/// are RES identities. Marginals and the overall mean are count-weighted over
/// defined cells, which coincides with unweighted means when counts are equal.
class MetricMatrix {
  public:
    MetricMatrix() = default;
    MetricMatrix(std::string axis, std::vector<std::string> identities);
    MetricMatrix(std::string axis, std::vector<std::string> row_identities,
                 std::vector<std::string> col_identities);

    const std::string& axis() const { return axis_; }
    const std::vector<std::string>& rows() const { return rows_; }
    const std::vector<std::string>& cols() const { return cols_; }

    void add(const std::string& sub_identity, const std::string& res_identity, double value);
    void set_cell(std::size_t row, std::size_t col, double mean, std::int64_t count);

    const CellStat& cell(std::size_t row, std::size_t col) const;
    std::optional<double> cell_mean(std::size_t row, std::size_t col) const;
    std::int64_t cell_count(std::size_t row, std::size_t col) const;

    std::optional<double> row_marginal(std::size_t row) const;
    std::optional<double> col_marginal(std::size_t col) const;
    std::optional<double> overall() const;

    /// Means of every defined combination cell, row-major (marginals excluded).
    std::vector<double> defined_cell_means() const;

    std::size_t row_index(const std::string& identity) const;
    std::size_t col_index(const std::string& identity) const;

    json to_json() const;
    static MetricMatrix from_json(const json& j);

  private:
    std::string axis_;
    std::vector<std::string> rows_;
    std::vector<std::string> cols_;
    std::vector<CellStat> cells_;  // row-major
};

/// Mean of per-scenario values for one combination; empty when no scenario
/// contributed a usable pair.
std::optional<double> sensitivity_cell(const std::vector<double>& per_scenario_values);

/// Builds the axis grid from per-cell (mean, count) pairs keyed by identity
/// pair. Missing keys stay undefined.
struct CellValue {
    std::string sub_identity;
    std::string res_identity;
    double mean = 0.0;
    std::int64_t count = 0;
};
MetricMatrix build_matrix(const DemographicAxis& axis, const std::vector<CellValue>& cells);

/// The matrix's overall mean, used to rank axes. Throws std::domain_error on
/// an all-undefined matrix.
double axis_mean(const MetricMatrix& m);

/// Heatmap CSV: identity-labelled rows/columns, a MARGIN row/column and an
/// OVERALL bottom-right cell. Undefined cells print as "n/a".
std::string matrix_to_csv(const MetricMatrix& m, const std::string& metric_name, int decimals);

}  // namespace persona_audit
