#include "persona_audit/sensitivity.hpp"

#include <algorithm>
#include <stdexcept>

namespace persona_audit {

MetricMatrix::MetricMatrix(std::string axis, std::vector<std::string> identities)
    : MetricMatrix(std::move(axis), identities, identities) {}

MetricMatrix::MetricMatrix(std::string axis, std::vector<std::string> row_identities,
                           std::vector<std::string> col_identities)
    : axis_(std::move(axis)),
      rows_(std::move(row_identities)),
      cols_(std::move(col_identities)),
      cells_(rows_.size() * cols_.size()) {}

std::size_t MetricMatrix::row_index(const std::string& identity) const {
    const auto it = std::find(rows_.begin(), rows_.end(), identity);
    if (it == rows_.end()) throw std::out_of_range("unknown SUB identity: " + identity);
    return static_cast<std::size_t>(it - rows_.begin());
}

std::size_t MetricMatrix::col_index(const std::string& identity) const {
    const auto it = std::find(cols_.begin(), cols_.end(), identity);
    if (it == cols_.end()) throw std::out_of_range("unknown RES identity: " + identity);
    return static_cast<std::size_t>(it - cols_.begin());
}

void MetricMatrix::add(const std::string& sub_identity, const std::string& res_identity, double value) {
    cells_[row_index(sub_identity) * cols_.size() + col_index(res_identity)].add(value);
}

void MetricMatrix::set_cell(std::size_t row, std::size_t col, double mean, std::int64_t count) {
    if (count < 0) throw std::invalid_argument("negative cell count");
    if (row >= rows_.size() || col >= cols_.size()) throw std::out_of_range("cell index out of range");
    CellStat& c = cells_[row * cols_.size() + col];
    c.sum = mean * static_cast<double>(count);
    c.count = count;
}

const CellStat& MetricMatrix::cell(std::size_t row, std::size_t col) const {
    return cells_.at(row * cols_.size() + col);
}

std::optional<double> MetricMatrix::cell_mean(std::size_t row, std::size_t col) const {
    return cell(row, col).mean();
}

std::int64_t MetricMatrix::cell_count(std::size_t row, std::size_t col) const {
    return cell(row, col).count;
}

namespace {
std::optional<double> weighted_mean(const std::vector<const CellStat*>& cells) {
    double sum = 0.0;
    std::int64_t count = 0;
    for (const CellStat* c : cells) {
        sum += c->sum;
        count += c->count;
    }
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
}
}  // namespace

std::optional<double> MetricMatrix::row_marginal(std::size_t row) const {
    std::vector<const CellStat*> cs;
    for (std::size_t c = 0; c < cols_.size(); ++c) cs.push_back(&cell(row, c));
    return weighted_mean(cs);
}

std::optional<double> MetricMatrix::col_marginal(std::size_t col) const {
    std::vector<const CellStat*> cs;
    for (std::size_t r = 0; r < rows_.size(); ++r) cs.push_back(&cell(r, col));
    return weighted_mean(cs);
}

std::optional<double> MetricMatrix::overall() const {
    std::vector<const CellStat*> cs;
    for (const CellStat& c : cells_) cs.push_back(&c);
    return weighted_mean(cs);
}

std::vector<double> MetricMatrix::defined_cell_means() const {
    std::vector<double> out;
    for (const CellStat& c : cells_) {
        if (auto m = c.mean()) out.push_back(*m);
    }
    return out;
}

json MetricMatrix::to_json() const {
    json cells = json::array();
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < cols_.size(); ++c) {
            const CellStat& s = cell(r, c);
            if (s.count == 0) {
                row.push_back(nullptr);
            } else {
                row.push_back(json{{"mean", *s.mean()}, {"count", s.count}});
            }
        }
        cells.push_back(std::move(row));
    }
    return json{{"axis", axis_}, {"rows", rows_}, {"cols", cols_}, {"cells", std::move(cells)}};
}

MetricMatrix MetricMatrix::from_json(const json& j) {
    MetricMatrix m(j.at("axis").get<std::string>(), j.at("rows").get<std::vector<std::string>>(),
                   j.at("cols").get<std::vector<std::string>>());
    const json& cells = j.at("cells");
    for (std::size_t r = 0; r < m.rows_.size(); ++r) {
        for (std::size_t c = 0; c < m.cols_.size(); ++c) {
            const json& cj = cells.at(r).at(c);
            if (!cj.is_null()) {
                m.set_cell(r, c, cj.at("mean").get<double>(), cj.at("count").get<std::int64_t>());
            }
        }
    }
    return m;
}

std::optional<double> sensitivity_cell(const std::vector<double>& per_scenario_values) {
    if (per_scenario_values.empty()) return std::nullopt;
    double sum = 0.0;
    for (double v : per_scenario_values) sum += v;
    return sum / static_cast<double>(per_scenario_values.size());
}

MetricMatrix build_matrix(const DemographicAxis& axis, const std::vector<CellValue>& cells) {
    MetricMatrix m(axis.name, axis.identities);
    for (const CellValue& c : cells) {
        m.set_cell(m.row_index(c.sub_identity), m.col_index(c.res_identity), c.mean, c.count);
    }
    return m;
}

double axis_mean(const MetricMatrix& m) {
    const auto overall = m.overall();
    if (!overall) throw std::domain_error("axis_mean: matrix has no defined cells");
    return *overall;
}

namespace {
std::string csv_value(const std::optional<double>& v, int decimals) {
    return v ? fmt_fixed(*v, decimals) : "n/a";
}
}  // namespace

std::string matrix_to_csv(const MetricMatrix& m, const std::string& metric_name, int decimals) {
    std::string out;
    out += "# axis: " + m.axis() + "; metric: " + metric_name +
           "; rows: SUB identity; columns: RES identity; MARGIN/OVERALL are count-weighted means\n";
    out += "SUB\\RES";
    for (const auto& c : m.cols()) out += "," + c;
    out += ",MARGIN\n";
    for (std::size_t r = 0; r < m.rows().size(); ++r) {
        out += m.rows()[r];
        for (std::size_t c = 0; c < m.cols().size(); ++c) {
            out += "," + csv_value(m.cell_mean(r, c), decimals);
        }
        out += "," + csv_value(m.row_marginal(r), decimals) + "\n";
    }
    out += "MARGIN";
    for (std::size_t c = 0; c < m.cols().size(); ++c) {
        out += "," + csv_value(m.col_marginal(c), decimals);
    }
    out += "," + csv_value(m.overall(), decimals) + "\n";
    return out;
}

}  // namespace persona_audit
