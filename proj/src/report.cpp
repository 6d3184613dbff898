#include "persona_audit/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace persona_audit {

namespace {

struct Rgb {
    int r, g, b;
};

// Endpoints of a sequential blues ramp.
constexpr Rgb kLow{247, 251, 255};
constexpr Rgb kHigh{8, 48, 107};

int lerp_channel(int a, int b, double t) {
    return static_cast<int>(std::lround(a + (b - a) * t));
}

}  // namespace

std::string heatmap_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", lerp_channel(kLow.r, kHigh.r, t),
                  lerp_channel(kLow.g, kHigh.g, t), lerp_channel(kLow.b, kHigh.b, t));
    return buf;
}

namespace {

struct SvgCell {
    std::string label;   // formatted value or "n/a"
    std::optional<double> value;
};

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace

std::string render_heatmap_svg(const MetricMatrix& m, const std::string& title, int decimals) {
    const std::size_t n_rows = m.rows().size() + 1;  // + MARGIN row
    const std::size_t n_cols = m.cols().size() + 1;  // + MARGIN column

    std::vector<std::vector<SvgCell>> grid(n_rows, std::vector<SvgCell>(n_cols));
    double lo = 0.0, hi = 0.0;
    bool any = false;
    const auto put = [&](std::size_t r, std::size_t c, std::optional<double> v) {
        grid[r][c].value = v;
        grid[r][c].label = v ? fmt_fixed(*v, decimals) : "n/a";
        if (v) {
            lo = any ? std::min(lo, *v) : *v;
            hi = any ? std::max(hi, *v) : *v;
            any = true;
        }
    };
    for (std::size_t r = 0; r < m.rows().size(); ++r) {
        for (std::size_t c = 0; c < m.cols().size(); ++c) put(r, c, m.cell_mean(r, c));
        put(r, m.cols().size(), m.row_marginal(r));
    }
    for (std::size_t c = 0; c < m.cols().size(); ++c) put(m.rows().size(), c, m.col_marginal(c));
    put(m.rows().size(), m.cols().size(), m.overall());

    const int cell_w = 92, cell_h = 34, left = 170, top = 70;
    const int width = left + cell_w * static_cast<int>(n_cols) + 20;
    const int height = top + cell_h * static_cast<int>(n_rows) + 50;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\">\n";
    svg << "<text x=\"" << left << "\" y=\"24\" font-size=\"15\" font-weight=\"bold\">"
        << escape_xml(title) << "</text>\n";
    svg << "<text x=\"" << left << "\" y=\"44\" font-size=\"11\">rows: SUB identity, columns: RES "
        << "identity; MARGIN/OVERALL are count-weighted means</text>\n";

    const auto col_label = [&](std::size_t c) {
        return c < m.cols().size() ? m.cols()[c] : std::string("MARGIN");
    };
    const auto row_label = [&](std::size_t r) {
        return r < m.rows().size() ? m.rows()[r] : std::string("MARGIN");
    };

    for (std::size_t c = 0; c < n_cols; ++c) {
        svg << "<text x=\"" << left + static_cast<int>(c) * cell_w + cell_w / 2 << "\" y=\"" << top - 8
            << "\" font-size=\"10\" text-anchor=\"middle\">" << escape_xml(col_label(c)) << "</text>\n";
    }
    for (std::size_t r = 0; r < n_rows; ++r) {
        svg << "<text x=\"" << left - 8 << "\" y=\"" << top + static_cast<int>(r) * cell_h + cell_h / 2 + 4
            << "\" font-size=\"10\" text-anchor=\"end\">" << escape_xml(row_label(r)) << "</text>\n";
    }

    const double span = hi > lo ? hi - lo : 1.0;
    for (std::size_t r = 0; r < n_rows; ++r) {
        for (std::size_t c = 0; c < n_cols; ++c) {
            const int x = left + static_cast<int>(c) * cell_w;
            const int y = top + static_cast<int>(r) * cell_h;
            const SvgCell& cell = grid[r][c];
            std::string fill = "#cccccc";
            std::string text_color = "#000000";
            if (cell.value) {
                const double t = any ? (*cell.value - lo) / span : 0.0;
                fill = heatmap_color(t);
                if (t > 0.6) text_color = "#ffffff";
            }
            const bool is_overall = r == n_rows - 1 && c == n_cols - 1;
            svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_w << "\" height=\""
                << cell_h << "\" fill=\"" << fill << "\" stroke=\""
                << (is_overall ? "#000000" : "#ffffff") << "\"/>\n";
            svg << "<text x=\"" << x + cell_w / 2 << "\" y=\"" << y + cell_h / 2 + 4
                << "\" font-size=\"11\" text-anchor=\"middle\" fill=\"" << text_color << "\">"
                << escape_xml(cell.label) << "</text>\n";
        }
    }
    svg << "<text x=\"" << left << "\" y=\"" << top + static_cast<int>(n_rows) * cell_h + 24
        << "\" font-size=\"10\">OVERALL (bottom-right) = count-weighted mean over all defined cells"
        << "; scale " << fmt_fixed(lo, decimals) << " to " << fmt_fixed(hi, decimals) << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

namespace {
std::string opt_fixed(const std::optional<double>& v, int decimals) {
    return v ? fmt_fixed(*v, decimals) : "n/a";
}
}  // namespace

std::string pd_split_markdown(const std::vector<ModelMetrics>& models, int std_decimals,
                              int percent_decimals) {
    std::ostringstream out;
    out << "| Model | Avg. Std Cos. Dist. (No PD) | Avg. Std Cos. Dist. (PD) | Avg. Std WR (No PD) | "
           "Avg. Std WR (PD) |\n";
    out << "|---|---|---|---|---|\n";
    for (const auto& m : models) {
        const auto cell = [&](const std::optional<double>& base, const std::optional<double>& value) {
            if (!value) return std::string("n/a");
            std::string s = fmt_fixed(*value, std_decimals);
            if (base) {
                if (auto pct = percent_change(*base, *value)) {
                    s += " (" + fmt_percent(*pct, percent_decimals) + ")";
                }
            }
            return s;
        };
        out << "| " << m.model << " | " << opt_fixed(m.bias_nopd.avg_std_cos, std_decimals) << " | "
            << cell(m.bias_nopd.avg_std_cos, m.bias_pd.avg_std_cos) << " | "
            << opt_fixed(m.bias_nopd.avg_std_wr, std_decimals) << " | "
            << cell(m.bias_nopd.avg_std_wr, m.bias_pd.avg_std_wr) << " |\n";
    }
    return out.str();
}

std::string extremes_markdown(const ModelMetrics& model, bool win_rate, int decimals) {
    const auto& extremes = win_rate ? model.extremes_wr : model.extremes_cos;
    const char* metric = win_rate ? "HHH Preference WR" : "AvgCosDist.";
    std::ostringstream out;
    out << "| Demographic Axis | Lowest " << metric << " RES | Lowest SUB | Highest " << metric
        << " RES | Highest SUB |\n";
    out << "|---|---|---|---|---|\n";
    for (const auto& e : extremes) {
        const auto fmt_sel = [&](const ExtremeSelection& s, bool res) {
            const std::string ids = res ? s.joined_res() : s.joined_sub();
            const auto& value = res ? s.res_marginal : s.sub_cell;
            if (ids.empty()) return std::string("n/a");
            return ids + " (" + opt_fixed(value, decimals) + ")";
        };
        out << "| " << e.axis << " | " << fmt_sel(e.lowest, true) << " | " << fmt_sel(e.lowest, false)
            << " | " << fmt_sel(e.highest, true) << " | " << fmt_sel(e.highest, false) << " |\n";
    }
    return out.str();
}

std::string axis_means_markdown(const ModelMetrics& model, bool win_rate, int decimals) {
    const auto means = win_rate ? model.axis_means_wr : model.axis_means_cos;
    auto sorted = means;
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.second && b.second) return *a.second > *b.second;
        return a.second.has_value() && !b.second.has_value();
    });
    std::ostringstream out;
    out << "| Rank | Demographic Axis | " << (win_rate ? "AvgWR" : "AvgCosDist.") << " |\n";
    out << "|---|---|---|\n";
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        out << "| " << i + 1 << " | " << sorted[i].first << " | " << opt_fixed(sorted[i].second, decimals)
            << " |\n";
    }
    return out.str();
}

void write_reports(const RunStore& store, const MetricsBundle& bundle, const Config& config) {
    const auto dir = store.reports_dir();
    std::filesystem::create_directories(dir);
    const int decimals = config.report.distance_decimals;

    std::ostringstream tables;
    tables << "# Run report\n\n";
    tables << "corpus fingerprint: `" << bundle.corpus_fingerprint << "`\n\n";
    tables << "registry fingerprint: `" << bundle.registry_fingerprint << "`\n\n";
    tables << "## Implicit-bias variability by power-disparity split\n\n";
    tables << pd_split_markdown(bundle.models, config.report.std_decimals,
                                config.report.percent_decimals);

    for (const auto& model : bundle.models) {
        const auto model_dir = dir / slugify(model.model);
        std::filesystem::create_directories(model_dir);
        for (const auto& axis : model.axes) {
            const std::string slug = slugify(axis.axis);
            write_file(model_dir / ("cosdist_" + slug + ".csv"),
                       matrix_to_csv(axis.cos_all, "cosine_distance", decimals));
            write_file(model_dir / ("winrate_" + slug + ".csv"),
                       matrix_to_csv(axis.wr_all, "win_rate", decimals));
            write_file(model_dir / ("cosdist_" + slug + ".svg"),
                       render_heatmap_svg(axis.cos_all,
                                          model.model + ": average cosine distance, " + axis.axis,
                                          decimals));
            write_file(model_dir / ("winrate_" + slug + ".svg"),
                       render_heatmap_svg(axis.wr_all,
                                          model.model + ": average HHH preference win rate, " + axis.axis,
                                          decimals));
        }
        tables << "\n## " << model.model << "\n\n";
        tables << "scenarios: " << model.scenario_count << ", distance pairs: " << model.distance_pairs
               << ", judged pairs: " << model.judged_pairs << ", unusable pairs: " << model.unusable_pairs
               << "\n\n";
        tables << "### Cosine-distance extremes\n\n" << extremes_markdown(model, false, decimals) << "\n";
        tables << "### Win-rate extremes\n\n" << extremes_markdown(model, true, decimals) << "\n";
        tables << "### Axis sensitivity ranking (cosine distance)\n\n"
               << axis_means_markdown(model, false, decimals) << "\n";
        tables << "### Axis quality ranking (win rate)\n\n" << axis_means_markdown(model, true, decimals)
               << "\n";
    }
    write_file(dir / "tables.md", tables.str());
}

}  // namespace persona_audit
