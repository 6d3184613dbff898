#pragma once

#include <string>

#include "persona_audit/pipeline.hpp"

namespace persona_audit {

/// Self-contained SVG heatmap for one axis matrix: identity-labelled grid,
/// MARGIN row/column, OVERALL bottom-right cell, sequential colour scale over
/// the displayed values. No plotting dependency; rectangles and text only.
std::string render_heatmap_svg(const MetricMatrix& m, const std::string& title, int decimals);

/// Linear light-to-dark ramp; t in [0, 1] -> "#rrggbb".
std::string heatmap_color(double t);

/// Markdown table of per-model AvgStd values with and without power
/// disparity and the percent change between the splits.
std::string pd_split_markdown(const std::vector<ModelMetrics>& models, int std_decimals,
                              int percent_decimals);

/// Markdown table of lowest/highest RES and SUB identities per axis.
std::string extremes_markdown(const ModelMetrics& model, bool win_rate, int decimals);

/// Markdown table ranking axes by overall mean (most to least).
std::string axis_means_markdown(const ModelMetrics& model, bool win_rate, int decimals);

/// Writes heatmap CSVs and SVGs plus the markdown tables under reports/.
void write_reports(const RunStore& store, const MetricsBundle& bundle, const Config& config);

}  // namespace persona_audit
