#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "analogy/evaluation.hpp"

namespace analogy {

enum class ReportFormat { Json, Csv, Markdown };

std::optional<ReportFormat> parse_report_format(std::string_view name);
std::string_view report_format_name(ReportFormat format);

/// Key/value pairs rendered into the JSON "metadata" object in insertion
/// order. CSV and markdown renderings carry no metadata.
using Metadata = std::vector<std::pair<std::string, std::string>>;

struct HeatmapCell {
  std::optional<double> accuracy;
  MethodTally tally;
};

/// method x category accuracy matrix. Categories are reordered so the 14
/// standard ones come first in their canonical order; anything else follows
/// in dataset order.
struct HeatmapGrid {
  std::vector<std::string> methods;
  std::vector<std::string> categories;
  std::vector<std::vector<HeatmapCell>> cells;  // [method][category]
  std::vector<HeatmapCell> totals;              // [method], micro overall
  std::vector<std::optional<double>> macro;     // [method]
};

HeatmapGrid build_heatmap(const EvaluationResult& result);

/// One labelled space per row: offset-method accuracy next to its gaps over
/// the trivial baselines, overall and per category.
struct SpaceComparison {
  std::vector<std::string> categories;
  struct Row {
    std::string label;
    std::optional<double> add;
    std::optional<double> gap_ignore_a;  // add minus ignore-a
    std::optional<double> gap_only_b;    // add minus only-b
    std::vector<std::optional<double>> cat_add;
    std::vector<std::optional<double>> cat_gap_ignore_a;
    std::vector<std::optional<double>> cat_gap_only_b;
  };
  std::vector<Row> rows;
};

/// Every result must contain add, only-b and ignore-a and share one category
/// list (they come from evaluating the same set); anything else is
/// std::invalid_argument.
SpaceComparison build_space_comparison(
    std::span<const std::pair<std::string, const EvaluationResult*>> spaces);

/// Renders a report to one of the three formats. JSON carries full-precision
/// numbers plus the metadata object; CSV and markdown render the same
/// numbers to 4 decimals (round half to even) and skip the metadata.
std::string emit(const HeatmapGrid& grid, ReportFormat format,
                 const Metadata& metadata = {});
std::string emit(const SpaceComparison& comparison, ReportFormat format,
                 const Metadata& metadata = {});
std::string emit(const ReversalAnalysis& analysis, ReportFormat format,
                 const Metadata& metadata = {});
std::string emit(const DegeneracySummary& summary, ReportFormat format,
                 const Metadata& metadata = {});

/// One evaluation run's bundle: the heatmap plus the sections a run can
/// attach. `with_degeneracy` distinguishes "section not requested" (key
/// absent) from "requested but nothing attempted" (JSON null).
struct EvalReport {
  HeatmapGrid heatmap;
  bool with_degeneracy = false;
  std::optional<DegeneracySummary> degeneracy;
  std::optional<ReversalAnalysis> reversal;  // section present when set
};

std::string emit(const EvalReport& report, ReportFormat format,
                 const Metadata& metadata = {});

/// Inverse of emit(..., Json). Round trip is exact: emitting a parsed report
/// reproduces the input bytes (metadata included).
struct ParsedHeatmap {
  HeatmapGrid grid;
  Metadata metadata;
};
ParsedHeatmap parse_heatmap_json(const std::string& text);

struct ParsedSpaceComparison {
  SpaceComparison comparison;
  Metadata metadata;
};
ParsedSpaceComparison parse_space_comparison_json(const std::string& text);

struct ParsedReversal {
  ReversalAnalysis analysis;
  Metadata metadata;
};
ParsedReversal parse_reversal_json(const std::string& text);

/// Fixed-point rendering used by the CSV and markdown emitters: 4 decimals,
/// ties on the 5th decimal round to an even 4th digit.
std::string format_fixed4(double value);

}  // namespace analogy
