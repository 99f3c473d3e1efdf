#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sparseca/analysis.hpp"
#include "sparseca/io.hpp"
#include "sparseca/tuning.hpp"

namespace sparseca::svg {

enum class PlotKind {
  symmetric_map,
  weight_path,
  criterion_curve,
  contour,
  scree,
  dendrogram,
  cluster_map,
};

enum class LabelFilter { all, nonzero_only };
enum class Side { rows, cols };

struct PlotSpec {
  PlotKind kind = PlotKind::symmetric_map;
  int dim_x = 1;  ///< 1-based
  int dim_y = 2;
  LabelFilter filter = LabelFilter::all;
  Side side = Side::cols;   ///< weight paths
  int cut_clusters = 0;     ///< dendrogram: draw the cut for this many clusters
  std::string title;
  std::filesystem::path output;
};

/// Linear map from data space to the SVG plot area (y grows upward in data
/// space). Every renderer writes it as data-* attributes on the element with
/// class "plot-area", so points can be mapped back to data coordinates.
struct Viewport {
  double left = 0.0;
  double top = 0.0;
  double width = 1.0;
  double height = 1.0;
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;

  double px(double x) const { return left + (x - x_min) / (x_max - x_min) * width; }
  double py(double y) const { return top + (y_max - y) / (y_max - y_min) * height; }
  double data_x(double px_value) const { return x_min + (px_value - left) / width * (x_max - x_min); }
  double data_y(double py_value) const { return y_max - (py_value - top) / height * (y_max - y_min); }
};

/// Row and column principal coordinates on two axes, with eigenvalue and
/// percentage in the axis titles. Weights only drive the nonzero_only filter.
std::string render_symmetric_map(const io::ResultTables& tables, const PlotSpec& spec);

/// Bar chart of every eigenvalue in the tables.
std::string render_scree(const io::ResultTables& tables, const PlotSpec& spec);

/// One line per category (side chosen by spec.side) across the grid.
std::string render_weight_path(const tuning::WeightPath& path,
                               const std::vector<std::string>& labels, const PlotSpec& spec);

/// Criterion value along a 1-D grid with the optimum marked.
std::string render_criterion_curve(const tuning::TuningResult& result, const PlotSpec& spec);

/// Heat map with iso-lines of the criterion over a 2-D grid.
std::string render_contour(const tuning::TuningResult& result, const PlotSpec& spec);

std::string render_dendrogram(const analysis::Dendrogram& dendrogram, const PlotSpec& spec);

/// Points colored by cluster; each cluster is annotated with its most
/// typical categories when `typicality` is given.
std::string render_cluster_map(const Matrix& coords, const std::vector<std::string>& labels,
                               const std::vector<int>& assignment,
                               const analysis::TypicalityTable* typicality, const PlotSpec& spec);

/// Writes `svg` to spec.output.
void write_svg(const std::string& svg, const PlotSpec& spec);

/// Escapes text for XML content and attribute values.
std::string escape(std::string_view text);

}  // namespace sparseca::svg
