#include <gtest/gtest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <map>
#include <sstream>

#include "sparseca/analysis.hpp"
#include "sparseca/ca.hpp"
#include "sparseca/errors.hpp"
#include "sparseca/io.hpp"
#include "sparseca/sparse_factorizer.hpp"
#include "sparseca/svg.hpp"
#include "sparseca/tuning.hpp"
#include "support.hpp"

namespace sparseca {
namespace {

namespace pt = boost::property_tree;
using testing::Rng;

struct Element {
  std::string tag;
  std::map<std::string, std::string> attrs;
  std::string text;
};

void collect(const pt::ptree& node, const std::string& tag, std::vector<Element>& out) {
  Element e{tag, {}, node.data()};
  if (const auto attrs = node.get_child_optional("<xmlattr>")) {
    for (const auto& [name, value] : *attrs) e.attrs[name] = value.data();
  }
  out.push_back(e);
  for (const auto& [child_tag, child] : node) {
    if (child_tag != "<xmlattr>") collect(child, child_tag, out);
  }
}

// Parses the document (throwing on malformed XML) and flattens it.
std::vector<Element> parse(const std::string& svg) {
  std::istringstream in(svg);
  pt::ptree tree;
  pt::read_xml(in, tree);
  std::vector<Element> out;
  for (const auto& [tag, child] : tree) collect(child, tag, out);
  return out;
}

std::vector<Element> with_class(const std::vector<Element>& els, const std::string& cls) {
  std::vector<Element> out;
  for (const auto& e : els) {
    const auto it = e.attrs.find("class");
    if (it != e.attrs.end() && it->second == cls) out.push_back(e);
  }
  return out;
}

svg::Viewport viewport_of(const std::vector<Element>& els) {
  const auto area = with_class(els, "plot-area");
  EXPECT_EQ(area.size(), 1u);
  const auto& a = area.at(0).attrs;
  svg::Viewport vp;
  vp.left = std::stod(a.at("data-left"));
  vp.top = std::stod(a.at("data-top"));
  vp.width = std::stod(a.at("data-width"));
  vp.height = std::stod(a.at("data-height"));
  vp.x_min = std::stod(a.at("data-x-min"));
  vp.x_max = std::stod(a.at("data-x-max"));
  vp.y_min = std::stod(a.at("data-y-min"));
  vp.y_max = std::stod(a.at("data-y-max"));
  return vp;
}

struct Fixture {
  ContingencyTable table;
  io::ResultTables tables;
};

Fixture ca_fixture(std::uint64_t seed, int rows = 7, int cols = 6) {
  Rng rng(seed);
  auto table = testing::random_table(rng, rows, cols);
  auto tables = io::tables_from(table, ca::fit_ca(table, 3));
  return {std::move(table), std::move(tables)};
}

TEST(SymmetricMap, OnePointPerCategoryAndExactBackMapping) {
  const auto f = ca_fixture(81);
  const auto els = parse(svg::render_symmetric_map(f.tables, {}));
  const auto rows = with_class(els, "point row");
  const auto cols = with_class(els, "point col");
  ASSERT_EQ(rows.size(), 7u);
  ASSERT_EQ(cols.size(), 6u);
  const auto vp = viewport_of(els);
  // pixels carry 4 decimals
  const double tol_x = 1e-4 * (vp.x_max - vp.x_min) / vp.width * 1.01;
  const double tol_y = 1e-4 * (vp.y_max - vp.y_min) / vp.height * 1.01;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].attrs.at("data-label"), f.tables.row_labels[i]);
    const auto r = static_cast<Eigen::Index>(i);
    EXPECT_NEAR(vp.data_x(std::stod(rows[i].attrs.at("cx"))), f.tables.row_coords(r, 0), tol_x);
    EXPECT_NEAR(vp.data_y(std::stod(rows[i].attrs.at("cy"))), f.tables.row_coords(r, 1), tol_y);
  }
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const auto c = static_cast<Eigen::Index>(j);
    EXPECT_NEAR(vp.data_x(std::stod(cols[j].attrs.at("cx"))), f.tables.col_coords(c, 0), tol_x);
    EXPECT_NEAR(vp.data_y(std::stod(cols[j].attrs.at("cy"))), f.tables.col_coords(c, 1), tol_y);
  }
  // equal aspect: one data unit spans the same pixels on both axes
  EXPECT_NEAR(vp.width / (vp.x_max - vp.x_min), vp.height / (vp.y_max - vp.y_min), 1e-9);
}

TEST(SymmetricMap, AxisTitlesCarryEigenvalueAndShare) {
  const auto f = ca_fixture(82);
  svg::PlotSpec spec;
  spec.dim_x = 2;
  spec.dim_y = 3;
  const auto els = parse(svg::render_symmetric_map(f.tables, spec));
  const auto x_title = with_class(els, "axis-title x");
  ASSERT_EQ(x_title.size(), 1u);
  char expected[96];
  std::snprintf(expected, sizeof expected, "(\xCE\xBB = %.4f, %.2f%%)", f.tables.eigenvalues(1),
                f.tables.percent(1));
  EXPECT_NE(x_title[0].text.find("Dimension 2"), std::string::npos);
  EXPECT_NE(x_title[0].text.find(expected), std::string::npos) << x_title[0].text;
}

TEST(SymmetricMap, DimensionOutOfRangeThrows) {
  const auto f = ca_fixture(83);
  svg::PlotSpec spec;
  spec.dim_y = 4;
  EXPECT_THROW(svg::render_symmetric_map(f.tables, spec), InputError);
  spec.dim_y = 0;
  EXPECT_THROW(svg::render_symmetric_map(f.tables, spec), InputError);
}

TEST(SymmetricMap, NonzeroFilterHidesZeroWeightCategories) {
  Rng rng(84);
  const auto table = testing::random_table(rng, 9, 8);
  const auto model = sparse::fit_sparse_ca(table, {sparse::SparsityConstraint::coupled(0.45),
                                                   sparse::SparsityConstraint::coupled(0.45)},
                                           2, sparse::Variant::doubly_sparse);
  const auto tables = io::tables_from(table, model);
  svg::PlotSpec spec;
  spec.filter = svg::LabelFilter::nonzero_only;
  const auto els = parse(svg::render_symmetric_map(tables, spec));
  std::size_t live_rows = 0;
  std::size_t live_cols = 0;
  for (Eigen::Index i = 0; i < 9; ++i) live_rows += tables.row_weights.row(i).any() ? 1 : 0;
  for (Eigen::Index j = 0; j < 8; ++j) live_cols += tables.col_weights.row(j).any() ? 1 : 0;
  ASSERT_LT(live_rows + live_cols, 17u);
  EXPECT_EQ(with_class(els, "point row").size(), live_rows);
  EXPECT_EQ(with_class(els, "point col").size(), live_cols);
  const auto all = parse(svg::render_symmetric_map(tables, {}));
  EXPECT_EQ(with_class(all, "point row").size() + with_class(all, "point col").size(), 17u);
}

TEST(Renderers, OutputIsDeterministic) {
  const auto f = ca_fixture(85);
  EXPECT_EQ(svg::render_symmetric_map(f.tables, {}), svg::render_symmetric_map(f.tables, {}));
  EXPECT_EQ(svg::render_scree(f.tables, {}), svg::render_scree(f.tables, {}));
}

TEST(Renderers, EveryPlotKindIsWellFormed) {
  const auto f = ca_fixture(87, 10, 9);
  const auto corr = ca::correspondence_matrix(f.table);
  const Matrix z = ca::standardized_residuals(corr.p, corr.r, corr.c);
  tuning::SearchOptions opts;
  opts.threads = 2;
  const auto grid = tuning::default_coupled_grid(10, 9, 0.1);

  const auto scree = parse(svg::render_scree(f.tables, {}));
  EXPECT_EQ(with_class(scree, "bar").size(), static_cast<std::size_t>(f.tables.eigenvalues.size()));

  const auto path = tuning::weight_paths(z, grid, tuning::GridMode::coupled, opts);
  svg::PlotSpec path_spec;
  path_spec.kind = svg::PlotKind::weight_path;
  const auto paths = parse(svg::render_weight_path(path, f.table.col_labels(), path_spec));
  EXPECT_EQ(with_class(paths, "path").size(), 9u);
  EXPECT_EQ(with_class(paths, "path-point").size(), 9u * grid.size());

  const auto curve = tuning::grid_search_1d(z, grid, tuning::Criterion::is,
                                            tuning::GridMode::coupled, opts);
  const auto curve_els = parse(svg::render_criterion_curve(curve, {}));
  EXPECT_EQ(with_class(curve_els, "grid-point").size(), grid.size());
  EXPECT_EQ(with_class(curve_els, "optimum").size(), 1u);

  const std::vector<double> gu{1.0, 1.5, 2.0, 2.5, 3.0};
  const std::vector<double> gv{1.0, 1.5, 2.0, 2.5, 3.0};
  const auto surface = tuning::grid_search_2d(z, gu, gv, tuning::Criterion::is, opts);
  const auto contour = parse(svg::render_contour(surface, {}));
  EXPECT_EQ(with_class(contour, "cell").size(), 25u);
  EXPECT_EQ(with_class(contour, "optimum").size(), 1u);

  const auto tree = analysis::ward_cluster(f.tables.row_coords.leftCols(2), f.tables.row_labels);
  svg::PlotSpec tree_spec;
  tree_spec.cut_clusters = 3;
  const auto dendro = parse(svg::render_dendrogram(tree, tree_spec));
  EXPECT_EQ(with_class(dendro, "leaf").size(), 10u);
  EXPECT_EQ(with_class(dendro, "cut").size(), 1u);

  const auto assignment = analysis::cut_tree(tree, 3);
  const auto agg = analysis::aggregate_by_cluster(f.table.counts(), assignment, 3);
  const auto typ =
      analysis::typicality_zscores(agg, {"1", "2", "3"}, f.table.col_labels(), 2);
  const auto map = parse(svg::render_cluster_map(f.tables.row_coords.leftCols(2),
                                                 f.tables.row_labels, assignment, &typ, {}));
  const auto points = with_class(map, "point");
  ASSERT_EQ(points.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(std::stoi(points[i].attrs.at("data-cluster")), assignment[i]);
  }
}

TEST(WeightPath, SingletonGridDrawsOneColumn) {
  Rng rng(88);
  const Matrix z = testing::random_matrix(rng, 6, 5);
  const auto path = tuning::weight_paths(z, {0.6}, tuning::GridMode::coupled);
  const auto els = parse(svg::render_weight_path(path, testing::labels("c", 5), {}));
  const auto points = with_class(els, "path-point");
  std::size_t drawn = 0;
  for (const auto& g : with_class(els, "path")) drawn += g.tag == "g" ? 1 : 0;
  EXPECT_GE(drawn, 1u);
  ASSERT_FALSE(points.empty());
  for (const auto& p : points) EXPECT_EQ(p.attrs.at("cx"), points[0].attrs.at("cx"));
  for (const auto& e : els) EXPECT_NE(e.tag, "polyline");
}

TEST(Escaping, LabelsSurviveXml) {
  Rng rng(89);
  Matrix counts = testing::random_counts(rng, 3, 3);
  const ContingencyTable table(counts, {"a<b", "c&d", "\"q\""}, {"x'y", "z>w", "plain"});
  const auto tables = io::tables_from(table, ca::fit_ca(table, 2));
  const auto els = parse(svg::render_symmetric_map(tables, {}));
  const auto rows = with_class(els, "point row");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].attrs.at("data-label"), "a<b");
  EXPECT_EQ(rows[1].attrs.at("data-label"), "c&d");
  EXPECT_EQ(rows[2].attrs.at("data-label"), "\"q\"");
  EXPECT_EQ(svg::escape("<&>\"'"), "&lt;&amp;&gt;&quot;&apos;");
}

}  // namespace
}  // namespace sparseca
