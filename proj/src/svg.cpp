#include "sparseca/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>

#include "sparseca/errors.hpp"

namespace sparseca::svg {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 560.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 30.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 60.0;
constexpr double kFontSize = 11.0;
constexpr double kCharWidth = 6.2;

constexpr std::array<const char*, 10> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                               "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
                                               "#bcbd22", "#17becf"};

std::string fmt(double v) {
  if (std::abs(v) < 5e-5) v = 0.0;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string exact(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Box {
  double x0, y0, x1, y1;
  bool overlaps(const Box& o) const { return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1; }
};

class Canvas {
 public:
  Canvas(std::string title, double width = kWidth, double height = kHeight)
      : width_(width), height_(height) {
    os_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width_) << "\" height=\""
        << fmt(height_) << "\" viewBox=\"0 0 " << fmt(width_) << ' ' << fmt(height_)
        << "\" font-family=\"sans-serif\" font-size=\"" << fmt(kFontSize) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty()) {
      os_ << "<text class=\"title\" x=\"" << fmt(width_ / 2) << "\" y=\"22\" text-anchor=\"middle\" "
          << "font-size=\"14\">" << escape(title) << "</text>\n";
    }
  }

  double width() const { return width_; }
  double height() const { return height_; }
  std::ostringstream& out() { return os_; }

  Viewport viewport(double x_min, double x_max, double y_min, double y_max) const {
    Viewport vp;
    vp.left = kMarginLeft;
    vp.top = kMarginTop;
    vp.width = width_ - kMarginLeft - kMarginRight;
    vp.height = height_ - kMarginTop - kMarginBottom;
    vp.x_min = x_min;
    vp.x_max = x_max;
    vp.y_min = y_min;
    vp.y_max = y_max;
    return vp;
  }

  void open_plot(const Viewport& vp) {
    os_ << "<g class=\"plot-area\" data-left=\"" << exact(vp.left) << "\" data-top=\""
        << exact(vp.top) << "\" data-width=\"" << exact(vp.width) << "\" data-height=\""
        << exact(vp.height) << "\" data-x-min=\"" << exact(vp.x_min) << "\" data-x-max=\""
        << exact(vp.x_max) << "\" data-y-min=\"" << exact(vp.y_min) << "\" data-y-max=\""
        << exact(vp.y_max) << "\">\n"
        << "<rect class=\"frame\" x=\"" << fmt(vp.left) << "\" y=\"" << fmt(vp.top)
        << "\" width=\"" << fmt(vp.width) << "\" height=\"" << fmt(vp.height)
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
  }
  void close_plot() { os_ << "</g>\n"; }

  void line(double x0, double y0, double x1, double y1, const std::string& attrs) {
    os_ << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x1)
        << "\" y2=\"" << fmt(y1) << "\" " << attrs << "/>\n";
  }

  void text(double x, double y, std::string_view content, const std::string& attrs = "") {
    os_ << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << '"';
    if (!attrs.empty()) os_ << ' ' << attrs;
    os_ << '>' << escape(content) << "</text>\n";
  }

  void axis_titles(const std::string& x_title, const std::string& y_title, const Viewport& vp) {
    text(vp.left + vp.width / 2, height_ - 15, x_title, "class=\"axis-title x\" text-anchor=\"middle\"");
    const double cx = 18;
    const double cy = vp.top + vp.height / 2;
    os_ << "<text class=\"axis-title y\" x=\"" << fmt(cx) << "\" y=\"" << fmt(cy)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 " << fmt(cx) << ' ' << fmt(cy)
        << ")\">" << escape(y_title) << "</text>\n";
  }

  void ticks(const Viewport& vp, bool x_axis, bool y_axis) {
    auto nice_ticks = [](double lo, double hi) {
      std::vector<double> out;
      const double span = hi - lo;
      if (!(span > 0.0)) return out;
      const double raw = span / 6.0;
      const double mag = std::pow(10.0, std::floor(std::log10(raw)));
      double step = mag;
      for (const double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) {
          step = m * mag;
          break;
        }
      }
      for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step) {
        out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
      }
      return out;
    };
    const double bottom = vp.top + vp.height;
    if (x_axis) {
      for (const double t : nice_ticks(vp.x_min, vp.x_max)) {
        const double x = vp.px(t);
        line(x, bottom, x, bottom + 4, "class=\"tick\" stroke=\"#444\"");
        text(x, bottom + 16, short_num(t), "class=\"tick-label\" text-anchor=\"middle\"");
      }
    }
    if (y_axis) {
      for (const double t : nice_ticks(vp.y_min, vp.y_max)) {
        const double y = vp.py(t);
        line(vp.left - 4, y, vp.left, y, "class=\"tick\" stroke=\"#444\"");
        text(vp.left - 6, y + 4, short_num(t), "class=\"tick-label\" text-anchor=\"end\"");
      }
    }
  }

  std::string finish() {
    os_ << "</svg>\n";
    return os_.str();
  }

 private:
  double width_;
  double height_;
  std::ostringstream os_;
};

// Greedy label placement: the first candidate offset whose box stays inside
// the plot area and clears every label placed so far wins; if none does the
// first candidate is used.
class LabelPlacer {
 public:
  explicit LabelPlacer(const Viewport& vp) : vp_(vp) {}

  struct Placement {
    double x, y;
    const char* anchor;
  };

  Placement place(double px, double py, std::string_view label) {
    const double w = kCharWidth * static_cast<double>(label.size());
    const double h = kFontSize;
    struct Candidate {
      double dx, dy;
      bool left;
    };
    static constexpr std::array<Candidate, 8> kCandidates{{{5, -4, false},
                                                           {5, 12, false},
                                                           {-5, -4, true},
                                                           {-5, 12, true},
                                                           {5, -16, false},
                                                           {5, 24, false},
                                                           {-5, -16, true},
                                                           {-5, 24, true}}};
    std::optional<std::pair<Box, Placement>> chosen;
    for (const auto& c : kCandidates) {
      const double x = px + c.dx;
      const double baseline = py + c.dy;
      const Box box = c.left ? Box{x - w, baseline - h, x, baseline}
                             : Box{x, baseline - h, x + w, baseline};
      const Placement p{x, baseline, c.left ? "end" : "start"};
      const bool inside = box.x0 >= vp_.left && box.x1 <= vp_.left + vp_.width &&
                          box.y0 >= vp_.top && box.y1 <= vp_.top + vp_.height;
      const bool clear = std::none_of(placed_.begin(), placed_.end(),
                                      [&](const Box& b) { return b.overlaps(box); });
      if (!chosen) chosen.emplace(box, p);
      if (inside && clear) {
        chosen.emplace(box, p);
        break;
      }
    }
    placed_.push_back(chosen->first);
    return chosen->second;
  }

 private:
  Viewport vp_;
  std::vector<Box> placed_;
};

void check_dim(int dim, Eigen::Index available, const char* what) {
  if (dim < 1 || dim > available) {
    throw InputError(std::string(what) + ": dimension " + std::to_string(dim) +
                     " is outside 1.." + std::to_string(available));
  }
}

std::pair<double, double> padded(double lo, double hi, double fraction = 0.08) {
  if (!(hi > lo)) {
    const double half = std::max(std::abs(lo) * 0.1, 0.5);
    return {lo - half, hi + half};
  }
  const double pad = (hi - lo) * fraction;
  return {lo - pad, hi + pad};
}

double criterion_value(const tuning::GridCell& cell, tuning::Criterion criterion) {
  switch (criterion) {
    case tuning::Criterion::is:
      return cell.is;
    case tuning::Criterion::bic:
      return cell.bic;
    case tuning::Criterion::cv:
      return cell.cv ? *cell.cv : std::numeric_limits<double>::quiet_NaN();
  }
  return std::numeric_limits<double>::quiet_NaN();
}

const char* criterion_name(tuning::Criterion criterion) {
  switch (criterion) {
    case tuning::Criterion::is:
      return "IS";
    case tuning::Criterion::bic:
      return "BIC";
    case tuning::Criterion::cv:
      return "CV error";
  }
  return "";
}

std::string color_ramp(double t) {
  // Blue to yellow through teal.
  t = std::clamp(t, 0.0, 1.0);
  const std::array<std::array<double, 3>, 3> stops{{{68, 1, 84}, {33, 145, 140}, {253, 231, 37}}};
  const double s = t * 2.0;
  const int k = std::min(1, static_cast<int>(s));
  const double f = s - k;
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(stops[k][0] + f * (stops[k + 1][0] - stops[k][0]))),
                static_cast<int>(std::lround(stops[k][1] + f * (stops[k + 1][1] - stops[k][1]))),
                static_cast<int>(std::lround(stops[k][2] + f * (stops[k + 1][2] - stops[k][2]))));
  return buf;
}

}  // namespace

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const char ch : text) {
    switch (ch) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        out.push_back(ch);
    }
  }
  return out;
}

std::string render_symmetric_map(const io::ResultTables& tables, const PlotSpec& spec) {
  const Eigen::Index dims = tables.row_coords.cols();
  check_dim(spec.dim_x, dims, "symmetric map");
  check_dim(spec.dim_y, dims, "symmetric map");
  const int dx = spec.dim_x - 1;
  const int dy = spec.dim_y - 1;

  struct Item {
    std::string label;
    double x, y;
    bool row;
  };
  std::vector<Item> items;
  auto collect = [&](const std::vector<std::string>& labels, const Matrix& coords,
                     const Matrix& weights, bool row) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      if (spec.filter == LabelFilter::nonzero_only && weights.size() > 0 &&
          weights(r, dx) == 0.0 && weights(r, dy) == 0.0) {
        continue;
      }
      items.push_back({labels[i], coords(r, dx), coords(r, dy), row});
    }
  };
  collect(tables.row_labels, tables.row_coords, tables.row_weights, true);
  collect(tables.col_labels, tables.col_coords, tables.col_weights, false);

  double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
  for (const auto& it : items) {
    x_lo = std::min(x_lo, it.x);
    x_hi = std::max(x_hi, it.x);
    y_lo = std::min(y_lo, it.y);
    y_hi = std::max(y_hi, it.y);
  }
  std::tie(x_lo, x_hi) = padded(x_lo, x_hi, 0.12);
  std::tie(y_lo, y_hi) = padded(y_lo, y_hi, 0.12);

  Canvas canvas(spec.title);
  Viewport vp = canvas.viewport(x_lo, x_hi, y_lo, y_hi);
  // Same scale on both axes: widen whichever range is short.
  const double scale = std::min(vp.width / (x_hi - x_lo), vp.height / (y_hi - y_lo));
  const double x_extra = (vp.width / scale - (x_hi - x_lo)) / 2;
  const double y_extra = (vp.height / scale - (y_hi - y_lo)) / 2;
  vp.x_min -= x_extra;
  vp.x_max += x_extra;
  vp.y_min -= y_extra;
  vp.y_max += y_extra;

  canvas.open_plot(vp);
  canvas.line(vp.px(0), vp.top, vp.px(0), vp.top + vp.height,
              "class=\"origin\" stroke=\"#999\" stroke-dasharray=\"4 3\"");
  canvas.line(vp.left, vp.py(0), vp.left + vp.width, vp.py(0),
              "class=\"origin\" stroke=\"#999\" stroke-dasharray=\"4 3\"");
  canvas.ticks(vp, true, true);

  LabelPlacer placer(vp);
  auto& os = canvas.out();
  for (const auto& it : items) {
    const double px = vp.px(it.x);
    const double py = vp.py(it.y);
    const char* cls = it.row ? "point row" : "point col";
    const char* color = it.row ? kPalette[0] : kPalette[1];
    os << "<circle class=\"" << cls << "\" cx=\"" << fmt(px) << "\" cy=\"" << fmt(py)
       << "\" r=\"3\" fill=\"" << color << "\" data-label=\"" << escape(it.label) << "\"/>\n";
    const auto p = placer.place(px, py, it.label);
    canvas.text(p.x, p.y, it.label,
                std::string("class=\"label\" fill=\"") + color + "\" text-anchor=\"" + p.anchor + "\"");
  }
  canvas.close_plot();

  auto axis_title = [&](int d) {
    std::string t = "Dimension " + std::to_string(d + 1);
    if (d < tables.eigenvalues.size()) {
      char buf[96];
      std::snprintf(buf, sizeof buf, " (λ = %.4f, %.2f%%)", tables.eigenvalues(d),
                    tables.percent(d));
      t += buf;
    }
    return t;
  };
  canvas.axis_titles(axis_title(dx), axis_title(dy), vp);
  return canvas.finish();
}

std::string render_scree(const io::ResultTables& tables, const PlotSpec& spec) {
  const Eigen::Index n = tables.eigenvalues.size();
  if (n == 0) throw InputError("scree: no eigenvalues");
  const double top = std::max(tables.eigenvalues.maxCoeff(), 1e-300) * 1.08;
  Canvas canvas(spec.title);
  const Viewport vp = canvas.viewport(0.5, static_cast<double>(n) + 0.5, 0.0, top);
  canvas.open_plot(vp);
  canvas.ticks(vp, false, true);
  auto& os = canvas.out();
  const double bar = 0.7 * vp.width / static_cast<double>(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double value = std::max(tables.eigenvalues(k), 0.0);
    const double cx = vp.px(static_cast<double>(k + 1));
    const double y = vp.py(value);
    os << "<rect class=\"bar\" x=\"" << fmt(cx - bar / 2) << "\" y=\"" << fmt(y) << "\" width=\""
       << fmt(bar) << "\" height=\"" << fmt(vp.py(0) - y) << "\" fill=\"" << kPalette[0]
       << "\" data-dimension=\"" << (k + 1) << "\"/>\n";
    if (n <= 40 || k % ((n + 39) / 40) == 0) {
      canvas.text(cx, vp.top + vp.height + 16, std::to_string(k + 1),
                  "class=\"tick-label\" text-anchor=\"middle\"");
    }
  }
  canvas.close_plot();
  canvas.axis_titles("Dimension", "Eigenvalue", vp);
  return canvas.finish();
}

std::string render_weight_path(const tuning::WeightPath& path,
                               const std::vector<std::string>& labels, const PlotSpec& spec) {
  if (path.params.empty()) throw InputError("weight path: empty grid");
  const auto& series = spec.side == Side::rows ? path.u : path.v;
  if (series.front().size() != static_cast<Eigen::Index>(labels.size())) {
    throw InputError("weight path: label count does not match the weights");
  }
  double lo = path.params.front(), hi = path.params.front();
  for (const double p : path.params) {
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  double w_lo = 0.0, w_hi = 0.0;
  for (const auto& w : series) {
    w_lo = std::min(w_lo, w.minCoeff());
    w_hi = std::max(w_hi, w.maxCoeff());
  }
  const auto [x_lo, x_hi] = padded(lo, hi, 0.04);
  const auto [y_lo, y_hi] = padded(w_lo, w_hi, 0.06);

  Canvas canvas(spec.title);
  const Viewport vp = canvas.viewport(x_lo, x_hi, y_lo, y_hi);
  canvas.open_plot(vp);
  canvas.ticks(vp, true, true);
  canvas.line(vp.left, vp.py(0), vp.left + vp.width, vp.py(0), "class=\"zero\" stroke=\"#bbb\"");
  auto& os = canvas.out();
  LabelPlacer placer(vp);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const bool ever_nonzero =
        std::any_of(series.begin(), series.end(), [&](const Vector& w) { return w(r) != 0.0; });
    if (spec.filter == LabelFilter::nonzero_only && !ever_nonzero) continue;
    const char* color = kPalette[i % kPalette.size()];
    os << "<g class=\"path\" data-label=\"" << escape(labels[i]) << "\">\n";
    if (path.params.size() > 1) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
      for (std::size_t g = 0; g < path.params.size(); ++g) {
        if (g) os << ' ';
        os << fmt(vp.px(path.params[g])) << ',' << fmt(vp.py(series[g](r)));
      }
      os << "\"/>\n";
    }
    for (std::size_t g = 0; g < path.params.size(); ++g) {
      os << "<circle class=\"path-point\" cx=\"" << fmt(vp.px(path.params[g])) << "\" cy=\""
         << fmt(vp.py(series[g](r))) << "\" r=\"2\" fill=\"" << color << "\"/>\n";
    }
    os << "</g>\n";
    if (ever_nonzero) {
      const double px = vp.px(path.params.back());
      const double py = vp.py(series.back()(r));
      const auto p = placer.place(px, py, labels[i]);
      canvas.text(p.x, p.y, labels[i],
                  std::string("class=\"label\" fill=\"") + color + "\" text-anchor=\"" + p.anchor + "\"");
    }
  }
  canvas.close_plot();
  canvas.axis_titles("L1 bound", spec.side == Side::rows ? "Row weight" : "Column weight", vp);
  return canvas.finish();
}

std::string render_criterion_curve(const tuning::TuningResult& result, const PlotSpec& spec) {
  if (!result.grid.axis2.empty()) throw InputError("criterion curve: needs a 1-D grid");
  const auto& cells = result.grid.cells;
  if (cells.empty()) throw InputError("criterion curve: empty grid");
  double x_lo = cells.front().param_u, x_hi = x_lo;
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -y_lo;
  for (const auto& c : cells) {
    x_lo = std::min(x_lo, c.param_u);
    x_hi = std::max(x_hi, c.param_u);
    const double v = criterion_value(c, result.criterion);
    if (std::isfinite(v)) {
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  if (!std::isfinite(y_lo)) y_lo = y_hi = 0.0;
  std::tie(x_lo, x_hi) = padded(x_lo, x_hi, 0.04);
  std::tie(y_lo, y_hi) = padded(y_lo, y_hi, 0.06);

  Canvas canvas(spec.title);
  const Viewport vp = canvas.viewport(x_lo, x_hi, y_lo, y_hi);
  canvas.open_plot(vp);
  canvas.ticks(vp, true, true);
  auto& os = canvas.out();
  os << "<polyline class=\"curve\" fill=\"none\" stroke=\"" << kPalette[0] << "\" points=\"";
  bool first = true;
  for (const auto& c : cells) {
    const double v = criterion_value(c, result.criterion);
    if (!std::isfinite(v)) continue;
    if (!first) os << ' ';
    first = false;
    os << fmt(vp.px(c.param_u)) << ',' << fmt(vp.py(v));
  }
  os << "\"/>\n";
  for (const auto& c : cells) {
    const double v = criterion_value(c, result.criterion);
    if (!std::isfinite(v)) continue;
    os << "<circle class=\"grid-point\" cx=\"" << fmt(vp.px(c.param_u)) << "\" cy=\""
       << fmt(vp.py(v)) << "\" r=\"2\" fill=\"" << kPalette[0] << "\"/>\n";
  }
  const double ox = vp.px(result.optimum.param_u);
  canvas.line(ox, vp.top, ox, vp.top + vp.height,
              std::string("class=\"optimum\" stroke=\"") + kPalette[1] + "\" stroke-dasharray=\"5 3\"");
  canvas.text(ox + 4, vp.top + 14, "optimum " + short_num(result.optimum.param_u),
              std::string("class=\"label\" fill=\"") + kPalette[1] + "\"");
  canvas.close_plot();
  canvas.axis_titles("L1 bound", criterion_name(result.criterion), vp);
  return canvas.finish();
}

std::string render_contour(const tuning::TuningResult& result, const PlotSpec& spec) {
  const auto& ax = result.grid.axis1;
  const auto& ay = result.grid.axis2;
  if (ax.empty() || ay.empty()) throw InputError("contour: needs a 2-D grid");
  const std::size_t nx = ax.size();
  const std::size_t ny = ay.size();
  if (result.grid.cells.size() != nx * ny) throw InputError("contour: grid size mismatch");
  auto value = [&](std::size_t i, std::size_t j) {
    return criterion_value(result.grid.cells[i * ny + j], result.criterion);
  };
  double v_lo = std::numeric_limits<double>::infinity();
  double v_hi = -v_lo;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const double v = value(i, j);
      if (std::isfinite(v)) {
        v_lo = std::min(v_lo, v);
        v_hi = std::max(v_hi, v);
      }
    }
  }
  // Cell edges halfway between grid values.
  auto edges = [](const std::vector<double>& a) {
    std::vector<double> e(a.size() + 1);
    const double half = a.size() > 1 ? (a[1] - a[0]) / 2 : 0.5;
    e.front() = a.front() - half;
    for (std::size_t k = 1; k < a.size(); ++k) e[k] = (a[k - 1] + a[k]) / 2;
    e.back() = a.back() + (a.size() > 1 ? (a.back() - a[a.size() - 2]) / 2 : half);
    return e;
  };
  const auto ex = edges(ax);
  const auto ey = edges(ay);

  Canvas canvas(spec.title);
  const Viewport vp = canvas.viewport(ex.front(), ex.back(), ey.front(), ey.back());
  canvas.open_plot(vp);
  auto& os = canvas.out();
  const double span = v_hi > v_lo ? v_hi - v_lo : 1.0;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const double v = value(i, j);
      const double x0 = vp.px(ex[i]);
      const double x1 = vp.px(ex[i + 1]);
      const double y0 = vp.py(ey[j + 1]);
      const double y1 = vp.py(ey[j]);
      os << "<rect class=\"cell\" x=\"" << fmt(x0) << "\" y=\"" << fmt(y0) << "\" width=\""
         << fmt(x1 - x0) << "\" height=\"" << fmt(y1 - y0) << "\" fill=\""
         << (std::isfinite(v) ? color_ramp((v - v_lo) / span) : std::string("#dddddd"))
         << "\" data-value=\"" << exact(v) << "\"/>\n";
    }
  }

  // Marching squares between cell centers.
  if (nx > 1 && ny > 1 && v_hi > v_lo) {
    constexpr int kLevels = 8;
    os << "<g class=\"contours\" fill=\"none\" stroke=\"white\" stroke-width=\"0.8\">\n";
    for (int l = 1; l <= kLevels; ++l) {
      const double level = v_lo + span * l / (kLevels + 1);
      os << "<path data-level=\"" << exact(level) << "\" d=\"";
      for (std::size_t i = 0; i + 1 < nx; ++i) {
        for (std::size_t j = 0; j + 1 < ny; ++j) {
          const std::array<double, 4> v{value(i, j), value(i + 1, j), value(i + 1, j + 1),
                                        value(i, j + 1)};
          if (!std::all_of(v.begin(), v.end(), [](double t) { return std::isfinite(t); })) continue;
          const std::array<std::pair<double, double>, 4> p{
              {{ax[i], ay[j]}, {ax[i + 1], ay[j]}, {ax[i + 1], ay[j + 1]}, {ax[i], ay[j + 1]}}};
          std::vector<std::pair<double, double>> hits;
          for (int e = 0; e < 4; ++e) {
            const int f = (e + 1) % 4;
            const bool a_above = v[e] >= level;
            const bool b_above = v[f] >= level;
            if (a_above == b_above) continue;
            const double t = (level - v[e]) / (v[f] - v[e]);
            hits.emplace_back(p[e].first + t * (p[f].first - p[e].first),
                              p[e].second + t * (p[f].second - p[e].second));
          }
          for (std::size_t h = 0; h + 1 < hits.size(); h += 2) {
            os << 'M' << fmt(vp.px(hits[h].first)) << ',' << fmt(vp.py(hits[h].second)) << 'L'
               << fmt(vp.px(hits[h + 1].first)) << ',' << fmt(vp.py(hits[h + 1].second));
          }
        }
      }
      os << "\"/>\n";
    }
    os << "</g>\n";
  }

  os << "<circle class=\"optimum\" cx=\"" << fmt(vp.px(result.optimum.param_u)) << "\" cy=\""
     << fmt(vp.py(result.optimum.param_v)) << "\" r=\"5\" fill=\"none\" stroke=\"" << kPalette[1]
     << "\" stroke-width=\"2\"/>\n";
  canvas.ticks(vp, true, true);
  canvas.close_plot();
  canvas.axis_titles(std::string("Row L1 bound (") + criterion_name(result.criterion) + ")",
                     "Column L1 bound", vp);
  return canvas.finish();
}

std::string render_dendrogram(const analysis::Dendrogram& dendrogram, const PlotSpec& spec) {
  const int n = dendrogram.leaf_count();
  if (n < 1) throw InputError("dendrogram: no leaves");
  if (spec.cut_clusters < 0 || spec.cut_clusters > n) {
    throw InputError("dendrogram: cut outside 1..leaf count");
  }
  const std::vector<int> order = dendrogram.leaf_order();
  std::vector<double> node_x(static_cast<std::size_t>(2 * n), 0.0);
  std::vector<double> node_h(static_cast<std::size_t>(2 * n), 0.0);
  for (std::size_t p = 0; p < order.size(); ++p) node_x[static_cast<std::size_t>(order[p])] = static_cast<double>(p);
  double h_max = 0.0;
  for (std::size_t m = 0; m < dendrogram.merges.size(); ++m) {
    const auto& merge = dendrogram.merges[m];
    const auto id = static_cast<std::size_t>(n) + m;
    node_x[id] = (node_x[static_cast<std::size_t>(merge.left)] + node_x[static_cast<std::size_t>(merge.right)]) / 2;
    node_h[id] = merge.height;
    h_max = std::max(h_max, merge.height);
  }
  const double bottom_margin = 8.0 + kCharWidth * static_cast<double>(std::max_element(
      dendrogram.labels.begin(), dendrogram.labels.end(),
      [](const auto& a, const auto& b) { return a.size() < b.size(); })->size());

  Canvas canvas(spec.title, std::max(kWidth, 14.0 * n + kMarginLeft + kMarginRight),
                kHeight + bottom_margin);
  Viewport vp = canvas.viewport(-0.5, n - 0.5, 0.0, h_max > 0 ? h_max * 1.05 : 1.0);
  vp.height -= bottom_margin;
  canvas.open_plot(vp);
  canvas.ticks(vp, false, true);
  auto& os = canvas.out();
  os << "<g class=\"links\" fill=\"none\" stroke=\"#333\">\n";
  for (std::size_t m = 0; m < dendrogram.merges.size(); ++m) {
    const auto& merge = dendrogram.merges[m];
    const double y = vp.py(merge.height);
    const auto l = static_cast<std::size_t>(merge.left);
    const auto r = static_cast<std::size_t>(merge.right);
    os << "<path data-height=\"" << exact(merge.height) << "\" d=\"M" << fmt(vp.px(node_x[l]))
       << ',' << fmt(vp.py(node_h[l])) << 'V' << fmt(y) << 'H' << fmt(vp.px(node_x[r])) << 'V'
       << fmt(vp.py(node_h[r])) << "\"/>\n";
  }
  os << "</g>\n";
  if (spec.cut_clusters > 1 && spec.cut_clusters <= n) {
    // The first undone merge sits above the cut, the last applied one below.
    const auto undone = static_cast<std::size_t>(n - spec.cut_clusters);
    const double above = dendrogram.merges[undone].height;
    const double below = undone > 0 ? dendrogram.merges[undone - 1].height : 0.0;
    const double cut = (below + above) / 2;
    canvas.line(vp.left, vp.py(cut), vp.left + vp.width, vp.py(cut),
                std::string("class=\"cut\" stroke=\"") + kPalette[1] + "\" stroke-dasharray=\"6 3\"");
  }
  const double base = vp.top + vp.height + 6;
  for (std::size_t p = 0; p < order.size(); ++p) {
    const double x = vp.px(static_cast<double>(p));
    os << "<text class=\"leaf\" x=\"" << fmt(x + 3) << "\" y=\"" << fmt(base)
       << "\" text-anchor=\"end\" transform=\"rotate(-90 " << fmt(x + 3) << ' ' << fmt(base)
       << ")\">" << escape(dendrogram.labels[static_cast<std::size_t>(order[p])]) << "</text>\n";
  }
  canvas.close_plot();
  canvas.axis_titles("", "Height", vp);
  return canvas.finish();
}

std::string render_cluster_map(const Matrix& coords, const std::vector<std::string>& labels,
                               const std::vector<int>& assignment,
                               const analysis::TypicalityTable* typicality, const PlotSpec& spec) {
  check_dim(spec.dim_x, coords.cols(), "cluster map");
  check_dim(spec.dim_y, coords.cols(), "cluster map");
  if (labels.size() != static_cast<std::size_t>(coords.rows()) || assignment.size() != labels.size()) {
    throw InputError("cluster map: label or assignment count mismatch");
  }
  const int dx = spec.dim_x - 1;
  const int dy = spec.dim_y - 1;
  const Vector xs = coords.col(dx);
  const Vector ys = coords.col(dy);
  auto [x_lo, x_hi] = padded(std::min(0.0, xs.minCoeff()), std::max(0.0, xs.maxCoeff()), 0.12);
  auto [y_lo, y_hi] = padded(std::min(0.0, ys.minCoeff()), std::max(0.0, ys.maxCoeff()), 0.12);

  Canvas canvas(spec.title);
  const Viewport vp = canvas.viewport(x_lo, x_hi, y_lo, y_hi);
  canvas.open_plot(vp);
  canvas.line(vp.px(0), vp.top, vp.px(0), vp.top + vp.height,
              "class=\"origin\" stroke=\"#999\" stroke-dasharray=\"4 3\"");
  canvas.line(vp.left, vp.py(0), vp.left + vp.width, vp.py(0),
              "class=\"origin\" stroke=\"#999\" stroke-dasharray=\"4 3\"");
  canvas.ticks(vp, true, true);
  auto& os = canvas.out();
  LabelPlacer placer(vp);
  const int k = assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end());
  std::vector<double> cx(static_cast<std::size_t>(k + 1), 0.0);
  std::vector<double> cy(static_cast<std::size_t>(k + 1), 0.0);
  std::vector<int> count(static_cast<std::size_t>(k + 1), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int cl = assignment[i];
    const char* color = kPalette[static_cast<std::size_t>(std::max(cl - 1, 0)) % kPalette.size()];
    const double px = vp.px(xs(static_cast<Eigen::Index>(i)));
    const double py = vp.py(ys(static_cast<Eigen::Index>(i)));
    os << "<circle class=\"point\" cx=\"" << fmt(px) << "\" cy=\"" << fmt(py) << "\" r=\"3\" fill=\""
       << color << "\" data-label=\"" << escape(labels[i]) << "\" data-cluster=\"" << cl << "\"/>\n";
    const auto p = placer.place(px, py, labels[i]);
    canvas.text(p.x, p.y, labels[i],
                std::string("class=\"label\" fill=\"") + color + "\" text-anchor=\"" + p.anchor + "\"");
    if (cl >= 1) {
      cx[static_cast<std::size_t>(cl)] += px;
      cy[static_cast<std::size_t>(cl)] += py;
      ++count[static_cast<std::size_t>(cl)];
    }
  }
  if (typicality != nullptr) {
    for (int cl = 1; cl <= k; ++cl) {
      const auto c = static_cast<std::size_t>(cl);
      if (count[c] == 0 || c - 1 >= typicality->clusters.size()) continue;
      std::string words;
      for (const auto& cat : typicality->clusters[c - 1].top) {
        if (!words.empty()) words += ", ";
        words += cat.label;
      }
      if (words.empty()) continue;
      const double px = cx[c] / count[c];
      const double py = cy[c] / count[c];
      const auto p = placer.place(px, py, words);
      canvas.text(p.x, p.y, words,
                  std::string("class=\"typical\" font-weight=\"bold\" fill=\"") +
                      kPalette[(c - 1) % kPalette.size()] + "\" text-anchor=\"" + p.anchor +
                      "\" data-cluster=\"" + std::to_string(cl) + "\"");
    }
  }
  canvas.close_plot();
  canvas.axis_titles("Dimension " + std::to_string(spec.dim_x),
                     "Dimension " + std::to_string(spec.dim_y), vp);
  return canvas.finish();
}

void write_svg(const std::string& svg, const PlotSpec& spec) {
  if (spec.output.empty()) throw InputError("write_svg: no output path");
  io::write_file(spec.output, svg);
}

}  // namespace sparseca::svg
