#include "moc/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <vector>

#include "moc/errors.hpp"

namespace moc {
namespace {

constexpr double kPanel = 420.0;
constexpr double kMargin = 30.0;
constexpr int kOutlineSamples = 240;
constexpr std::size_t kMaxPoints = 2000;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                               "#9467bd", "#8c564b", "#e377c2", "#17becf"};

struct Point {
  double x, y;
};

struct Box {
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = x0;
  double x1 = -x0;
  double y1 = -x0;

  void add(Point p) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
};

// Superellipse Σ ((x_i - c_i) / r_i)^(2 p_i) = 1 in the (i, j) coordinate plane.
std::vector<Point> outline(const ObstacleSpec& o, int i, int j) {
  const double ri = std::pow(o.axis_scales[i], 0.5 / o.exponents[i]);
  const double rj = std::pow(o.axis_scales[j], 0.5 / o.exponents[j]);
  std::vector<Point> pts;
  pts.reserve(kOutlineSamples);
  for (int k = 0; k < kOutlineSamples; ++k) {
    const double t = 2.0 * std::numbers::pi * k / kOutlineSamples;
    const double c = std::cos(t);
    const double s = std::sin(t);
    pts.push_back({o.center[i] + ri * std::copysign(std::pow(std::abs(c), 1.0 / o.exponents[i]), c),
                   o.center[j] + rj * std::copysign(std::pow(std::abs(s), 1.0 / o.exponents[j]), s)});
  }
  return pts;
}

std::vector<Point> path_of(const Trajectory& t, int i, int j) {
  std::vector<Point> pts;
  const std::size_t n = t.records.size();
  const std::size_t stride = std::max<std::size_t>(1, n / kMaxPoints);
  for (std::size_t k = 0; k < n; k += stride) pts.push_back({t.records[k].state[i], t.records[k].state[j]});
  if (n && (n - 1) % stride) pts.push_back({t.records.back().state[i], t.records.back().state[j]});
  return pts;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

class Panel {
 public:
  Panel(double ox, Box b) : ox_(ox) {
    const double w = std::max(b.x1 - b.x0, 1e-9);
    const double h = std::max(b.y1 - b.y0, 1e-9);
    scale_ = (kPanel - 2 * kMargin) / std::max(w, h);
    cx_ = 0.5 * (b.x0 + b.x1);
    cy_ = 0.5 * (b.y0 + b.y1);
  }

  Point map(Point p) const {
    return {ox_ + kPanel / 2 + (p.x - cx_) * scale_, kPanel / 2 - (p.y - cy_) * scale_};
  }

  std::string polyline(const std::vector<Point>& pts, bool closed) const {
    std::string d;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const Point q = map(pts[k]);
      d += (k ? " L" : "M") + fmt(q.x) + " " + fmt(q.y);
    }
    if (closed) d += " Z";
    return d;
  }

 private:
  double ox_;
  double scale_ = 1.0;
  double cx_ = 0.0;
  double cy_ = 0.0;
};

}  // namespace

std::string render_plot(std::span<const Trajectory> trajs, std::span<const ObstacleSpec> obstacles,
                        int dim, const std::optional<Vec>& goal, const std::string& title) {
  if (dim != 2 && dim != 3) throw Error(ErrorCode::Usage, "plot needs dim 2 or 3");
  std::vector<std::array<int, 2>> planes = {{0, 1}};
  if (dim == 3) planes = {{0, 1}, {0, 2}, {1, 2}};
  const double width = kPanel * planes.size();

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) +
                    "\" height=\"" + fmt(kPanel + 20) + "\" font-family=\"sans-serif\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) svg += "<title>" + title + "</title>\n";

  for (std::size_t pi = 0; pi < planes.size(); ++pi) {
    const auto [i, j] = planes[pi];
    std::vector<std::vector<Point>> shapes;
    std::vector<std::vector<Point>> paths;
    Box box;
    for (const auto& o : obstacles) shapes.push_back(outline(o, i, j));
    for (const auto& t : trajs) paths.push_back(path_of(t, i, j));
    for (const auto& s : shapes) std::for_each(s.begin(), s.end(), [&](Point p) { box.add(p); });
    for (const auto& s : paths) std::for_each(s.begin(), s.end(), [&](Point p) { box.add(p); });
    if (goal) box.add({(*goal)[i], (*goal)[j]});
    if (!std::isfinite(box.x0)) box = Box{-1, -1, 1, 1};

    const double ox = kPanel * pi;
    const Panel panel(ox, box);
    svg += "<g>\n<rect x=\"" + fmt(ox + 2) + "\" y=\"2\" width=\"" + fmt(kPanel - 4) +
           "\" height=\"" + fmt(kPanel - 4) + "\" fill=\"none\" stroke=\"#ccc\"/>\n";
    svg += "<text x=\"" + fmt(ox + 8) + "\" y=\"" + fmt(kPanel + 14) + "\" font-size=\"12\">xi" +
           std::to_string(i + 1) + " (right) / xi" + std::to_string(j + 1) + " (up)</text>\n";
    for (const auto& s : shapes) {
      svg += "<path d=\"" + panel.polyline(s, true) +
             "\" fill=\"#ddd\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    }
    for (std::size_t k = 0; k < paths.size(); ++k) {
      if (paths[k].empty()) continue;
      const char* color = kColors[k % std::size(kColors)];
      svg += "<path d=\"" + panel.polyline(paths[k], false) + "\" fill=\"none\" stroke=\"" +
             color + "\" stroke-width=\"1.5\"/>\n";
      const Point s = panel.map(paths[k].front());
      svg += "<circle cx=\"" + fmt(s.x) + "\" cy=\"" + fmt(s.y) + "\" r=\"3\" fill=\"" + color +
             "\"/>\n";
    }
    if (goal) {
      const Point g = panel.map({(*goal)[i], (*goal)[j]});
      svg += "<path d=\"M" + fmt(g.x - 5) + " " + fmt(g.y - 5) + " L" + fmt(g.x + 5) + " " +
             fmt(g.y + 5) + " M" + fmt(g.x - 5) + " " + fmt(g.y + 5) + " L" + fmt(g.x + 5) + " " +
             fmt(g.y - 5) + "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    }
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void emit_plot(std::span<const Trajectory> trajs, std::span<const ObstacleSpec> obstacles, int dim,
               const std::filesystem::path& path, const std::optional<Vec>& goal,
               const std::string& title) {
  const std::string svg = render_plot(trajs, obstacles, dim, goal, title);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << svg;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace moc
