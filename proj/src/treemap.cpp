#include "qualimeter/treemap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "qualimeter/model.hpp"

namespace qualimeter {

namespace {

std::uint64_t fnv1a(const std::string& text, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ULL ^ seed;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool contains(std::span<const std::uint32_t> region, std::uint32_t sample) {
  return std::binary_search(region.begin(), region.end(), sample);
}

struct Assignment {
  std::vector<std::uint32_t> owner;  // per region position
  std::vector<std::size_t> area;
  std::vector<Point> centroid_sum;
};

void assign(const Raster& raster, std::span<const std::uint32_t> region, const std::vector<SiteState>& sites,
            Assignment& out) {
  const auto k = sites.size();
  out.owner.resize(region.size());
  out.area.assign(k, 0);
  out.centroid_sum.assign(k, Point{});
  for (std::size_t s = 0; s < region.size(); ++s) {
    const auto q = raster.center(region[s]);
    std::uint32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      const double dx = sites[i].position.x - q.x;
      const double dy = sites[i].position.y - q.y;
      const double d = std::sqrt(dx * dx + dy * dy) - sites[i].radius;
      if (d < best_d) {
        best_d = d;
        best = static_cast<std::uint32_t>(i);
      }
    }
    out.owner[s] = best;
    ++out.area[best];
    out.centroid_sum[best].x += q.x;
    out.centroid_sum[best].y += q.y;
  }
}

double max_relative_error(const std::vector<SiteState>& sites, const std::vector<std::size_t>& area, double total) {
  double worst = 0.0;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const double target = sites[i].target * total;
    worst = std::max(worst, std::fabs(static_cast<double>(area[i]) - target) / target);
  }
  return worst;
}

void layout_node(const TreemapNode& node, const std::string& path, std::size_t depth,
                 std::vector<std::uint32_t> samples, const Raster& raster, const LayoutParams& params,
                 std::vector<LaidOutCell>& out) {
  const std::size_t self = out.size();
  out.push_back({path, depth, node.weight.value_or(0.0), node.is_leaf(), std::move(samples), std::nullopt});
  if (node.is_leaf()) return;

  std::vector<double> weights;
  for (const auto& c : node.children) weights.push_back(*c.weight);
  SiblingLayout layout;
  try {
    const auto& region = out[self].samples;
    auto sites = initial_sites(raster, region, weights, fnv1a(path, params.seed));
    layout = layout_siblings(raster, region, std::move(sites), params);
  } catch (const AnalysisError& e) {
    throw AnalysisError("treemap node '" + path + "': " + e.what());
  }
  out[self].children_report = layout.report;
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    const auto& child = node.children[i];
    layout_node(child, path + "/" + child.name, depth + 1, std::move(layout.cells[i]), raster, params, out);
  }
}

void resolve_node(TreemapNode& node, const std::string& path) {
  if (node.is_leaf()) {
    if (!node.weight || !(*node.weight > 0.0) || !std::isfinite(*node.weight)) {
      throw AnalysisError("treemap node '" + path + "': leaf weight must be positive");
    }
    return;
  }
  double sum = 0.0;
  for (auto& c : node.children) {
    resolve_node(c, path + "/" + c.name);
    sum += *c.weight;
  }
  if (!node.weight) {
    node.weight = sum;
  } else if (!(*node.weight > 0.0) || *node.weight < sum * (1.0 - 1e-12)) {
    throw AnalysisError("treemap node '" + path + "': weight is below the sum of its children");
  }
}

}  // namespace

Raster Raster::rectangle(std::size_t width, std::size_t height) {
  Raster r{width, height, {}};
  r.samples.resize(width * height);
  for (std::size_t i = 0; i < r.samples.size(); ++i) r.samples[i] = static_cast<std::uint32_t>(i);
  return r;
}

Raster Raster::polygon(std::size_t width, std::size_t height, std::span<const Point> vertices) {
  Raster r{width, height, {}};
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const Point q{static_cast<double>(x) + 0.5, static_cast<double>(y) + 0.5};
      bool inside = false;
      for (std::size_t i = 0, j = vertices.size() - 1; i < vertices.size(); j = i++) {
        const auto& a = vertices[i];
        const auto& b = vertices[j];
        if ((a.y > q.y) != (b.y > q.y) && q.x < (b.x - a.x) * (q.y - a.y) / (b.y - a.y) + a.x) inside = !inside;
      }
      if (inside) r.samples.push_back(static_cast<std::uint32_t>(y * width + x));
    }
  }
  return r;
}

std::vector<SiteState> initial_sites(const Raster& raster, std::span<const std::uint32_t> region,
                                     std::span<const double> weights, std::uint64_t seed) {
  if (weights.empty()) throw AnalysisError("no sites to lay out");
  if (weights.size() > region.size()) throw AnalysisError("more sites than region samples");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw AnalysisError("site weights must be positive");
    total += w;
  }

  double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
  double max_x = -min_x, max_y = -min_x;
  for (auto s : region) {
    const auto c = raster.center(s);
    min_x = std::min(min_x, c.x - 0.5);
    min_y = std::min(min_y, c.y - 0.5);
    max_x = std::max(max_x, c.x + 0.5);
    max_y = std::max(max_y, c.y + 0.5);
  }

  const auto k = weights.size();
  const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(k))));
  const auto rows = (k + cols - 1) / cols;
  const double cw = (max_x - min_x) / static_cast<double>(cols);
  const double ch = (max_y - min_y) / static_cast<double>(rows);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  std::vector<SiteState> sites;
  std::vector<std::uint32_t> taken;
  const double area = static_cast<double>(region.size());
  for (std::size_t i = 0; i < k; ++i) {
    Point p{min_x + (static_cast<double>(i % cols) + 0.5 + jitter(rng)) * cw,
            min_y + (static_cast<double>(i / cols) + 0.5 + jitter(rng)) * ch};
    auto sx = static_cast<std::int64_t>(std::floor(p.x));
    auto sy = static_cast<std::int64_t>(std::floor(p.y));
    sx = std::clamp<std::int64_t>(sx, 0, static_cast<std::int64_t>(raster.width) - 1);
    sy = std::clamp<std::int64_t>(sy, 0, static_cast<std::int64_t>(raster.height) - 1);
    auto sample = static_cast<std::uint32_t>(sy * static_cast<std::int64_t>(raster.width) + sx);
    const bool clash = std::find(taken.begin(), taken.end(), sample) != taken.end();
    if (!contains(region, sample) || clash) {
      // Snap to the nearest free region sample.
      double best = std::numeric_limits<double>::infinity();
      for (auto s : region) {
        if (std::find(taken.begin(), taken.end(), s) != taken.end()) continue;
        const auto c = raster.center(s);
        const double d = (c.x - p.x) * (c.x - p.x) + (c.y - p.y) * (c.y - p.y);
        if (d < best) {
          best = d;
          sample = s;
        }
      }
      p = raster.center(sample);
    }
    taken.push_back(sample);
    const double target = weights[i] / total;
    sites.push_back({p, std::sqrt(target * area / std::numbers::pi), target});
  }
  return sites;
}

SiblingLayout layout_siblings(const Raster& raster, std::span<const std::uint32_t> region,
                              std::vector<SiteState> sites, const LayoutParams& params) {
  if (sites.empty()) throw AnalysisError("no sites to lay out");
  if (sites.size() > region.size()) throw AnalysisError("more sites than region samples");
  if (!(params.tolerance > 0.0)) throw AnalysisError("area tolerance must be positive");
  for (const auto& s : sites) {
    if (!(s.target > 0.0)) throw AnalysisError("site weights must be positive");
  }

  const double total = static_cast<double>(region.size());
  Assignment a;
  SiblingLayout out;
  for (std::size_t iter = 0;; ++iter) {
    assign(raster, region, sites, a);
    out.report.iterations = iter;
    out.report.max_relative_error = max_relative_error(sites, a.area, total);
    if (out.report.max_relative_error <= params.tolerance) {
      out.report.converged = true;
      break;
    }
    if (iter == params.max_iterations) break;

    for (std::size_t i = 0; i < sites.size(); ++i) {
      auto& s = sites[i];
      if (a.area[i] > 0) {
        const double n = static_cast<double>(a.area[i]);
        s.position = {a.centroid_sum[i].x / n, a.centroid_sum[i].y / n};
      }
      const double current = static_cast<double>(a.area[i]);
      const double factor = current > 0.0 ? std::sqrt(s.target * total / current) : 2.0;
      s.radius *= std::clamp(factor, 0.5, 2.0);
    }
  }

  out.cells.assign(sites.size(), {});
  for (std::size_t s = 0; s < region.size(); ++s) out.cells[a.owner[s]].push_back(region[s]);
  out.sites = std::move(sites);
  return out;
}

void resolve_weights(TreemapNode& root) { resolve_node(root, root.name); }

HierarchyLayout layout_hierarchy(TreemapNode root, const Raster& raster, const LayoutParams& params) {
  resolve_weights(root);
  HierarchyLayout out{raster, {}};
  layout_node(root, root.name, 0, raster.samples, raster, params, out.cells);
  return out;
}

std::vector<std::optional<double>> aspect_ratios(const Raster& raster,
                                                 const std::vector<std::vector<std::uint32_t>>& cells) {
  std::vector<std::optional<double>> out;
  for (const auto& cell : cells) {
    if (cell.empty()) {
      out.emplace_back();
      continue;
    }
    std::size_t min_x = raster.width, max_x = 0, min_y = raster.height, max_y = 0;
    for (auto s : cell) {
      const std::size_t x = s % raster.width, y = s / raster.width;
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
    }
    const double w = static_cast<double>(max_x - min_x + 1);
    const double h = static_cast<double>(max_y - min_y + 1);
    out.emplace_back(std::max(w, h) / std::min(w, h));
  }
  return out;
}

std::vector<Point> cell_outline(const Raster& raster, std::span<const std::uint32_t> samples) {
  if (samples.empty()) return {};
  // Row extremes are enough to recover the hull.
  std::vector<std::pair<std::size_t, std::size_t>> rows(raster.height, {raster.width, 0});
  std::vector<bool> used(raster.height, false);
  for (auto s : samples) {
    const std::size_t x = s % raster.width, y = s / raster.width;
    rows[y].first = std::min(rows[y].first, x);
    rows[y].second = std::max(rows[y].second, x);
    used[y] = true;
  }
  std::vector<Point> pts;
  for (std::size_t y = 0; y < raster.height; ++y) {
    if (!used[y]) continue;
    const double yy = static_cast<double>(y);
    const double x0 = static_cast<double>(rows[y].first), x1 = static_cast<double>(rows[y].second) + 1.0;
    pts.push_back({x0, yy});
    pts.push_back({x0, yy + 1.0});
    pts.push_back({x1, yy});
    pts.push_back({x1, yy + 1.0});
  }
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace qualimeter
