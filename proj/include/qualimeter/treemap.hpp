#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qualimeter {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Grid of unit sample cells covering [0,width] x [0,height]. A sample's
// index is y * width + x and it sits at (x + 0.5, y + 0.5).
struct Raster {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint32_t> samples;  // samples inside the region, ascending

  static Raster rectangle(std::size_t width, std::size_t height);
  // Samples whose centre lies inside the polygon (even-odd rule).
  static Raster polygon(std::size_t width, std::size_t height, std::span<const Point> vertices);

  Point center(std::uint32_t sample) const {
    return {static_cast<double>(sample % width) + 0.5, static_cast<double>(sample / width) + 0.5};
  }
};

// A generator of the additively weighted tessellation: a sample q belongs to
// the site minimising |position - q| - radius.
struct SiteState {
  Point position;
  double radius = 0.0;
  double target = 1.0;  // share of the parent region, summing to 1 per sibling group
};

struct LayoutParams {
  std::size_t resolution = 256;  // samples per side
  std::size_t max_iterations = 100;
  double tolerance = 0.02;       // max relative area error at convergence
  std::uint64_t seed = 1;
};

struct ConvergenceReport {
  std::size_t iterations = 0;
  double max_relative_error = 0.0;
  bool converged = false;
};

struct SiblingLayout {
  std::vector<std::vector<std::uint32_t>> cells;  // per site, ascending sample indices
  std::vector<SiteState> sites;
  ConvergenceReport report;
};

// Seeded jittered-grid start positions inside `region`, radius set to that
// of a disc with the target area. Throws AnalysisError on non-positive
// weights or more sites than samples.
std::vector<SiteState> initial_sites(const Raster& raster, std::span<const std::uint32_t> region,
                                     std::span<const double> weights, std::uint64_t seed);

// Alternates assignment, centroid moves and radius rescaling
// (sqrt(target/current), clamped to [0.5, 2]) until every cell area is
// within the tolerance of its target or the iteration budget runs out.
SiblingLayout layout_siblings(const Raster& raster, std::span<const std::uint32_t> region,
                              std::vector<SiteState> sites, const LayoutParams& params);

struct TreemapNode {
  std::string name;
  std::optional<double> weight;  // internal nodes default to the sum of their children
  std::vector<TreemapNode> children;

  bool is_leaf() const { return children.empty(); }
};

// Fills omitted internal weights and checks positivity and that an explicit
// internal weight covers its children. Throws AnalysisError with the node path.
void resolve_weights(TreemapNode& root);

struct LaidOutCell {
  std::string path;  // names joined with '/'
  std::size_t depth = 0;
  double weight = 0.0;
  bool leaf = false;
  std::vector<std::uint32_t> samples;
  std::optional<ConvergenceReport> children_report;
};

struct HierarchyLayout {
  Raster raster;
  std::vector<LaidOutCell> cells;  // pre-order, root first
};

HierarchyLayout layout_hierarchy(TreemapNode root, const Raster& raster, const LayoutParams& params);

// Bounding-box aspect ratio (long side / short side) per cell; 1 for a
// single-sample cell, absent for an empty one.
std::vector<std::optional<double>> aspect_ratios(const Raster& raster,
                                                 const std::vector<std::vector<std::uint32_t>>& cells);

// Convex hull (counter-clockwise) of the corners of a cell's samples.
std::vector<Point> cell_outline(const Raster& raster, std::span<const std::uint32_t> samples);

}  // namespace qualimeter
