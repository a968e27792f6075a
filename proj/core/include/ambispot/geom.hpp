#ifndef AMBISPOT_GEOM_HPP
#define AMBISPOT_GEOM_HPP

#include <cstddef>
#include <vector>

namespace ambispot::geom {

// Length tolerance: coordinates within kTol compare equal, clipping drops
// edges shorter than kTol. Areas below kTol^2 count as degenerate.
inline constexpr double kTol = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }

inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

struct AxisAlignedBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  // throws Error(invalid_geometry) on non-finite or flipped extents
  static AxisAlignedBox make(double x_min, double y_min, double x_max,
                             double y_max);

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
};

// Counter-clockwise convex polygon. Construction normalizes orientation
// (clockwise input is reversed), then rejects: fewer than 3 vertices,
// non-finite coordinates, repeated consecutive vertices, reflex corners
// and zero-area slivers. Near-collinear corners are tolerated.
class ConvexPolygon {
 public:
  static ConvexPolygon make(std::vector<Point> vertices);
  static ConvexPolygon from_box(const AxisAlignedBox& box);

  const std::vector<Point>& vertices() const { return verts_; }
  std::size_t size() const { return verts_.size(); }

 private:
  explicit ConvexPolygon(std::vector<Point> vertices)
      : verts_(std::move(vertices)) {}
  std::vector<Point> verts_;
};

// shoelace area; positive for the stored CCW orientation
double area(const ConvexPolygon& p);

// area of a∩b via half-plane clipping; 0 when disjoint
double intersection_area(const ConvexPolygon& a, const ConvexPolygon& b);

// inter / union, in [0, 1]; 0 when the union has no area
double iou(const ConvexPolygon& a, const ConvexPolygon& b);

// midpoint of the axis-aligned extents (not the area centroid)
Point center(const ConvexPolygon& p);
Point center(const AxisAlignedBox& box);

// square root of the area
double scale(const ConvexPolygon& p);
double scale(const AxisAlignedBox& box);

// tight axis-aligned bounding rectangle
AxisAlignedBox external_rect(const ConvexPolygon& p);

// Greedy NMS: visit items by descending score (equal scores: lower index
// first), keep an item iff its IoU with every kept item is <= iou_threshold.
// Returned indices refer to the input order and are sorted ascending.
std::vector<std::size_t> nms(const std::vector<ConvexPolygon>& polygons,
                             const std::vector<double>& scores,
                             double iou_threshold);

}  // namespace ambispot::geom

#endif
