#include "ambispot/geom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ambispot/error.hpp"

namespace ambispot::geom {

namespace {

bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

double shoelace_twice(const std::vector<Point>& v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    acc += a.x * b.y - b.x * a.y;
  }
  return acc;
}

double length(Point p) { return std::hypot(p.x, p.y); }

// Clip a CCW polygon against the left half-plane of edge e0->e1.
// Intersection points on axis-aligned clip edges are snapped onto the edge
// coordinate so rectangle/rectangle clips stay exact.
std::vector<Point> clip_halfplane(const std::vector<Point>& poly, Point e0,
                                  Point e1) {
  std::vector<Point> out;
  out.reserve(poly.size() + 1);
  const Point dir = e1 - e0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point cur = poly[i];
    const Point prev = poly[(i + n - 1) % n];
    const double dc = cross(dir, cur - e0);
    const double dp = cross(dir, prev - e0);
    const bool cur_in = dc >= 0.0;
    const bool prev_in = dp >= 0.0;
    if (cur_in != prev_in) {
      const double t = dp / (dp - dc);
      Point ip = prev + (cur - prev) * t;
      if (e0.x == e1.x) ip.x = e0.x;
      if (e0.y == e1.y) ip.y = e0.y;
      out.push_back(ip);
    }
    if (cur_in) out.push_back(cur);
  }
  return out;
}

// drop consecutive points closer than kTol (closed ring)
void dedupe_ring(std::vector<Point>& ring) {
  std::vector<Point> kept;
  kept.reserve(ring.size());
  for (const Point& p : ring) {
    if (kept.empty() || length(p - kept.back()) > kTol) kept.push_back(p);
  }
  while (kept.size() > 1 && length(kept.front() - kept.back()) <= kTol) {
    kept.pop_back();
  }
  ring = std::move(kept);
}

}  // namespace

AxisAlignedBox AxisAlignedBox::make(double x_min, double y_min, double x_max,
                                    double y_max) {
  if (!std::isfinite(x_min) || !std::isfinite(y_min) || !std::isfinite(x_max) ||
      !std::isfinite(y_max)) {
    throw Error(ErrorKind::invalid_geometry, "box has non-finite coordinates");
  }
  if (x_min > x_max || y_min > y_max) {
    throw Error(ErrorKind::invalid_geometry, "box extents are flipped");
  }
  return AxisAlignedBox{x_min, y_min, x_max, y_max};
}

ConvexPolygon ConvexPolygon::make(std::vector<Point> vertices) {
  if (vertices.size() < 3) {
    throw Error(ErrorKind::invalid_geometry,
                "polygon needs at least 3 vertices");
  }
  for (const Point& p : vertices) {
    if (!finite(p)) {
      throw Error(ErrorKind::invalid_geometry,
                  "polygon has non-finite coordinates");
    }
  }
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Point& a = vertices[i];
    const Point& b = vertices[(i + 1) % vertices.size()];
    if (length(b - a) <= kTol) {
      throw Error(ErrorKind::invalid_geometry,
                  "polygon has repeated consecutive vertices");
    }
  }
  const double a2 = shoelace_twice(vertices);
  if (std::abs(a2) <= 2.0 * kTol * kTol) {
    throw Error(ErrorKind::degenerate_geometry, "polygon area is zero");
  }
  if (a2 < 0.0) std::reverse(vertices.begin(), vertices.end());
  // reject reflex corners; the tolerance is on the sine of the corner angle
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point e1 = vertices[(i + 1) % n] - vertices[i];
    const Point e2 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    const double cr = cross(e1, e2);
    if (cr < -kTol * length(e1) * length(e2)) {
      throw Error(ErrorKind::invalid_geometry, "polygon is not convex");
    }
  }
  return ConvexPolygon(std::move(vertices));
}

ConvexPolygon ConvexPolygon::from_box(const AxisAlignedBox& box) {
  if (box.width() <= kTol || box.height() <= kTol) {
    throw Error(ErrorKind::degenerate_geometry, "box has zero area");
  }
  return ConvexPolygon({{box.x_min, box.y_min},
                        {box.x_max, box.y_min},
                        {box.x_max, box.y_max},
                        {box.x_min, box.y_max}});
}

double area(const ConvexPolygon& p) {
  const double a = 0.5 * shoelace_twice(p.vertices());
  if (a <= 0.0) {
    throw Error(ErrorKind::degenerate_geometry, "polygon area is zero");
  }
  return a;
}

double intersection_area(const ConvexPolygon& a, const ConvexPolygon& b) {
  const AxisAlignedBox ra = external_rect(a);
  const AxisAlignedBox rb = external_rect(b);
  if (ra.x_max < rb.x_min || rb.x_max < ra.x_min || ra.y_max < rb.y_min ||
      rb.y_max < ra.y_min) {
    return 0.0;
  }
  std::vector<Point> clipped = a.vertices();
  const std::vector<Point>& cut = b.vertices();
  for (std::size_t i = 0; i < cut.size() && !clipped.empty(); ++i) {
    clipped = clip_halfplane(clipped, cut[i], cut[(i + 1) % cut.size()]);
  }
  dedupe_ring(clipped);
  if (clipped.size() < 3) return 0.0;
  const double inter = 0.5 * shoelace_twice(clipped);
  // clipping of CCW by CCW stays CCW; clamp rounding residue to the valid range
  return std::clamp(inter, 0.0, std::min(area(a), area(b)));
}

double iou(const ConvexPolygon& a, const ConvexPolygon& b) {
  const double inter = intersection_area(a, b);
  const double uni = area(a) + area(b) - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

Point center(const ConvexPolygon& p) { return center(external_rect(p)); }

Point center(const AxisAlignedBox& box) {
  return {0.5 * (box.x_min + box.x_max), 0.5 * (box.y_min + box.y_max)};
}

double scale(const ConvexPolygon& p) { return std::sqrt(area(p)); }

double scale(const AxisAlignedBox& box) { return std::sqrt(box.area()); }

AxisAlignedBox external_rect(const ConvexPolygon& p) {
  const std::vector<Point>& v = p.vertices();
  double x_min = v[0].x, x_max = v[0].x, y_min = v[0].y, y_max = v[0].y;
  for (const Point& q : v) {
    x_min = std::min(x_min, q.x);
    x_max = std::max(x_max, q.x);
    y_min = std::min(y_min, q.y);
    y_max = std::max(y_max, q.y);
  }
  return AxisAlignedBox{x_min, y_min, x_max, y_max};
}

std::vector<std::size_t> nms(const std::vector<ConvexPolygon>& polygons,
                             const std::vector<double>& scores,
                             double iou_threshold) {
  if (polygons.size() != scores.size()) {
    throw Error(ErrorKind::invalid_argument,
                "nms: polygons and scores differ in length");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) {
      throw Error(ErrorKind::invalid_score, "nms: non-finite score");
    }
  }
  std::vector<std::size_t> order(polygons.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });
  std::vector<std::size_t> kept;
  for (std::size_t idx : order) {
    bool keep = true;
    for (std::size_t k : kept) {
      if (iou(polygons[idx], polygons[k]) > iou_threshold) {
        keep = false;
        break;
      }
    }
    if (keep) kept.push_back(idx);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace ambispot::geom
