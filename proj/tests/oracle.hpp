// Independent reference implementations used to check the library. None of
// these share code paths with the implementation under test: intersection
// areas come from sampling, NMS from a selection loop over box arithmetic,
// edit distance from plain recursion, and line recognition from the sampled
// ratios plus the documented sort keys.
#ifndef AMBISPOT_TESTS_ORACLE_HPP
#define AMBISPOT_TESTS_ORACLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ambispot/geom.hpp"
#include "ambispot/model.hpp"
#include "ambispot/rng.hpp"

namespace oracle {

// half-plane membership test built directly on cross products
bool point_in_convex(const std::vector<ambispot::geom::Point>& ccw_vertices,
                     ambispot::geom::Point p);

// Monte-Carlo estimate of |a∩b| from uniform samples over `region`
double mc_intersection_area(const ambispot::geom::ConvexPolygon& a,
                            const ambispot::geom::ConvexPolygon& b,
                            const ambispot::geom::AxisAlignedBox& region,
                            std::size_t samples, std::uint64_t seed);

// Fraction of `box` covered by `poly`, from cell-center rasterization on a
// grid x grid lattice. Scanline interval counting, no polygon clipping.
double raster_cover_ratio(const ambispot::geom::AxisAlignedBox& box,
                          const ambispot::geom::ConvexPolygon& poly, int grid);

// O(n^2) greedy NMS reference on axis-aligned boxes: repeatedly select the
// highest-scored remaining box (ties: lowest index) and discard everything
// overlapping it above the threshold. Returns kept indices sorted ascending.
std::vector<std::size_t> nms_reference(
    const std::vector<ambispot::geom::AxisAlignedBox>& boxes,
    const std::vector<double>& scores, double iou_threshold);

double box_iou(const ambispot::geom::AxisAlignedBox& a,
               const ambispot::geom::AxisAlignedBox& b);

// exponential-time Levenshtein recursion, for short strings only
std::size_t edit_distance_recursive(const std::u32string& a,
                                    const std::u32string& b);

// Brute-force recognition: rasterized match ratios, then the documented
// ordering (wider-than-tall reads by center x, otherwise center y; ties keep
// input order).
std::u32string recognize_reference(
    const ambispot::geom::ConvexPolygon& line,
    const std::vector<ambispot::model::CharDetection>& chars,
    double thr_match, int grid);

// random strictly convex quadrilateral inside [lo,hi]^2
ambispot::geom::ConvexPolygon random_convex_quad(ambispot::rng::Rng& rng,
                                                 double lo, double hi);

}  // namespace oracle

#endif
