#ifndef AMBISPOT_MA_HPP
#define AMBISPOT_MA_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "ambispot/geom.hpp"
#include "ambispot/model.hpp"

namespace ambispot::ma {

struct MatchConfig {
  double thr_match = 0.3;
};

// Indices of characters bound to the line: character i is kept iff
// intersection(char box, line) / area(char box) > thr_match (strict).
// Characters are never consumed; every candidate line matches against the
// full character list independently. Zero-area character boxes are skipped
// with a warning.
std::vector<std::size_t> match_chars(
    const geom::ConvexPolygon& line,
    const std::vector<model::CharDetection>& chars,
    const MatchConfig& cfg = {});

// Reading order from the line's external rectangle: wider than tall reads
// left to right (ascending center x), otherwise top to bottom (ascending
// center y); width == height takes the vertical branch. Ties keep input
// order.
std::u32string assemble(const geom::ConvexPolygon& line,
                        const std::vector<model::CharDetection>& matched);

std::u32string recognize_line(const geom::ConvexPolygon& line,
                              const std::vector<model::CharDetection>& chars,
                              const MatchConfig& cfg = {});

}  // namespace ambispot::ma

#endif
