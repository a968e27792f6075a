#include "ambispot/ma.hpp"

#include <algorithm>
#include <numeric>

#include "ambispot/log.hpp"

namespace ambispot::ma {

std::vector<std::size_t> match_chars(
    const geom::ConvexPolygon& line,
    const std::vector<model::CharDetection>& chars, const MatchConfig& cfg) {
  std::vector<std::size_t> matched;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    const geom::AxisAlignedBox& box = chars[i].box;
    const double box_area = box.area();
    if (box.width() <= geom::kTol || box.height() <= geom::kTol) {
      log_warning("match_chars: skipping degenerate character box at index " +
                  std::to_string(i));
      continue;
    }
    const double inter =
        geom::intersection_area(geom::ConvexPolygon::from_box(box), line);
    if (inter / box_area > cfg.thr_match) matched.push_back(i);
  }
  return matched;
}

std::u32string assemble(const geom::ConvexPolygon& line,
                        const std::vector<model::CharDetection>& matched) {
  const geom::AxisAlignedBox rect = geom::external_rect(line);
  const bool horizontal = rect.width() > rect.height();
  std::vector<std::size_t> order(matched.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     const geom::Point ca = geom::center(matched[a].box);
                     const geom::Point cb = geom::center(matched[b].box);
                     return horizontal ? ca.x < cb.x : ca.y < cb.y;
                   });
  std::u32string transcript;
  transcript.reserve(order.size());
  for (std::size_t i : order) transcript.push_back(matched[i].label);
  return transcript;
}

std::u32string recognize_line(const geom::ConvexPolygon& line,
                              const std::vector<model::CharDetection>& chars,
                              const MatchConfig& cfg) {
  std::vector<model::CharDetection> matched;
  for (std::size_t i : match_chars(line, chars, cfg)) {
    matched.push_back(chars[i]);
  }
  return assemble(line, matched);
}

}  // namespace ambispot::ma
