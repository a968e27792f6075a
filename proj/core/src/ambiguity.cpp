#include "ambispot/ambiguity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "ambispot/error.hpp"
#include "ambispot/rng.hpp"

namespace ambispot::ambiguity {

namespace {

double center_distance(const geom::AxisAlignedBox& a,
                       const geom::AxisAlignedBox& b) {
  const geom::Point ca = geom::center(a);
  const geom::Point cb = geom::center(b);
  return std::hypot(ca.x - cb.x, ca.y - cb.y);
}

double scale_sum(const std::vector<geom::AxisAlignedBox>& chars) {
  double acc = 0.0;
  for (const geom::AxisAlignedBox& c : chars) acc += geom::scale(c);
  return acc;
}

// smallest absolute top/bottom/left/right difference of the external rects
double min_edge_difference(const geom::ConvexPolygon& a,
                           const geom::ConvexPolygon& b) {
  const geom::AxisAlignedBox ra = geom::external_rect(a);
  const geom::AxisAlignedBox rb = geom::external_rect(b);
  return std::min({std::abs(ra.y_min - rb.y_min), std::abs(ra.y_max - rb.y_max),
                   std::abs(ra.x_min - rb.x_min),
                   std::abs(ra.x_max - rb.x_max)});
}

// alignment rule with line i as the reference
bool aligned_with_reference(const geom::ConvexPolygon& line_i,
                            const std::vector<geom::AxisAlignedBox>& chars_i,
                            const geom::ConvexPolygon& line_j,
                            const AmbiguityConfig& cfg) {
  const double scales = scale_sum(chars_i);
  if (scales <= 0.0) return false;
  const double ratio = static_cast<double>(chars_i.size()) *
                       min_edge_difference(line_i, line_j) / scales;
  return ratio < cfg.alignment_ratio_thr;
}

}  // namespace

bool has_large_spacing(const std::vector<geom::AxisAlignedBox>& line_chars,
                       const AmbiguityConfig& cfg) {
  if (line_chars.size() < 2) return false;
  double nn_sum = 0.0;
  for (std::size_t j = 0; j < line_chars.size(); ++j) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < line_chars.size(); ++k) {
      if (k == j) continue;
      nearest = std::min(nearest, center_distance(line_chars[j], line_chars[k]));
    }
    nn_sum += nearest;
  }
  const double scales = scale_sum(line_chars);
  if (scales <= 0.0) return false;
  return nn_sum / scales > cfg.spacing_ratio_thr;
}

bool are_juxtaposed(const geom::ConvexPolygon& line_i,
                    const std::vector<geom::AxisAlignedBox>& chars_i,
                    const geom::ConvexPolygon& line_j,
                    const std::vector<geom::AxisAlignedBox>& chars_j,
                    const AmbiguityConfig& cfg) {
  if (chars_i.empty() || chars_j.empty()) return false;
  const double sum_i = scale_sum(chars_i);
  const double sum_j = scale_sum(chars_j);
  if (sum_i <= 0.0 || sum_j <= 0.0) return false;
  // ratio of mean character scales; the band is symmetric under swapping,
  // so one evaluation covers both orderings
  const double scale_ratio = (static_cast<double>(chars_j.size()) * sum_i) /
                             (static_cast<double>(chars_i.size()) * sum_j);
  if (scale_ratio < cfg.scale_band_low || scale_ratio > cfg.scale_band_high) {
    return false;
  }
  return aligned_with_reference(line_i, chars_i, line_j, cfg) ||
         aligned_with_reference(line_j, chars_j, line_i, cfg);
}

ImageAmbiguityFlags classify_image(const model::ImageRecord& record,
                                   const AmbiguityConfig& cfg) {
  ImageAmbiguityFlags flags;
  flags.image_id = record.image_id;

  std::vector<std::vector<geom::AxisAlignedBox>> chars_per_line(
      record.gt_lines.size());
  for (const model::GroundTruthChar& c : record.gt_chars) {
    chars_per_line[c.line_index].push_back(c.box);
  }

  for (std::size_t i = 0; i < record.gt_lines.size(); ++i) {
    if (record.gt_lines[i].ignore) continue;
    if (has_large_spacing(chars_per_line[i], cfg)) {
      flags.lines_large_spacing.push_back(i);
    }
  }
  for (std::size_t i = 0; i < record.gt_lines.size(); ++i) {
    if (record.gt_lines[i].ignore) continue;
    for (std::size_t j = i + 1; j < record.gt_lines.size(); ++j) {
      if (record.gt_lines[j].ignore) continue;
      if (are_juxtaposed(record.gt_lines[i].polygon, chars_per_line[i],
                         record.gt_lines[j].polygon, chars_per_line[j], cfg)) {
        flags.juxtaposed_pairs.emplace_back(i, j);
      }
    }
  }
  flags.is_ambiguous = !flags.lines_large_spacing.empty() ||
                       !flags.juxtaposed_pairs.empty();
  return flags;
}

double DatasetStats::large_spacing_pct() const {
  return total_lines == 0 ? 0.0
                          : 100.0 * static_cast<double>(large_spacing_lines) /
                                static_cast<double>(total_lines);
}

double DatasetStats::juxtaposed_pct() const {
  return total_lines == 0 ? 0.0
                          : 100.0 * static_cast<double>(juxtaposed_lines) /
                                static_cast<double>(total_lines);
}

double DatasetStats::union_pct() const {
  return total_lines == 0 ? 0.0
                          : 100.0 * static_cast<double>(union_lines) /
                                static_cast<double>(total_lines);
}

DatasetStats dataset_stats(const std::vector<model::ImageRecord>& dataset,
                           const AmbiguityConfig& cfg) {
  DatasetStats stats;
  stats.total_images = dataset.size();
  for (const model::ImageRecord& record : dataset) {
    const ImageAmbiguityFlags flags = classify_image(record, cfg);
    for (const model::GroundTruthLine& line : record.gt_lines) {
      if (!line.ignore) ++stats.total_lines;
    }
    std::set<std::size_t> spaced(flags.lines_large_spacing.begin(),
                                 flags.lines_large_spacing.end());
    std::set<std::size_t> juxtaposed;
    for (const auto& [i, j] : flags.juxtaposed_pairs) {
      juxtaposed.insert(i);
      juxtaposed.insert(j);
    }
    std::set<std::size_t> both = spaced;
    both.insert(juxtaposed.begin(), juxtaposed.end());
    stats.large_spacing_lines += spaced.size();
    stats.juxtaposed_lines += juxtaposed.size();
    stats.union_lines += both.size();
    if (flags.is_ambiguous) ++stats.ambiguous_images;
  }
  return stats;
}

std::vector<std::string> curate(const std::vector<model::ImageRecord>& dataset,
                                std::size_t n, std::uint64_t seed,
                                const AmbiguityConfig& cfg) {
  std::vector<std::string> ambiguous_ids;
  for (const model::ImageRecord& record : dataset) {
    if (classify_image(record, cfg).is_ambiguous) {
      ambiguous_ids.push_back(record.image_id);
    }
  }
  if (ambiguous_ids.size() < n) {
    throw Error(ErrorKind::insufficient_ambiguous,
                "curate: requested " + std::to_string(n) +
                    " images but only " + std::to_string(ambiguous_ids.size()) +
                    " are ambiguous");
  }
  std::sort(ambiguous_ids.begin(), ambiguous_ids.end());
  rng::Rng rng(seed);
  std::vector<std::string> sampled;
  sampled.reserve(n);
  for (std::size_t idx : rng.sample_without_replacement(ambiguous_ids.size(), n)) {
    sampled.push_back(ambiguous_ids[idx]);
  }
  std::sort(sampled.begin(), sampled.end());
  return sampled;
}

}  // namespace ambispot::ambiguity
