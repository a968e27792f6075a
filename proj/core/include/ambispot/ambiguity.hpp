#ifndef AMBISPOT_AMBIGUITY_HPP
#define AMBISPOT_AMBIGUITY_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ambispot/model.hpp"

namespace ambispot::ambiguity {

struct AmbiguityConfig {
  double spacing_ratio_thr = 2.0;
  double alignment_ratio_thr = 0.1;
  double scale_band_low = 0.9;
  double scale_band_high = 10.0 / 9.0;
};

struct ImageAmbiguityFlags {
  std::string image_id;
  std::vector<std::size_t> lines_large_spacing;
  std::vector<std::pair<std::size_t, std::size_t>> juxtaposed_pairs;
  bool is_ambiguous = false;
};

// Large spacing: (sum of nearest-neighbor center distances) / (sum of
// character scales) strictly above spacing_ratio_thr. Lines with fewer than
// two characters never qualify.
bool has_large_spacing(const std::vector<geom::AxisAlignedBox>& line_chars,
                       const AmbiguityConfig& cfg = {});

// Juxtaposed pair: the two lines are edge-aligned and their characters have
// similar mean scales. Alignment measures the smallest top/bottom/left/right
// external-rectangle coordinate difference in units of the reference line's
// mean character scale; the rule is evaluated with either line as the
// reference. Lines without characters never qualify.
bool are_juxtaposed(const geom::ConvexPolygon& line_i,
                    const std::vector<geom::AxisAlignedBox>& chars_i,
                    const geom::ConvexPolygon& line_j,
                    const std::vector<geom::AxisAlignedBox>& chars_j,
                    const AmbiguityConfig& cfg = {});

// Runs both rules over the ground truth of one image; ignored lines are
// excluded. Indices refer to positions in record.gt_lines.
ImageAmbiguityFlags classify_image(const model::ImageRecord& record,
                                   const AmbiguityConfig& cfg = {});

struct DatasetStats {
  std::size_t large_spacing_lines = 0;
  std::size_t juxtaposed_lines = 0;  // lines in at least one flagged pair
  std::size_t union_lines = 0;       // de-duplicated union of the two
  std::size_t total_lines = 0;       // non-ignored
  std::size_t ambiguous_images = 0;
  std::size_t total_images = 0;

  double large_spacing_pct() const;
  double juxtaposed_pct() const;
  double union_pct() const;
};

DatasetStats dataset_stats(const std::vector<model::ImageRecord>& dataset,
                           const AmbiguityConfig& cfg = {});

// Uniform sample of n ambiguous image ids, without replacement, from a
// seeded generator; output sorted. Throws insufficient-ambiguous when fewer
// than n images qualify.
std::vector<std::string> curate(const std::vector<model::ImageRecord>& dataset,
                                std::size_t n, std::uint64_t seed,
                                const AmbiguityConfig& cfg = {});

}  // namespace ambispot::ambiguity

#endif
