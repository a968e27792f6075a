#include "ambispot/model.hpp"

#include <cmath>
#include <unordered_set>

#include "ambispot/error.hpp"
#include "ambispot/log.hpp"

namespace ambispot::model {

double clamp_unit_score(double score, const std::string& what) {
  if (!std::isfinite(score)) {
    throw Error(ErrorKind::invalid_score, what + ": score is not finite");
  }
  if (score < 0.0) {
    if (score >= -kScoreTol) return 0.0;
    throw Error(ErrorKind::invalid_score,
                what + ": score " + std::to_string(score) + " below 0");
  }
  if (score > 1.0) {
    if (score <= 1.0 + kScoreTol) return 1.0;
    throw Error(ErrorKind::invalid_score,
                what + ": score " + std::to_string(score) + " above 1");
  }
  return score;
}

DetectionBundle validate_bundle(DetectionBundle bundle) {
  for (std::size_t i = 0; i < bundle.chars.size(); ++i) {
    CharDetection& c = bundle.chars[i];
    c.box = geom::AxisAlignedBox::make(c.box.x_min, c.box.y_min, c.box.x_max,
                                       c.box.y_max);
    c.score = clamp_unit_score(
        c.score, bundle.image_id + ".chars[" + std::to_string(i) + "]");
  }
  std::unordered_set<std::int64_t> seen;
  for (std::size_t i = 0; i < bundle.lines.size(); ++i) {
    LineCandidate& line = bundle.lines[i];
    if (!seen.insert(line.id).second) {
      throw Error(ErrorKind::duplicate_id,
                  bundle.image_id + ": duplicate line id " +
                      std::to_string(line.id));
    }
    line.visual_score = clamp_unit_score(
        line.visual_score,
        bundle.image_id + ".lines[" + std::to_string(i) + "]");
  }
  return bundle;
}

namespace {

bool box_in_canvas(const geom::AxisAlignedBox& b, double w, double h) {
  return b.x_min >= 0.0 && b.y_min >= 0.0 && b.x_max <= w && b.y_max <= h;
}

}  // namespace

void validate_record(const ImageRecord& record) {
  if (!(record.width > 0.0) || !(record.height > 0.0) ||
      !std::isfinite(record.width) || !std::isfinite(record.height)) {
    throw Error(ErrorKind::invalid_geometry,
                record.image_id + ": image size must be positive");
  }
  for (std::size_t i = 0; i < record.gt_lines.size(); ++i) {
    const GroundTruthLine& line = record.gt_lines[i];
    if (line.transcript.empty() && !line.ignore) {
      throw Error(ErrorKind::invalid_argument,
                  record.image_id + ".lines[" + std::to_string(i) +
                      "]: empty transcript on a non-ignored line");
    }
    if (!box_in_canvas(geom::external_rect(line.polygon), record.width,
                       record.height)) {
      log_warning(record.image_id + ".lines[" + std::to_string(i) +
                  "]: polygon outside the image canvas");
    }
  }
  for (std::size_t i = 0; i < record.gt_chars.size(); ++i) {
    const GroundTruthChar& c = record.gt_chars[i];
    if (c.line_index >= record.gt_lines.size()) {
      throw Error(ErrorKind::invalid_argument,
                  record.image_id + ".chars[" + std::to_string(i) +
                      "]: line_index out of range");
    }
    if (!box_in_canvas(c.box, record.width, record.height)) {
      log_warning(record.image_id + ".chars[" + std::to_string(i) +
                  "]: box outside the image canvas");
    }
  }
}

}  // namespace ambispot::model
