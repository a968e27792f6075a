#ifndef AMBISPOT_MODEL_HPP
#define AMBISPOT_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ambispot/geom.hpp"

namespace ambispot::model {

// one recognized character: rectangular box, top-1 label, confidence
struct CharDetection {
  geom::AxisAlignedBox box;
  char32_t label = U'?';
  double score = 0.0;
};

// candidate text line before re-scoring
struct LineCandidate {
  std::int64_t id = 0;
  geom::ConvexPolygon polygon;
  double visual_score = 0.0;
};

// final spotting result; final_score = lambda*visual + (1-lambda)*linguistic
// for the lambda in effect
struct SpottedLine {
  geom::ConvexPolygon polygon;
  std::u32string transcript;
  double visual_score = 0.0;
  double linguistic_score = 0.0;
  double final_score = 0.0;
};

struct GroundTruthLine {
  geom::ConvexPolygon polygon;
  std::u32string transcript;
  bool ignore = false;
};

struct GroundTruthChar {
  geom::AxisAlignedBox box;
  char32_t label = U'?';
  std::size_t line_index = 0;
};

struct ImageRecord {
  std::string image_id;
  double width = 0.0;
  double height = 0.0;
  std::vector<GroundTruthLine> gt_lines;
  std::vector<GroundTruthChar> gt_chars;
};

// serialized detector output for one image
struct DetectionBundle {
  std::string image_id;
  std::vector<CharDetection> chars;
  std::vector<LineCandidate> lines;
};

// Scores just outside [0,1] by at most kScoreTol are measurement noise and
// get clamped; anything further out is an input error.
inline constexpr double kScoreTol = 1e-9;

double clamp_unit_score(double score, const std::string& what);

// Enforces all bundle invariants: valid boxes, scores in [0,1] (clamped
// within kScoreTol), unique line ids. Geometry validity of polygons is
// guaranteed by construction; boxes are re-checked here.
DetectionBundle validate_bundle(DetectionBundle bundle);

// Hard-checks transcripts and parent indices; geometry outside the
// [0,width]x[0,height] canvas only warns.
void validate_record(const ImageRecord& record);

}  // namespace ambispot::model

#endif
