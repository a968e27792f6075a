#ifndef AMBISPOT_METRICS_HPP
#define AMBISPOT_METRICS_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ambispot/model.hpp"

namespace ambispot::metrics {

// Levenshtein distance over Unicode scalar values (insert/delete/substitute,
// unit costs).
std::size_t edit_distance(const std::u32string& a, const std::u32string& b);

struct LineMatching {
  std::vector<std::pair<std::size_t, std::size_t>> matches;  // (det, gt)
  std::vector<std::size_t> false_positive_dets;
  std::vector<std::size_t> ignored_dets;
  std::vector<std::size_t> missed_gts;  // non-ignored, unmatched
};

// One-to-one greedy matching at the given IoU threshold. Detections are
// visited by descending final score (ties: lower index first); each takes
// the unmatched non-ignored ground truth with the highest IoU when that IoU
// is strictly above iou_thr. A detection that fails to match but overlaps an
// ignored ground truth above the threshold is excluded from evaluation
// entirely.
LineMatching match_lines(const std::vector<model::SpottedLine>& dets,
                         const std::vector<model::GroundTruthLine>& gts,
                         double iou_thr = 0.5);

struct DetectionScores {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

DetectionScores det_eval(const LineMatching& matching);

// 1 - (sum of per-item normalized edit distances) / (matched + FP + missed).
// A matched pair contributes ED/max(|det|,|gt|) (0 when both empty); every
// false positive and every missed ground truth contributes 1. Empty
// evaluations score 1.
double one_minus_ned(const LineMatching& matching,
                     const std::vector<model::SpottedLine>& dets,
                     const std::vector<model::GroundTruthLine>& gts);

// Additive per-image summary; micro-averaging sums tallies over images
// before taking any ratio.
struct EvalTally {
  std::size_t matched = 0;
  std::size_t false_positives = 0;
  std::size_t missed = 0;
  double ned_sum = 0.0;

  EvalTally& operator+=(const EvalTally& other);
};

EvalTally tally_image(const LineMatching& matching,
                      const std::vector<model::SpottedLine>& dets,
                      const std::vector<model::GroundTruthLine>& gts);

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  double one_minus_ned = 1.0;
  std::size_t matched = 0;
  std::size_t false_positives = 0;
  std::size_t missed = 0;
};

EvalReport report_from(const EvalTally& tally);

}  // namespace ambispot::metrics

#endif
