#ifndef AMBISPOT_PIPELINE_HPP
#define AMBISPOT_PIPELINE_HPP

#include <vector>

#include "ambispot/lm.hpp"
#include "ambispot/ma.hpp"
#include "ambispot/model.hpp"

namespace ambispot::pipeline {

struct PipelineConfig {
  double thr_score = 0.01;      // loose visual-score floor before NMS
  double thr_nms = 0.9;         // loose candidate NMS
  double lambda = 0.7;          // visual/linguistic balance
  double final_nms = 0.1;       // NMS over fused scores
  double final_score_thr = 0.6; // fused-score floor on the output
  bool use_lm = true;
};

// Drops candidates below thr_score, then greedy NMS at thr_nms. Relative
// input order of the survivors is preserved.
std::vector<model::LineCandidate> filter_candidates(
    const std::vector<model::LineCandidate>& lines, const PipelineConfig& cfg);

// S = lambda*s_vis + (1-lambda)*s_lin. With lambda == 1 the result is
// bit-identical to s_vis.
double fuse_scores(double s_vis, double s_lin, double lambda);

// Full per-image spotting: filter, recognize every surviving candidate,
// score linguistically (skipped when use_lm is false, which behaves exactly
// like lambda == 1), fuse, final NMS ranked by fused score, threshold,
// sort by fused score descending. model may be null when use_lm is false.
std::vector<model::SpottedLine> spot_image(const model::DetectionBundle& bundle,
                                           const lm::NgramModel* model,
                                           const PipelineConfig& cfg = {},
                                           const ma::MatchConfig& match = {});

}  // namespace ambispot::pipeline

#endif
