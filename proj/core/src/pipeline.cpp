#include "ambispot/pipeline.hpp"

#include <algorithm>
#include <numeric>

#include "ambispot/error.hpp"

namespace ambispot::pipeline {

std::vector<model::LineCandidate> filter_candidates(
    const std::vector<model::LineCandidate>& lines,
    const PipelineConfig& cfg) {
  std::vector<model::LineCandidate> scored;
  for (const model::LineCandidate& line : lines) {
    if (line.visual_score >= cfg.thr_score) scored.push_back(line);
  }
  std::vector<geom::ConvexPolygon> polys;
  std::vector<double> scores;
  polys.reserve(scored.size());
  scores.reserve(scored.size());
  for (const model::LineCandidate& line : scored) {
    polys.push_back(line.polygon);
    scores.push_back(line.visual_score);
  }
  std::vector<model::LineCandidate> kept;
  for (std::size_t idx : geom::nms(polys, scores, cfg.thr_nms)) {
    kept.push_back(scored[idx]);
  }
  return kept;
}

double fuse_scores(double s_vis, double s_lin, double lambda) {
  return lambda * s_vis + (1.0 - lambda) * s_lin;
}

std::vector<model::SpottedLine> spot_image(const model::DetectionBundle& bundle,
                                           const lm::NgramModel* model,
                                           const PipelineConfig& cfg,
                                           const ma::MatchConfig& match) {
  if (cfg.use_lm && model == nullptr) {
    throw Error(ErrorKind::invalid_argument,
                "spot_image: use_lm requires a language model");
  }
  const double lambda = cfg.use_lm ? cfg.lambda : 1.0;

  const std::vector<model::LineCandidate> candidates =
      filter_candidates(bundle.lines, cfg);

  std::vector<model::SpottedLine> spotted;
  spotted.reserve(candidates.size());
  for (const model::LineCandidate& cand : candidates) {
    std::u32string transcript =
        ma::recognize_line(cand.polygon, bundle.chars, match);
    const double s_lin = cfg.use_lm ? lm::score(*model, transcript) : 0.0;
    spotted.push_back({cand.polygon, std::move(transcript), cand.visual_score,
                       s_lin, fuse_scores(cand.visual_score, s_lin, lambda)});
  }

  std::vector<geom::ConvexPolygon> polys;
  std::vector<double> fused;
  polys.reserve(spotted.size());
  fused.reserve(spotted.size());
  for (const model::SpottedLine& line : spotted) {
    polys.push_back(line.polygon);
    fused.push_back(line.final_score);
  }
  std::vector<model::SpottedLine> result;
  for (std::size_t idx : geom::nms(polys, fused, cfg.final_nms)) {
    if (spotted[idx].final_score >= cfg.final_score_thr) {
      result.push_back(std::move(spotted[idx]));
    }
  }
  std::stable_sort(result.begin(), result.end(),
                   [](const model::SpottedLine& a, const model::SpottedLine& b) {
                     return a.final_score > b.final_score;
                   });
  return result;
}

}  // namespace ambispot::pipeline
