#include "ambispot/metrics.hpp"

#include <algorithm>
#include <numeric>

namespace ambispot::metrics {

std::size_t edit_distance(const std::u32string& a, const std::u32string& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

LineMatching match_lines(const std::vector<model::SpottedLine>& dets,
                         const std::vector<model::GroundTruthLine>& gts,
                         double iou_thr) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return dets[a].final_score > dets[b].final_score;
                   });

  LineMatching result;
  std::vector<bool> gt_taken(gts.size(), false);
  for (std::size_t det_idx : order) {
    double best_iou = 0.0;
    std::size_t best_gt = gts.size();
    double best_ignored_iou = 0.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double overlap =
          geom::iou(dets[det_idx].polygon, gts[g].polygon);
      if (gts[g].ignore) {
        best_ignored_iou = std::max(best_ignored_iou, overlap);
      } else if (!gt_taken[g] && overlap > best_iou) {
        best_iou = overlap;
        best_gt = g;
      }
    }
    if (best_gt < gts.size() && best_iou > iou_thr) {
      gt_taken[best_gt] = true;
      result.matches.emplace_back(det_idx, best_gt);
    } else if (best_ignored_iou > iou_thr) {
      result.ignored_dets.push_back(det_idx);
    } else {
      result.false_positive_dets.push_back(det_idx);
    }
  }
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (!gts[g].ignore && !gt_taken[g]) result.missed_gts.push_back(g);
  }
  return result;
}

DetectionScores det_eval(const LineMatching& matching) {
  const double matched = static_cast<double>(matching.matches.size());
  const double fp = static_cast<double>(matching.false_positive_dets.size());
  const double missed = static_cast<double>(matching.missed_gts.size());
  DetectionScores s;
  s.precision = matched + fp > 0.0 ? matched / (matched + fp) : 0.0;
  s.recall = matched + missed > 0.0 ? matched / (matched + missed) : 0.0;
  s.f_measure = s.precision + s.recall > 0.0
                    ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
                    : 0.0;
  return s;
}

namespace {

double ned_of_pair(const std::u32string& a, const std::u32string& b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(edit_distance(a, b)) /
         static_cast<double>(longest);
}

}  // namespace

EvalTally& EvalTally::operator+=(const EvalTally& other) {
  matched += other.matched;
  false_positives += other.false_positives;
  missed += other.missed;
  ned_sum += other.ned_sum;
  return *this;
}

EvalTally tally_image(const LineMatching& matching,
                      const std::vector<model::SpottedLine>& dets,
                      const std::vector<model::GroundTruthLine>& gts) {
  EvalTally t;
  t.matched = matching.matches.size();
  t.false_positives = matching.false_positive_dets.size();
  t.missed = matching.missed_gts.size();
  for (const auto& [det_idx, gt_idx] : matching.matches) {
    t.ned_sum += ned_of_pair(dets[det_idx].transcript, gts[gt_idx].transcript);
  }
  t.ned_sum += static_cast<double>(t.false_positives + t.missed);
  return t;
}

double one_minus_ned(const LineMatching& matching,
                     const std::vector<model::SpottedLine>& dets,
                     const std::vector<model::GroundTruthLine>& gts) {
  return report_from(tally_image(matching, dets, gts)).one_minus_ned;
}

EvalReport report_from(const EvalTally& tally) {
  EvalReport r;
  r.matched = tally.matched;
  r.false_positives = tally.false_positives;
  r.missed = tally.missed;
  const double matched = static_cast<double>(tally.matched);
  const double fp = static_cast<double>(tally.false_positives);
  const double missed = static_cast<double>(tally.missed);
  r.precision = matched + fp > 0.0 ? matched / (matched + fp) : 0.0;
  r.recall = matched + missed > 0.0 ? matched / (matched + missed) : 0.0;
  r.f_measure = r.precision + r.recall > 0.0
                    ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
                    : 0.0;
  const double items = matched + fp + missed;
  r.one_minus_ned = items > 0.0 ? 1.0 - tally.ned_sum / items : 1.0;
  return r;
}

}  // namespace ambispot::metrics
