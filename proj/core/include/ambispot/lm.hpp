#ifndef AMBISPOT_LM_HPP
#define AMBISPOT_LM_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ambispot/model.hpp"

namespace ambispot::lm {

// Marker symbols live in the private use area; real corpora are not
// expected to contain them, and occurrences are treated as the markers.
inline constexpr char32_t kBos = 0xE000;
inline constexpr char32_t kEos = 0xE001;
inline constexpr char32_t kUnk = 0xE002;

struct Calibration {
  double a = 4.0;
  double b = 0.0;
};

// Additive-smoothed character n-gram model with logistic calibration.
//
// Conditional probability of the next scalar given the n-1 preceding ones
// is (count + k) / (context_total + k*V), V the vocabulary size including
// the begin/end/unknown markers. A transcript's average log-probability is
// the mean over its scalars plus the end-of-string event, after truncation
// to max_len scalars. The linguistic score squashes that through
// 1 / (1 + exp(-a*(x - b))).
struct NgramModel {
  int order = 3;
  double smoothing_k = 0.1;
  int max_len = 16;
  Calibration calibration;
  std::set<char32_t> vocab;
  std::map<std::u32string, std::map<char32_t, std::uint64_t>> counts;
  std::map<std::u32string, std::uint64_t> context_totals;  // derived

  std::size_t vocab_size() const { return vocab.size(); }
};

// Counts every (n-1)-context transition over the corpus, each line padded
// with n-1 begin markers and one end marker. The default calibration is
// a = 4 with b at the midpoint between the corpus-mean and the
// shuffled-corpus-mean average log-probability (shuffles drawn from a fixed
// per-line seed, so fitting is deterministic). Throws on an empty corpus.
NgramModel fit(const std::vector<std::u32string>& corpus, int order = 3,
               double smoothing_k = 0.1, int max_len = 16);

// Mean log conditional probability over the truncated transcript including
// the end marker; nullopt for the empty transcript. Always < 0.
std::optional<double> avg_logprob(const NgramModel& m,
                                  const std::u32string& transcript);

// S_lin in [0,1]; the empty transcript scores 0.
double score(const NgramModel& m, const std::u32string& transcript);

struct CandidateLabel {
  std::int64_t candidate_id = 0;
  bool positive = false;
};

// A candidate is positive iff some non-ignored ground-truth line overlaps
// it with IoU strictly above iou_pos.
std::vector<CandidateLabel> label_candidates(
    const std::vector<model::LineCandidate>& candidates,
    const std::vector<model::GroundTruthLine>& gts, double iou_pos);

// Minimizes mean cross-entropy of score() against binary labels by a
// deterministic coarse-to-fine grid search: a in [0.1, 20], b spanning the
// observed average log-probabilities, two refinement passes around the
// incumbent. Requires both classes; empty transcripts are excluded (their
// score is pinned at 0).
Calibration fit_calibration(
    const NgramModel& m,
    const std::vector<std::pair<std::u32string, bool>>& labeled);

}  // namespace ambispot::lm

#endif
