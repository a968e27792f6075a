#include "ambispot/lm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ambispot/error.hpp"
#include "ambispot/rng.hpp"

namespace ambispot::lm {

namespace {

// BOS-padded, EOS-terminated event sequence for one transcript
std::u32string padded(const std::u32string& text, int order) {
  std::u32string seq;
  seq.reserve(text.size() + static_cast<std::size_t>(order));
  seq.append(static_cast<std::size_t>(order - 1), kBos);
  seq += text;
  seq.push_back(kEos);
  return seq;
}

std::u32string map_unknown(const NgramModel& m, std::u32string text) {
  for (char32_t& c : text) {
    if (!m.vocab.contains(c)) c = kUnk;
  }
  return text;
}

double event_logprob(const NgramModel& m, const std::u32string& ctx,
                     char32_t next) {
  const double k = m.smoothing_k;
  const double v = static_cast<double>(m.vocab_size());
  std::uint64_t count = 0;
  std::uint64_t total = 0;
  if (auto it = m.counts.find(ctx); it != m.counts.end()) {
    if (auto jt = it->second.find(next); jt != it->second.end()) {
      count = jt->second;
    }
    total = m.context_totals.at(ctx);
  }
  return std::log((static_cast<double>(count) + k) /
                  (static_cast<double>(total) + k * v));
}

double mean_cross_entropy(const std::vector<std::pair<double, bool>>& samples,
                          double a, double b) {
  constexpr double kEps = 1e-12;
  double acc = 0.0;
  for (const auto& [x, positive] : samples) {
    const double s =
        std::clamp(1.0 / (1.0 + std::exp(-a * (x - b))), kEps, 1.0 - kEps);
    acc += positive ? -std::log(s) : -std::log(1.0 - s);
  }
  return acc / static_cast<double>(samples.size());
}

}  // namespace

NgramModel fit(const std::vector<std::u32string>& corpus, int order,
               double smoothing_k, int max_len) {
  if (corpus.empty()) {
    throw Error(ErrorKind::empty_corpus, "fit: corpus is empty");
  }
  if (order < 1) {
    throw Error(ErrorKind::invalid_argument, "fit: order must be >= 1");
  }
  if (!(smoothing_k > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "fit: smoothing_k must be > 0");
  }
  if (max_len < 1) {
    throw Error(ErrorKind::invalid_argument, "fit: max_len must be >= 1");
  }
  NgramModel m;
  m.order = order;
  m.smoothing_k = smoothing_k;
  m.max_len = max_len;
  m.vocab = {kBos, kEos, kUnk};
  const std::size_t ctx_len = static_cast<std::size_t>(order - 1);
  for (const std::u32string& line : corpus) {
    for (char32_t c : line) m.vocab.insert(c);
    const std::u32string seq = padded(line, order);
    for (std::size_t i = ctx_len; i < seq.size(); ++i) {
      const std::u32string ctx = seq.substr(i - ctx_len, ctx_len);
      ++m.counts[ctx][seq[i]];
      ++m.context_totals[ctx];
    }
  }

  // Zero-shot calibration: b sits halfway between the mean average
  // log-probability of the corpus lines and of their shuffled copies, so
  // in-distribution text lands above 0.5 and scrambled text below.
  double sum_in = 0.0, sum_shuf = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto lp = avg_logprob(m, corpus[i]);
    if (!lp) continue;
    std::vector<char32_t> scalars(corpus[i].begin(), corpus[i].end());
    rng::Rng shuffler(rng::mix64(0x616D6269u ^ static_cast<std::uint64_t>(i)));
    shuffler.shuffle(scalars);
    const std::u32string shuffled(scalars.begin(), scalars.end());
    sum_in += *lp;
    sum_shuf += *avg_logprob(m, shuffled);
    ++used;
  }
  if (used > 0) {
    m.calibration.b =
        0.5 * (sum_in / static_cast<double>(used) +
               sum_shuf / static_cast<double>(used));
  } else {
    m.calibration.b = std::log(1.0 / static_cast<double>(m.vocab_size()));
  }
  return m;
}

std::optional<double> avg_logprob(const NgramModel& m,
                                  const std::u32string& transcript) {
  if (transcript.empty()) return std::nullopt;
  std::u32string text = map_unknown(
      m, transcript.substr(
             0, std::min(transcript.size(),
                         static_cast<std::size_t>(m.max_len))));
  const std::u32string seq = padded(text, m.order);
  const std::size_t ctx_len = static_cast<std::size_t>(m.order - 1);
  double acc = 0.0;
  std::size_t events = 0;
  for (std::size_t i = ctx_len; i < seq.size(); ++i) {
    acc += event_logprob(m, seq.substr(i - ctx_len, ctx_len), seq[i]);
    ++events;
  }
  return acc / static_cast<double>(events);
}

double score(const NgramModel& m, const std::u32string& transcript) {
  const auto lp = avg_logprob(m, transcript);
  if (!lp) return 0.0;
  return 1.0 / (1.0 + std::exp(-m.calibration.a * (*lp - m.calibration.b)));
}

std::vector<CandidateLabel> label_candidates(
    const std::vector<model::LineCandidate>& candidates,
    const std::vector<model::GroundTruthLine>& gts, double iou_pos) {
  if (!(iou_pos > 0.0) || iou_pos > 1.0) {
    throw Error(ErrorKind::invalid_argument,
                "label_candidates: iou_pos must be in (0, 1]");
  }
  std::vector<CandidateLabel> labels;
  labels.reserve(candidates.size());
  for (const model::LineCandidate& cand : candidates) {
    double best = 0.0;
    for (const model::GroundTruthLine& gt : gts) {
      if (gt.ignore) continue;
      best = std::max(best, geom::iou(cand.polygon, gt.polygon));
    }
    labels.push_back({cand.id, best > iou_pos});
  }
  return labels;
}

Calibration fit_calibration(
    const NgramModel& m,
    const std::vector<std::pair<std::u32string, bool>>& labeled) {
  std::vector<std::pair<double, bool>> samples;
  samples.reserve(labeled.size());
  bool has_pos = false, has_neg = false;
  for (const auto& [transcript, positive] : labeled) {
    const auto lp = avg_logprob(m, transcript);
    if (!lp) continue;  // empty transcripts score a fixed 0
    samples.emplace_back(*lp, positive);
    (positive ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) {
    throw Error(ErrorKind::single_class,
                "fit_calibration: need both positive and negative labels");
  }

  constexpr double kAMin = 0.1, kAMax = 20.0;
  double b_min = samples.front().first, b_max = b_min;
  for (const auto& [x, _] : samples) {
    b_min = std::min(b_min, x);
    b_max = std::max(b_max, x);
  }

  constexpr int kGrid = 33;
  double a_lo = kAMin, a_hi = kAMax, b_lo = b_min, b_hi = b_max;
  double best_a = a_lo, best_b = b_lo;
  double best_ce = std::numeric_limits<double>::infinity();
  for (int level = 0; level < 3; ++level) {
    const double a_step = (a_hi - a_lo) / (kGrid - 1);
    const double b_step = (b_hi - b_lo) / (kGrid - 1);
    for (int ia = 0; ia < kGrid; ++ia) {
      const double a = a_lo + a_step * ia;
      for (int ib = 0; ib < kGrid; ++ib) {
        const double b = b_lo + b_step * ib;
        const double ce = mean_cross_entropy(samples, a, b);
        if (ce < best_ce) {
          best_ce = ce;
          best_a = a;
          best_b = b;
        }
      }
    }
    // shrink to +-2 coarse steps around the incumbent, clamped to the
    // original bounds
    a_lo = std::max(kAMin, best_a - 2.0 * a_step);
    a_hi = std::min(kAMax, best_a + 2.0 * a_step);
    b_lo = std::max(b_min, best_b - 2.0 * b_step);
    b_hi = std::min(b_max, best_b + 2.0 * b_step);
  }
  return Calibration{best_a, best_b};
}

}  // namespace ambispot::lm
