#ifndef AMBISPOT_SYNTH_HPP
#define AMBISPOT_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ambispot/model.hpp"

namespace ambispot::synth {

enum class SceneKind { grid, spaced_line, plain_line };

// One synthetic scene: characters on a rows x cols lattice with ground
// truth (row lines) and a simulated detector output (jittered characters,
// noisy labels and scores, and over-complete line candidates).
//
// grid        rows x cols; candidates are all rows, and with
//             ambiguous_candidates also all columns and the full-grid box
//             (duplicates of an already-emitted rectangle are skipped).
//             Row and column candidates draw visual scores from the same
//             distribution, so vision alone cannot tell them apart.
// spaced_line 1 x cols with the horizontal gap widened until the
//             large-spacing ratio exceeds 2; candidates are the whole word
//             plus one candidate per character.
// plain_line  1 x cols, dense; the only candidate is the word line.
struct SceneConfig {
  SceneKind kind = SceneKind::grid;
  int rows = 2;
  int cols = 3;
  double char_size = 32.0;
  double h_gap = 4.0;
  double v_gap = 4.0;
  double jitter_sigma = 0.0;       // character center jitter (pixels)
  double label_noise_rate = 0.0;   // per-character label flip probability
  double score_noise_sigma = 0.0;  // gaussian noise on detector scores
  bool ambiguous_candidates = true;
  std::uint64_t seed = 0;
};

struct Scene {
  model::ImageRecord record;
  model::DetectionBundle bundle;
};

// Synthetic transcript corpus: a fixed-vocabulary Markov walk where every
// symbol allows only `branching` successors, so shuffling a line breaks its
// local structure. Deterministic in the seed.
std::vector<std::u32string> make_corpus(std::size_t n_lines,
                                        std::uint64_t seed,
                                        std::size_t vocab_size = 40,
                                        std::size_t branching = 3,
                                        std::size_t min_len = 3,
                                        std::size_t max_len = 12);

Scene gen_scene(const SceneConfig& cfg,
                const std::vector<std::u32string>& corpus,
                const std::string& image_id = "scene_000000");

// Derived per-scene seeds: seed_i = mix64(master_seed ^ i). Scene i gets
// image_id "scene_<i>" zero-padded to six digits. Scenes are generated in
// parallel over derived seeds; the result never depends on thread count.
std::vector<Scene> gen_dataset(std::size_t n_scenes, const SceneConfig& tmpl,
                               std::uint64_t master_seed,
                               const std::vector<std::u32string>& corpus,
                               unsigned threads = 1);

}  // namespace ambispot::synth

#endif
