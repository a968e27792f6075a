#include "ambispot/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>

#include "ambispot/error.hpp"
#include "ambispot/parallel.hpp"
#include "ambispot/rng.hpp"

namespace ambispot::synth {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

geom::ConvexPolygon rect_polygon(double x0, double y0, double x1, double y1) {
  return geom::ConvexPolygon::from_box(
      geom::AxisAlignedBox::make(x0, y0, x1, y1));
}

void check_config(const SceneConfig& cfg) {
  if (cfg.rows < 1 || cfg.cols < 1) {
    throw Error(ErrorKind::invalid_argument, "scene: rows and cols must be >= 1");
  }
  if (!(cfg.char_size > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "scene: char_size must be > 0");
  }
  if (cfg.h_gap < 0.0 || cfg.v_gap < 0.0) {
    throw Error(ErrorKind::invalid_argument, "scene: gaps must be >= 0");
  }
  if (cfg.jitter_sigma < 0.0 || cfg.score_noise_sigma < 0.0) {
    throw Error(ErrorKind::invalid_argument, "scene: sigmas must be >= 0");
  }
  if (cfg.label_noise_rate < 0.0 || cfg.label_noise_rate > 1.0) {
    throw Error(ErrorKind::invalid_argument,
                "scene: label_noise_rate must be in [0, 1]");
  }
}

}  // namespace

std::vector<std::u32string> make_corpus(std::size_t n_lines,
                                        std::uint64_t seed,
                                        std::size_t vocab_size,
                                        std::size_t branching,
                                        std::size_t min_len,
                                        std::size_t max_len) {
  if (n_lines == 0) {
    throw Error(ErrorKind::invalid_argument, "make_corpus: n_lines must be >= 1");
  }
  if (vocab_size < 2 || branching == 0 || branching > vocab_size ||
      min_len == 0 || max_len < min_len) {
    throw Error(ErrorKind::invalid_argument, "make_corpus: bad parameters");
  }
  std::vector<char32_t> vocab(vocab_size);
  for (std::size_t i = 0; i < vocab_size; ++i) {
    vocab[i] = static_cast<char32_t>(0x4E00 + i);  // CJK block
  }
  // sparse successor sets define the "grammar" a shuffle will violate
  rng::Rng table_rng(rng::mix64(seed ^ 0x7461626Cull));
  std::vector<std::vector<char32_t>> successors(vocab_size);
  for (std::size_t v = 0; v < vocab_size; ++v) {
    for (std::size_t idx :
         table_rng.sample_without_replacement(vocab_size, branching)) {
      successors[v].push_back(vocab[idx]);
    }
  }
  rng::Rng walk_rng(rng::mix64(seed ^ 0x77616C6Bull));
  std::vector<std::u32string> corpus;
  corpus.reserve(n_lines);
  for (std::size_t i = 0; i < n_lines; ++i) {
    const std::size_t len =
        min_len + static_cast<std::size_t>(
                      walk_rng.uniform_index(max_len - min_len + 1));
    std::u32string line;
    line.reserve(len);
    std::size_t cur = static_cast<std::size_t>(
        walk_rng.uniform_index(vocab_size));
    line.push_back(vocab[cur]);
    for (std::size_t p = 1; p < len; ++p) {
      const char32_t next = successors[cur][static_cast<std::size_t>(
          walk_rng.uniform_index(branching))];
      line.push_back(next);
      cur = static_cast<std::size_t>(next - 0x4E00);
    }
    corpus.push_back(std::move(line));
  }
  return corpus;
}

Scene gen_scene(const SceneConfig& cfg,
                const std::vector<std::u32string>& corpus,
                const std::string& image_id) {
  check_config(cfg);
  if (corpus.empty()) {
    throw Error(ErrorKind::empty_corpus, "gen_scene: corpus is empty");
  }

  const bool single_row = cfg.kind != SceneKind::grid;
  const int rows = single_row ? 1 : cfg.rows;
  const int cols = cfg.cols;
  const double s = cfg.char_size;
  // spaced_line widens the gap until the nearest-neighbor spacing ratio
  // (s + gap) / s clears 2
  const double h_gap = cfg.kind == SceneKind::spaced_line
                           ? std::max(cfg.h_gap, 1.5 * s)
                           : cfg.h_gap;
  const double v_gap = cfg.v_gap;
  const double margin = s;

  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].size() >= static_cast<std::size_t>(cols)) eligible.push_back(i);
  }
  if (eligible.empty()) {
    throw Error(ErrorKind::invalid_argument,
                "gen_scene: cols exceeds the longest corpus string");
  }

  rng::Rng rng(cfg.seed);

  // words for the rows (prefixes of corpus lines, length = cols)
  std::vector<std::u32string> words;
  if (eligible.size() >= static_cast<std::size_t>(rows)) {
    for (std::size_t pick : rng.sample_without_replacement(
             eligible.size(), static_cast<std::size_t>(rows))) {
      words.push_back(
          corpus[eligible[pick]].substr(0, static_cast<std::size_t>(cols)));
    }
  } else {
    for (int r = 0; r < rows; ++r) {
      const std::size_t pick =
          static_cast<std::size_t>(rng.uniform_index(eligible.size()));
      words.push_back(
          corpus[eligible[pick]].substr(0, static_cast<std::size_t>(cols)));
    }
  }

  // corpus vocabulary, for label flips
  std::set<char32_t> vocab_set;
  for (const std::u32string& line : corpus) {
    vocab_set.insert(line.begin(), line.end());
  }
  const std::vector<char32_t> vocab(vocab_set.begin(), vocab_set.end());

  auto char_box = [&](int r, int c) {
    const double x0 = margin + c * (s + h_gap);
    const double y0 = margin + r * (s + v_gap);
    return geom::AxisAlignedBox::make(x0, y0, x0 + s, y0 + s);
  };
  const double row_width = cols * s + (cols - 1) * h_gap;
  const double col_height = rows * s + (rows - 1) * v_gap;

  Scene scene;
  scene.record.image_id = image_id;
  scene.bundle.image_id = image_id;
  scene.record.width = 2.0 * margin + row_width;
  scene.record.height = 2.0 * margin + col_height;

  for (int r = 0; r < rows; ++r) {
    const geom::AxisAlignedBox first = char_box(r, 0);
    scene.record.gt_lines.push_back(
        {rect_polygon(first.x_min, first.y_min, first.x_min + row_width,
                      first.y_max),
         words[static_cast<std::size_t>(r)], false});
    for (int c = 0; c < cols; ++c) {
      scene.record.gt_chars.push_back(
          {char_box(r, c), words[static_cast<std::size_t>(r)][c],
           static_cast<std::size_t>(r)});
    }
  }

  // simulated character detections
  for (const model::GroundTruthChar& gt_char : scene.record.gt_chars) {
    const double dx = rng.gaussian(0.0, cfg.jitter_sigma);
    const double dy = rng.gaussian(0.0, cfg.jitter_sigma);
    char32_t label = gt_char.label;
    if (rng.uniform() < cfg.label_noise_rate && vocab.size() > 1) {
      const std::size_t pick = static_cast<std::size_t>(
          rng.uniform_index(vocab.size() - 1));
      const char32_t other =
          vocab[pick] == label ? vocab[vocab.size() - 1] : vocab[pick];
      label = other;
    }
    const double score = clamp01(0.9 + rng.gaussian(0.0, cfg.score_noise_sigma));
    scene.bundle.chars.push_back(
        {geom::AxisAlignedBox::make(gt_char.box.x_min + dx,
                                    gt_char.box.y_min + dy,
                                    gt_char.box.x_max + dx,
                                    gt_char.box.y_max + dy),
         label, score});
  }

  // simulated line candidates; rows and extra groupings share one score
  // distribution
  std::set<std::array<double, 4>> emitted;
  std::int64_t next_id = 0;
  auto add_candidate = [&](const geom::AxisAlignedBox& box, double base) {
    if (!emitted.insert({box.x_min, box.y_min, box.x_max, box.y_max}).second) {
      return;
    }
    scene.bundle.lines.push_back(
        {next_id++, geom::ConvexPolygon::from_box(box),
         clamp01(base + rng.gaussian(0.0, cfg.score_noise_sigma))});
  };

  const double base_score = 0.85;
  for (int r = 0; r < rows; ++r) {
    const geom::AxisAlignedBox first = char_box(r, 0);
    add_candidate(geom::AxisAlignedBox::make(first.x_min, first.y_min,
                                             first.x_min + row_width,
                                             first.y_max),
                  base_score);
  }
  const bool per_char_candidates =
      cfg.kind == SceneKind::spaced_line ||
      (cfg.kind == SceneKind::grid && cfg.ambiguous_candidates);
  if (per_char_candidates) {
    for (int c = 0; c < cols; ++c) {
      const geom::AxisAlignedBox top = char_box(0, c);
      add_candidate(geom::AxisAlignedBox::make(top.x_min, top.y_min,
                                               top.x_max,
                                               top.y_min + col_height),
                    base_score);
    }
  }
  if (cfg.kind == SceneKind::grid && cfg.ambiguous_candidates) {
    const geom::AxisAlignedBox first = char_box(0, 0);
    add_candidate(geom::AxisAlignedBox::make(first.x_min, first.y_min,
                                             first.x_min + row_width,
                                             first.y_min + col_height),
                  base_score);
  }

  scene.bundle = model::validate_bundle(std::move(scene.bundle));
  return scene;
}

std::vector<Scene> gen_dataset(std::size_t n_scenes, const SceneConfig& tmpl,
                               std::uint64_t master_seed,
                               const std::vector<std::u32string>& corpus,
                               unsigned threads) {
  if (n_scenes == 0) {
    throw Error(ErrorKind::invalid_argument, "gen_dataset: n_scenes must be >= 1");
  }
  std::vector<std::optional<Scene>> slots(n_scenes);
  parallel::parallel_for(n_scenes, threads, [&](std::size_t i) {
    SceneConfig cfg = tmpl;
    cfg.seed = rng::mix64(master_seed ^ static_cast<std::uint64_t>(i));
    char id[32];
    std::snprintf(id, sizeof(id), "scene_%06zu", i);
    slots[i] = gen_scene(cfg, corpus, id);
  });
  std::vector<Scene> scenes;
  scenes.reserve(n_scenes);
  for (std::optional<Scene>& slot : slots) scenes.push_back(std::move(*slot));
  return scenes;
}

}  // namespace ambispot::synth
