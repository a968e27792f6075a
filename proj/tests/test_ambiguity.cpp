#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "ambispot/ambiguity.hpp"
#include "ambispot/error.hpp"
#include "ambispot/rng.hpp"
#include "ambispot/synth.hpp"

using namespace ambispot;
using geom::AxisAlignedBox;
using geom::ConvexPolygon;

namespace {

ConvexPolygon rect(double x0, double y0, double x1, double y1) {
  return ConvexPolygon::from_box(AxisAlignedBox::make(x0, y0, x1, y1));
}

AxisAlignedBox unit_box_at(double x, double y, double side = 1.0) {
  return AxisAlignedBox::make(x, y, x + side, y + side);
}

// a horizontal line of n unit characters whose centers sit `pitch` apart
std::vector<AxisAlignedBox> char_row(int n, double pitch, double y = 0.0,
                                     double x0 = 0.0, double side = 1.0) {
  std::vector<AxisAlignedBox> boxes;
  for (int i = 0; i < n; ++i) {
    boxes.push_back(unit_box_at(x0 + i * pitch, y, side));
  }
  return boxes;
}

model::ImageRecord grid_record(int rows, int cols) {
  const auto corpus = synth::make_corpus(50, 77);
  synth::SceneConfig cfg;
  cfg.rows = rows;
  cfg.cols = cols;
  cfg.seed = 5;
  return synth::gen_scene(cfg, corpus).record;
}

}  // namespace

TEST_CASE("large spacing ratio arithmetic") {
  // centers 10 apart: ratio (10 + 10) / (1 + 1) = 10
  CHECK(ambiguity::has_large_spacing(char_row(2, 10.0)));
  // adjacent: centers 1 apart, ratio 1
  CHECK_FALSE(ambiguity::has_large_spacing(char_row(2, 1.0)));
  // single character can never have large spacing
  CHECK_FALSE(ambiguity::has_large_spacing(char_row(1, 10.0)));
  CHECK_FALSE(ambiguity::has_large_spacing({}));
  // ratio exactly 2 is not strictly greater
  CHECK_FALSE(ambiguity::has_large_spacing(char_row(2, 2.0)));
  CHECK(ambiguity::has_large_spacing(char_row(2, 2.0 + 1e-6)));
}

TEST_CASE("juxtaposed pair with exact alignment and equal scales") {
  const ConvexPolygon line_a = rect(0, 0, 10, 1);
  const ConvexPolygon line_b = rect(0, 5, 10, 6);
  const auto chars_a = char_row(3, 2.0, 0.0);
  const auto chars_b = char_row(3, 2.0, 5.0);
  CHECK(ambiguity::are_juxtaposed(line_a, chars_a, line_b, chars_b));
  // symmetric
  CHECK(ambiguity::are_juxtaposed(line_b, chars_b, line_a, chars_a));
}

TEST_CASE("doubled character scale breaks the similarity band") {
  const ConvexPolygon line_a = rect(0, 0, 10, 1);
  const ConvexPolygon line_b = rect(0, 5, 10, 7);
  const auto chars_a = char_row(3, 2.0, 0.0, 0.0, 1.0);
  const auto chars_b = char_row(3, 2.0, 5.0, 0.0, 2.0);  // scale 2
  CHECK_FALSE(ambiguity::are_juxtaposed(line_a, chars_a, line_b, chars_b));
}

TEST_CASE("misalignment in every direction defeats the pair rule") {
  const ConvexPolygon line_a = rect(0, 0, 10, 1);
  // shifted so every edge difference is large relative to |C| / sum(scale)
  const ConvexPolygon line_b = rect(7, 40, 17, 41);
  const auto chars_a = char_row(3, 2.0, 0.0, 0.0);
  const auto chars_b = char_row(3, 2.0, 40.0, 7.0);
  CHECK_FALSE(ambiguity::are_juxtaposed(line_a, chars_a, line_b, chars_b));
}

TEST_CASE("lines without characters are never juxtaposed") {
  const ConvexPolygon line_a = rect(0, 0, 10, 1);
  const ConvexPolygon line_b = rect(0, 5, 10, 6);
  CHECK_FALSE(ambiguity::are_juxtaposed(line_a, {}, line_b, char_row(3, 2.0)));
}

TEST_CASE("classify_image flags a grid scene as ambiguous") {
  const model::ImageRecord rec = grid_record(2, 3);
  const ambiguity::ImageAmbiguityFlags flags = ambiguity::classify_image(rec);
  CHECK(flags.is_ambiguous);
  REQUIRE(flags.juxtaposed_pairs.size() == 1);
  CHECK(flags.juxtaposed_pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});
}

TEST_CASE("single-line images have no pairs") {
  const model::ImageRecord rec = grid_record(1, 4);
  const ambiguity::ImageAmbiguityFlags flags = ambiguity::classify_image(rec);
  CHECK(flags.juxtaposed_pairs.empty());
  CHECK_FALSE(flags.is_ambiguous);  // dense row, normal spacing
}

TEST_CASE("ignored lines are excluded from both rules") {
  model::ImageRecord rec = grid_record(2, 3);
  rec.gt_lines[1].ignore = true;
  const ambiguity::ImageAmbiguityFlags flags = ambiguity::classify_image(rec);
  CHECK(flags.juxtaposed_pairs.empty());
  CHECK_FALSE(flags.is_ambiguous);
}

TEST_CASE("flags are invariant to translation and uniform scale") {
  const model::ImageRecord base = grid_record(2, 3);
  rng::Rng rng(78);
  for (int trial = 0; trial < 20; ++trial) {
    const double k = rng.uniform(0.05, 40.0);
    const double dx = rng.uniform(-1000, 1000);
    const double dy = rng.uniform(-1000, 1000);
    model::ImageRecord moved = base;
    moved.width = base.width * k + std::abs(dx) + 1;
    moved.height = base.height * k + std::abs(dy) + 1;
    for (auto& line : moved.gt_lines) {
      std::vector<geom::Point> verts = line.polygon.vertices();
      for (geom::Point& p : verts) p = {p.x * k + dx, p.y * k + dy};
      line.polygon = ConvexPolygon::make(std::move(verts));
    }
    for (auto& c : moved.gt_chars) {
      c.box = AxisAlignedBox::make(c.box.x_min * k + dx, c.box.y_min * k + dy,
                                   c.box.x_max * k + dx, c.box.y_max * k + dy);
    }
    const auto a = ambiguity::classify_image(base);
    const auto b = ambiguity::classify_image(moved);
    CHECK(a.is_ambiguous == b.is_ambiguous);
    CHECK(a.lines_large_spacing == b.lines_large_spacing);
    CHECK(a.juxtaposed_pairs == b.juxtaposed_pairs);
  }
}

TEST_CASE("widening the spacing never unsets the flag") {
  for (double pitch = 2.5; pitch < 40.0; pitch *= 1.5) {
    CHECK(ambiguity::has_large_spacing(char_row(4, pitch)));
  }
}

TEST_CASE("dataset_stats counts lines and images") {
  CHECK(ambiguity::dataset_stats({}).total_lines == 0);
  CHECK(ambiguity::dataset_stats({}).union_pct() == 0.0);

  std::vector<model::ImageRecord> dataset;
  for (int i = 0; i < 4; ++i) dataset.push_back(grid_record(2, 3));
  const ambiguity::DatasetStats stats = ambiguity::dataset_stats(dataset);
  CHECK(stats.total_images == 4);
  CHECK(stats.ambiguous_images == 4);
  CHECK(stats.total_lines == 8);
  CHECK(stats.juxtaposed_lines == 8);
  CHECK(stats.large_spacing_lines == 0);
  CHECK(stats.union_lines == 8);  // de-duplicated
  CHECK(stats.union_pct() == 100.0);
}

TEST_CASE("spaced lines count in both the spacing and union columns") {
  const auto corpus = synth::make_corpus(50, 79);
  synth::SceneConfig cfg;
  cfg.kind = synth::SceneKind::spaced_line;
  cfg.cols = 4;
  cfg.seed = 3;
  const model::ImageRecord rec = synth::gen_scene(cfg, corpus).record;
  const ambiguity::DatasetStats stats = ambiguity::dataset_stats({rec});
  CHECK(stats.large_spacing_lines == 1);
  CHECK(stats.juxtaposed_lines == 0);
  CHECK(stats.union_lines == 1);
}

TEST_CASE("curate samples deterministically") {
  std::vector<model::ImageRecord> dataset;
  for (int i = 0; i < 30; ++i) {
    model::ImageRecord rec = grid_record(2, 3);
    rec.image_id = "img_" + std::to_string(100 + i);
    dataset.push_back(std::move(rec));
  }
  const auto all = ambiguity::curate(dataset, 30, 7);
  CHECK(all.size() == 30);
  CHECK(std::is_sorted(all.begin(), all.end()));

  const auto a = ambiguity::curate(dataset, 10, 7);
  const auto b = ambiguity::curate(dataset, 10, 7);
  CHECK(a == b);
  CHECK(std::is_sorted(a.begin(), a.end()));

  // different seeds give different samples with overwhelming probability
  std::set<std::vector<std::string>> distinct;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    distinct.insert(ambiguity::curate(dataset, 10, seed));
  }
  CHECK(distinct.size() > 1);

  CHECK_THROWS_AS(ambiguity::curate(dataset, 31, 7), Error);
}

TEST_CASE("curate reports the available count on failure") {
  const model::ImageRecord plain = grid_record(1, 4);  // not ambiguous
  try {
    ambiguity::curate({plain}, 1, 0);
    FAIL("expected insufficient-ambiguous");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::insufficient_ambiguous);
    CHECK(std::string(e.what()).find("0") != std::string::npos);
  }
}
