#include <benchmark/benchmark.h>

#include <vector>

#include "ambispot/geom.hpp"
#include "ambispot/lm.hpp"
#include "ambispot/ma.hpp"
#include "ambispot/metrics.hpp"
#include "ambispot/pipeline.hpp"
#include "ambispot/rng.hpp"
#include "ambispot/synth.hpp"

using namespace ambispot;

namespace {

geom::ConvexPolygon random_quad(rng::Rng& rng) {
  for (;;) {
    std::vector<geom::Point> pts(4);
    for (geom::Point& p : pts) p = {rng.uniform(0, 100), rng.uniform(0, 100)};
    geom::Point c{0, 0};
    for (const geom::Point& p : pts) c = c + p;
    c = c * 0.25;
    std::sort(pts.begin(), pts.end(), [&](geom::Point a, geom::Point b) {
      return std::atan2(a.y - c.y, a.x - c.x) < std::atan2(b.y - c.y, b.x - c.x);
    });
    try {
      return geom::ConvexPolygon::make(pts);
    } catch (...) {
    }
  }
}

void BM_IntersectionArea(benchmark::State& state) {
  rng::Rng rng(1);
  const geom::ConvexPolygon a = random_quad(rng);
  const geom::ConvexPolygon b = random_quad(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(geom::intersection_area(a, b));
  }
}
BENCHMARK(BM_IntersectionArea);

void BM_Nms200(benchmark::State& state) {
  rng::Rng rng(2);
  std::vector<geom::ConvexPolygon> polys;
  std::vector<double> scores;
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform(0, 80), y = rng.uniform(0, 80);
    polys.push_back(geom::ConvexPolygon::from_box(
        geom::AxisAlignedBox::make(x, y, x + rng.uniform(2, 20),
                                   y + rng.uniform(2, 20))));
    scores.push_back(rng.uniform());
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(geom::nms(polys, scores, 0.3));
  }
}
BENCHMARK(BM_Nms200);

void BM_LmScore(benchmark::State& state) {
  const auto corpus = synth::make_corpus(2000, 5);
  const lm::NgramModel model = lm::fit(corpus);
  const std::u32string text = corpus[42];
  for (auto _ : state) {
    benchmark::DoNotOptimize(lm::score(model, text));
  }
}
BENCHMARK(BM_LmScore);

void BM_EditDistance16(benchmark::State& state) {
  rng::Rng rng(3);
  std::u32string a, b;
  for (int i = 0; i < 16; ++i) {
    a.push_back(static_cast<char32_t>(U'a' + rng.uniform_index(6)));
    b.push_back(static_cast<char32_t>(U'a' + rng.uniform_index(6)));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(metrics::edit_distance(a, b));
  }
}
BENCHMARK(BM_EditDistance16);

void BM_SpotGridScene(benchmark::State& state) {
  const auto corpus = synth::make_corpus(2000, 5);
  const lm::NgramModel model = lm::fit(corpus);
  synth::SceneConfig cfg;
  cfg.seed = 9;
  cfg.score_noise_sigma = 0.05;
  const synth::Scene scene = synth::gen_scene(cfg, corpus);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pipeline::spot_image(scene.bundle, &model));
  }
}
BENCHMARK(BM_SpotGridScene);

}  // namespace

BENCHMARK_MAIN();
