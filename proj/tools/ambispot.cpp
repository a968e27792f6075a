// ambispot: geometric text-spotting post-processing on serialized detector
// output. Subcommands: gen, lm-train, spot, eval, curate.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ambispot/ambiguity.hpp"
#include "ambispot/error.hpp"
#include "ambispot/io.hpp"
#include "ambispot/lm.hpp"
#include "ambispot/model.hpp"
#include "ambispot/parallel.hpp"
#include "ambispot/pipeline.hpp"
#include "ambispot/synth.hpp"
#include "ambispot/utf8.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using namespace ambispot;

unsigned resolve_threads(std::optional<unsigned> flag) {
  if (flag) return std::max(1u, *flag);
  if (const char* env = std::getenv("AMBISPOT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return parallel::default_threads();
}

// ---------------------------------------------------------------- gen ----

synth::SceneKind parse_kind(const std::string& kind) {
  if (kind == "grid") return synth::SceneKind::grid;
  if (kind == "spaced_line") return synth::SceneKind::spaced_line;
  if (kind == "plain_line") return synth::SceneKind::plain_line;
  throw Error(ErrorKind::invalid_argument, "unknown scene kind: " + kind);
}

struct GenTemplate {
  synth::SceneConfig scene;
  std::vector<std::u32string> corpus;
  bool corpus_is_synthetic = false;
};

GenTemplate load_template(const std::string& path) try {
  const json doc = json::parse(io::read_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorKind::parse_error, path + ": not a JSON object");
  }
  GenTemplate tmpl;
  synth::SceneConfig& cfg = tmpl.scene;
  auto num = [&](const char* key, double fallback) {
    return doc.contains(key) ? doc.at(key).get<double>() : fallback;
  };
  if (doc.contains("kind")) cfg.kind = parse_kind(doc.at("kind").get<std::string>());
  cfg.rows = static_cast<int>(num("rows", cfg.rows));
  cfg.cols = static_cast<int>(num("cols", cfg.cols));
  cfg.char_size = num("char_size", cfg.char_size);
  cfg.h_gap = num("h_gap", cfg.h_gap);
  cfg.v_gap = num("v_gap", cfg.v_gap);
  cfg.jitter_sigma = num("jitter_sigma", cfg.jitter_sigma);
  cfg.label_noise_rate = num("label_noise_rate", cfg.label_noise_rate);
  cfg.score_noise_sigma = num("score_noise_sigma", cfg.score_noise_sigma);
  if (doc.contains("ambiguous_candidates")) {
    cfg.ambiguous_candidates = doc.at("ambiguous_candidates").get<bool>();
  }
  if (!doc.contains("corpus")) {
    throw Error(ErrorKind::invalid_argument,
                path + ": template needs a \"corpus\" entry");
  }
  const json& corpus = doc.at("corpus");
  if (corpus.contains("path")) {
    tmpl.corpus = io::parse_corpus(io::read_file(corpus.at("path").get<std::string>()));
  } else if (corpus.contains("synthetic")) {
    const json& syn = corpus.at("synthetic");
    const std::size_t lines = syn.value("lines", 10000);
    const std::uint64_t seed = syn.value("seed", std::uint64_t{1});
    tmpl.corpus = synth::make_corpus(
        lines, seed, syn.value("vocab_size", std::size_t{40}),
        syn.value("branching", std::size_t{3}),
        syn.value("min_len", std::size_t{3}),
        syn.value("max_len", std::size_t{12}));
    tmpl.corpus_is_synthetic = true;
  } else {
    throw Error(ErrorKind::invalid_argument,
                path + ": corpus must have \"path\" or \"synthetic\"");
  }
  if (tmpl.corpus.empty()) {
    throw Error(ErrorKind::empty_corpus, path + ": corpus has no lines");
  }
  return tmpl;
} catch (const json::exception& e) {
  throw Error(ErrorKind::parse_error, path + ": " + e.what());
}

int run_gen(const std::string& template_path, std::size_t n,
            std::uint64_t seed, const std::string& out_dir,
            std::optional<unsigned> threads_flag) {
  const GenTemplate tmpl = load_template(template_path);
  std::vector<synth::Scene> scenes = synth::gen_dataset(
      n, tmpl.scene, seed, tmpl.corpus, resolve_threads(threads_flag));

  std::vector<model::ImageRecord> records;
  std::vector<model::DetectionBundle> bundles;
  records.reserve(scenes.size());
  bundles.reserve(scenes.size());
  for (synth::Scene& scene : scenes) {
    records.push_back(std::move(scene.record));
    bundles.push_back(std::move(scene.bundle));
  }

  fs::create_directories(out_dir);
  io::write_file((fs::path(out_dir) / "gt.json").string(),
                 io::serialize_ground_truth(records));
  io::write_file((fs::path(out_dir) / "detections.json").string(),
                 io::serialize_detections(bundles));
  if (tmpl.corpus_is_synthetic) {
    io::write_file((fs::path(out_dir) / "corpus.txt").string(),
                   io::serialize_corpus(tmpl.corpus));
  }
  std::cout << json{{"scenes", scenes.size()}, {"out_dir", out_dir}}.dump()
            << "\n";
  return 0;
}

// ----------------------------------------------------------- lm-train ----

int run_lm_train(const std::string& corpus_path, const std::string& model_out,
                 int order, double smoothing_k, int max_len) {
  const std::vector<std::u32string> corpus =
      io::parse_corpus(io::read_file(corpus_path));
  if (corpus.empty()) {
    throw Error(ErrorKind::empty_corpus, corpus_path + ": corpus is empty");
  }
  const lm::NgramModel model = lm::fit(corpus, order, smoothing_k, max_len);
  io::write_file(model_out, io::serialize_model(model));
  std::cout << json{{"lines", corpus.size()},
                    {"vocab_size", model.vocab_size()},
                    {"contexts", model.counts.size()},
                    {"model", model_out}}
                   .dump()
            << "\n";
  return 0;
}

// ---------------------------------------------------------------- spot ----

struct SpotOptions {
  pipeline::PipelineConfig pipeline;
  ma::MatchConfig match;
  std::optional<unsigned> threads;
};

// config file carries the same field names as the flags; flags win
void apply_config_file(const std::string& path, SpotOptions& opts) try {
  const json doc = json::parse(io::read_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorKind::parse_error, path + ": not a JSON object");
  }
  pipeline::PipelineConfig& p = opts.pipeline;
  p.thr_score = doc.value("thr_score", p.thr_score);
  p.thr_nms = doc.value("thr_nms", p.thr_nms);
  p.lambda = doc.value("lambda", p.lambda);
  p.final_nms = doc.value("final_nms", p.final_nms);
  p.final_score_thr = doc.value("final_score_thr", p.final_score_thr);
  p.use_lm = doc.value("use_lm", p.use_lm);
  opts.match.thr_match = doc.value("thr_match", opts.match.thr_match);
  if (doc.contains("threads")) {
    opts.threads = doc.at("threads").get<unsigned>();
  }
} catch (const json::exception& e) {
  throw Error(ErrorKind::parse_error, path + ": " + e.what());
}

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(ErrorKind::invalid_argument,
                std::string(name) + " must be in [0, 1]");
  }
}

int run_spot(const std::string& detections_path, const std::string& model_path,
             const std::string& out_path, const SpotOptions& opts) {
  const pipeline::PipelineConfig& cfg = opts.pipeline;
  check_unit(cfg.thr_score, "thr_score");
  check_unit(cfg.thr_nms, "thr_nms");
  check_unit(cfg.lambda, "lambda");
  check_unit(cfg.final_nms, "final_nms");
  check_unit(cfg.final_score_thr, "final_score_thr");
  check_unit(opts.match.thr_match, "thr_match");

  std::vector<model::DetectionBundle> bundles =
      io::parse_detections(io::read_file(detections_path));
  std::set<std::string> ids;
  for (const model::DetectionBundle& b : bundles) {
    if (!ids.insert(b.image_id).second) {
      throw Error(ErrorKind::duplicate_id,
                  "duplicate image_id: " + b.image_id);
    }
  }
  std::sort(bundles.begin(), bundles.end(),
            [](const model::DetectionBundle& a, const model::DetectionBundle& b) {
              return a.image_id < b.image_id;
            });

  lm::NgramModel model;
  if (cfg.use_lm) {
    if (model_path.empty()) {
      throw Error(ErrorKind::invalid_argument,
                  "spot: --model is required unless --no-lm is given");
    }
    model = io::parse_model(io::read_file(model_path));
  }

  std::vector<io::SpottedImage> spotted(bundles.size());
  parallel::parallel_for(
      bundles.size(), resolve_threads(opts.threads), [&](std::size_t i) {
        spotted[i].image_id = bundles[i].image_id;
        spotted[i].lines = pipeline::spot_image(
            bundles[i], cfg.use_lm ? &model : nullptr, cfg, opts.match);
      });
  io::write_file(out_path, io::serialize_spotted(spotted));
  std::size_t total = 0;
  for (const io::SpottedImage& si : spotted) total += si.lines.size();
  std::cout << json{{"images", spotted.size()},
                    {"lines", total},
                    {"out", out_path}}
                   .dump()
            << "\n";
  return 0;
}

// ---------------------------------------------------------------- eval ----

int run_eval(const std::string& spotted_path, const std::string& gt_path,
             const std::string& format, std::optional<unsigned> threads_flag) {
  std::vector<io::SpottedImage> spotted =
      io::parse_spotted(io::read_file(spotted_path));
  std::vector<model::ImageRecord> gt =
      io::parse_ground_truth(io::read_file(gt_path));

  std::map<std::string, const io::SpottedImage*> spotted_by_id;
  for (const io::SpottedImage& si : spotted) spotted_by_id[si.image_id] = &si;
  std::map<std::string, const model::ImageRecord*> gt_by_id;
  for (const model::ImageRecord& rec : gt) gt_by_id[rec.image_id] = &rec;
  if (spotted_by_id.size() != spotted.size() || gt_by_id.size() != gt.size()) {
    throw Error(ErrorKind::duplicate_id, "duplicate image_id in input");
  }

  std::vector<std::string> only_spotted, only_gt;
  for (const auto& [id, _] : spotted_by_id) {
    if (!gt_by_id.contains(id)) only_spotted.push_back(id);
  }
  for (const auto& [id, _] : gt_by_id) {
    if (!spotted_by_id.contains(id)) only_gt.push_back(id);
  }
  if (!only_spotted.empty() || !only_gt.empty()) {
    json detail{{"only_in_spotted", only_spotted}, {"only_in_gt", only_gt}};
    throw Error(ErrorKind::invalid_argument,
                "image_id sets differ: " + detail.dump());
  }

  std::vector<std::string> ids;
  for (const auto& [id, _] : gt_by_id) ids.push_back(id);

  std::vector<metrics::EvalTally> tallies(ids.size());
  parallel::parallel_for(
      ids.size(), resolve_threads(threads_flag), [&](std::size_t i) {
        const io::SpottedImage& si = *spotted_by_id.at(ids[i]);
        const model::ImageRecord& rec = *gt_by_id.at(ids[i]);
        const metrics::LineMatching matching =
            metrics::match_lines(si.lines, rec.gt_lines);
        tallies[i] = metrics::tally_image(matching, si.lines, rec.gt_lines);
      });

  metrics::EvalTally global;
  std::vector<std::pair<std::string, metrics::EvalReport>> per_image;
  per_image.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    global += tallies[i];
    per_image.emplace_back(ids[i], metrics::report_from(tallies[i]));
  }
  const metrics::EvalReport global_report = metrics::report_from(global);
  if (format == "table") {
    std::cout << io::format_eval_table(global_report, per_image);
  } else {
    std::cout << io::serialize_eval(global_report, per_image);
  }
  return 0;
}

// -------------------------------------------------------------- curate ----

int run_curate(const std::string& gt_path, std::size_t n, std::uint64_t seed,
               const std::string& out_path,
               const ambiguity::AmbiguityConfig& cfg) {
  const std::vector<model::ImageRecord> gt =
      io::parse_ground_truth(io::read_file(gt_path));
  const ambiguity::DatasetStats stats = ambiguity::dataset_stats(gt, cfg);
  const std::vector<std::string> ids = ambiguity::curate(gt, n, seed, cfg);
  std::string listing;
  for (const std::string& id : ids) {
    listing += id;
    listing.push_back('\n');
  }
  io::write_file(out_path, listing);
  std::cout << io::serialize_stats(stats);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ambiguity-eliminating text spotting on detector output"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
  std::string gen_template, gen_out;
  std::size_t gen_n = 1;
  std::uint64_t gen_seed = 0;
  std::optional<unsigned> gen_threads;
  gen->add_option("--template", gen_template, "scene template JSON")->required();
  gen->add_option("-n,--scenes", gen_n, "number of scenes")->required();
  gen->add_option("--seed", gen_seed, "master seed")->required();
  gen->add_option("-o,--out", gen_out, "output directory")->required();
  gen->add_option("--threads", gen_threads, "worker threads");

  // lm-train
  auto* train = app.add_subcommand("lm-train", "fit the character n-gram model");
  std::string train_corpus, train_out;
  int train_n = 3, train_max_len = 16;
  double train_k = 0.1;
  train->add_option("--corpus", train_corpus, "one transcript per line")->required();
  train->add_option("--out", train_out, "model JSON path")->required();
  train->add_option("--n", train_n, "n-gram order");
  train->add_option("--smoothing-k", train_k, "additive smoothing constant");
  train->add_option("--max-len", train_max_len, "transcript truncation length");

  // spot
  auto* spot = app.add_subcommand("spot", "run the spotting pipeline");
  std::string spot_dets, spot_model, spot_out, spot_config;
  bool spot_no_lm = false;
  double f_thr_score = 0, f_thr_nms = 0, f_lambda = 0, f_final_nms = 0,
         f_final_thr = 0, f_thr_match = 0;
  std::optional<unsigned> spot_threads;
  spot->add_option("--detections", spot_dets, "detections JSON")->required();
  spot->add_option("--model", spot_model, "language model JSON");
  spot->add_option("--out", spot_out, "spotted JSON path")->required();
  spot->add_option("--config", spot_config, "pipeline config JSON");
  auto* o_thr_score = spot->add_option("--thr-score", f_thr_score, "candidate score floor");
  auto* o_thr_nms = spot->add_option("--thr-nms", f_thr_nms, "candidate NMS IoU");
  auto* o_lambda = spot->add_option("--lambda", f_lambda, "visual/linguistic balance");
  auto* o_final_nms = spot->add_option("--final-nms", f_final_nms, "final NMS IoU");
  auto* o_final_thr = spot->add_option("--final-score-thr", f_final_thr, "final score floor");
  auto* o_thr_match = spot->add_option("--thr-match", f_thr_match, "character match ratio");
  spot->add_flag("--no-lm", spot_no_lm, "skip linguistic re-scoring (lambda = 1)");
  spot->add_option("--threads", spot_threads, "worker threads");

  // eval
  auto* eval = app.add_subcommand("eval", "score spotted output against ground truth");
  std::string eval_spotted, eval_gt, eval_format = "json";
  std::optional<unsigned> eval_threads;
  eval->add_option("--spotted", eval_spotted, "spotted JSON")->required();
  eval->add_option("--gt", eval_gt, "ground-truth JSON")->required();
  eval->add_option("--format", eval_format, "json or table")
      ->check(CLI::IsMember({"json", "table"}));
  eval->add_option("--threads", eval_threads, "worker threads");

  // curate
  auto* curate = app.add_subcommand("curate", "select ambiguous images");
  std::string curate_gt, curate_out;
  std::size_t curate_n = 0;
  std::uint64_t curate_seed = 0;
  ambiguity::AmbiguityConfig curate_cfg;
  curate->add_option("--gt", curate_gt, "ground-truth JSON")->required();
  curate->add_option("-n,--sample", curate_n, "images to sample")->required();
  curate->add_option("--seed", curate_seed, "sampling seed")->required();
  curate->add_option("--out", curate_out, "id list path")->required();
  curate->add_option("--spacing-ratio-thr", curate_cfg.spacing_ratio_thr,
                     "large-spacing ratio threshold");
  curate->add_option("--alignment-ratio-thr", curate_cfg.alignment_ratio_thr,
                     "alignment ratio threshold");
  curate->add_option("--scale-band-low", curate_cfg.scale_band_low,
                     "scale similarity lower bound");
  curate->add_option("--scale-band-high", curate_cfg.scale_band_high,
                     "scale similarity upper bound");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return run_gen(gen_template, gen_n, gen_seed, gen_out, gen_threads);
    }
    if (train->parsed()) {
      return run_lm_train(train_corpus, train_out, train_n, train_k,
                          train_max_len);
    }
    if (spot->parsed()) {
      SpotOptions opts;
      if (!spot_config.empty()) apply_config_file(spot_config, opts);
      if (o_thr_score->count()) opts.pipeline.thr_score = f_thr_score;
      if (o_thr_nms->count()) opts.pipeline.thr_nms = f_thr_nms;
      if (o_lambda->count()) opts.pipeline.lambda = f_lambda;
      if (o_final_nms->count()) opts.pipeline.final_nms = f_final_nms;
      if (o_final_thr->count()) opts.pipeline.final_score_thr = f_final_thr;
      if (o_thr_match->count()) opts.match.thr_match = f_thr_match;
      if (spot_threads) opts.threads = spot_threads;
      if (spot_no_lm) opts.pipeline.use_lm = false;
      return run_spot(spot_dets, spot_model, spot_out, opts);
    }
    if (eval->parsed()) {
      return run_eval(eval_spotted, eval_gt, eval_format, eval_threads);
    }
    if (curate->parsed()) {
      if (!(curate_cfg.scale_band_low < 1.0 && 1.0 < curate_cfg.scale_band_high) ||
          !(curate_cfg.spacing_ratio_thr > 0.0) ||
          !(curate_cfg.alignment_ratio_thr > 0.0)) {
        throw Error(ErrorKind::invalid_argument, "bad ambiguity thresholds");
      }
      return run_curate(curate_gt, curate_n, curate_seed, curate_out, curate_cfg);
    }
  } catch (const Error& e) {
    std::cerr << json{{"error", {{"kind", error_kind_name(e.kind())},
                                 {"message", e.what()}}}}
                     .dump()
              << "\n";
    return e.is_input_error() ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 1;
  }
  return 1;
}
