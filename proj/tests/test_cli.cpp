// End-to-end tests that drive the installed binary. AMBISPOT_BIN points at
// the tool (set by ctest).
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "ambispot/io.hpp"
#include "ambispot/utf8.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string tool_path() {
  const char* bin = std::getenv("AMBISPOT_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "AMBISPOT_BIN must point at the binary");
  return bin;
}

RunResult run_tool(const std::string& args, const fs::path& scratch,
                   const std::string& env_prefix = "") {
  const fs::path err_file = scratch / "stderr.txt";
  const std::string cmd =
      env_prefix + tool_path() + " " + args + " 2>" + err_file.string();
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) {
    result.out.append(buf, n);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (fs::exists(err_file)) {
    result.err = ambispot::io::read_file(err_file.string());
    fs::remove(err_file);
  }
  return result;
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("ambispot_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string str(const std::string& name) const {
    return (path / name).string();
  }
};

void write_grid_template(const std::string& path, double label_noise,
                         int rows = 2, int cols = 3) {
  json tmpl{{"kind", "grid"},
            {"rows", rows},
            {"cols", cols},
            {"char_size", 32},
            {"h_gap", 4},
            {"v_gap", 4},
            {"jitter_sigma", 0.5},
            {"label_noise_rate", label_noise},
            {"score_noise_sigma", 0.05},
            {"ambiguous_candidates", true},
            {"corpus", {{"synthetic", {{"lines", 8000}, {"seed", 21}}}}}};
  ambispot::io::write_file(path, tmpl.dump());
}

}  // namespace

TEST_CASE("gen writes deterministic cross-referenced files") {
  TempDir tmp;
  write_grid_template(tmp.str("tmpl.json"), 0.0);
  const std::string args_a = "gen --template " + tmp.str("tmpl.json") +
                             " -n 4 --seed 42 -o " + tmp.str("a");
  const std::string args_b = "gen --template " + tmp.str("tmpl.json") +
                             " -n 4 --seed 42 -o " + tmp.str("b");
  CHECK(run_tool(args_a, tmp.path).exit_code == 0);
  CHECK(run_tool(args_b, tmp.path).exit_code == 0);
  for (const char* name : {"gt.json", "detections.json", "corpus.txt"}) {
    const std::string a = ambispot::io::read_file(tmp.str("a") + "/" + name);
    const std::string b = ambispot::io::read_file(tmp.str("b") + "/" + name);
    CHECK(a == b);
    CHECK(!a.empty());
  }
  const auto records = ambispot::io::parse_ground_truth(
      ambispot::io::read_file(tmp.str("a") + "/gt.json"));
  const auto bundles = ambispot::io::parse_detections(
      ambispot::io::read_file(tmp.str("a") + "/detections.json"));
  REQUIRE(records.size() == 4);
  REQUIRE(bundles.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(records[i].image_id == bundles[i].image_id);
  }

  // thread count does not change the generated bytes
  CHECK(run_tool("gen --template " + tmp.str("tmpl.json") +
                     " -n 4 --seed 42 --threads 4 -o " + tmp.str("c"),
                 tmp.path)
            .exit_code == 0);
  CHECK(ambispot::io::read_file(tmp.str("a") + "/detections.json") ==
        ambispot::io::read_file(tmp.str("c") + "/detections.json"));
}

TEST_CASE("gen reads a corpus from a file") {
  TempDir tmp;
  ambispot::io::write_file(tmp.str("corpus.txt"), "吃饭了\n去吃饭\n饭吃了没\n");
  json tmpl{{"kind", "grid"},
            {"rows", 2},
            {"cols", 3},
            {"corpus", {{"path", tmp.str("corpus.txt")}}}};
  ambispot::io::write_file(tmp.str("tmpl.json"), tmpl.dump());
  REQUIRE(run_tool("gen --template " + tmp.str("tmpl.json") +
                       " -n 1 --seed 2 -o " + tmp.str("data"),
                   tmp.path)
              .exit_code == 0);
  const auto records = ambispot::io::parse_ground_truth(
      ambispot::io::read_file(tmp.str("data") + "/gt.json"));
  REQUIRE(records.size() == 1);
  for (const auto& line : records[0].gt_lines) {
    CHECK(line.transcript.size() == 3);
  }
  // no synthetic corpus is written when the corpus came from a file
  CHECK(!fs::exists(tmp.str("data") + "/corpus.txt"));
}

TEST_CASE("lm-train is deterministic and validates input") {
  TempDir tmp;
  write_grid_template(tmp.str("tmpl.json"), 0.0);
  REQUIRE(run_tool("gen --template " + tmp.str("tmpl.json") +
                       " -n 1 --seed 1 -o " + tmp.str("data"),
                   tmp.path)
              .exit_code == 0);
  const std::string corpus = tmp.str("data") + "/corpus.txt";
  const RunResult first = run_tool(
      "lm-train --corpus " + corpus + " --out " + tmp.str("m1.json"), tmp.path);
  CHECK(first.exit_code == 0);
  const json summary = json::parse(first.out);
  CHECK(summary.at("lines").get<int>() == 8000);
  CHECK(summary.at("vocab_size").get<int>() > 3);

  CHECK(run_tool("lm-train --corpus " + corpus + " --out " + tmp.str("m2.json"),
                 tmp.path)
            .exit_code == 0);
  CHECK(ambispot::io::read_file(tmp.str("m1.json")) ==
        ambispot::io::read_file(tmp.str("m2.json")));

  ambispot::io::write_file(tmp.str("empty.txt"), "");
  const RunResult bad = run_tool(
      "lm-train --corpus " + tmp.str("empty.txt") + " --out " + tmp.str("m3.json"),
      tmp.path);
  CHECK(bad.exit_code == 2);
  CHECK(json::parse(bad.err).at("error").at("kind") == "empty-corpus");
}

TEST_CASE("spot end to end with and without the language model") {
  TempDir tmp;
  write_grid_template(tmp.str("tmpl.json"), 0.0);
  REQUIRE(run_tool("gen --template " + tmp.str("tmpl.json") +
                       " -n 6 --seed 7 -o " + tmp.str("data"),
                   tmp.path)
              .exit_code == 0);
  REQUIRE(run_tool("lm-train --corpus " + tmp.str("data") + "/corpus.txt" +
                       " --out " + tmp.str("model.json"),
                   tmp.path)
              .exit_code == 0);
  const std::string dets = tmp.str("data") + "/detections.json";

  // with the language model: row transcripts come out
  REQUIRE(run_tool("spot --detections " + dets + " --model " +
                       tmp.str("model.json") + " --out " + tmp.str("with.json"),
                   tmp.path)
              .exit_code == 0);
  const auto gt = ambispot::io::parse_ground_truth(
      ambispot::io::read_file(tmp.str("data") + "/gt.json"));
  const auto with_lm = ambispot::io::parse_spotted(
      ambispot::io::read_file(tmp.str("with.json")));
  REQUIRE(with_lm.size() == gt.size());
  for (std::size_t i = 0; i < gt.size(); ++i) {
    std::multiset<std::u32string> expected, got;
    for (const auto& line : gt[i].gt_lines) expected.insert(line.transcript);
    for (const auto& line : with_lm[i].lines) got.insert(line.transcript);
    CHECK(got == expected);
  }

  // --no-lm ignores the model argument entirely
  REQUIRE(run_tool("spot --detections " + dets + " --model /definitely/absent" +
                       " --no-lm --out " + tmp.str("nolm_a.json"),
                   tmp.path)
              .exit_code == 0);
  REQUIRE(run_tool("spot --detections " + dets + " --model " +
                       tmp.str("model.json") + " --no-lm --out " +
                       tmp.str("nolm_b.json"),
                   tmp.path)
              .exit_code == 0);
  CHECK(ambispot::io::read_file(tmp.str("nolm_a.json")) ==
        ambispot::io::read_file(tmp.str("nolm_b.json")));

  // lambda = 1.0 with the model selects and scores identically to --no-lm
  REQUIRE(run_tool("spot --detections " + dets + " --model " +
                       tmp.str("model.json") + " --lambda 1.0 --out " +
                       tmp.str("lambda1.json"),
                   tmp.path)
              .exit_code == 0);
  const auto no_lm = ambispot::io::parse_spotted(
      ambispot::io::read_file(tmp.str("nolm_a.json")));
  const auto lambda1 = ambispot::io::parse_spotted(
      ambispot::io::read_file(tmp.str("lambda1.json")));
  REQUIRE(no_lm.size() == lambda1.size());
  for (std::size_t i = 0; i < no_lm.size(); ++i) {
    REQUIRE(no_lm[i].lines.size() == lambda1[i].lines.size());
    for (std::size_t j = 0; j < no_lm[i].lines.size(); ++j) {
      CHECK(no_lm[i].lines[j].transcript == lambda1[i].lines[j].transcript);
      CHECK(no_lm[i].lines[j].final_score == lambda1[i].lines[j].final_score);
      CHECK(no_lm[i].lines[j].final_score == no_lm[i].lines[j].visual_score);
      CHECK(no_lm[i].lines[j].linguistic_score == 0.0);
    }
  }

  // a config file is equivalent to flags, and flags override it
  ambispot::io::write_file(tmp.str("cfg.json"), R"({"use_lm": false})");
  REQUIRE(run_tool("spot --detections " + dets + " --config " +
                       tmp.str("cfg.json") + " --out " + tmp.str("cfg_out.json"),
                   tmp.path)
              .exit_code == 0);
  CHECK(ambispot::io::read_file(tmp.str("cfg_out.json")) ==
        ambispot::io::read_file(tmp.str("nolm_a.json")));

  // concurrency never changes bytes; AMBISPOT_THREADS stands in for --threads
  REQUIRE(run_tool("spot --detections " + dets + " --model " +
                       tmp.str("model.json") + " --threads 1 --out " +
                       tmp.str("t1.json"),
                   tmp.path)
              .exit_code == 0);
  REQUIRE(run_tool("spot --detections " + dets + " --model " +
                       tmp.str("model.json") + " --threads 8 --out " +
                       tmp.str("t8.json"),
                   tmp.path)
              .exit_code == 0);
  CHECK(ambispot::io::read_file(tmp.str("t1.json")) ==
        ambispot::io::read_file(tmp.str("t8.json")));
  REQUIRE(run_tool("spot --detections " + dets + " --model " +
                       tmp.str("model.json") + " --out " + tmp.str("tenv.json"),
                   tmp.path, "AMBISPOT_THREADS=3 ")
              .exit_code == 0);
  CHECK(ambispot::io::read_file(tmp.str("t1.json")) ==
        ambispot::io::read_file(tmp.str("tenv.json")));
}

TEST_CASE("spot accepts a detections file with no images") {
  TempDir tmp;
  ambispot::io::write_file(tmp.str("none.json"), R"({"images":[]})");
  const RunResult r = run_tool(
      "spot --detections " + tmp.str("none.json") + " --no-lm --out " +
          tmp.str("out.json"),
      tmp.path);
  CHECK(r.exit_code == 0);
  CHECK(ambispot::io::parse_spotted(
            ambispot::io::read_file(tmp.str("out.json")))
            .empty());
}

TEST_CASE("eval reports perfect scores on noiseless plain lines") {
  TempDir tmp;
  json tmpl{{"kind", "plain_line"},
            {"cols", 4},
            {"char_size", 32},
            {"h_gap", 4},
            {"v_gap", 4},
            {"corpus", {{"synthetic", {{"lines", 6000}, {"seed", 33}}}}}};
  ambispot::io::write_file(tmp.str("tmpl.json"), tmpl.dump());
  REQUIRE(run_tool("gen --template " + tmp.str("tmpl.json") +
                       " -n 5 --seed 3 -o " + tmp.str("data"),
                   tmp.path)
              .exit_code == 0);
  REQUIRE(run_tool("lm-train --corpus " + tmp.str("data") + "/corpus.txt" +
                       " --out " + tmp.str("model.json"),
                   tmp.path)
              .exit_code == 0);
  REQUIRE(run_tool("spot --detections " + tmp.str("data") +
                       "/detections.json --model " + tmp.str("model.json") +
                       " --out " + tmp.str("spotted.json"),
                   tmp.path)
              .exit_code == 0);
  const RunResult eval = run_tool(
      "eval --spotted " + tmp.str("spotted.json") + " --gt " +
          tmp.str("data") + "/gt.json",
      tmp.path);
  REQUIRE(eval.exit_code == 0);
  const json report = json::parse(eval.out);
  CHECK(report.at("global").at("precision").get<double>() == 1.0);
  CHECK(report.at("global").at("recall").get<double>() == 1.0);
  CHECK(report.at("global").at("f_measure").get<double>() == 1.0);
  CHECK(report.at("global").at("one_minus_ned").get<double>() == 1.0);
  CHECK(report.at("per_image").size() == 5);

  // table rendering carries a global row
  const RunResult table = run_tool(
      "eval --spotted " + tmp.str("spotted.json") + " --gt " +
          tmp.str("data") + "/gt.json --format table",
      tmp.path);
  REQUIRE(table.exit_code == 0);
  CHECK(table.out.find("GLOBAL") != std::string::npos);

  // spotted files with the right ids but no lines score zero
  json empty_spotted{{"images", json::array()}};
  for (int i = 0; i < 5; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "scene_%06d", i);
    empty_spotted["images"].push_back(
        {{"image_id", id}, {"lines", json::array()}});
  }
  ambispot::io::write_file(tmp.str("empty.json"), empty_spotted.dump());
  const RunResult zeros = run_tool(
      "eval --spotted " + tmp.str("empty.json") + " --gt " +
          tmp.str("data") + "/gt.json",
      tmp.path);
  REQUIRE(zeros.exit_code == 0);
  const json zero_report = json::parse(zeros.out);
  CHECK(zero_report.at("global").at("recall").get<double>() == 0.0);
  CHECK(zero_report.at("global").at("f_measure").get<double>() == 0.0);

  // mismatched id sets are an input error naming the difference
  json wrong{{"images",
              {{{"image_id", "nope"}, {"lines", json::array()}}}}};
  ambispot::io::write_file(tmp.str("wrong.json"), wrong.dump());
  const RunResult bad = run_tool(
      "eval --spotted " + tmp.str("wrong.json") + " --gt " +
          tmp.str("data") + "/gt.json",
      tmp.path);
  CHECK(bad.exit_code == 2);
  CHECK(bad.err.find("nope") != std::string::npos);
}

TEST_CASE("curate writes a sorted deterministic id list") {
  TempDir tmp;
  write_grid_template(tmp.str("tmpl.json"), 0.0);
  REQUIRE(run_tool("gen --template " + tmp.str("tmpl.json") +
                       " -n 12 --seed 5 -o " + tmp.str("data"),
                   tmp.path)
              .exit_code == 0);
  const RunResult a = run_tool(
      "curate --gt " + tmp.str("data") + "/gt.json -n 6 --seed 17 --out " +
          tmp.str("ids_a.txt"),
      tmp.path);
  REQUIRE(a.exit_code == 0);
  const json stats = json::parse(a.out);
  CHECK(stats.at("total_images").get<int>() == 12);
  CHECK(stats.at("ambiguous_images").get<int>() == 12);
  CHECK(stats.at("rows").size() == 3);

  const RunResult b = run_tool(
      "curate --gt " + tmp.str("data") + "/gt.json -n 6 --seed 17 --out " +
          tmp.str("ids_b.txt"),
      tmp.path);
  REQUIRE(b.exit_code == 0);
  CHECK(ambispot::io::read_file(tmp.str("ids_a.txt")) ==
        ambispot::io::read_file(tmp.str("ids_b.txt")));
  CHECK(a.out == b.out);

  // asking for more than exists is an input error
  const RunResult over = run_tool(
      "curate --gt " + tmp.str("data") + "/gt.json -n 13 --seed 17 --out " +
          tmp.str("ids_c.txt"),
      tmp.path);
  CHECK(over.exit_code == 2);
  CHECK(json::parse(over.err).at("error").at("kind") ==
        "insufficient-ambiguous");
}

TEST_CASE("duplicate image ids across a detections file are rejected") {
  TempDir tmp;
  json doc{{"images", json::array()}};
  for (int i = 0; i < 2; ++i) {
    doc["images"].push_back({{"image_id", "same"},
                             {"chars", json::array()},
                             {"lines", json::array()}});
  }
  ambispot::io::write_file(tmp.str("dets.json"), doc.dump());
  const RunResult r = run_tool(
      "spot --detections " + tmp.str("dets.json") + " --no-lm --out " +
          tmp.str("out.json"),
      tmp.path);
  CHECK(r.exit_code == 2);
  CHECK(json::parse(r.err).at("error").at("kind") == "duplicate-id");
}

TEST_CASE("missing and malformed inputs exit with the input-error code") {
  TempDir tmp;
  const RunResult missing = run_tool(
      "spot --detections /definitely/absent.json --no-lm --out " +
          tmp.str("out.json"),
      tmp.path);
  CHECK(missing.exit_code == 2);
  CHECK(json::parse(missing.err).at("error").at("kind") == "io-error");

  ambispot::io::write_file(tmp.str("garbage.json"), "{nope");
  const RunResult malformed = run_tool(
      "spot --detections " + tmp.str("garbage.json") + " --no-lm --out " +
          tmp.str("out.json"),
      tmp.path);
  CHECK(malformed.exit_code == 2);
  CHECK(json::parse(malformed.err).at("error").at("kind") == "parse-error");
}
