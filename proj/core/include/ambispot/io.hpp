#ifndef AMBISPOT_IO_HPP
#define AMBISPOT_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "ambispot/ambiguity.hpp"
#include "ambispot/lm.hpp"
#include "ambispot/metrics.hpp"
#include "ambispot/model.hpp"

namespace ambispot::io {

// JSON file schemas. All numbers use the shortest decimal representation
// that round-trips, so identical inputs always serialize to identical
// bytes.
//
// detections: {"images":[{"image_id":str,
//   "chars":[{"box":[x_min,y_min,x_max,y_max],"label":str,"score":num}],
//   "lines":[{"id":int,"polygon":[[x,y],...],"score":num}]}]}
// ground truth: {"images":[{"image_id":str,"width":num,"height":num,
//   "lines":[{"polygon":[[x,y],...],"transcript":str,"ignore":bool}],
//   "chars":[{"box":[...],"label":str,"line_index":int}]}]}
// spotted: {"images":[{"image_id":str,
//   "lines":[{"polygon":[[x,y],...],"transcript":str,
//             "s_vis":num,"s_lin":num,"s":num}]}]}

std::vector<model::DetectionBundle> parse_detections(const std::string& text);
std::string serialize_detections(const std::vector<model::DetectionBundle>& bundles);

std::vector<model::ImageRecord> parse_ground_truth(const std::string& text);
std::string serialize_ground_truth(const std::vector<model::ImageRecord>& records);

struct SpottedImage {
  std::string image_id;
  std::vector<model::SpottedLine> lines;
};

std::vector<SpottedImage> parse_spotted(const std::string& text);
std::string serialize_spotted(const std::vector<SpottedImage>& images);

// Versioned n-gram model document:
// {"version":1,"n":int,"smoothing_k":num,"max_len":int,
//  "calibration":{"a":num,"b":num},"vocab":[str,...],
//  "counts":[{"ctx":str,"next":str,"count":int},...]}
lm::NgramModel parse_model(const std::string& text);
std::string serialize_model(const lm::NgramModel& m);

std::string serialize_stats(const ambiguity::DatasetStats& stats);

std::string serialize_eval(
    const metrics::EvalReport& global,
    const std::vector<std::pair<std::string, metrics::EvalReport>>& per_image);

// aligned plain-text rendering of an evaluation report
std::string format_eval_table(
    const metrics::EvalReport& global,
    const std::vector<std::pair<std::string, metrics::EvalReport>>& per_image);

// transcript corpus: UTF-8 text, one transcript per line
std::vector<std::u32string> parse_corpus(const std::string& text);
std::string serialize_corpus(const std::vector<std::u32string>& lines);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace ambispot::io

#endif
