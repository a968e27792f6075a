#include "ambispot/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ambispot/error.hpp"
#include "ambispot/utf8.hpp"

namespace ambispot::io {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::parse_error, where + ": " + what);
}

json parse_json(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    throw Error(ErrorKind::parse_error, "not valid JSON");
  }
  return doc;
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where, "expected a number");
  return j.get<double>();
}

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) schema_error(where, "expected a string");
  return j.get<std::string>();
}

std::int64_t get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    schema_error(where, "expected an integer");
  }
  return j.get<std::int64_t>();
}

char32_t get_label(const json& j, const std::string& where) {
  if (!j.is_string()) schema_error(where, "expected a string label");
  const std::u32string scalars = utf8::decode(j.get<std::string>());
  if (scalars.size() != 1) {
    schema_error(where, "label must be exactly one Unicode scalar value");
  }
  return scalars[0];
}

geom::AxisAlignedBox get_box(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) {
    schema_error(where, "box must be [x_min,y_min,x_max,y_max]");
  }
  try {
    return geom::AxisAlignedBox::make(
        get_number(j[0], where), get_number(j[1], where),
        get_number(j[2], where), get_number(j[3], where));
  } catch (const Error& e) {
    throw Error(e.kind(), where + ": " + e.what());
  }
}

geom::ConvexPolygon get_polygon(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() < 3) {
    schema_error(where, "polygon must be an array of at least 3 [x,y] pairs");
  }
  std::vector<geom::Point> pts;
  pts.reserve(j.size());
  for (const json& p : j) {
    if (!p.is_array() || p.size() != 2) {
      schema_error(where, "polygon vertex must be [x,y]");
    }
    pts.push_back({get_number(p[0], where), get_number(p[1], where)});
  }
  try {
    return geom::ConvexPolygon::make(std::move(pts));
  } catch (const Error& e) {
    throw Error(e.kind(), where + ": " + e.what());
  }
}

json box_json(const geom::AxisAlignedBox& b) {
  return json::array({b.x_min, b.y_min, b.x_max, b.y_max});
}

json polygon_json(const geom::ConvexPolygon& p) {
  json arr = json::array();
  for (const geom::Point& v : p.vertices()) {
    arr.push_back(json::array({v.x, v.y}));
  }
  return arr;
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    schema_error(where, std::string("missing field \"") + key + "\"");
  }
  return *it;
}

const json& require_array(const json& obj, const char* key,
                          const std::string& where) {
  const json& value = require(obj, key, where);
  if (!value.is_array()) {
    schema_error(where, std::string("\"") + key + "\" must be an array");
  }
  return value;
}

const json& images_of(const json& doc, const char* what) {
  if (!doc.is_object()) schema_error(what, "top level must be an object");
  const json& images = require(doc, "images", what);
  if (!images.is_array()) schema_error(what, "\"images\" must be an array");
  return images;
}

}  // namespace

std::vector<model::DetectionBundle> parse_detections(const std::string& text) {
  const json doc = parse_json(text);
  std::vector<model::DetectionBundle> bundles;
  std::size_t index = 0;
  for (const json& img : images_of(doc, "detections")) {
    const std::string base = "images[" + std::to_string(index++) + "]";
    model::DetectionBundle bundle;
    bundle.image_id = get_string(require(img, "image_id", base), base);
    const std::string where = base + "(" + bundle.image_id + ")";
    const json& chars = require_array(img, "chars", where);
    for (std::size_t i = 0; i < chars.size(); ++i) {
      const std::string cw = where + ".chars[" + std::to_string(i) + "]";
      model::CharDetection c;
      c.box = get_box(require(chars[i], "box", cw), cw);
      c.label = get_label(require(chars[i], "label", cw), cw);
      c.score = get_number(require(chars[i], "score", cw), cw);
      bundle.chars.push_back(c);
    }
    const json& lines = require_array(img, "lines", where);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::string lw = where + ".lines[" + std::to_string(i) + "]";
      const json& jl = lines[i];
      bundle.lines.push_back({get_int(require(jl, "id", lw), lw),
                              get_polygon(require(jl, "polygon", lw), lw),
                              get_number(require(jl, "score", lw), lw)});
    }
    try {
      bundles.push_back(model::validate_bundle(std::move(bundle)));
    } catch (const Error& e) {
      throw Error(e.kind(), where + ": " + e.what());
    }
  }
  return bundles;
}

std::string serialize_detections(
    const std::vector<model::DetectionBundle>& bundles) {
  json images = json::array();
  for (const model::DetectionBundle& bundle : bundles) {
    json chars = json::array();
    for (const model::CharDetection& c : bundle.chars) {
      chars.push_back({{"box", box_json(c.box)},
                       {"label", utf8::encode(c.label)},
                       {"score", c.score}});
    }
    json lines = json::array();
    for (const model::LineCandidate& line : bundle.lines) {
      lines.push_back({{"id", line.id},
                       {"polygon", polygon_json(line.polygon)},
                       {"score", line.visual_score}});
    }
    images.push_back({{"image_id", bundle.image_id},
                      {"chars", std::move(chars)},
                      {"lines", std::move(lines)}});
  }
  return json{{"images", std::move(images)}}.dump() + "\n";
}

std::vector<model::ImageRecord> parse_ground_truth(const std::string& text) {
  const json doc = parse_json(text);
  std::vector<model::ImageRecord> records;
  std::size_t index = 0;
  for (const json& img : images_of(doc, "ground truth")) {
    const std::string base = "images[" + std::to_string(index++) + "]";
    model::ImageRecord rec;
    rec.image_id = get_string(require(img, "image_id", base), base);
    const std::string where = base + "(" + rec.image_id + ")";
    rec.width = get_number(require(img, "width", where), where);
    rec.height = get_number(require(img, "height", where), where);
    const json& lines = require_array(img, "lines", where);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::string lw = where + ".lines[" + std::to_string(i) + "]";
      const json& jl = lines[i];
      const json& ignore = require(jl, "ignore", lw);
      if (!ignore.is_boolean()) schema_error(lw, "ignore must be a boolean");
      rec.gt_lines.push_back(
          {get_polygon(require(jl, "polygon", lw), lw),
           utf8::decode(get_string(require(jl, "transcript", lw), lw)),
           ignore.get<bool>()});
    }
    const json& chars = require_array(img, "chars", where);
    for (std::size_t i = 0; i < chars.size(); ++i) {
      const std::string cw = where + ".chars[" + std::to_string(i) + "]";
      const json& jc = chars[i];
      const std::int64_t raw = get_int(require(jc, "line_index", cw), cw);
      if (raw < 0) schema_error(cw, "line_index must be non-negative");
      rec.gt_chars.push_back({get_box(require(jc, "box", cw), cw),
                              get_label(require(jc, "label", cw), cw),
                              static_cast<std::size_t>(raw)});
    }
    try {
      model::validate_record(rec);
    } catch (const Error& e) {
      throw Error(e.kind(), where + ": " + e.what());
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::string serialize_ground_truth(
    const std::vector<model::ImageRecord>& records) {
  json images = json::array();
  for (const model::ImageRecord& rec : records) {
    json lines = json::array();
    for (const model::GroundTruthLine& line : rec.gt_lines) {
      lines.push_back({{"polygon", polygon_json(line.polygon)},
                       {"transcript", utf8::encode(line.transcript)},
                       {"ignore", line.ignore}});
    }
    json chars = json::array();
    for (const model::GroundTruthChar& c : rec.gt_chars) {
      chars.push_back({{"box", box_json(c.box)},
                       {"label", utf8::encode(c.label)},
                       {"line_index", c.line_index}});
    }
    images.push_back({{"image_id", rec.image_id},
                      {"width", rec.width},
                      {"height", rec.height},
                      {"lines", std::move(lines)},
                      {"chars", std::move(chars)}});
  }
  return json{{"images", std::move(images)}}.dump() + "\n";
}

std::vector<SpottedImage> parse_spotted(const std::string& text) {
  const json doc = parse_json(text);
  std::vector<SpottedImage> images;
  std::size_t index = 0;
  for (const json& img : images_of(doc, "spotted")) {
    const std::string base = "images[" + std::to_string(index++) + "]";
    SpottedImage si;
    si.image_id = get_string(require(img, "image_id", base), base);
    const std::string where = base + "(" + si.image_id + ")";
    const json& lines = require_array(img, "lines", where);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::string lw = where + ".lines[" + std::to_string(i) + "]";
      const json& jl = lines[i];
      si.lines.push_back(
          {get_polygon(require(jl, "polygon", lw), lw),
           utf8::decode(get_string(require(jl, "transcript", lw), lw)),
           get_number(require(jl, "s_vis", lw), lw),
           get_number(require(jl, "s_lin", lw), lw),
           get_number(require(jl, "s", lw), lw)});
    }
    images.push_back(std::move(si));
  }
  return images;
}

std::string serialize_spotted(const std::vector<SpottedImage>& images) {
  json out_images = json::array();
  for (const SpottedImage& si : images) {
    json lines = json::array();
    for (const model::SpottedLine& line : si.lines) {
      lines.push_back({{"polygon", polygon_json(line.polygon)},
                       {"transcript", utf8::encode(line.transcript)},
                       {"s_vis", line.visual_score},
                       {"s_lin", line.linguistic_score},
                       {"s", line.final_score}});
    }
    out_images.push_back(
        {{"image_id", si.image_id}, {"lines", std::move(lines)}});
  }
  return json{{"images", std::move(out_images)}}.dump() + "\n";
}

lm::NgramModel parse_model(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) schema_error("model", "top level must be an object");
  if (get_int(require(doc, "version", "model"), "model") != 1) {
    schema_error("model", "unsupported model version");
  }
  lm::NgramModel m;
  m.order = static_cast<int>(get_int(require(doc, "n", "model"), "model"));
  m.smoothing_k = get_number(require(doc, "smoothing_k", "model"), "model");
  m.max_len =
      static_cast<int>(get_int(require(doc, "max_len", "model"), "model"));
  if (m.order < 1 || !(m.smoothing_k > 0.0) || m.max_len < 1) {
    schema_error("model", "invalid hyperparameters");
  }
  const json& cal = require(doc, "calibration", "model");
  m.calibration.a = get_number(require(cal, "a", "model.calibration"),
                               "model.calibration");
  m.calibration.b = get_number(require(cal, "b", "model.calibration"),
                               "model.calibration");
  for (const json& v : require_array(doc, "vocab", "model")) {
    m.vocab.insert(get_label(v, "model.vocab"));
  }
  const std::size_t ctx_len = static_cast<std::size_t>(m.order - 1);
  for (const json& entry : require_array(doc, "counts", "model")) {
    const std::u32string ctx =
        utf8::decode(get_string(require(entry, "ctx", "model.counts"),
                                "model.counts"));
    if (ctx.size() != ctx_len) {
      schema_error("model.counts", "context length does not match n");
    }
    const char32_t next = get_label(require(entry, "next", "model.counts"),
                                    "model.counts");
    const std::int64_t raw =
        get_int(require(entry, "count", "model.counts"), "model.counts");
    if (raw < 0) schema_error("model.counts", "count must be non-negative");
    m.counts[ctx][next] += static_cast<std::uint64_t>(raw);
    m.context_totals[ctx] += static_cast<std::uint64_t>(raw);
  }
  return m;
}

std::string serialize_model(const lm::NgramModel& m) {
  json vocab = json::array();
  for (char32_t c : m.vocab) vocab.push_back(utf8::encode(c));
  json counts = json::array();
  for (const auto& [ctx, nexts] : m.counts) {
    for (const auto& [next, count] : nexts) {
      counts.push_back({{"ctx", utf8::encode(ctx)},
                        {"next", utf8::encode(next)},
                        {"count", count}});
    }
  }
  return json{{"version", 1},
              {"n", m.order},
              {"smoothing_k", m.smoothing_k},
              {"max_len", m.max_len},
              {"calibration", {{"a", m.calibration.a}, {"b", m.calibration.b}}},
              {"vocab", std::move(vocab)},
              {"counts", std::move(counts)}}
             .dump() +
         "\n";
}

std::string serialize_stats(const ambiguity::DatasetStats& stats) {
  json rows = json::array();
  rows.push_back({{"type", "large_character_spacing"},
                  {"count", stats.large_spacing_lines},
                  {"proportion", stats.large_spacing_pct()}});
  rows.push_back({{"type", "juxtaposed_text_lines"},
                  {"count", stats.juxtaposed_lines},
                  {"proportion", stats.juxtaposed_pct()}});
  rows.push_back({{"type", "union"},
                  {"count", stats.union_lines},
                  {"proportion", stats.union_pct()}});
  return json{{"rows", std::move(rows)},
              {"total_lines", stats.total_lines},
              {"ambiguous_images", stats.ambiguous_images},
              {"total_images", stats.total_images}}
             .dump() +
         "\n";
}

namespace {

json report_json(const metrics::EvalReport& r) {
  return {{"precision", r.precision},
          {"recall", r.recall},
          {"f_measure", r.f_measure},
          {"one_minus_ned", r.one_minus_ned},
          {"matched", r.matched},
          {"false_positives", r.false_positives},
          {"missed", r.missed}};
}

}  // namespace

std::string serialize_eval(
    const metrics::EvalReport& global,
    const std::vector<std::pair<std::string, metrics::EvalReport>>& per_image) {
  json per = json::array();
  for (const auto& [id, report] : per_image) {
    json entry = report_json(report);
    entry["image_id"] = id;
    per.push_back(std::move(entry));
  }
  return json{{"global", report_json(global)}, {"per_image", std::move(per)}}
             .dump() +
         "\n";
}

std::string format_eval_table(
    const metrics::EvalReport& global,
    const std::vector<std::pair<std::string, metrics::EvalReport>>& per_image) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-16s %9s %9s %9s %9s %7s %5s %7s\n",
                "image", "P", "R", "F", "1-NED", "match", "fp", "missed");
  out << buf;
  auto row = [&](const std::string& name, const metrics::EvalReport& r) {
    std::snprintf(buf, sizeof(buf),
                  "%-16s %9.4f %9.4f %9.4f %9.4f %7zu %5zu %7zu\n",
                  name.c_str(), r.precision, r.recall, r.f_measure,
                  r.one_minus_ned, r.matched, r.false_positives, r.missed);
    out << buf;
  };
  for (const auto& [id, report] : per_image) row(id, report);
  row("GLOBAL", global);
  return out.str();
}

std::vector<std::u32string> parse_corpus(const std::string& text) {
  std::vector<std::u32string> lines;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    lines.push_back(utf8::decode(line));
  }
  return lines;
}

std::string serialize_corpus(const std::vector<std::u32string>& lines) {
  std::string out;
  for (const std::u32string& line : lines) {
    out += utf8::encode(line);
    out.push_back('\n');
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::io_error, "cannot open " + path + " for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorKind::io_error, "read failed for " + path);
  }
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorKind::io_error, "cannot open " + path + " for writing");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw Error(ErrorKind::io_error, "write failed for " + path);
  }
}

}  // namespace ambispot::io
