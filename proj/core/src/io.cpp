#include "groupwalk/io.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "groupwalk/error.hpp"

namespace groupwalk {

namespace {

using Json = nlohmann::ordered_json;

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
      ++i;
    }
    std::size_t j = i;
    while (j < line.size() && line[j] != ',' && line[j] != ' ' && line[j] != '\t' &&
           line[j] != '\r') {
      ++j;
    }
    if (j > i) {
      out.push_back(line.substr(i, j - i));
    }
    while (j < line.size() && (line[j] == ' ' || line[j] == '\t' || line[j] == '\r')) {
      ++j;
    }
    if (j < line.size() && line[j] == ',') {
      ++j;
    }
    i = j;
  }
  return out;
}

[[noreturn]] void fail(std::int64_t line, const std::string& what) {
  throw FormatError("line " + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_field(std::string_view f, std::int64_t line, const char* name) {
  T v{};
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc{} || ptr != f.data() + f.size()) {
    fail(line, std::string("cannot parse ") + name + " '" + std::string(f) + "'");
  }
  return v;
}

bool skippable(std::string_view line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string_view::npos || line[pos] == '#';
}

// Yields field lists of data lines, skipping comments and the optional header.
class RecordLines {
public:
  explicit RecordLines(std::istream& in) : in_(in) {}

  bool next(std::vector<std::string_view>& fields) {
    while (std::getline(in_, buf_)) {
      ++line_;
      if (skippable(buf_)) {
        continue;
      }
      fields = split_fields(buf_);
      if (!seen_data_) {
        seen_data_ = true;
        if (!fields.empty() && fields.front() == "frame") {
          continue;
        }
      }
      return true;
    }
    return false;
  }

  std::int64_t line() const { return line_; }

private:
  std::istream& in_;
  std::string buf_;
  std::int64_t line_ = 0;
  bool seen_data_ = false;
};

Detection parse_detection(const std::vector<std::string_view>& f, std::int64_t line) {
  if (f.size() != 6) {
    fail(line, "expected 6 fields (frame,id,x,y,w,h), got " + std::to_string(f.size()));
  }
  Detection d;
  d.frame = parse_field<FrameIndex>(f[0], line, "frame");
  d.id = parse_field<TrackId>(f[1], line, "id");
  d.x = parse_field<double>(f[2], line, "x");
  d.y = parse_field<double>(f[3], line, "y");
  d.w = parse_field<double>(f[4], line, "w");
  d.h = parse_field<double>(f[5], line, "h");
  try {
    validate(d);
  } catch (const ContractViolation& e) {
    fail(line, e.what());
  }
  return d;
}

Json vec_json(const Vec2& v) { return Json::array({v.x, v.y}); }

Vec2 vec_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw FormatError("scenario: expected a [x, y] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::vector<Detection> read_detections(std::istream& in) {
  RecordLines lines(in);
  std::vector<Detection> out;
  std::vector<std::string_view> f;
  while (lines.next(f)) {
    out.push_back(parse_detection(f, lines.line()));
  }
  return out;
}

std::vector<TruthRecord> read_truth(std::istream& in) {
  RecordLines lines(in);
  std::vector<TruthRecord> out;
  std::vector<std::string_view> f;
  while (lines.next(f)) {
    if (f.size() != 3) {
      fail(lines.line(), "expected 3 fields (frame,id,group), got " + std::to_string(f.size()));
    }
    out.push_back({parse_field<FrameIndex>(f[0], lines.line(), "frame"),
                   parse_field<TrackId>(f[1], lines.line(), "id"),
                   parse_field<std::int64_t>(f[2], lines.line(), "group")});
  }
  return out;
}

void write_detections(std::ostream& out, std::span<const Detection> dets) {
  for (const Detection& d : dets) {
    out << d.frame << ',' << d.id << ',' << format_number(d.x) << ',' << format_number(d.y) << ','
        << format_number(d.w) << ',' << format_number(d.h) << '\n';
  }
}

void write_truth(std::ostream& out, std::span<const TruthRecord> truth) {
  for (const TruthRecord& r : truth) {
    out << r.frame << ',' << r.id << ',' << r.group << '\n';
  }
}

DetectionReader::DetectionReader(std::istream& in) : in_(in) {}

std::optional<Detection> DetectionReader::read_record() {
  std::string buf;
  while (std::getline(in_, buf)) {
    ++line_;
    if (skippable(buf)) {
      continue;
    }
    const auto fields = split_fields(buf);
    if (!header_checked_) {
      header_checked_ = true;
      if (!fields.empty() && fields.front() == "frame") {
        continue;
      }
    }
    Detection d = parse_detection(fields, line_);
    if (last_emitted_ && d.frame <= *last_emitted_) {
      fail(line_, "frame " + std::to_string(d.frame) + " is not after frame " +
                      std::to_string(*last_emitted_));
    }
    return d;
  }
  return std::nullopt;
}

std::optional<FrameBatch> DetectionReader::next() {
  if (!pending_) {
    pending_ = read_record();
    if (!pending_) {
      return std::nullopt;
    }
  }
  FrameBatch batch;
  batch.frame = last_emitted_ ? *last_emitted_ + 1 : pending_->frame;
  if (pending_->frame > batch.frame) {
    last_emitted_ = batch.frame;
    return batch;
  }
  batch.detections.push_back(*pending_);
  pending_.reset();
  for (;;) {
    std::optional<Detection> d = read_record();
    if (!d) {
      break;
    }
    if (d->frame < batch.frame) {
      fail(line_, "frame " + std::to_string(d->frame) + " appears after frame " +
                      std::to_string(batch.frame));
    }
    if (d->frame != batch.frame) {
      pending_ = d;
      break;
    }
    batch.detections.push_back(*d);
  }
  last_emitted_ = batch.frame;
  return batch;
}

std::string format_frame_result(const FrameResult& r) {
  Json j;
  j["frame"] = r.frame;
  j["ids"] = r.clustering.ids;
  j["labels"] = r.clustering.labels;
  j["m"] = r.clustering.m;
  j["event"] = r.event.active;
  Json groups = Json::array();
  for (const Group& g : r.event.groups) {
    groups.push_back(Json{{"label", g.label}, {"members", g.members}});
  }
  j["groups"] = std::move(groups);
  return j.dump();
}

void run_stream(std::istream& in, std::ostream& out, const RunConfig& cfg) {
  Engine engine(cfg);
  DetectionReader reader(in);
  while (auto batch = reader.next()) {
    out << format_frame_result(engine.process(batch->frame, batch->detections)) << '\n';
  }
}

std::string format_report(const EvaluationReport& report, bool per_frame) {
  Json j;
  j["mean_ami"] = report.mean_ami;
  j["scored_frames"] = report.frames.size();
  j["event_precision"] = report.event_precision;
  j["event_recall"] = report.event_recall;
  j["true_positives"] = report.true_positives;
  j["false_positives"] = report.false_positives;
  j["false_negatives"] = report.false_negatives;
  if (per_frame) {
    Json frames = Json::array();
    for (const FrameScore& f : report.frames) {
      frames.push_back(Json{{"frame", f.frame},
                            {"ami", f.ami},
                            {"event", f.predicted_event},
                            {"truth_event", f.truth_event}});
    }
    j["frames"] = std::move(frames);
  }
  return j.dump(2);
}

void write_sweep_csv(std::ostream& out, std::span<const SweepCell> cells) {
  out << "a,b,mean_ami\n";
  for (const SweepCell& c : cells) {
    out << format_number(c.a) << ',' << format_number(c.b) << ',' << format_number(c.mean_ami)
        << '\n';
  }
}

ScenarioSpec parse_scenario(std::istream& in) {
  ScenarioSpec s;
  try {
    const Json j = Json::parse(in);
    s.frames = j.value("frames", s.frames);
    s.obs_noise = j.value("obs_noise", s.obs_noise);
    s.size_base = j.value("size_base", s.size_base);
    s.seed = j.value("seed", s.seed);
    if (j.contains("depth_scale")) {
      s.depth_scale = j.at("depth_scale").get<double>();
    }
    for (const Json& g : j.value("groups", Json::array())) {
      s.groups.push_back({g.at("members").get<int>(), vec_from(g.at("spawn")),
                          vec_from(g.at("velocity")), g.value("spacing", 30.0)});
    }
    for (const Json& g : j.value("singletons", Json::array())) {
      s.singletons.push_back({vec_from(g.at("spawn")), vec_from(g.at("velocity"))});
    }
    if (j.contains("split_at")) {
      const Json& sp = j.at("split_at");
      SplitSpec split;
      split.frame = sp.at("frame").get<FrameIndex>();
      split.group = sp.at("group").get<std::size_t>();
      for (const Json& p : sp.at("parts")) {
        split.parts.push_back({p.at("members").get<int>(), vec_from(p.at("velocity"))});
      }
      s.split_at = std::move(split);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("scenario: ") + e.what());
  }
  s.validate();
  return s;
}

std::string format_scenario(const ScenarioSpec& s) {
  Json j;
  j["frames"] = s.frames;
  j["obs_noise"] = s.obs_noise;
  j["size_base"] = s.size_base;
  j["seed"] = s.seed;
  if (s.depth_scale) {
    j["depth_scale"] = *s.depth_scale;
  }
  Json groups = Json::array();
  for (const GroupSpec& g : s.groups) {
    groups.push_back(Json{{"members", g.members},
                          {"spawn", vec_json(g.spawn)},
                          {"velocity", vec_json(g.velocity)},
                          {"spacing", g.spacing}});
  }
  j["groups"] = std::move(groups);
  Json singles = Json::array();
  for (const SingletonSpec& g : s.singletons) {
    singles.push_back(Json{{"spawn", vec_json(g.spawn)}, {"velocity", vec_json(g.velocity)}});
  }
  j["singletons"] = std::move(singles);
  if (s.split_at) {
    Json parts = Json::array();
    for (const SplitPart& p : s.split_at->parts) {
      parts.push_back(Json{{"members", p.members}, {"velocity", vec_json(p.velocity)}});
    }
    j["split_at"] = Json{{"frame", s.split_at->frame}, {"group", s.split_at->group},
                         {"parts", std::move(parts)}};
  }
  return j.dump(2);
}

}  // namespace groupwalk
