#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "groupwalk/pipeline.hpp"
#include "groupwalk/synth.hpp"
#include "groupwalk/tracking.hpp"

// Wire formats. Detection and truth files are newline-delimited records with
// comma (or whitespace) separated fields in a fixed order:
//
//   detections:    frame,id,x,y,w,h
//   ground truth:  frame,id,group
//
// Blank lines, lines starting with '#', and a leading header line whose first
// field is "frame" are skipped. Engine output is JSON Lines, one object per
// frame:
//
//   {"frame":F,"ids":[..],"labels":[..],"m":M,"event":B,
//    "groups":[{"label":L,"members":[..]},..]}

namespace groupwalk {

std::vector<Detection> read_detections(std::istream& in);
std::vector<TruthRecord> read_truth(std::istream& in);

void write_detections(std::ostream& out, std::span<const Detection> dets);
void write_truth(std::ostream& out, std::span<const TruthRecord> truth);

// Incremental reader that hands out one frame at a time, filling skipped
// frame indices with empty batches. Errors carry the offending line number.
class DetectionReader {
public:
  explicit DetectionReader(std::istream& in);

  std::optional<FrameBatch> next();

private:
  std::optional<Detection> read_record();

  std::istream& in_;
  std::int64_t line_ = 0;
  bool header_checked_ = false;
  std::optional<Detection> pending_;
  std::optional<FrameIndex> last_emitted_;
};

std::string format_frame_result(const FrameResult& r);

// Reads detections from `in`, runs the engine frame by frame and writes one
// JSON line per frame as soon as that frame is complete.
void run_stream(std::istream& in, std::ostream& out, const RunConfig& cfg);

std::string format_report(const EvaluationReport& report, bool per_frame);
void write_sweep_csv(std::ostream& out, std::span<const SweepCell> cells);

ScenarioSpec parse_scenario(std::istream& in);
std::string format_scenario(const ScenarioSpec& spec);

// Shortest representation that round-trips.
std::string format_number(double v);

}  // namespace groupwalk
