#pragma once

#include <span>
#include <vector>

#include "groupwalk/events.hpp"
#include "groupwalk/similarity.hpp"
#include "groupwalk/spectral.hpp"
#include "groupwalk/synth.hpp"
#include "groupwalk/tracking.hpp"

namespace groupwalk {

struct RunConfig {
  SimilarityParams similarity{};
  KalmanConfig kalman{};
  SpectralOptions spectral{};
  int max_gap = 10;
  int burn_in = 0;  // leading frames excluded from scoring

  void validate() const;
};

struct FrameResult {
  FrameIndex frame = 0;
  FrameClustering clustering;  // empty ids and m = 0 when nothing was observed
  GroupEvent event;
};

// Online engine: one call per frame, in strictly increasing frame order. The
// clustering covers the tracks observed in that frame.
class Engine {
public:
  explicit Engine(RunConfig cfg);

  FrameResult process(FrameIndex frame, std::span<const Detection> dets);

  const TrackStore& store() const { return store_; }
  const RunConfig& config() const { return cfg_; }

private:
  RunConfig cfg_;
  TrackStore store_;
};

struct FrameBatch {
  FrameIndex frame = 0;
  std::vector<Detection> detections;
};

// Groups a detection list into one batch per frame from the first to the last
// frame index, inserting empty batches for skipped frames. Throws FormatError
// if frames are not grouped in ascending order.
std::vector<FrameBatch> batch_by_frame(std::span<const Detection> dets);

std::vector<FrameResult> run(std::span<const Detection> dets, const RunConfig& cfg);
std::vector<FrameResult> run(const Scenario& scenario, const RunConfig& cfg);

struct FrameScore {
  FrameIndex frame = 0;
  double ami = 0.0;
  bool predicted_event = false;
  bool truth_event = false;
};

struct EvaluationReport {
  double mean_ami = 0.0;
  std::vector<FrameScore> frames;  // scored frames only
  std::int64_t true_positives = 0;
  std::int64_t false_positives = 0;
  std::int64_t false_negatives = 0;
  double event_precision = 1.0;  // 1 when nothing was predicted
  double event_recall = 1.0;     // 1 when the truth has no events
};

// Scores every frame that has detections and lies past the burn-in window.
// Truth must list exactly the observed ids of each such frame and nothing for
// frames without detections; otherwise throws AlignmentError.
EvaluationReport score(const std::vector<FrameResult>& results,
                       std::span<const TruthRecord> truth, int burn_in);

EvaluationReport evaluate(std::span<const Detection> dets, std::span<const TruthRecord> truth,
                          const RunConfig& cfg);

struct SweepCell {
  double a = 0.0;
  double b = 0.0;
  double mean_ami = 0.0;
};

// One cell per (a, b), a-major. Cells run concurrently with isolated engines.
std::vector<SweepCell> sweep(std::span<const Detection> dets, std::span<const TruthRecord> truth,
                             std::span<const double> a_grid, std::span<const double> b_grid,
                             const RunConfig& cfg);

inline const std::vector<double> kDefaultAGrid{2.0, 4.0, 6.0, 8.0, 10.0};
inline const std::vector<double> kDefaultBGrid{10.0, 100.0, 1000.0};

// Flattens a generated scenario into detection and truth record streams.
std::vector<Detection> flatten_detections(const Scenario& scenario);
std::vector<TruthRecord> flatten_truth(const Scenario& scenario);

}  // namespace groupwalk
