#include "groupwalk/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <string>

#include "groupwalk/error.hpp"
#include "groupwalk/eval.hpp"

namespace groupwalk {

void RunConfig::validate() const {
  similarity.validate();
  kalman.validate();
  if (!(spectral.eigengap_coefficient > 0.0)) {
    throw ContractViolation("eigengap coefficient must be > 0");
  }
  if (!(spectral.flat_spectrum >= 0.0) || !std::isfinite(spectral.flat_spectrum)) {
    throw ContractViolation("flat-spectrum tolerance must be finite and >= 0");
  }
  if (max_gap < 0 || burn_in < 0) {
    throw ContractViolation("max_gap and burn_in must be >= 0");
  }
}

namespace {

const RunConfig& validated(const RunConfig& cfg) {
  cfg.validate();
  return cfg;
}

// Dense 1-based relabelling of arbitrary ground-truth group labels.
std::vector<int> dense_labels(const Partition& p) {
  std::map<std::int64_t, int> seen;
  std::vector<int> out;
  out.reserve(p.size());
  for (std::int64_t l : p) {
    out.push_back(seen.try_emplace(l, static_cast<int>(seen.size()) + 1).first->second);
  }
  return out;
}

}  // namespace

Engine::Engine(RunConfig cfg)
    : cfg_(validated(cfg)), store_(cfg_.kalman, cfg_.max_gap) {}

FrameResult Engine::process(FrameIndex frame, std::span<const Detection> dets) {
  store_.step_frame(frame, dets);

  std::vector<TrackState> observed;
  observed.reserve(dets.size());
  for (const auto& [id, state] : store_.tracks()) {
    if (state.last_frame == frame) {
      observed.push_back(state);
    }
  }

  FrameResult out;
  out.frame = frame;
  if (!observed.empty()) {
    out.clustering = spectral_cluster(build_graph(observed, cfg_.similarity), cfg_.spectral);
  }
  out.event = detect_group_event(frame, out.clustering);
  return out;
}

std::vector<FrameBatch> batch_by_frame(std::span<const Detection> dets) {
  std::vector<FrameBatch> out;
  for (const Detection& d : dets) {
    if (out.empty()) {
      out.push_back({d.frame, {}});
    } else if (d.frame < out.back().frame) {
      throw FormatError("frame " + std::to_string(d.frame) + " appears after frame " +
                        std::to_string(out.back().frame));
    } else {
      while (out.back().frame < d.frame) {
        out.push_back({out.back().frame + 1, {}});
      }
    }
    out.back().detections.push_back(d);
  }
  return out;
}

std::vector<FrameResult> run(std::span<const Detection> dets, const RunConfig& cfg) {
  Engine engine(cfg);
  std::vector<FrameResult> out;
  for (const FrameBatch& batch : batch_by_frame(dets)) {
    out.push_back(engine.process(batch.frame, batch.detections));
  }
  return out;
}

std::vector<FrameResult> run(const Scenario& scenario, const RunConfig& cfg) {
  Engine engine(cfg);
  std::vector<FrameResult> out;
  for (std::size_t t = 0; t < scenario.detections.size(); ++t) {
    out.push_back(engine.process(static_cast<FrameIndex>(t), scenario.detections[t]));
  }
  return out;
}

EvaluationReport score(const std::vector<FrameResult>& results,
                       std::span<const TruthRecord> truth, int burn_in) {
  std::map<FrameIndex, std::map<TrackId, std::int64_t>> by_frame;
  for (const TruthRecord& r : truth) {
    if (!by_frame[r.frame].emplace(r.id, r.group).second) {
      throw AlignmentError("ground truth lists id " + std::to_string(r.id) + " twice in frame " +
                           std::to_string(r.frame));
    }
  }

  EvaluationReport report;
  if (results.empty()) {
    throw ContractViolation("nothing to evaluate");
  }
  const FrameIndex first = results.front().frame;
  std::vector<std::pair<Partition, Partition>> pairs;
  for (const FrameResult& fr : results) {
    const auto it = by_frame.find(fr.frame);
    const auto& ids = fr.clustering.ids;
    if (ids.empty()) {
      if (it != by_frame.end() && !it->second.empty()) {
        throw AlignmentError("ground truth has records for frame " + std::to_string(fr.frame) +
                             " which has no detections");
      }
      continue;
    }
    if (it == by_frame.end() || it->second.size() != ids.size()) {
      throw AlignmentError("ground truth does not cover the ids of frame " +
                           std::to_string(fr.frame));
    }
    Partition truth_labels;
    Partition predicted;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const auto g = it->second.find(ids[i]);
      if (g == it->second.end()) {
        throw AlignmentError("ground truth misses id " + std::to_string(ids[i]) + " in frame " +
                             std::to_string(fr.frame));
      }
      truth_labels.push_back(g->second);
      predicted.push_back(fr.clustering.labels[i]);
    }
    by_frame.erase(it);
    if (fr.frame < first + burn_in) {
      continue;
    }

    FrameScore fs;
    fs.frame = fr.frame;
    fs.ami = ami(predicted, truth_labels);
    fs.predicted_event = fr.event.active;
    fs.truth_event = detect_group_event(fr.frame, ids, dense_labels(truth_labels)).active;
    report.frames.push_back(fs);
    pairs.emplace_back(std::move(predicted), std::move(truth_labels));

    report.true_positives += fs.predicted_event && fs.truth_event;
    report.false_positives += fs.predicted_event && !fs.truth_event;
    report.false_negatives += !fs.predicted_event && fs.truth_event;
  }
  for (const auto& [frame, records] : by_frame) {
    if (!records.empty()) {
      throw AlignmentError("ground truth frame " + std::to_string(frame) +
                           " has no matching detection frame");
    }
  }
  if (pairs.empty()) {
    throw ContractViolation("no frames left to score after burn-in");
  }

  report.mean_ami = sequence_score(pairs);
  const auto tp = static_cast<double>(report.true_positives);
  if (report.true_positives + report.false_positives > 0) {
    report.event_precision = tp / static_cast<double>(report.true_positives + report.false_positives);
  }
  if (report.true_positives + report.false_negatives > 0) {
    report.event_recall = tp / static_cast<double>(report.true_positives + report.false_negatives);
  }
  return report;
}

EvaluationReport evaluate(std::span<const Detection> dets, std::span<const TruthRecord> truth,
                          const RunConfig& cfg) {
  return score(run(dets, cfg), truth, cfg.burn_in);
}

std::vector<SweepCell> sweep(std::span<const Detection> dets, std::span<const TruthRecord> truth,
                             std::span<const double> a_grid, std::span<const double> b_grid,
                             const RunConfig& cfg) {
  if (a_grid.empty() || b_grid.empty()) {
    throw ContractViolation("sweep grids must be non-empty");
  }
  std::vector<std::future<SweepCell>> jobs;
  for (double a : a_grid) {
    for (double b : b_grid) {
      RunConfig cell = cfg;
      cell.similarity = {a, b};
      cell.validate();
      jobs.push_back(std::async(std::launch::async, [dets, truth, cell] {
        return SweepCell{cell.similarity.a, cell.similarity.b,
                         evaluate(dets, truth, cell).mean_ami};
      }));
    }
  }
  std::vector<SweepCell> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) {
    out.push_back(j.get());
  }
  return out;
}

std::vector<Detection> flatten_detections(const Scenario& scenario) {
  std::vector<Detection> out;
  for (const auto& frame : scenario.detections) {
    out.insert(out.end(), frame.begin(), frame.end());
  }
  return out;
}

std::vector<TruthRecord> flatten_truth(const Scenario& scenario) {
  std::vector<TruthRecord> out;
  for (const auto& frame : scenario.truth) {
    out.insert(out.end(), frame.begin(), frame.end());
  }
  return out;
}

}  // namespace groupwalk
