#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace groupwalk {

using TrackId = std::int64_t;
using FrameIndex = std::int64_t;

inline constexpr int kStateDim = 8;
inline constexpr int kObsDim = 4;

using StateVector = Eigen::Matrix<double, kStateDim, 1>;
using StateMatrix = Eigen::Matrix<double, kStateDim, kStateDim>;

// One observed bounding box. (x, y) is the top-left corner in image pixels.
struct Detection {
  FrameIndex frame = 0;
  TrackId id = 0;
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
};

// Throws ContractViolation unless w and h are finite and positive.
void validate(const Detection& det);

struct KalmanConfig {
  double meas_noise = 10.0;      // R = meas_noise * I4
  double proc_noise_pos = 10.0;  // Q block for x, y, w, h
  double proc_noise_vel = 2.0;   // Q block for the four flows
  double init_cov_pos = 100.0;
  double init_cov_vel = 25.0;

  void validate() const;
};

// Gaussian posterior over [x, y, w, h, dx, dy, dw, dh].
struct TrackState {
  TrackId id = 0;
  StateVector mean = StateVector::Zero();
  StateMatrix cov = StateMatrix::Identity();
  FrameIndex last_frame = 0;

  double width() const { return mean(2); }
  double height() const { return mean(3); }
};

TrackState init_track(const Detection& det, const KalmanConfig& cfg);

// Constant-velocity prediction, applied once per elapsed frame.
TrackState predict(const TrackState& state, int frames_elapsed, const KalmanConfig& cfg);

// Joseph-form measurement update. The state must already be predicted to
// det.frame; throws NumericError naming the track if the innovation
// covariance is not positive-definite.
TrackState update(const TrackState& state, const Detection& det, const KalmanConfig& cfg);

// Per-sequence store of live tracks, keyed by id.
class TrackStore {
public:
  explicit TrackStore(KalmanConfig cfg = {}, int max_gap = 10);

  // Ingests every detection of one frame: known ids are predicted to the
  // frame then updated, unknown ids spawn a track, and tracks unseen for more
  // than max_gap frames are dropped. Throws FormatError on duplicate ids,
  // mixed frame indices or a frame that does not advance.
  void step_frame(FrameIndex frame, std::span<const Detection> dets);

  const std::map<TrackId, TrackState>& tracks() const { return tracks_; }
  const KalmanConfig& config() const { return cfg_; }
  int max_gap() const { return max_gap_; }

  // Number of predict+update cycles applied to a track since it was spawned.
  std::int64_t update_count(TrackId id) const;

private:
  KalmanConfig cfg_;
  int max_gap_;
  std::map<TrackId, TrackState> tracks_;
  std::map<TrackId, std::int64_t> updates_;
  bool has_frame_ = false;
  FrameIndex last_frame_ = 0;
};

// Symmetry and Cholesky checks used by tests and debug assertions.
bool is_symmetric(const StateMatrix& cov, double rel_tol = 1e-9);
bool is_positive_definite(const StateMatrix& cov);

}  // namespace groupwalk
