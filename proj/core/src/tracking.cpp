#include "groupwalk/tracking.hpp"

#include <cmath>
#include <set>
#include <string>

#include <Eigen/Cholesky>

#include "groupwalk/error.hpp"

namespace groupwalk {

namespace {

using ObsVector = Eigen::Matrix<double, kObsDim, 1>;
using ObsMatrix = Eigen::Matrix<double, kObsDim, kObsDim>;
using GainMatrix = Eigen::Matrix<double, kStateDim, kObsDim>;

StateMatrix transition() {
  StateMatrix f = StateMatrix::Identity();
  f.topRightCorner<kObsDim, kObsDim>().setIdentity();
  return f;
}

StateMatrix process_noise(const KalmanConfig& cfg) {
  StateVector diag;
  diag << StateVector::Constant(cfg.proc_noise_pos).head<kObsDim>(),
      StateVector::Constant(cfg.proc_noise_vel).head<kObsDim>();
  return diag.asDiagonal();
}

void symmetrize(StateMatrix& m) { m = 0.5 * (m + m.transpose()).eval(); }

}  // namespace

void validate(const Detection& det) {
  if (!std::isfinite(det.x) || !std::isfinite(det.y) || !std::isfinite(det.w) ||
      !std::isfinite(det.h)) {
    throw ContractViolation("detection of track " + std::to_string(det.id) + " at frame " +
                            std::to_string(det.frame) + " has a non-finite field");
  }
  if (det.w <= 0.0 || det.h <= 0.0) {
    throw ContractViolation("detection of track " + std::to_string(det.id) + " at frame " +
                            std::to_string(det.frame) + " has non-positive size");
  }
}

void KalmanConfig::validate() const {
  for (double v : {meas_noise, proc_noise_pos, proc_noise_vel, init_cov_pos, init_cov_vel}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ContractViolation("Kalman noise and covariance scalars must be finite and > 0");
    }
  }
}

TrackState init_track(const Detection& det, const KalmanConfig& cfg) {
  validate(det);
  TrackState s;
  s.id = det.id;
  s.mean << det.x, det.y, det.w, det.h, 0.0, 0.0, 0.0, 0.0;
  StateVector diag;
  diag << StateVector::Constant(cfg.init_cov_pos).head<kObsDim>(),
      StateVector::Constant(cfg.init_cov_vel).head<kObsDim>();
  s.cov = diag.asDiagonal();
  s.last_frame = det.frame;
  return s;
}

TrackState predict(const TrackState& state, int frames_elapsed, const KalmanConfig& cfg) {
  if (frames_elapsed < 1) {
    throw ContractViolation("predict needs frames_elapsed >= 1");
  }
  static const StateMatrix f = transition();
  const StateMatrix q = process_noise(cfg);
  TrackState out = state;
  for (int i = 0; i < frames_elapsed; ++i) {
    out.mean = f * out.mean;
    out.cov = f * out.cov * f.transpose() + q;
    symmetrize(out.cov);
  }
  return out;
}

TrackState update(const TrackState& state, const Detection& det, const KalmanConfig& cfg) {
  if (det.id != state.id) {
    throw ContractViolation("update: detection id " + std::to_string(det.id) +
                            " does not match track " + std::to_string(state.id));
  }
  validate(det);

  // H selects the first four state components.
  const ObsVector z(det.x, det.y, det.w, det.h);
  const ObsVector innovation = z - state.mean.head<kObsDim>();
  const ObsMatrix r = ObsMatrix::Identity() * cfg.meas_noise;
  const ObsMatrix s = state.cov.topLeftCorner<kObsDim, kObsDim>() + r;

  const Eigen::LLT<ObsMatrix> llt(s);
  if (llt.info() != Eigen::Success) {
    throw NumericError("innovation covariance of track " + std::to_string(state.id) +
                       " is not positive-definite");
  }
  // K = P H^T S^-1, computed as (S^-1 H P)^T since S and P are symmetric.
  const Eigen::Matrix<double, kObsDim, kStateDim> ph_t =
      state.cov.topLeftCorner<kObsDim, kStateDim>();
  const GainMatrix gain = llt.solve(ph_t).transpose();

  Eigen::Matrix<double, kObsDim, kStateDim> h = Eigen::Matrix<double, kObsDim, kStateDim>::Zero();
  h.leftCols<kObsDim>().setIdentity();
  const StateMatrix i_kh = StateMatrix::Identity() - gain * h;

  TrackState out = state;
  out.mean = state.mean + gain * innovation;
  out.cov = i_kh * state.cov * i_kh.transpose() + gain * r * gain.transpose();
  symmetrize(out.cov);
  out.last_frame = det.frame;
  return out;
}

TrackStore::TrackStore(KalmanConfig cfg, int max_gap) : cfg_(cfg), max_gap_(max_gap) {
  cfg_.validate();
  if (max_gap_ < 0) {
    throw ContractViolation("max_gap must be >= 0");
  }
}

void TrackStore::step_frame(FrameIndex frame, std::span<const Detection> dets) {
  if (has_frame_ && frame <= last_frame_) {
    throw FormatError("frame " + std::to_string(frame) + " does not advance past frame " +
                      std::to_string(last_frame_));
  }
  std::set<TrackId> seen;
  for (const Detection& d : dets) {
    if (d.frame != frame) {
      throw FormatError("frame " + std::to_string(frame) + " contains a detection tagged frame " +
                        std::to_string(d.frame));
    }
    if (!seen.insert(d.id).second) {
      throw FormatError("frame " + std::to_string(frame) + " contains duplicate id " +
                        std::to_string(d.id));
    }
    validate(d);
  }

  for (const Detection& d : dets) {
    auto it = tracks_.find(d.id);
    if (it == tracks_.end()) {
      tracks_.emplace(d.id, init_track(d, cfg_));
      updates_[d.id] = 0;
      continue;
    }
    const auto elapsed = static_cast<int>(frame - it->second.last_frame);
    it->second = update(predict(it->second, elapsed, cfg_), d, cfg_);
    ++updates_[d.id];
  }

  for (auto it = tracks_.begin(); it != tracks_.end();) {
    if (frame - it->second.last_frame > max_gap_) {
      updates_.erase(it->first);
      it = tracks_.erase(it);
    } else {
      ++it;
    }
  }
  has_frame_ = true;
  last_frame_ = frame;
}

std::int64_t TrackStore::update_count(TrackId id) const {
  auto it = updates_.find(id);
  return it == updates_.end() ? -1 : it->second;
}

bool is_symmetric(const StateMatrix& cov, double rel_tol) {
  const double norm = cov.cwiseAbs().rowwise().sum().maxCoeff();
  const double asym = (cov - cov.transpose()).cwiseAbs().rowwise().sum().maxCoeff();
  return asym <= rel_tol * norm;
}

bool is_positive_definite(const StateMatrix& cov) {
  return Eigen::LLT<StateMatrix>(cov).info() == Eigen::Success;
}

}  // namespace groupwalk
