#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "groupwalk/tracking.hpp"

namespace groupwalk {

// Slope and offset of the camera-distance scaling factor
// k = a * (sqrt(w_i h_i) + sqrt(w_j h_j)) / 2 + b.
struct SimilarityParams {
  double a = 8.0;
  double b = 10.0;

  void validate() const;
};

// Dense motion-similarity graph over the tracks of one frame. Rows and columns
// follow `ids`, which is sorted ascending.
struct SimilarityGraph {
  std::vector<TrackId> ids;
  Eigen::MatrixXd weights;

  Eigen::Index size() const { return weights.rows(); }
};

/// KL(N0 || N1) for arbitrary dimension, evaluated with Cholesky solves.
/// Throws NumericError if either covariance is not positive-definite.
double gaussian_kl(const Eigen::VectorXd& mean0, const Eigen::MatrixXd& cov0,
                   const Eigen::VectorXd& mean1, const Eigen::MatrixXd& cov1);

/// KL between two track posteriors; errors name the offending track.
double gaussian_kl(const TrackState& p, const TrackState& q);

/// (KL(p||q) + KL(q||p)) / 2.
double symmetric_kl(const TrackState& p, const TrackState& q);

double scale_factor(const TrackState& p, const TrackState& q, const SimilarityParams& params);

// exp(-divergence / scale).
double similarity_from(double divergence, double scale);

double similarity(const TrackState& p, const TrackState& q, const SimilarityParams& params);

// Tracks may arrive in any order; the graph is laid out by ascending id.
// Throws ContractViolation on an empty set or duplicate ids.
SimilarityGraph build_graph(std::span<const TrackState> tracks, const SimilarityParams& params);

}  // namespace groupwalk
