#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "groupwalk/similarity.hpp"
#include "groupwalk/tracking.hpp"

namespace groupwalk {

// Ascending eigenvalues; column i of `eigenvectors` pairs with eigenvalues(i).
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

struct JacobiOptions {
  double tolerance = 1e-12;  // off-diagonal Frobenius norm, relative to ||A||_F
  int max_sweeps = 100;
};

struct SpectralOptions {
  double eigengap_coefficient = 0.8;
  // Spread lambda_n - lambda_1 below this counts as a flat spectrum: no edge
  // binds any pair, so every node is its own cluster.
  double flat_spectrum = 0.05;
  std::uint64_t seed = 0;
  int kmeans_restarts = 10;
  int kmeans_max_iterations = 300;
  JacobiOptions jacobi{};
};

// Cluster assignment of one frame. labels[i] belongs to ids[i] and takes
// values 1..m with every cluster non-empty.
struct FrameClustering {
  std::vector<TrackId> ids;
  std::vector<int> labels;
  int m = 0;
  Eigen::VectorXd eigenvalues;
};

// L = D - W with D the weighted degrees (self-loop included, so it cancels).
Eigen::MatrixXd laplacian(const SimilarityGraph& g);

// Cyclic Jacobi eigensolver for symmetric matrices. Eigenvectors are signed so
// that their largest-magnitude component is positive (lowest index on ties).
// Throws NumericError when the sweep budget runs out.
Spectrum eig_sym(const Eigen::MatrixXd& a, const JacobiOptions& opts = {});

// Smallest i with lambda_{i+1} - lambda_i >= (coefficient / n) * sum of gaps.
// Returns n when the gaps sum to at most `flat_spectrum`.
int eigengap_select(const Eigen::VectorXd& ascending_eigenvalues, double coefficient = 0.8,
                    double flat_spectrum = 0.05);

// Relabels so the first item gets 1, the next unseen cluster 2, and so on.
std::vector<int> canonical_labels(const std::vector<int>& labels);

FrameClustering spectral_cluster(const SimilarityGraph& g, const SpectralOptions& opts = {});

}  // namespace groupwalk
