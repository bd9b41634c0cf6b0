#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace groupwalk {

struct KMeansOptions {
  int restarts = 10;
  int max_iterations = 300;
};

struct KMeansResult {
  std::vector<int> labels;  // 0-based cluster index per row
  Eigen::MatrixXd centroids;
  double objective = 0.0;   // sum of squared distances to assigned centroids
  int iterations = 0;
  std::uint64_t restart_seed = 0;
  std::vector<double> objective_trace;  // after each assignment/update round
};

// Lloyd's k-means on the rows of `points` with farthest-point seeding. Each
// restart draws its first centre from a generator seeded with seed + restart;
// the result with the lowest (objective, restart seed) wins. Every cluster is
// non-empty on return. Throws ContractViolation unless 1 <= k <= rows.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                    const KMeansOptions& opts = {});

double kmeans_objective(const Eigen::MatrixXd& points, const std::vector<int>& labels, int k);

}  // namespace groupwalk
