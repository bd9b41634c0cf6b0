#include "groupwalk/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>

#include "groupwalk/error.hpp"

namespace groupwalk {

namespace {

using Index = Eigen::Index;

std::vector<int> assign(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids) {
  std::vector<int> labels(static_cast<std::size_t>(points.rows()));
  for (Index i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (Index c = 0; c < centroids.rows(); ++c) {
      const double d = (points.row(i) - centroids.row(c)).squaredNorm();
      if (d < best) {
        best = d;
        best_c = static_cast<int>(c);
      }
    }
    labels[static_cast<std::size_t>(i)] = best_c;
  }
  return labels;
}

Eigen::MatrixXd means(const Eigen::MatrixXd& points, const std::vector<int>& labels, int k) {
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
  for (Index i = 0; i < points.rows(); ++i) {
    const int c = labels[static_cast<std::size_t>(i)];
    sums.row(c) += points.row(i);
    counts(c) += 1.0;
  }
  for (int c = 0; c < k; ++c) {
    if (counts(c) > 0.0) {
      sums.row(c) /= counts(c);
    }
  }
  return sums;
}

// Moves the farthest member of the largest cluster into each empty cluster.
void repair_empty(const Eigen::MatrixXd& points, std::vector<int>& labels, int k) {
  for (;;) {
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (int l : labels) {
      ++sizes[static_cast<std::size_t>(l)];
    }
    int empty = -1;
    int largest = 0;
    for (int c = 0; c < k; ++c) {
      if (sizes[static_cast<std::size_t>(c)] == 0 && empty < 0) {
        empty = c;
      }
      if (sizes[static_cast<std::size_t>(c)] > sizes[static_cast<std::size_t>(largest)]) {
        largest = c;
      }
    }
    if (empty < 0) {
      return;
    }
    const Eigen::RowVectorXd centre = means(points, labels, k).row(largest);
    Index far = -1;
    double far_d = -1.0;
    for (Index i = 0; i < points.rows(); ++i) {
      if (labels[static_cast<std::size_t>(i)] != largest) {
        continue;
      }
      const double d = (points.row(i) - centre).squaredNorm();
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    labels[static_cast<std::size_t>(far)] = empty;
  }
}

Eigen::MatrixXd farthest_point_init(const Eigen::MatrixXd& points, int k, std::mt19937_64& gen) {
  const Index n = points.rows();
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  Eigen::MatrixXd centroids(k, points.cols());

  auto first = static_cast<Index>(gen() % static_cast<std::uint64_t>(n));
  centroids.row(0) = points.row(first);
  chosen[static_cast<std::size_t>(first)] = true;

  Eigen::VectorXd nearest(n);
  for (Index i = 0; i < n; ++i) {
    nearest(i) = (points.row(i) - centroids.row(0)).squaredNorm();
  }
  for (int c = 1; c < k; ++c) {
    Index pick = -1;
    double pick_d = -1.0;
    for (Index i = 0; i < n; ++i) {
      if (!chosen[static_cast<std::size_t>(i)] && nearest(i) > pick_d) {
        pick_d = nearest(i);
        pick = i;
      }
    }
    chosen[static_cast<std::size_t>(pick)] = true;
    centroids.row(c) = points.row(pick);
    for (Index i = 0; i < n; ++i) {
      nearest(i) = std::min(nearest(i), (points.row(i) - centroids.row(c)).squaredNorm());
    }
  }
  return centroids;
}

KMeansResult single_run(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                        int max_iterations) {
  std::mt19937_64 gen(seed);
  KMeansResult r;
  r.restart_seed = seed;
  r.centroids = farthest_point_init(points, k, gen);
  r.labels = assign(points, r.centroids);

  bool stable = false;
  while (r.iterations < max_iterations) {
    ++r.iterations;
    repair_empty(points, r.labels, k);
    r.centroids = means(points, r.labels, k);
    r.objective_trace.push_back(kmeans_objective(points, r.labels, k));
    std::vector<int> next = assign(points, r.centroids);
    if (next == r.labels) {
      stable = true;
      break;
    }
    r.labels = std::move(next);
  }
  if (!stable) {
    repair_empty(points, r.labels, k);
    r.centroids = means(points, r.labels, k);
  }
  r.objective = kmeans_objective(points, r.labels, k);
  return r;
}

}  // namespace

double kmeans_objective(const Eigen::MatrixXd& points, const std::vector<int>& labels, int k) {
  const Eigen::MatrixXd c = means(points, labels, k);
  double total = 0.0;
  for (Index i = 0; i < points.rows(); ++i) {
    total += (points.row(i) - c.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return total;
}

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                    const KMeansOptions& opts) {
  if (k < 1 || k > points.rows()) {
    throw ContractViolation("kmeans needs 1 <= k <= n (k = " + std::to_string(k) +
                            ", n = " + std::to_string(points.rows()) + ")");
  }
  if (opts.restarts < 1 || opts.max_iterations < 1) {
    throw ContractViolation("kmeans needs at least one restart and one iteration");
  }
  KMeansResult best;
  bool have = false;
  for (int r = 0; r < opts.restarts; ++r) {
    KMeansResult run = single_run(points, k, seed + static_cast<std::uint64_t>(r),
                                  opts.max_iterations);
    if (!have || run.objective < best.objective ||
        (run.objective == best.objective && run.restart_seed < best.restart_seed)) {
      best = std::move(run);
      have = true;
    }
  }
  return best;
}

}  // namespace groupwalk
